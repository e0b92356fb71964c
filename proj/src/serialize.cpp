#include "polydens/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace polydens {

namespace {

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_json(std::span<const double> v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(fmt12(v));
}

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const QuadForm& q) {
  Json j{{"dim", q.dim()}, {"matrix", matrix_json(q.matrix())}};
  if (q.exact()) j["exact"] = {{"num", q.exact()->num}, {"den", q.exact()->den}};
  return j;
}

Json to_json(const GroupElement& g) {
  Json j{{"matrix", matrix_json(g.matrix())}};
  j["seed"] = g.seed() ? Json(*g.seed()) : Json(nullptr);
  return j;
}

Json to_json(const VarietySpec& v) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FullLattice>) {
          return {{"kind", "full_lattice"}, {"n", x.n}};
        } else if constexpr (std::is_same_v<T, Quadric>) {
          Json j{{"kind", "quadric"}, {"form", to_json(x.q)}, {"k", to_json(x.k)}};
          if (x.filter) j["filter"] = {{"coord", x.filter->coord}, {"sign", x.filter->sign}};
          return j;
        } else {
          return {{"kind", "det"}, {"ell", x.ell}};
        }
      },
      v);
}

Json to_json(const MapFamily& f) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, QuadraticValues>) {
          return {{"family", "quadratic"}, {"q0", to_json(x.q0)}, {"g", to_json(x.g)}};
        } else if constexpr (std::is_same_v<T, LinearOnQuadric>) {
          return {{"family", "linear"},
                  {"f", matrix_json(x.f.matrix())},
                  {"g", to_json(x.g)},
                  {"variety", to_json(VarietySpec{x.variety})}};
        } else if constexpr (std::is_same_v<T, CharPoly>) {
          return {{"family", "charpoly"}, {"g1", to_json(x.g1)}, {"g2", to_json(x.g2)}, {"ell", x.ell}};
        } else if constexpr (std::is_same_v<T, GramMap>) {
          return {{"family", "gram"}, {"g", to_json(x.g)}, {"j", to_json(x.j)}};
        } else {
          return {{"family", "alpha"}, {"alpha", vector_json(x.alpha)}, {"n", x.n}};
        }
      },
      f);
}

Json to_json(const LatticePoint& p) { return p.coords; }

Json to_json(const SearchOutcome& o, bool timing) {
  Json j{{"found", o.found.has_value()},
         {"scanned", o.points_scanned},
         {"shells", o.shells_completed},
         {"max_height", o.max_height},
         {"millis", timing ? o.wall_millis : 0}};
  if (o.found) {
    j["point"] = to_json(o.found->point);
    j["value"] = vector_json(o.found->value.values);
    j["error"] = number(o.found->error);
    j["height"] = o.found->point.height;
  } else {
    j["point"] = nullptr;
    j["value"] = nullptr;
    j["error"] = nullptr;
    j["height"] = nullptr;
  }
  return j;
}

Json to_json(const RunRecord& r, bool timing) {
  return {{"epsilon", number(r.epsilon)}, {"found", r.found},       {"min_height", r.found ? Json(r.min_height) : Json()},
          {"scanned", r.scanned},          {"seed", r.seed},         {"millis", timing ? r.millis : 0},
          {"ball_too_large", r.ball_too_large}};
}

Json to_json(const ExponentFit& f) {
  return {{"slope", number(f.slope)}, {"intercept", number(f.intercept)}, {"r2", number(f.r2)}, {"points_used", f.points_used}};
}

Json to_json(const CampaignSummary& s, bool timing) {
  Json runs = Json::array();
  for (const auto& r : s.runs) {
    Json recs = Json::array();
    for (const auto& rec : r.records) recs.push_back(to_json(rec, timing));
    runs.push_back({{"seed", r.seed},
                    {"steps_found", r.steps_found},
                    {"fit", r.fit ? to_json(*r.fit) : Json()},
                    {"records", std::move(recs)}});
  }
  return {{"median", s.median ? number(*s.median) : Json()},
          {"iqr", number(s.iqr)},
          {"failures", s.failures},
          {"runs", std::move(runs)}};
}

Json to_json(const FamilyTemplate& t) {
  Json j{{"kind", to_string(t.kind)}};
  switch (t.kind) {
    case FamilyKind::Quadratic: j["p"] = t.p; j["q"] = t.q; j["disc"] = number(t.disc); break;
    case FamilyKind::CharPoly: j["ell"] = t.ell; break;
    case FamilyKind::Gram: break;
    case FamilyKind::Linear: j["n"] = t.n; j["m"] = t.m; break;
    case FamilyKind::Alpha: j["n"] = t.n; j["s"] = t.s; break;
  }
  return j;
}

Json to_json(const Schedule& s) {
  static const char* names[] = {"shell_scan", "root_solve", "auto"};
  return {{"family", to_json(s.family)},
          {"seed", s.seed},
          {"xi", vector_json(s.xi)},
          {"kappa", number(s.kappa)},
          {"epsilon0", number(s.epsilon0)},
          {"ratio", number(s.ratio)},
          {"steps", s.steps},
          {"exclude_zero", s.exclude_zero},
          {"strategy", names[static_cast<int>(s.strategy)]}};
}

Json to_json(const AlphaInstance& a) {
  return {{"n", a.n}, {"s", a.s}, {"alpha", vector_json(a.alpha)}, {"xi", number(a.xi)}, {"sigma", number(a.sigma)}};
}

Json to_json(const MarginReport& m) {
  return {{"x_max", m.x_max},
          {"min_margin", number(m.min_margin)},
          {"argmin", {{"x", m.argmin_x}, {"z", m.argmin_z}}},
          {"pairs_tested", m.pairs_tested}};
}

Json to_json(const NoSolutionReport& r) {
  Json rows = Json::array();
  for (const auto& v : r.rows) {
    rows.push_back({{"epsilon", number(v.epsilon)},
                    {"no_solution", v.no_solution},
                    {"max_height", v.max_height},
                    {"points_in_ball", v.points_in_ball},
                    {"min_deviation", number(v.min_deviation)},
                    {"witness", v.witness ? to_json(*v.witness) : Json()},
                    {"chain_min_ratio", number(v.chain_min_ratio)},
                    {"chain_checked", v.chain_checked},
                    {"chain_violations", v.chain_violations}});
  }
  return {{"kappa", number(r.kappa)}, {"margin_constant", number(r.margin_constant)}, {"rows", std::move(rows)}};
}

Json to_json(const TheoremEntry& e) {
  return {{"id", e.id},
          {"family", e.family},
          {"threshold", e.threshold_text()},
          {"pigeonhole", to_json(e.pigeonhole)},
          {"affine", to_json(e.affine)},
          {"matches_pigeonhole", e.matches_pigeonhole},
          {"refined", e.refined},
          {"note", e.note}};
}

Json to_json(const GrowthFit& g) {
  return {{"a", number(g.a)}, {"intercept", number(g.intercept)}, {"r2", number(g.r2)}};
}

std::string counts_csv(std::span<const CountRecord> records) {
  std::ostringstream os;
  os << "T,count\n";
  for (const auto& r : records) os << r.T << ',' << r.count << '\n';
  return os.str();
}

std::string records_csv(std::span<const RunRecord> records) {
  std::ostringstream os;
  os << "seed,epsilon,found,min_height,scanned,ball_too_large\n";
  for (const auto& r : records)
    os << r.seed << ',' << fmt12(r.epsilon) << ',' << (r.found ? 1 : 0) << ',' << r.min_height << ',' << r.scanned << ','
       << (r.ball_too_large ? 1 : 0) << '\n';
  return os.str();
}

std::string campaign_csv(const CampaignSummary& s) {
  std::ostringstream os;
  os << "seed,kappa_emp,r2,points_used,steps_found\n";
  for (const auto& r : s.runs) {
    os << r.seed << ',';
    if (r.fit)
      os << fmt12(r.fit->slope) << ',' << fmt12(r.fit->r2) << ',' << r.fit->points_used;
    else
      os << ",,0";
    os << ',' << r.steps_found << '\n';
  }
  return os.str();
}

}  // namespace polydens
