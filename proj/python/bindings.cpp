#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "polydens/cli.hpp"
#include "polydens/error.hpp"
#include "polydens/serialize.hpp"

namespace py = pybind11;
using namespace polydens;

namespace {

std::pair<std::int64_t, std::int64_t> frac(const Rational& r) { return {r.num(), r.den()}; }

VarietySpec make_variety(const std::string& kind, int n, std::int64_t ell) {
  if (kind == "full") return FullLattice{n};
  if (kind == "hyperboloid") return hyperboloid(n);
  if (kind == "det") return DetVariety{ell};
  throw Error(ErrorKind::InvalidArgument, "unknown variety '" + kind + "'");
}

FamilyTemplate make_template(const std::string& family, int p, int q, double disc, std::int64_t ell, int n, int m, int s) {
  FamilyTemplate t;
  t.kind = parse_family_kind(family);
  t.p = p;
  t.q = q;
  t.disc = disc;
  t.ell = ell;
  t.n = n;
  t.m = m;
  t.s = s;
  return t;
}

Strategy parse_strategy(const std::string& s) {
  if (s == "shell") return Strategy::ShellScan;
  if (s == "root") return Strategy::RootSolve;
  if (s == "auto") return Strategy::Auto;
  throw Error(ErrorKind::InvalidArgument, "unknown strategy '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Native core of polydens";

  py::register_exception<Error>(mod, "PolydensError", PyExc_ValueError);

  mod.def("dispatch", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::dispatch(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });

  mod.def("signature", [](const Eigen::MatrixXd& a) {
    Signature s = signature(QuadForm(a));
    return std::make_pair(s.positive, s.negative);
  });
  mod.def("random_form", [](int p, int q, double disc, std::uint64_t seed) {
    return random_form(p, q, disc, seed).matrix();
  });

  mod.def("count_points", [](const std::string& variety, std::int64_t T, int n, std::int64_t ell, int workers) {
        return count_points(make_variety(variety, n, ell), T, EnumerateOptions{workers}).count;
      },
      py::arg("variety"), py::arg("T"), py::arg("n") = 4, py::arg("ell") = 1, py::arg("workers") = 1);
  mod.def("enumerate_points", [](const std::string& variety, std::int64_t T, int n, std::int64_t ell) {
        std::vector<std::vector<std::int64_t>> out;
        for (auto& p : enumerate_points(make_variety(variety, n, ell), T)) out.push_back(std::move(p.coords));
        return out;
      },
      py::arg("variety"), py::arg("T"), py::arg("n") = 4, py::arg("ell") = 1);
  mod.def("growth_exponent", [](const std::vector<std::pair<std::int64_t, std::uint64_t>>& recs) {
    std::vector<CountRecord> rs;
    for (auto [t, c] : recs) rs.push_back(CountRecord{t, c});
    return to_json(growth_exponent(rs)).dump();
  });

  mod.def("charpoly_invariants", [](const std::vector<std::int64_t>& x) {
    if (x.size() != 9) throw Error(ErrorKind::DimensionMismatch, "expected 9 entries");
    auto c = charpoly_invariants(x);
    return py::make_tuple(c.f0, c.f1, c.f2);
  });
  mod.def("companion_witness", &companion_witness);

  mod.def("pigeonhole_kappa", [](const std::string& a, int m, int d) {
    return frac(pigeonhole_kappa(HeuristicParams{Rational::parse(a), m, d}));
  });
  mod.def("gram_pigeonhole_kappa", [](int n, int p, int q) { return frac(gram_pigeonhole_kappa(n, p, q)); });
  mod.def("volume_exponent", [](const std::string& which) {
    if (which != "so21" && which != "sl3") throw Error(ErrorKind::InvalidArgument, "root datum must be so21 or sl3");
    return frac(volume_exponent(which == "so21" ? so21_root_datum() : sl3_diagonal_root_datum()));
  });
  mod.def("ergodic_theta", [](const std::string& p) {
    auto e = ergodic_theta(Rational::parse(p));
    return py::make_tuple(e.n_e, frac(e.theta));
  });
  mod.def("affine_kappa", [](const std::string& theta, const std::string& b, const std::string& zeta) {
    return frac(affine_kappa(Rational::parse(theta), Rational::parse(b), Rational::parse(zeta)));
  });
  mod.def("projective_kappa", [](const std::string& zeta, const std::string& theta, const std::string& b,
                                 const std::string& c, const std::string& d) {
    SpectralParams sp;
    sp.zeta = Rational::parse(zeta);
    sp.theta = Rational::parse(theta);
    sp.b = Rational::parse(b);
    sp.c = Rational::parse(c);
    sp.d = Rational::parse(d);
    return frac(projective_kappa(sp));
  });
  mod.def("counterexample_thresholds", [](int s, int n) {
    auto t = counterexample_thresholds(s, n);
    return py::make_tuple(frac(t.nondensity_below), frac(t.heuristic_floor));
  });
  mod.def("theorem_table", [] {
    Json rows = Json::array();
    for (const auto& e : theorem_table()) rows.push_back(to_json(e));
    return rows.dump();
  });

  mod.def("search",
      [](const std::string& family, std::uint64_t seed, std::vector<double> xi, double eps, double kappa,
         bool exclude_zero, const std::string& strategy, int workers, int p, int q, double disc, std::int64_t ell,
         int n, int m, int s) {
        MapFamily fam = instantiate(make_template(family, p, q, disc, ell, n, m, s), seed);
        SearchOptions o;
        o.strategy = parse_strategy(strategy);
        o.workers = workers;
        return to_json(solve_system(make_problem(fam, std::move(xi), eps, kappa, exclude_zero), o)).dump();
      },
      py::arg("family"), py::arg("seed"), py::arg("xi"), py::arg("eps"), py::arg("kappa"),
      py::arg("exclude_zero") = false, py::arg("strategy") = "auto", py::arg("workers") = 1, py::arg("p") = 2,
      py::arg("q") = 1, py::arg("disc") = -1.0, py::arg("ell") = 1, py::arg("n") = 4, py::arg("m") = 1,
      py::arg("s") = 1);

  mod.def("run_schedule",
      [](const std::string& family, std::uint64_t seed, std::vector<double> xi, double kappa, double eps0,
         double ratio, int steps, int p, int q, double disc) {
        Schedule sc;
        sc.family = make_template(family, p, q, disc, 1, 4, 1, 1);
        sc.seed = seed;
        sc.xi = std::move(xi);
        sc.kappa = kappa;
        sc.epsilon0 = eps0;
        sc.ratio = ratio;
        sc.steps = steps;
        auto records = run_schedule(sc);
        Json out{{"records", Json::array()}, {"fit", nullptr}};
        for (const auto& r : records) out["records"].push_back(to_json(r));
        try {
          out["fit"] = to_json(fit_exponent(records));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::InsufficientData) throw;
        }
        return out.dump();
      },
      py::arg("family"), py::arg("seed"), py::arg("xi"), py::arg("kappa"), py::arg("eps0") = 0.2,
      py::arg("ratio") = 0.5, py::arg("steps") = 5, py::arg("p") = 2, py::arg("q") = 1, py::arg("disc") = -1.0);

  mod.def("lemma_margin",
      [](std::vector<double> alpha, double xi, double sigma, std::int64_t x_max, int n, int workers) {
        AlphaInstance inst{n, static_cast<int>(alpha.size()), std::move(alpha), xi, sigma};
        return to_json(lemma_margin(inst, x_max, workers)).dump();
      },
      py::arg("alpha"), py::arg("xi"), py::arg("sigma"), py::arg("x_max"), py::arg("n") = 4, py::arg("workers") = 1);
  mod.def("verify_no_solutions",
      [](std::vector<double> alpha, double xi, double kappa, const std::vector<double>& epsilons, double sigma, int n) {
        AlphaInstance inst{n, static_cast<int>(alpha.size()), std::move(alpha), xi, sigma};
        return to_json(verify_no_solutions(inst, kappa, epsilons)).dump();
      },
      py::arg("alpha"), py::arg("xi"), py::arg("kappa"), py::arg("epsilons"), py::arg("sigma") = -0.4,
      py::arg("n") = 4);
}
