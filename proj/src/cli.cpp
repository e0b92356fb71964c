#include "polydens/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>

#include "polydens/error.hpp"
#include "polydens/serialize.hpp"

namespace polydens::cli {

namespace {

struct Common {
  std::uint64_t seed = 1;
  int workers = 1;
  std::string format = "json";
  std::string out_path;
  bool timing = false;
};

struct FamilyArgs {
  std::string family = "quadratic";
  std::vector<int> sig{2, 1};
  double disc = -1.0;
  std::int64_t ell = 1;
  int n = 4;
  int m = 1;
  int s = 1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "64-bit seed")->capture_default_str();
  app->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  app->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}))->capture_default_str();
  app->add_option("--out", c.out_path, "append JSON lines to this file");
  app->add_flag("--timing", c.timing, "report wall-clock milliseconds");
}

void add_family(CLI::App* app, FamilyArgs& f) {
  app->add_option("--family", f.family, "quadratic|charpoly|gram|linear|alpha")->capture_default_str();
  app->add_option("--sig", f.sig, "signature p,q (quadratic)")->delimiter(',')->expected(2);
  app->add_option("--disc", f.disc, "discriminant (quadratic)")->capture_default_str();
  app->add_option("--ell", f.ell, "determinant level (charpoly)")->capture_default_str();
  app->add_option("--n", f.n, "hyperboloid dimension (linear, alpha)")->capture_default_str();
  app->add_option("--m", f.m, "kept coordinates (linear)")->capture_default_str();
  app->add_option("--s", f.s, "number of coefficients (alpha)")->capture_default_str();
}

FamilyTemplate make_template(const FamilyArgs& f) {
  FamilyTemplate t;
  t.kind = parse_family_kind(f.family);
  t.p = f.sig.at(0);
  t.q = f.sig.at(1);
  t.disc = f.disc;
  t.ell = f.ell;
  t.n = f.n;
  t.m = f.m;
  t.s = f.s;
  return t;
}

Strategy parse_strategy(const std::string& s) {
  if (s == "shell") return Strategy::ShellScan;
  if (s == "root") return Strategy::RootSolve;
  return Strategy::Auto;
}

std::vector<double> default_xi(const MapFamily& fam, std::vector<double> xi) {
  if (!xi.empty()) return xi;
  return std::vector<double>(static_cast<std::size_t>(value_dim(fam)), 0.5);
}

// Writes one document to out and, when requested, appends it to --out.
void emit(const Common& c, const Json& doc, const std::string& csv, const std::string& text, std::ostream& out) {
  if (c.format == "csv")
    out << csv;
  else if (c.format == "text")
    out << text;
  else
    out << doc.dump() << '\n';
  if (!c.out_path.empty()) {
    std::ofstream f(c.out_path, std::ios::app);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open " + c.out_path);
    f << doc.dump() << '\n';
  }
}

Json common_json(const Common& c) { return {{"seed", c.seed}, {"workers", c.workers}, {"format", c.format}}; }

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantitative density of polynomial values at integer points"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // search
  Common search_c;
  FamilyArgs search_f;
  std::vector<double> search_xi;
  double search_eps = 0.1, search_kappa = 1.0;
  bool search_excl = false;
  std::string search_strategy = "auto";
  auto* search = app.add_subcommand("search", "solve one shrinking system");
  add_common(search, search_c);
  add_family(search, search_f);
  search->add_option("--xi", search_xi, "target value")->delimiter(',');
  search->add_option("--eps", search_eps, "epsilon")->capture_default_str();
  search->add_option("--kappa", search_kappa, "ball exponent")->capture_default_str();
  search->add_flag("--exclude-zero", search_excl, "exclude the origin");
  search->add_option("--strategy", search_strategy, "shell|root|auto")
      ->check(CLI::IsMember({"shell", "root", "auto"}))
      ->capture_default_str();

  // count
  Common count_c;
  std::string count_variety = "hyperboloid";
  int count_n = 4;
  std::int64_t count_ell = 1;
  std::vector<std::int64_t> count_T{20, 40, 80, 160};
  auto* count = app.add_subcommand("count", "count integer points and fit the growth exponent");
  add_common(count, count_c);
  count->add_option("--variety", count_variety, "full|hyperboloid|det")
      ->check(CLI::IsMember({"full", "hyperboloid", "det"}))
      ->capture_default_str();
  count->add_option("--n", count_n, "dimension (full, hyperboloid)")->capture_default_str();
  count->add_option("--ell", count_ell, "determinant level (det)")->capture_default_str();
  count->add_option("--T", count_T, "height bounds")->delimiter(',');

  // estimate / campaign
  Common est_c;
  FamilyArgs est_f;
  std::vector<double> est_xi;
  double est_kappa = 1.3, est_eps0 = 0.2, est_ratio = 0.5;
  int est_steps = 5, campaign_seeds = 20;
  bool est_excl = false;
  std::string est_strategy = "auto";
  auto* estimate = app.add_subcommand("estimate", "run an epsilon schedule and fit the density exponent");
  auto* campaign = app.add_subcommand("campaign", "fit the density exponent over many seeds");
  for (auto* sub : {estimate, campaign}) {
    add_common(sub, est_c);
    add_family(sub, est_f);
    sub->add_option("--xi", est_xi, "target value")->delimiter(',');
    sub->add_option("--kappa", est_kappa, "ball exponent")->capture_default_str();
    sub->add_option("--eps0", est_eps0, "first epsilon")->capture_default_str();
    sub->add_option("--ratio", est_ratio, "epsilon ratio")->capture_default_str();
    sub->add_option("--steps", est_steps, "schedule length")->capture_default_str();
    sub->add_flag("--exclude-zero", est_excl, "exclude the origin");
    sub->add_option("--strategy", est_strategy, "shell|root|auto")
        ->check(CLI::IsMember({"shell", "root", "auto"}))
        ->capture_default_str();
  }
  campaign->add_option("--seeds", campaign_seeds, "number of seeds")->capture_default_str();

  // exponent
  Common exp_c;
  bool exp_table = false;
  std::vector<std::string> exp_pigeonhole, exp_gram, exp_affine, exp_projective, exp_thresholds;
  std::string exp_volume, exp_ergodic;
  auto* exponent = app.add_subcommand("exponent", "explicit exponents and the prediction table");
  add_common(exponent, exp_c);
  exponent->add_flag("--table", exp_table, "per-theorem prediction table");
  exponent->add_option("--pigeonhole", exp_pigeonhole, "a,m,d")->delimiter(',')->expected(3);
  exponent->add_option("--gram", exp_gram, "n,p,q")->delimiter(',')->expected(3);
  exponent->add_option("--volume", exp_volume, "so21|sl3")->check(CLI::IsMember({"so21", "sl3"}));
  exponent->add_option("--ergodic", exp_ergodic, "integrability exponent p");
  exponent->add_option("--affine", exp_affine, "theta,b,zeta")->delimiter(',')->expected(3);
  exponent->add_option("--projective", exp_projective, "zeta,theta,b,c,d")->delimiter(',')->expected(5);
  exponent->add_option("--thresholds", exp_thresholds, "s,n")->delimiter(',')->expected(2);

  // counterexample
  Common cx_c;
  int cx_n = 4, cx_s = 1;
  std::vector<double> cx_alpha, cx_eps;
  double cx_xi = 0.5, cx_sigma = -0.4, cx_kappa = 1.5;
  std::int64_t cx_xmax = 500;
  auto* cx = app.add_subcommand("counterexample", "margin scan and no-solution check for F_alpha");
  add_common(cx, cx_c);
  cx->add_option("--n", cx_n, "hyperboloid dimension")->capture_default_str();
  cx->add_option("--s", cx_s, "number of coefficients")->capture_default_str();
  cx->add_option("--alpha", cx_alpha, "coefficients (sampled from the seed when absent)")->delimiter(',');
  cx->add_option("--xi", cx_xi, "target value")->capture_default_str();
  cx->add_option("--sigma", cx_sigma, "margin exponent")->capture_default_str();
  cx->add_option("--x-max", cx_xmax, "margin scan bound")->capture_default_str();
  cx->add_option("--kappa", cx_kappa, "ball exponent")->capture_default_str();
  cx->add_option("--eps", cx_eps, "epsilons for the no-solution check")->delimiter(',');

  std::vector<const char*> argv{"polydens"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }

  try {
    if (search->parsed()) {
      const FamilyTemplate t = make_template(search_f);
      const MapFamily fam = instantiate(t, search_c.seed);
      SearchProblem p = make_problem(fam, default_xi(fam, search_xi), search_eps, search_kappa, search_excl);
      SearchOptions o;
      o.strategy = parse_strategy(search_strategy);
      o.workers = search_c.workers;
      SearchOutcome res = solve_system(p, o);
      Json cfg = common_json(search_c);
      cfg.update({{"subcommand", "search"},
                  {"family", to_json(t)},
                  {"xi", p.xi},
                  {"epsilon", number(search_eps)},
                  {"kappa", number(search_kappa)},
                  {"exclude_zero", search_excl},
                  {"strategy", search_strategy}});
      Json doc{{"config", cfg}, {"result", to_json(res, search_c.timing)}};
      std::string text = res.found ? "found height " + std::to_string(res.found->point.height) + " error " +
                                         fixed(res.found->error) + "\n"
                                   : "no solution up to height " + std::to_string(res.max_height) + "\n";
      std::string csv = "found,height,error,scanned\n" + std::to_string(res.found ? 1 : 0) + ',' +
                        (res.found ? std::to_string(res.found->point.height) + ',' + fixed(res.found->error, 12) : ",") +
                        ',' + std::to_string(res.points_scanned) + '\n';
      emit(search_c, doc, csv, text, out);
    } else if (count->parsed()) {
      VarietySpec v = count_variety == "full" ? VarietySpec{FullLattice{count_n}}
                      : count_variety == "det" ? VarietySpec{DetVariety{count_ell}}
                                               : VarietySpec{hyperboloid(count_n)};
      EnumerateOptions eo;
      eo.workers = count_c.workers;
      std::vector<CountRecord> records;
      for (auto T : count_T) records.push_back(count_points(v, T, eo));
      Json recs = Json::array();
      for (const auto& r : records) recs.push_back({{"T", r.T}, {"count", r.count}});
      Json result{{"counts", recs}};
      std::string text;
      for (const auto& r : records) text += "T=" + std::to_string(r.T) + " count=" + std::to_string(r.count) + "\n";
      try {
        GrowthFit g = growth_exponent(records);
        result["growth"] = to_json(g);
        text += "growth exponent " + fixed(g.a) + " (r2 " + fixed(g.r2) + ")\n";
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientData) throw;
        result["growth"] = nullptr;
      }
      Json cfg = common_json(count_c);
      cfg.update({{"subcommand", "count"}, {"variety", to_json(v)}, {"T", count_T}});
      emit(count_c, {{"config", cfg}, {"result", result}}, counts_csv(records), text, out);
    } else if (estimate->parsed() || campaign->parsed()) {
      Schedule s;
      s.family = make_template(est_f);
      s.seed = est_c.seed;
      s.xi = est_xi.empty() ? default_xi(instantiate(s.family, s.seed), {}) : est_xi;
      s.kappa = est_kappa;
      s.epsilon0 = est_eps0;
      s.ratio = est_ratio;
      s.steps = est_steps;
      s.exclude_zero = est_excl;
      s.strategy = parse_strategy(est_strategy);
      Json cfg = common_json(est_c);
      cfg["schedule"] = to_json(s);
      if (estimate->parsed()) {
        cfg["subcommand"] = "estimate";
        auto records = run_schedule(s, est_c.workers);
        Json recs = Json::array();
        for (const auto& r : records) recs.push_back(to_json(r, est_c.timing));
        Json result{{"records", recs}, {"fit", nullptr}};
        std::string text;
        for (const auto& r : records)
          text += "eps=" + fixed(r.epsilon) + (r.found ? " height=" + std::to_string(r.min_height) : " none") + "\n";
        try {
          ExponentFit f = fit_exponent(records);
          result["fit"] = to_json(f);
          text += "kappa_emp " + fixed(f.slope) + " (r2 " + fixed(f.r2) + ")\n";
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::InsufficientData) throw;
        }
        emit(est_c, {{"config", cfg}, {"result", result}}, records_csv(records), text, out);
      } else {
        cfg["subcommand"] = "campaign";
        cfg["seeds"] = campaign_seeds;
        CampaignSummary sum = sample_campaign(s, campaign_seeds, est_c.workers);
        std::string text = "median kappa_emp " + (sum.median ? fixed(*sum.median) : std::string("n/a")) + " iqr " +
                           fixed(sum.iqr) + " failures " + std::to_string(sum.failures) + "\n";
        emit(est_c, {{"config", cfg}, {"result", to_json(sum, est_c.timing)}}, campaign_csv(sum), text, out);
      }
    } else if (exponent->parsed()) {
      Json cfg = common_json(exp_c);
      cfg["subcommand"] = "exponent";
      Json result = Json::object();
      std::string text, csv;
      auto R = [](const std::string& s) { return Rational::parse(s); };
      if (exp_table) {
        Json rows = Json::array();
        csv += "id,family,threshold,pigeonhole,affine,matches_pigeonhole,refined\n";
        for (const auto& e : theorem_table()) {
          rows.push_back(to_json(e));
          text += e.id + "  " + e.family + "  threshold " + e.threshold_text() + "\n";
          csv += e.id + ',' + e.family + ',' + e.threshold_text() + ',' + e.pigeonhole.str() + ',' + e.affine.str() + ',' +
                 (e.matches_pigeonhole ? "1" : "0") + ',' + (e.refined ? "1" : "0") + '\n';
        }
        result["table"] = rows;
        cfg["table"] = true;
      }
      auto scalar = [&](const std::string& name, const Json& input, const Rational& value) {
        result[name] = value.str();
        cfg[name] = input;
        text += name + " " + value.str() + "\n";
        csv += name + ',' + value.str() + '\n';
      };
      if (!exp_pigeonhole.empty()) {
        HeuristicParams h{R(exp_pigeonhole[0]), std::stoi(exp_pigeonhole[1]), std::stoi(exp_pigeonhole[2])};
        scalar("pigeonhole", exp_pigeonhole, pigeonhole_kappa(h));
      }
      if (!exp_gram.empty())
        scalar("gram", exp_gram,
               gram_pigeonhole_kappa(std::stoi(exp_gram[0]), std::stoi(exp_gram[1]), std::stoi(exp_gram[2])));
      if (!exp_volume.empty())
        scalar("volume", exp_volume,
               volume_exponent(exp_volume == "so21" ? so21_root_datum() : sl3_diagonal_root_datum()));
      if (!exp_ergodic.empty()) {
        ErgodicExponent e = ergodic_theta(R(exp_ergodic));
        result["ergodic"] = {{"n_e", e.n_e}, {"theta", e.theta.str()}};
        cfg["ergodic"] = exp_ergodic;
        text += "ergodic n_e " + std::to_string(e.n_e) + " theta " + e.theta.str() + "\n";
        csv += "ergodic," + std::to_string(e.n_e) + ',' + e.theta.str() + '\n';
      }
      if (!exp_affine.empty())
        scalar("affine", exp_affine, affine_kappa(R(exp_affine[0]), R(exp_affine[1]), R(exp_affine[2])));
      if (!exp_projective.empty()) {
        SpectralParams sp;
        sp.zeta = R(exp_projective[0]);
        sp.theta = R(exp_projective[1]);
        sp.b = R(exp_projective[2]);
        sp.c = R(exp_projective[3]);
        sp.d = R(exp_projective[4]);
        scalar("projective", exp_projective, projective_kappa(sp));
      }
      if (!exp_thresholds.empty()) {
        CounterexampleThresholds th = counterexample_thresholds(std::stoi(exp_thresholds[0]), std::stoi(exp_thresholds[1]));
        result["thresholds"] = {{"nondensity_below", th.nondensity_below.str()},
                                {"heuristic_floor", th.heuristic_floor.str()}};
        cfg["thresholds"] = exp_thresholds;
        text += "nondensity_below " + th.nondensity_below.str() + " heuristic_floor " + th.heuristic_floor.str() + "\n";
        csv += "thresholds," + th.nondensity_below.str() + ',' + th.heuristic_floor.str() + '\n';
      }
      if (result.empty()) throw Error(ErrorKind::InvalidArgument, "exponent: nothing requested");
      emit(exp_c, {{"config", cfg}, {"result", result}}, csv, text, out);
    } else if (cx->parsed()) {
      AlphaInstance inst = cx_alpha.empty() ? sample_alpha_instance(cx_n, cx_s, cx_xi, cx_sigma, cx_c.seed)
                                            : AlphaInstance{cx_n, cx_s, cx_alpha, cx_xi, cx_sigma};
      validate(inst);
      MarginReport m = lemma_margin(inst, cx_xmax, cx_c.workers);
      Json result{{"margin", to_json(m)}, {"instance", to_json(inst)}};
      std::string text = "min_margin " + fixed(m.min_margin) + " at z=" + std::to_string(m.argmin_z) + "\n";
      std::string csv = "x_max,min_margin,argmin_z\n" + std::to_string(m.x_max) + ',' + fixed(m.min_margin, 12) + ',' +
                        std::to_string(m.argmin_z) + '\n';
      if (!cx_eps.empty()) {
        VerifyOptions vo;
        vo.workers = cx_c.workers;
        NoSolutionReport r = verify_no_solutions(inst, cx_kappa, cx_eps, vo);
        result["verdicts"] = to_json(r);
        csv += "epsilon,no_solution,max_height,min_deviation\n";
        for (const auto& row : r.rows) {
          text += "eps=" + fixed(row.epsilon) + (row.no_solution ? " no solution" : " solution found") +
                  " min_dev=" + fixed(row.min_deviation) + "\n";
          csv += fixed(row.epsilon, 12) + ',' + (row.no_solution ? "1" : "0") + ',' + std::to_string(row.max_height) +
                 ',' + fixed(row.min_deviation, 12) + '\n';
        }
      }
      Json cfg = common_json(cx_c);
      cfg.update({{"subcommand", "counterexample"},
                  {"instance", to_json(inst)},
                  {"x_max", cx_xmax},
                  {"kappa", number(cx_kappa)},
                  {"eps", cx_eps}});
      emit(cx_c, {{"config", cfg}, {"result", result}}, csv, text, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::BallTooLarge ? kGuard : kValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: malformed number in arguments\n";
    return kValidation;
  } catch (const std::out_of_range& e) {
    err << "error: number out of range in arguments\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}

}  // namespace polydens::cli
