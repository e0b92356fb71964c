#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "polydens/cli.hpp"
#include "polydens/serialize.hpp"

using namespace polydens;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("exponent table") {
  Run r = run({"exponent", "--table", "--format", "csv"});
  CHECK(r.code == 0);
  std::istringstream is(r.out);
  std::string line;
  std::vector<std::string> thresholds;
  std::getline(is, line);
  while (std::getline(is, line)) {
    auto a = line.find(',');
    auto b = line.find(',', a + 1);
    auto c = line.find(',', b + 1);
    thresholds.push_back(line.substr(b + 1, c - b - 1));
  }
  CHECK(thresholds == std::vector<std::string>{"1", "m", "1", "5"});

  Run j = run({"exponent", "--table"});
  Json doc = Json::parse(j.out);
  REQUIRE(doc["result"]["table"].size() == 4);
  CHECK(doc["result"]["table"][3]["threshold"] == "5");
  CHECK(doc["config"]["subcommand"] == "exponent");
}

TEST_CASE("search subcommand is reproducible") {
  std::vector<std::string> args{"search", "--family", "quadratic", "--sig", "2,1", "--disc", "-1", "--seed", "7",
                                "--xi", "0.5", "--eps", "0.2", "--kappa", "1.2"};
  Run a = run(args), b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  Json doc = Json::parse(a.out);
  CHECK(doc["config"]["seed"] == 7);
  CHECK(doc["result"]["found"] == true);
  CHECK(doc["result"]["millis"] == 0);
  CHECK(doc["result"]["height"].get<std::int64_t>() <= doc["result"]["max_height"].get<std::int64_t>());
  // Keys come out sorted.
  CHECK(a.out.find("\"config\"") < a.out.find("\"result\""));

  std::vector<std::string> workers = args;
  workers.insert(workers.end(), {"--workers", "4"});
  Json w = Json::parse(run(workers).out);
  CHECK(w["result"] == doc["result"]);
}

TEST_CASE("exit codes") {
  CHECK(run({"search", "--family", "quadratic", "--sig", "2,1", "--disc", "-1", "--seed", "7", "--xi", "0.5", "--eps",
             "1e-9", "--kappa", "3"})
            .code == cli::kGuard);
  CHECK(run({"search", "--eps", "2"}).code == cli::kValidation);
  CHECK(run({"search", "--bogus"}).code == cli::kValidation);
  CHECK(run({"frobnicate"}).code == cli::kValidation);
  CHECK(run({"search", "--family", "cubic"}).code == cli::kValidation);
  CHECK(run({"exponent", "--pigeonhole", "2,1,2"}).code == cli::kValidation);
  CHECK(run({"exponent"}).code == cli::kValidation);
  Run bad = run({"exponent", "--gram", "3,x,1"});
  CHECK(bad.code == cli::kValidation);
  CHECK_FALSE(bad.err.empty());
}

TEST_CASE("count, estimate, campaign and counterexample subcommands") {
  Run c = run({"count", "--variety", "full", "--n", "3", "--T", "2,4,8,16", "--format", "csv"});
  CHECK(c.code == 0);
  CHECK(c.out.rfind("T,count\n2,27\n", 0) == 0);

  Run e = run({"estimate", "--family", "quadratic", "--xi", "0.3", "--kappa", "1.3", "--seed", "3"});
  CHECK(e.code == 0);
  Json ed = Json::parse(e.out);
  CHECK(ed["result"]["records"].size() == 5);
  CHECK(ed["config"]["schedule"]["seed"] == 3);

  Run cp = run({"campaign", "--seeds", "3", "--xi", "0.3", "--format", "csv"});
  CHECK(cp.code == 0);
  CHECK(std::count(cp.out.begin(), cp.out.end(), '\n') == 4);

  Run cx = run({"counterexample", "--alpha", "1", "--xi", "0", "--x-max", "10"});
  CHECK(cx.code == 0);
  Json cd = Json::parse(cx.out);
  CHECK(cd["result"]["margin"]["min_margin"] == 0.0);
  CHECK(cd["result"]["margin"]["argmin"]["z"] == 1);

  Run v = run({"counterexample", "--seed", "2", "--x-max", "50", "--eps", "0.1,0.05", "--kappa", "1.5"});
  CHECK(v.code == 0);
  Json vd = Json::parse(v.out);
  for (const auto& row : vd["result"]["verdicts"]["rows"])
    CHECK(row["no_solution"] == (row["min_deviation"].get<double>() >= row["epsilon"].get<double>()));
  CHECK(run({"counterexample", "--xi", "1", "--eps", "0.1"}).code == cli::kValidation);
}

TEST_CASE("--out appends json lines") {
  const std::string path = "polydens_cli_test_out.jsonl";
  std::remove(path.c_str());
  run({"exponent", "--ergodic", "4", "--out", path});
  run({"exponent", "--ergodic", "6", "--out", path, "--format", "text"});
  std::ifstream f(path);
  std::string l1, l2, l3;
  std::getline(f, l1);
  std::getline(f, l2);
  CHECK_FALSE(std::getline(f, l3));
  CHECK(Json::parse(l1)["result"]["ergodic"]["theta"] == "1/4");
  CHECK(Json::parse(l2)["result"]["ergodic"]["theta"] == "1/8");
  std::remove(path.c_str());
}

TEST_CASE("serialisation helpers") {
  CHECK(number(0.1 + 0.2).dump() == "0.3");
  CHECK(number(1.0 / 3.0).dump() == "0.333333333333");
  CHECK(number(std::nan("")).is_null());
  Json q = to_json(QuadForm::from_integers(2, {1, 0, 0, -1}));
  CHECK(q["dim"] == 2);
  CHECK(q["exact"]["den"] == 1);
  CHECK(q["matrix"][1][1] == -1.0);
  std::vector<CountRecord> recs{{2, 27}, {3, 125}};
  CHECK(counts_csv(recs) == "T,count\n2,27\n3,125\n");
  Json fam = to_json(MapFamily{CharPoly{random_group_element(3, 5), GroupElement::identity(3), 2}});
  CHECK(fam["family"] == "charpoly");
  CHECK(fam["g1"]["seed"] == 5);
  CHECK(fam["g2"]["seed"].is_null());
}
