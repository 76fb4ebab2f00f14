#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "contacton/harness.hpp"
#include "contacton/io.hpp"

using namespace contacton;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("contacton_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

harness::ScenarioConfig config(json j) { return harness::ScenarioConfig::from_json(j); }

}  // namespace

TEST_CASE("plot data round trip") {
  const fs::path dir = scratch("csv");
  io::Series s{{"tau", "log_norm"}, {}};
  s.add({0.5, -1.25});
  s.add({1.0, 0.1});
  io::emit_plot_data(s, (dir / "decay.csv").string());
  const auto ls = lines(dir / "decay.csv");
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "tau,log_norm");
  CHECK(ls[1] == "0.5,-1.25");
  CHECK(std::stod(ls[2].substr(ls[2].find(',') + 1)) == 0.1);

  CHECK_THROWS_AS(io::emit_plot_data(io::Series{{"a"}, {}}, (dir / "x.csv").string()), Error);
  CHECK_THROWS_AS(io::emit_plot_data(s, (dir / "missing" / "x.csv").string()), Error);
  io::Series ragged{{"a", "b"}, {{1.0}}};
  CHECK_THROWS_AS(io::emit_plot_data(ragged, (dir / "r.csv").string()), DimensionError);
  CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("solution dump format") {
  const fs::path dir = scratch("solution");
  Eigen::VectorXd q0(2);
  q0 << 0.25, -0.5;
  const auto g = instanton::StripGrid::make(0.0, 1.0, 4, 4);
  const auto w = instanton::reeb_chord_strip(g, q0, 0.7);
  io::write_solution(w, (dir / "solution.txt").string());
  const auto ls = lines(dir / "solution.txt");
  REQUIRE(ls.size() == 6 + 25);
  CHECK(ls[1] == "n 2");
  CHECK(ls[2] == "grid 0 1 4 4");
  CHECK(ls[3].rfind("lower ", 0) == 0);
  CHECK(ls[5] == "far_field dirichlet");
  // i j q1 q2 p1 p2 z, read back
  std::istringstream last(ls.back());
  int i, j;
  double v[5];
  last >> i >> j;
  for (double& x : v) last >> x;
  CHECK(i == 4);
  CHECK(j == 4);
  CHECK(v[0] == 0.25);
  CHECK(v[1] == -0.5);
  CHECK(v[4] == doctest::Approx(0.7));
}

TEST_CASE("chord table marks rejected seeds") {
  const fs::path dir = scratch("chords");
  action::ChordRecord ok;
  ok.seed.q0 = Eigen::VectorXd::Constant(2, 0.5);
  ok.found = true;
  ok.report.duration = 0.7;
  ok.report.nondegenerate = true;
  action::ChordRecord bad;
  bad.seed.q0 = Eigen::VectorXd::Constant(2, 0.0);
  bad.error = "t1 collapsed, rejected";
  io::write_chord_table({ok, bad}, (dir / "chords.csv").string());
  const auto ls = lines(dir / "chords.csv");
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "seed_q,duration,action,defect,margin,cond,flags");
  CHECK(ls[1].rfind("0.5;0.5,0.69999999999999996,", 0) == 0);
  CHECK(ls[2].find("rejected: t1 collapsed  rejected") != std::string::npos);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(config({{"scenario", "reeb-strip"}}));
  CHECK_THROWS_AS(config({{"scenario", "warp-drive"}}), Error);
  CHECK_THROWS_AS(config({{"n_tau", 8}}), Error);
  CHECK_THROWS_AS(config({{"scenario", "reeb-strip"}, {"n_taus", 8}}), Error);
  CHECK_THROWS_AS(config({{"scenario", "reeb-strip"}, {"n_tau", "many"}}), Error);
  CHECK_THROWS_AS(config({{"scenario", "reeb-strip"}, {"n_tau", 2}}), Error);
  CHECK_THROWS_AS(config({{"scenario", "chord-search"}, {"chord_tolerance", -1.0}}), Error);
  CHECK_THROWS_AS(config({{"scenario", "chord-search"}, {"hamiltonian", "coord:w"}}), Error);
  CHECK_THROWS_AS(config({{"scenario", "refinement-study"}, {"n", 2}}), Error);
  CHECK_THROWS_AS(config({{"scenario", "relax"}, {"far_field", "periodic"}}), Error);
  CHECK_THROWS_AS(config(json::array()), Error);
  CHECK_NOTHROW(config({{"scenario", "jet1-solve"}, {"jet1_case", "reeb"}, {"n", 2}}));
}

TEST_CASE("config json round trip") {
  const auto c = config({{"scenario", "chord-search"}, {"upper_c", 2.0}, {"seed_count", 3},
                         {"q0", {0.1, 0.2}}, {"n", 2}});
  const auto d = harness::ScenarioConfig::from_json(c.to_json());
  CHECK(d.to_json() == c.to_json());
  CHECK(d.upper_c == 2.0);
  CHECK(d.q0.size() == 2);
}

TEST_CASE("scenario registry") {
  const auto list = harness::list_scenarios();
  CHECK(list.size() == 6);
  for (const auto& [name, what] : list) {
    CHECK_FALSE(what.empty());
    CHECK_NOTHROW(config({{"scenario", name}}));
  }
}

TEST_CASE("reeb-strip scenario report") {
  const fs::path dir = scratch("reeb");
  const auto rep = harness::run(config({{"scenario", "reeb-strip"}, {"c", 0.7}}), dir.string());
  CHECK(rep.pass());
  const json j = json::parse(slurp(dir / "report.json"));
  CHECK(j["pass"] == true);
  CHECK(j["scenario"] == "reeb-strip");
  CHECK_FALSE(j["config"].contains("out_dir"));
  CHECK_FALSE(j.contains("seconds"));
  CHECK(j["diagnostics"]["invariants"]["decay"]["delta"] == "inf");
  for (const char* f : {"slices.csv", "solution.txt", "report.json"}) CHECK(fs::exists(dir / f));
  bool all = true;
  for (const auto& c : j["checks"]) all = all && c["pass"].get<bool>();
  CHECK(all);
}

TEST_CASE("failing runs are reported, not thrown") {
  const fs::path dir = scratch("fail");
  // no Reeb chord from j1(0) back to itself
  const auto rep = harness::run(
      config({{"scenario", "chord-search"}, {"upper_c", 0.0}, {"seed_count", 2}}), dir.string());
  CHECK_FALSE(rep.pass());
  const json j = json::parse(slurp(dir / "report.json"));
  CHECK(j["pass"] == false);
  for (const auto& row : j["diagnostics"]["chords"]) CHECK(row["found"] == false);
}

TEST_CASE("reports are bit-identical across runs") {
  for (const json& cfg :
       {json{{"scenario", "calculus-suite"}, {"samples", 20}, {"seed", 5}},
        json{{"scenario", "chord-search"}, {"upper_a", 0.2}},
        json{{"scenario", "jet1-solve"}, {"n_tau", 32}, {"n_t", 16}},
        json{{"scenario", "relax"}, {"n_tau", 16}, {"n_t", 8}, {"seed", 9}}}) {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    harness::run(config(cfg), a.string());
    harness::run(config(cfg), b.string());
    CAPTURE(cfg.dump());
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  }
}
