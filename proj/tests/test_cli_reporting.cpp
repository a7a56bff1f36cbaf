#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracspec/pipeline.hpp"

using namespace fracspec;
namespace fs = std::filesystem;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.dimension = 1;
  c.shape = "interval";
  c.lengths = {1.0};
  c.pole = {0.0};
  c.alpha = 0.5;
  c.aij = {{1.0}};
  c.rho0 = 1.0;
  c.n_list = {32};
  c.ray_cells = 16;
  c.p_list = {1.0};
  c.fov_angles = 32;
  c.seed = 7;
  c.out_dir = (fs::temp_directory_path() / "fracspec_cli_test").string();
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config snapshot round-trips") {
  const RunConfig c = small_config();
  const RunConfig back = RunConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
}

TEST_CASE("config validation names the offending field") {
  auto expect_field = [](nlohmann::ordered_json j, const std::string& field) {
    try {
      RunConfig::from_json(j);
      FAIL_CHECK("expected rejection for " << field);
    } catch (const ValidationError& e) {
      CHECK(e.field == field);
    }
  };
  nlohmann::ordered_json base = small_config().to_json();

  nlohmann::ordered_json j = base;
  j["alpha"] = 1.5;
  expect_field(j, "alpha");

  j = base;
  j["grid"]["N_list"] = nlohmann::ordered_json::array({2});
  expect_field(j, "grid.N_list");

  j = base;
  j["dimension"] = 3;
  expect_field(j, "dimension");

  j = base;
  j["coefficients"]["aij"] = {{1.0, 0.0}};
  expect_field(j, "coefficients.aij");

  j = base;
  j["ray"]["M"] = 2;
  expect_field(j, "ray.M");

  j = base;
  j["fov"]["n_angles"] = 4;
  expect_field(j, "fov.n_angles");

  j = base;
  j["schatten"]["p_list"] = nlohmann::ordered_json::array({0.5});
  expect_field(j, "schatten.p_list");
}

TEST_CASE("emit_series formatting") {
  const std::string dir = (fs::temp_directory_path() / "fracspec_series_test").string();
  fs::remove_all(dir);
  const std::string file = emit_series("demo", {"i", "value"},
                                       {{1.0, 1.0 / 3.0}, {2.0, 0.1}}, dir, 8);
  CHECK(file == "demo_8.csv");
  const std::string text = slurp(fs::path(dir) / file);
  CHECK(text.find("i,value\n") == 0);
  CHECK(text.find("0.33333333333333331") != std::string::npos);  // 17 significant digits
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
  CHECK_THROWS_AS(emit_series("bad", {"a"}, {{1.0, 2.0}}, dir, 8), std::invalid_argument);
}

TEST_CASE("oracle command passes and is deterministic") {
  RunConfig c = small_config();
  const ReportDocument d1 = run_command("oracle", c, false);
  const ReportDocument d2 = run_command("oracle", c, false);
  CHECK(d1.exit_code() == 0);
  CHECK(d1.to_json().dump(2) == d2.to_json().dump(2));
  for (const ClaimRecord& rec : d1.claims) {
    INFO(rec.id);
    CHECK(rec.passed());
  }
}

TEST_CASE("spectrum slice runs and reports claims") {
  RunConfig c = small_config();
  const ReportDocument doc = run_command("spectrum", c, false);
  REQUIRE(doc.claims.size() == 3);
  for (const ClaimRecord& rec : doc.claims) {
    INFO(rec.id);
    CHECK(rec.passed());
  }
  CHECK(doc.exit_code() == 0);
}

TEST_CASE("sector slice is byte-deterministic including file output") {
  RunConfig c = small_config();
  c.out_dir = (fs::temp_directory_path() / "fracspec_det_a").string();
  fs::remove_all(c.out_dir);
  const ReportDocument d1 = run_command("sector", c);
  const std::string r1 = slurp(fs::path(c.out_dir) / "sector.json");
  const std::string f1 = slurp(fs::path(c.out_dir) / "fov_L_32.csv");

  c.out_dir = (fs::temp_directory_path() / "fracspec_det_b").string();
  fs::remove_all(c.out_dir);
  const ReportDocument d2 = run_command("sector", c);
  const std::string r2 = slurp(fs::path(c.out_dir) / "sector.json");
  const std::string f2 = slurp(fs::path(c.out_dir) / "fov_L_32.csv");

  // reports differ only in the configured output directory
  CHECK(f1 == f2);
  CHECK(f1.size() > 0);
  auto j1 = nlohmann::ordered_json::parse(r1);
  auto j2 = nlohmann::ordered_json::parse(r2);
  j1["config"].erase("out_dir");
  j2["config"].erase("out_dir");
  CHECK(j1.dump() == j2.dump());
  CHECK(d1.exit_code() == d2.exit_code());
}

TEST_CASE("computational abort surfaces for a disabled weight") {
  RunConfig c = small_config();
  c.rho0 = 0.0;
  CHECK_THROWS_AS(run_command("spectrum", c, false), ComputationError);
}

TEST_CASE("claim failure is reflected in the exit code") {
  RunConfig c = small_config();
  c.residual_tol = 1e-30;  // impossible residual demand
  const ReportDocument doc = run_command("sumbound", c, false);
  CHECK(doc.exit_code() == 1);
}

TEST_CASE("unknown command rejected") {
  CHECK_THROWS_AS(run_command("nonsense", small_config(), false), std::invalid_argument);
}

TEST_CASE("report document shape") {
  RunConfig c = small_config();
  const ReportDocument doc = run_command("spectrum", c, false);
  const nlohmann::ordered_json j = doc.to_json();
  REQUIRE(j.contains("config"));
  REQUIRE(j.contains("constants"));
  REQUIRE(j.contains("claims"));
  REQUIRE(j.contains("series"));
  for (const auto& claim : j.at("claims")) {
    CHECK(claim.contains("id"));
    CHECK(claim.contains("anchor"));
    CHECK(claim.contains("measured"));
    CHECK(claim.contains("bound"));
    CHECK(claim.contains("tolerance"));
    CHECK(claim.contains("verdict"));
    CHECK(claim.contains("grids"));
  }
  // constants table carries the per-level constants
  REQUIRE(doc.constants.size() == 1);
  CHECK(doc.constants[0].at("N") == 32);
  CHECK(doc.constants[0].contains("eta_inv_sq"));
}
