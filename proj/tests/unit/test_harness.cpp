#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "qsis/config.hpp"
#include "qsis/error.hpp"
#include "qsis/harness.hpp"

using namespace qsis;
using oracle::pi;
using json = nlohmann::json;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::numeric;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("qsis-test-" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config resolution") {
  auto c = resolve_config("verify-kernel", json::object());
  CHECK(c.at("kernel") == "gaussian");
  CHECK(c.at("M") == 1024);
  CHECK(c.at("command") == "verify-kernel");
  auto p = resolve_config("recover", {{"preset", "poisson-conv-triangle"}, {"J", 12}});
  CHECK(p.at("base") == "poisson");
  CHECK(p.at("J") == 12);
  CHECK(p.at("alphas") == json::array({1.0, 4.0, 16.0, 64.0}));
  CHECK(kind_of([] { resolve_config("recover", {{"bogus", 1}}); }) == ErrorKind::usage);
  CHECK(kind_of([] { resolve_config("riesz", {{"J", "ten"}}); }) == ErrorKind::usage);
  CHECK(kind_of([] { resolve_config("riesz", {{"J", 2.5}}); }) == ErrorKind::usage);
  CHECK(kind_of([] { resolve_config("riesz", {{"J", 0}}); }) == ErrorKind::range);
  CHECK(kind_of([] { resolve_config("verify-kernel", {{"alpha", -1.0}}); }) == ErrorKind::range);
  CHECK(kind_of([] { resolve_config("recover", {{"alphas", {1, 2}}}); }) == ErrorKind::range);
  CHECK(kind_of([] { resolve_config("recover", {{"alphas", {1, 4, 2}}}); }) == ErrorKind::range);
  CHECK(kind_of([] { resolve_config("riesz", {{"preset", "half-shift"}}); }) == ErrorKind::usage);
  CHECK(kind_of([] { resolve_config("riesz", {{"preset", "no-such"}}); }) == ErrorKind::usage);
  CHECK(kind_of([] { resolve_config("launch", json::object()); }) == ErrorKind::usage);
  for (const auto& [name, preset] : presets().items())
    CHECK_NOTHROW(resolve_config(preset.at("command").get<std::string>(), {{"preset", name}}));
}

TEST_CASE("config hashing") {
  auto a = resolve_config("riesz", {{"J", 16}});
  auto b = resolve_config("riesz", {{"J", 16.0}, {"nodes", "lattice"}});
  auto c = resolve_config("riesz", {{"J", 17}});
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a) != config_hash(c));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("config text parsing") {
  auto j = parse_config_text("kernel = poisson\nalpha = 2  # shape\nalphas = [1, 2, 4]\nconditions = false");
  CHECK(j.at("kernel") == "poisson");
  CHECK(j.at("alpha") == 2);
  CHECK(j.at("alphas").size() == 3);
  CHECK(j.at("conditions") == false);
  CHECK(parse_config_text("{\"J\": 3}").at("J") == 3);
  CHECK(kind_of([] { parse_config_text("a = 1, a = 2"); }) == ErrorKind::usage);
}

TEST_CASE("exit code mapping") {
  CHECK(exit_code_for(static_cast<int>(ErrorKind::usage)) == 2);
  CHECK(exit_code_for(static_cast<int>(ErrorKind::range)) == 2);
  CHECK(exit_code_for(static_cast<int>(ErrorKind::io)) == 2);
  CHECK(exit_code_for(static_cast<int>(ErrorKind::solvability)) == 3);
  CHECK(exit_code_for(static_cast<int>(ErrorKind::accuracy)) == 3);
  CHECK(exit_code_for(static_cast<int>(ErrorKind::degeneracy)) == 3);
}

TEST_CASE("verify-kernel and riesz commands") {
  auto p = run_command("verify-kernel", {{"kernel", "poisson"}, {"alpha", 2.0}}, "");
  CHECK(p.exit_code == 0);
  const double delta = p.report.at("result").at("report").at("delta").get<double>();
  CHECK(delta == doctest::Approx(std::sqrt(2.0 / pi) * 2.0 / (4.0 + pi * pi)).epsilon(1e-10));
  auto s = run_command("verify-kernel", {{"kernel", "sinc"}}, "");
  CHECK(s.exit_code == 0);
  CHECK(s.report.at("result").at("report").at("C").get<double>() == 0.0);
  auto r = run_command("riesz", {{"nodes", "lattice"}, {"J", 16}}, "");
  CHECK(r.report.at("result").at("riesz").at("C").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("output files are named by the config hash and deterministic") {
  auto d1 = scratch("a"), d2 = scratch("b");
  json cfg{{"psi", "triangle-spectrum"}, {"nodes", "kadec-alternating:0.2"}, {"J", 8}, {"seed", 3}};
  auto r1 = run_command("interpolate", cfg, d1.string());
  auto r2 = run_command("interpolate", cfg, d2.string());
  const std::string h = r1.report.at("hash");
  CHECK(h == config_hash(resolve_config("interpolate", cfg)));
  REQUIRE(r1.files.size() == 2);
  CHECK(std::filesystem::path(r1.files[0]).filename() == "interpolate-" + h + ".json");
  CHECK(std::filesystem::path(r1.files[1]).filename() == "interpolate-" + h + ".csv");
  CHECK(slurp(r1.files[1]) == slurp(r2.files[1]));
  CHECK(slurp(r1.files[1]).rfind("x,f,g,f_minus_g\n", 0) == 0);
  CHECK(r1.exit_code == 0);
  auto c = run_command("cardinal", {{"kernel", "gaussian"}, {"alpha", 1.0}}, d1.string());
  CHECK(c.files.size() == 3);
  CHECK(c.exit_code == 0);
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
}

TEST_CASE("errors leave no files behind") {
  auto d = scratch("err");
  CHECK(kind_of([&] { run_command("verify-kernel", {{"alpha", "abc"}}, d.string()); }) == ErrorKind::usage);
  CHECK_FALSE(std::filesystem::exists(d));
}

TEST_CASE("recover verdicts reflect the sweep") {
  json cfg{{"preset", "gaussian-conv-triangle"}, {"J", 12}, {"conditions", false}, {"alphas", {1, 2, 4}}};
  auto r = run_command("recover", cfg, "");
  const auto& v = r.report.at("verdict");
  CHECK(v.at("l2-strictly-decreasing").get<bool>());
  CHECK(r.exit_code == (v.at("pass").get<bool>() ? 0 : 1));
  // an impossible threshold turns the verdict red without an error
  cfg["final-ratio"] = 1e-12;
  auto f = run_command("recover", cfg, "");
  CHECK(f.exit_code == 1);
  CHECK_FALSE(f.report.at("verdict").at("final-ratio-ok").get<bool>());
}
