#include <doctest.h>

#include <cmath>
#include <string>

#include <json.hpp>

#include "qsis/qsis.h"

using json = nlohmann::json;

TEST_CASE("kernel handles") {
  qsis_kernel* k = nullptr;
  REQUIRE(qsis_kernel_create("poisson", 2.0, &k) == QSIS_OK);
  double x[3] = {0.0, 0.5, 1.0}, out[3];
  REQUIRE(qsis_kernel_eval_space(k, x, 3, out) == QSIS_OK);
  CHECK(out[1] == doctest::Approx(std::exp(-1.0)));
  REQUIRE(qsis_kernel_eval_fourier(k, x, 1, out) == QSIS_OK);
  CHECK(out[0] == doctest::Approx(std::sqrt(2.0 / M_PI) / 2.0));
  char* rep = nullptr;
  REQUIRE(qsis_kernel_regularity(k, 0, 1024, &rep) == QSIS_OK);
  auto j = json::parse(rep);
  qsis_string_free(rep);
  CHECK(j.at("pass-A2").get<bool>());
  REQUIRE(qsis_kernel_describe(k, &rep) == QSIS_OK);
  CHECK(json::parse(rep).at("family") == "poisson");
  qsis_string_free(rep);
  qsis_kernel_destroy(k);
  CHECK(std::string(qsis_last_error()).empty());
}

TEST_CASE("errors carry a JSON object") {
  qsis_kernel* k = nullptr;
  CHECK(qsis_kernel_create("gaussian", -1.0, &k) == QSIS_E_USAGE);
  auto e = json::parse(qsis_last_error());
  CHECK(e.at("error").at("kind") == "range");
  CHECK(e.at("error").at("status") == 2);
  CHECK(qsis_kernel_create(nullptr, 0.0, &k) == QSIS_E_USAGE);
  double v = 0.0;
  CHECK(qsis_bessel_k(0.5, -1.0, &v) == QSIS_E_USAGE);
  CHECK(qsis_run("recover", "{not json", nullptr, nullptr) == QSIS_E_USAGE);
  CHECK(json::parse(qsis_last_error()).at("error").at("kind") == "usage");
}

TEST_CASE("nodes and Bessel") {
  qsis_nodes* n = nullptr;
  REQUIRE(qsis_nodes_create("lattice", 16, &n) == QSIS_OK);
  CHECK(qsis_nodes_size(n) == 33);
  double vals[33];
  REQUIRE(qsis_nodes_values(n, vals) == QSIS_OK);
  CHECK(vals[0] == -16.0);
  char* r = nullptr;
  REQUIRE(qsis_nodes_riesz(n, &r) == QSIS_OK);
  CHECK(json::parse(r).at("C").get<double>() == doctest::Approx(1.0));
  qsis_string_free(r);
  qsis_nodes_destroy(n);
  double b = 0.0;
  REQUIRE(qsis_bessel_k(0.5, 1.0, &b) == QSIS_OK);
  CHECK(b == doctest::Approx(std::sqrt(M_PI / 2.0) * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("config parsing, commands and runs") {
  char* s = nullptr;
  REQUIRE(qsis_config_parse("kernel = sinc", &s) == QSIS_OK);
  CHECK(json::parse(s).at("kernel") == "sinc");
  qsis_string_free(s);
  REQUIRE(qsis_commands(&s) == QSIS_OK);
  CHECK(json::parse(s).size() == 7);
  qsis_string_free(s);
  REQUIRE(qsis_presets(&s) == QSIS_OK);
  CHECK(json::parse(s).contains("sqrt2-swap"));
  qsis_string_free(s);
  REQUIRE(qsis_run("verify-kernel", "{\"kernel\": \"sinc\"}", nullptr, &s) == QSIS_OK);
  CHECK(json::parse(s).at("verdict").at("pass").get<bool>());
  qsis_string_free(s);
  CHECK(qsis_run("riesz", "{\"J\": 0}", "", nullptr) == QSIS_E_USAGE);
}
