#include <doctest.h>

#include "oracles.hpp"
#include "qsis/error.hpp"
#include "qsis/space.hpp"

using namespace qsis;
using oracle::pi;

TEST_CASE("evaluation of finite translate sums") {
  auto Z = NodeSet::lattice(3);
  std::vector<double> e0(Z.size(), 0.0);
  e0[3] = 1.0;
  QsisFunction f(gaussian(1.0), Z, e0);
  CHECK(f.eval(0.0) == doctest::Approx(1.0));
  QsisFunction two(gaussian(1.0), NodeSet({-1.0, 0.0, 1.0}), {0.0, 1.0, 1.0});
  CHECK(two.eval(0.5) == doctest::Approx(2.0 * std::exp(-0.25)).epsilon(1e-14));
  QsisFunction zero(triangle_spectrum(), Z, std::vector<double>(Z.size(), 0.0));
  for (double x : {-2.0, 0.0, 1.3}) CHECK(zero.eval(x) == 0.0);
  QsisFunction t(triangle_spectrum(), Z, e0);
  CHECK(t.eval(0.0) == doctest::Approx(triangle_spectrum().space(0.0)));
}

TEST_CASE("sampling") {
  auto X = NodeSet::kadec_alternating(4, 0.2);
  std::vector<double> e(X.size(), 0.0);
  e[2] = 1.0;
  auto s = sample(QsisFunction(gaussian(1.0), X, e), X);
  for (int i = 0; i < X.size(); ++i) CHECK(s[i] == doctest::Approx(std::exp(-std::pow(X[i] - X[2], 2))).epsilon(1e-14));
  auto Z = NodeSet::lattice(6);
  auto c = oracle::normal_vector(Z.size(), 11);
  auto sz = sample(QsisFunction(sinc_kernel(), Z, c), Z);
  for (int i = 0; i < Z.size(); ++i) CHECK(sz[i] == doctest::Approx(c[i]).epsilon(1e-14));
}

TEST_CASE("random coefficients are seeded and unit") {
  auto a = random_unit_coefficients(49, 5), b = random_unit_coefficients(49, 5), c = random_unit_coefficients(49, 6);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(oracle::norm2(a) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("L2 norms") {
  auto Z = NodeSet::lattice(2);
  QsisFunction zero(gaussian(1.0), Z, std::vector<double>(Z.size(), 0.0));
  CHECK(l2_norm(zero, LineGrid(48.0, 1.0 / 64)) == 0.0);
  std::vector<double> e(Z.size(), 0.0);
  e[2] = 1.0;
  CHECK(l2_norm(QsisFunction(gaussian(1.0), Z, e), LineGrid(48.0, 1.0 / 64)) ==
        doctest::Approx(std::pow(pi / 2.0, 0.25)).epsilon(1e-6));
  CHECK(l2_norm(QsisFunction(sinc_kernel(), Z, e), LineGrid(256.0, 1.0 / 64)) == doctest::Approx(1.0).epsilon(1e-4));
  // Plancherel on the lattice: |f| = |c| for sinc translates
  auto c = oracle::normal_vector(Z.size(), 2);
  CHECK(l2_norm(QsisFunction(sinc_kernel(), Z, c), LineGrid(256.0, 1.0 / 64)) ==
        doctest::Approx(oracle::norm2(c)).epsilon(1e-4));
}

TEST_CASE("norm equivalence") {
  auto Z = NodeSet::lattice(8);
  std::vector<double> e(Z.size(), 0.0);
  e[8] = 1.0;
  auto s = norm_equivalence_report(QsisFunction(sinc_kernel(), Z, e));
  CHECK(s.f_over_c == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(s.s_over_c == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(s.f_over_s == doctest::Approx(1.0).epsilon(1e-4));

  auto kz = space_constants(gaussian(1.0), Z);
  const LineGrid grid(48.0, 1.0 / 64);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto r = norm_equivalence_report(random_function(gaussian(1.0), Z, seed), grid, kz);
    CHECK(r.within);
    CHECK(r.f_over_c >= r.lower);
    CHECK(r.f_over_c <= r.upper);
    CHECK(r.f_norm == doctest::Approx(r.f_over_c * r.c_norm));
  }
  auto X = NodeSet::kadec_alternating(8, 0.2);
  auto kt = space_constants(triangle_spectrum(), X);
  double lo = 1e300, hi = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto r = norm_equivalence_report(random_function(triangle_spectrum(), X, seed), LineGrid(256.0, 1.0 / 16), kt);
    CHECK(std::isfinite(r.f_over_c));
    CHECK(r.within);
    lo = std::min(lo, r.f_over_c);
    hi = std::max(hi, r.f_over_c);
  }
  CHECK(hi / lo < 10.0);
}

TEST_CASE("bandlimit check") {
  auto X = NodeSet::kadec_alternating(6, 0.2);
  auto ks = space_constants(sinc_kernel(), X);
  auto s = bandlimit_check(random_function(sinc_kernel(), X, 3), ks, -1, TorusGrid(1024));
  CHECK(s.tail_fraction < 1e-10);
  auto kt = space_constants(triangle_spectrum(), X);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto t = bandlimit_check(random_function(triangle_spectrum(), X, seed), kt, -1, TorusGrid(1024));
    CHECK(t.tail_fraction > 0.0);
    CHECK(t.sandwich_holds);
    CHECK(t.energy_total <= t.sandwich_upper);
  }
  // energy identity against the line-grid norm
  auto f = random_function(gaussian(1.0), X, 9);
  auto g = bandlimit_check(f, space_constants(gaussian(1.0), X), -1, TorusGrid(2048));
  CHECK(std::sqrt(g.energy_total) == doctest::Approx(l2_norm(f, LineGrid(48.0, 1.0 / 64))).epsilon(1e-8));
}

TEST_CASE("sample bound") {
  for (const Kernel& psi : {gaussian(1.0), triangle_spectrum()}) {
    auto X = NodeSet::kadec_alternating(8, 0.2);
    auto Y = NodeSet::sqrt2_swap(8);
    auto kx = space_constants(psi, X);
    auto ry = riesz_estimate(Y);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto f = random_function(psi, X, seed);
      auto b = sample_bound_check(f, Y, l2_norm(f, default_line_grid(psi)), kx, ry);
      CHECK(b.holds);
      CHECK(b.lhs == doctest::Approx(oracle::norm2(sample(f, Y))));
    }
  }
}

TEST_CASE("Fourier-side samples") {
  auto X = NodeSet::kadec_alternating(5, 0.2);
  std::vector<double> e(X.size(), 0.0);
  e[5] = 1.0;
  QsisFunction one(gaussian(1.0), X, e);
  auto s1 = fourier_side_samples(one, NodeSet({X.at(0)}), -1, TorusGrid(2048));
  CHECK(std::fabs(s1[0] - 1.0) < 1e-7);
  auto f = random_function(triangle_spectrum(), X, 4);
  auto Y = NodeSet::sqrt2_swap(5);
  auto fs = fourier_side_samples(f, Y, 1, TorusGrid(4096));
  auto ds = sample(f, Y);
  for (int j = 0; j < Y.size(); ++j) CHECK(std::fabs(fs[j] - ds[j]) < 1e-6);
}
