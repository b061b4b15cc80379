#include <doctest.h>

#include "oracles.hpp"
#include "qsis/error.hpp"
#include "qsis/fourier.hpp"
#include "qsis/kernel.hpp"

using namespace qsis;
using oracle::pi;

TEST_CASE("torus grid layout and weights") {
  TorusGrid g(64);
  CHECK(g.size() == 65);
  CHECK(g.node(0) == doctest::Approx(-pi));
  CHECK(g.node(64) == doctest::Approx(pi));
  double s = 0.0;
  for (double w : g.weights()) s += w;
  CHECK(s == doctest::Approx(2.0 * pi).epsilon(1e-13));
  // polynomials up to high degree are integrated exactly on each half
  auto w = corrected_trapezoid_weights(32);
  for (int p = 0; p <= 6; ++p) {
    double q = 0.0;
    for (int i = 0; i <= 32; ++i) q += w[i] * std::pow(i, p);
    CHECK(q == doctest::Approx(std::pow(32.0, p + 1) / (p + 1)).epsilon(1e-11));
  }
}

TEST_CASE("nonperiodic exponential integrals on the torus") {
  TorusGrid g(1024);
  for (double d : {0.5, 0.2, 1.4142135623730951 - 1.0}) {
    CVec u(g.size()), one(g.size(), 1.0);
    for (int m = 0; m < g.size(); ++m) u[m] = std::exp(cplx(0.0, -d * g.node(m)));
    const cplx ip = inner_torus(u, one, g);
    CHECK(ip.real() == doctest::Approx(2.0 * std::sin(pi * d) / d).epsilon(1e-10));
    CHECK(std::fabs(ip.imag()) < 1e-12);
  }
}

TEST_CASE("periodization of the flat and triangle spectra") {
  TorusGrid g(256);
  auto s = periodize(sinc_kernel().spectrum(), g, 5);
  for (double v : s) CHECK(v == doctest::Approx(1.0 / std::sqrt(2.0 * pi)).epsilon(1e-15));
  auto t = periodize(triangle_spectrum().spectrum(), g, 3);
  for (double v : t) CHECK(v == doctest::Approx(2.0 * pi).epsilon(1e-14));
  auto z = periodize([](double) { return 0.0; }, g, 4);
  for (double v : z) CHECK(v == 0.0);
}

TEST_CASE("sample_cell takes the inner limit at the closing node") {
  TorusGrid g(16);
  auto c = sample_cell(sinc_kernel().spectrum(), g, 0);
  CHECK(c.back() == doctest::Approx(1.0 / std::sqrt(2.0 * pi)));
  auto c1 = sample_cell(sinc_kernel().spectrum(), g, 1);
  for (double v : c1) CHECK(v == 0.0);
}

TEST_CASE("inverse transform reproduces closed-form pairs") {
  auto flat = [](double xi) { return std::fabs(xi) < pi ? 1.0 / std::sqrt(2.0 * pi) : 0.0; };
  CHECK(inverse_ft(flat, 0.5, pi, 1 << 14) == doctest::Approx(2.0 / pi).epsilon(1e-9));
  auto g = [](double xi) { return std::exp(-xi * xi / 4.0) / std::sqrt(2.0); };
  CHECK(inverse_ft(g, 0.0, 40.0, 4096) == doctest::Approx(1.0).epsilon(1e-9));
  for (double x : {0.3, 1.1, 2.9}) CHECK(inverse_ft(g, x, 40.0, 4096) == doctest::Approx(inverse_ft(g, -x, 40.0, 4096)));
  CHECK(inverse_ft(g, 1.1, 40.0, 4096) == doctest::Approx(std::exp(-1.21)).epsilon(1e-9));
}

TEST_CASE("inverse transform reports a truncated tail") {
  auto slow = [](double xi) { return 1.0 / (1.0 + xi * xi); };
  CHECK_THROWS_AS(inverse_ft(slow, 0.0, 10.0, 1024, 1e-8), Error);
}

TEST_CASE("line and torus norms") {
  LineGrid lg(1.0, 0.01);
  std::vector<double> ones(lg.size(), 1.0), zeros(lg.size(), 0.0);
  CHECK(l2_norm_line(zeros, lg) == 0.0);
  CHECK(l2_norm_line(ones, lg) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
  LineGrid wide(12.0, 0.01);
  std::vector<double> gs(wide.size());
  for (int i = 0; i < wide.size(); ++i) gs[i] = std::exp(-wide.node(i) * wide.node(i));
  CHECK(l2_norm_line(gs, wide) == doctest::Approx(std::sqrt(std::sqrt(pi / 2.0))).epsilon(1e-6));

  TorusGrid tg(512);
  std::vector<double> one(tg.size(), 1.0);
  CHECK(l2_norm_torus(one, tg) == doctest::Approx(std::sqrt(2.0 * pi)).epsilon(1e-13));
  CVec e(tg.size());
  for (int m = 0; m < tg.size(); ++m) e[m] = std::exp(cplx(0.0, -3.0 * tg.node(m)));
  CHECK(l2_norm_torus(e, tg) == doctest::Approx(std::sqrt(2.0 * pi)).epsilon(1e-13));
  // integer exponential sums are orthogonal: norm sqrt(2pi) |c|
  auto c = oracle::normal_vector(9, 7);
  CVec s(tg.size(), 0.0);
  for (int m = 0; m < tg.size(); ++m)
    for (int j = 0; j < 9; ++j) s[m] += c[j] * std::exp(cplx(0.0, -(j - 4) * tg.node(m)));
  CHECK(l2_norm_torus(s, tg) == doctest::Approx(std::sqrt(2.0 * pi) * oracle::norm2(c)).epsilon(1e-12));
}

TEST_CASE("spectral quadrature synthesis equals pointwise sums") {
  auto g = [](double xi) { return std::exp(-xi * xi / 4.0) / std::sqrt(2.0); };
  SpectralQuadrature q(g, 40.0, 4096);
  std::vector<double> centers{-1.0, 0.0, 1.5}, coeffs{0.5, -1.0, 2.0}, xs{-2.0, 0.1, 3.0};
  auto s = q.synthesize(centers, coeffs, xs);
  for (size_t i = 0; i < xs.size(); ++i) {
    double ref = 0.0;
    for (size_t j = 0; j < centers.size(); ++j) ref += coeffs[j] * std::exp(-std::pow(xs[i] - centers[j], 2));
    CHECK(s[i] == doctest::Approx(ref).epsilon(1e-10));
  }
}
