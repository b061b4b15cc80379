#include <doctest.h>

#include "oracles.hpp"
#include "qsis/cardinal.hpp"
#include "qsis/error.hpp"
#include "qsis/interpolation.hpp"

using namespace qsis;
using oracle::pi;

TEST_CASE("cardinal spectra") {
  CardinalFunction s(sinc_kernel());
  for (double xi : {-3.0, -1.0, 0.0, 2.0, 3.1}) CHECK(s.spectrum(xi) == doctest::Approx(1.0 / std::sqrt(2.0 * pi)).epsilon(1e-14));
  CHECK(s.spectrum(4.0) == 0.0);
  for (const Kernel& k : {gaussian(1.0), poisson(2.0), triangle_spectrum(), gaussian(3.0)}) {
    CardinalFunction L(k);
    for (int i = -200; i <= 200; ++i) {
      const double v = L.spectrum(0.05 * i);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0 / std::sqrt(2.0 * pi) * (1.0 + 1e-14));
    }
  }
  // ratio to an independent periodization of the gaussian spectrum
  double sigma = 0.0;
  for (int k = -30; k <= 30; ++k) sigma += std::exp(-std::pow(2.0 * pi * k, 2) / 4.0) / std::sqrt(2.0);
  CHECK(CardinalFunction(gaussian(1.0)).spectrum(0.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * pi) / std::sqrt(2.0) / sigma).epsilon(1e-12));
}

TEST_CASE("cardinal functions on the lattice") {
  CardinalFunction s(sinc_kernel());
  for (int i = -16; i <= 16; ++i) CHECK(std::fabs(s.eval(0.25 * i) - oracle::sinc(0.25 * i)) <= 1e-8);
  for (const Kernel& k : {gaussian(1.0), poisson(2.0), triangle_spectrum()}) {
    CardinalFunction L(k);
    for (int n = -8; n <= 8; ++n) CHECK(std::fabs(L.eval(n) - (n == 0 ? 1.0 : 0.0)) <= 1e-6);
    for (double x : {0.3, 1.7, 4.2}) CHECK(L.eval(x) == doctest::Approx(L.eval(-x)).epsilon(1e-10));
  }
}

TEST_CASE("Poisson cardinal function against its three-term closed form") {
  for (double a : {0.5, 2.0}) {
    CardinalFunction L(poisson(a));
    for (double x : {0.0, 0.25, 0.5, 1.3, 2.0, 3.7, 7.5}) CHECK(L.eval(x) == doctest::Approx(oracle::poisson_cardinal(a, x)).epsilon(1e-9));
  }
}

TEST_CASE("cardinal regularity") {
  auto s = cardinal_regularity(sinc_kernel());
  CHECK(s.report.C == 0.0);
  CHECK(s.report.delta == doctest::Approx(1.0 / std::sqrt(2.0 * pi)).epsilon(1e-14));
  auto g = cardinal_regularity(gaussian(1.0));
  CHECK(g.report.pass_A1);
  CHECK(g.report.pass_A2);
  for (const Kernel& k : {gaussian(1.0), poisson(2.0), triangle_spectrum(), inverse_multiquadric(2.0)}) {
    auto r = cardinal_regularity(k);
    const double bound = r.base_report.C * (r.base_report.linf_torus / r.base_report.delta + r.base_report.C);
    CHECK(r.bound == doctest::Approx(bound));
    CHECK(r.report.C <= bound * (1.0 + 1e-12) + 1e-15);
    CHECK(r.bound_holds);
  }
}

TEST_CASE("lattice interpolant through the cardinal function") {
  CardinalFunction L(gaussian(1.0));
  const int J = 24;
  std::vector<double> delta(2 * J + 1, 0.0);
  delta[J] = 1.0;
  std::vector<double> xs{-2.5, -0.4, 0.0, 1.1, 3.3};
  auto li = L.lattice_interpolant(delta, xs);
  for (size_t i = 0; i < xs.size(); ++i) CHECK(li[i] == doctest::Approx(L.eval(xs[i])).epsilon(1e-12));
  auto zero = L.lattice_interpolant(std::vector<double>(2 * J + 1, 0.0), xs);
  for (double v : zero) CHECK(v == 0.0);

  auto Z = NodeSet::lattice(J);
  auto f = random_function(triangle_spectrum(), Z, 8);
  auto data = sample(f, Z);
  auto g = interpolate(f, gaussian(1.0), Z);
  std::vector<double> grid;
  for (int i = -32; i <= 32; ++i) grid.push_back(i / 8.0);
  auto a = g.eval(grid), b = L.lattice_interpolant(data, grid);
  for (size_t i = 0; i < grid.size(); ++i) CHECK(std::fabs(a[i] - b[i]) < 1e-6);
  CHECK(lattice_interpolant_via_cardinal(data, gaussian(1.0), grid[34]) == doctest::Approx(b[34]).epsilon(1e-10));
}

TEST_CASE("cardinal convergence sweep and the generator distance") {
  auto fam = [](double a) { return convolve(gaussian(1.0 / a), triangle_spectrum()); };
  auto rows = cardinal_convergence_sweep(fam, triangle_spectrum(), {1.0, 2.0, 4.0, 8.0}, LineGrid(16.0, 1.0 / 16));
  for (size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].l2 < rows[i - 1].l2);
    CHECK(rows[i].sup < rows[i - 1].sup);
  }
  CHECK(rows.back().sup < 0.1 * rows.front().sup);
  for (const auto& r : rows) CHECK(r.generator_sup > 0.1);
}

TEST_CASE("multiquadric cardinal kernel") {
  Kernel mq = multiquadric_cardinal(1.0);
  for (int n = -4; n <= 4; ++n) CHECK(std::fabs(mq.space(n) - (n == 0 ? 1.0 : 0.0)) < 1e-6);
  CHECK(mq.fourier(0.5) == doctest::Approx(mq.fourier(-0.5)));
}

TEST_CASE("degenerate symbols are rejected") {
  // spectrum supported on |xi| < pi/2: the symbol vanishes on part of T
  const Kernel narrow = dilated(sinc_kernel(), 0.5);
  auto kind = ErrorKind::usage;
  try {
    cardinal_spectrum(narrow, 3.0, 2);
  } catch (const Error& e) {
    kind = e.kind();
  }
  CHECK(kind == ErrorKind::degeneracy);
  CHECK_NOTHROW(cardinal_spectrum(narrow, 0.5, 2));
}
