#include <doctest.h>

#include "oracles.hpp"
#include "qsis/error.hpp"
#include "qsis/interpolation.hpp"

using namespace qsis;
using oracle::pi;

TEST_CASE("collocation matrices") {
  auto Z = NodeSet::lattice(6);
  auto A = assemble(gaussian(1.0), Z).A;
  for (int i = 0; i < Z.size(); ++i)
    for (int j = 0; j < Z.size(); ++j) CHECK(A(i, j) == doctest::Approx(std::exp(-double((i - j) * (i - j)))).epsilon(1e-14));
  auto S = assemble(sinc_kernel(), Z).A;
  CHECK((S - Eigen::MatrixXd::Identity(Z.size(), Z.size())).cwiseAbs().maxCoeff() < 1e-14);
  for (const Kernel& k : {poisson(2.0), triangle_spectrum(), convolve(gaussian(0.5), triangle_spectrum())}) {
    auto M = assemble(k, NodeSet::kadec_alternating(6, 0.2)).A;
    CHECK((M - M.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("collocation rejects repeated nodes") {
  auto kind = ErrorKind::numeric;
  try {
    assemble(gaussian(1.0), NodeSet(std::vector<double>{0.0, 0.0, 1.0}));
  } catch (const Error& e) {
    kind = e.kind();
  }
  CHECK(kind == ErrorKind::usage);
}

TEST_CASE("solving") {
  auto Z = NodeSet::lattice(5);
  auto rhs = oracle::normal_vector(Z.size(), 1);
  auto g = solve(assemble(sinc_kernel(), Z), rhs);
  for (int i = 0; i < Z.size(); ++i) CHECK(g.a[i] == doctest::Approx(rhs[i]).epsilon(1e-14));

  auto X = NodeSet::kadec_alternating(5, 0.2);
  std::vector<double> col(X.size());
  for (int i = 0; i < X.size(); ++i) col[i] = poisson(1.0).space(X[i] - X.at(0));
  auto u = solve(assemble(poisson(1.0), X), col);
  for (int i = 0; i < X.size(); ++i) CHECK(std::fabs(u.a[i] - (i == 5 ? 1.0 : 0.0)) < 1e-12);

  auto X24 = NodeSet::lattice(24);
  CollocationSolver solver(assemble(gaussian(1.0), X24));
  CHECK(solver.route() == "cholesky");
  for (unsigned seed = 1; seed <= 5; ++seed) {
    auto r = oracle::normal_vector(X24.size(), seed);
    auto s = solve(solver, r);
    Eigen::Map<Eigen::VectorXd> a(s.a.data(), s.a.size()), b(r.data(), r.size());
    CHECK((solver.system().A * a - b).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(s.residual < 1e-10);
  }
  // kappa from an independent inverse
  Eigen::MatrixXd inv = solver.system().A.inverse();
  const double k1 = solver.system().A.cwiseAbs().colwise().sum().maxCoeff() * inv.cwiseAbs().colwise().sum().maxCoeff();
  CHECK(solver.kappa() == doctest::Approx(k1).epsilon(1e-8));
}

TEST_CASE("singular systems are reported") {
  auto kind = ErrorKind::usage;
  try {
    CollocationSolver s(assemble(gaussian(16.0), NodeSet::lattice(24)));
  } catch (const Error& e) {
    kind = e.kind();
  }
  CHECK(kind == ErrorKind::solvability);
}

TEST_CASE("interpolation in the generating space is exact") {
  for (const Kernel& psi : {gaussian(1.0), triangle_spectrum()})
    for (const NodeSet& X : {NodeSet::lattice(24), NodeSet::kadec_alternating(24, 0.2)})
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto f = random_function(psi, X, seed);
        auto g = interpolate(f, psi, X);
        double d = 0.0;
        for (int j = 0; j < X.size(); ++j) d += std::pow(g.a[j] - f.coefficients()[j], 2);
        CHECK(std::sqrt(d) <= g.kappa * 1e-12 * oracle::norm2(f.coefficients()));
        CHECK(g.residual < 1e-10);
        auto rep = residual_report(f, g, LineGrid(40.0, 1.0 / 32), 0.5);
        CHECK(rep.l2_rel < 1e-8);
        CHECK(rep.sup_rel < 1e-8);
      }
}

TEST_CASE("interpolation with a different kernel matches the data") {
  auto Z = NodeSet::lattice(12);
  auto f = random_function(sinc_kernel(), Z, 3);
  // exp(-4 x^2)
  auto g = interpolate(f, gaussian(0.5), Z);
  auto at = g.eval(Z.nodes());
  auto s = sample(f, Z);
  for (int j = 0; j < Z.size(); ++j) CHECK(std::fabs(at[j] - s[j]) < 1e-10);
}

TEST_CASE("residual report windows and zero functions") {
  auto Z = NodeSet::lattice(8);
  QsisFunction zero(gaussian(1.0), Z, std::vector<double>(Z.size(), 0.0));
  auto g = interpolate(zero, gaussian(1.0), Z);
  auto r = residual_report(zero, g, LineGrid(16.0, 0.25), 0.5);
  CHECK(r.l2 == 0.0);
  CHECK(r.sup == 0.0);
  CHECK(r.window == doctest::Approx(4.0));
  CHECK(r.points == 33);
  CHECK_THROWS_AS(residual_report(zero, g, LineGrid(16.0, 0.25), 1.5), Error);
}

TEST_CASE("coefficient bound on unit-scale kernels") {
  for (const Kernel& phi : {gaussian(1.0), triangle_spectrum(), poisson(2.0)}) {
    auto X = NodeSet::kadec_alternating(10, 0.2);
    auto Y = NodeSet::sqrt2_swap(10);
    auto reg = regularity_report(phi, spectrum_cells(phi, 256));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto f = random_function(triangle_spectrum(), X, seed);
      auto data = sample(f, Y);
      auto g = solve(assemble(phi, Y), data);
      auto b = coefficient_bound(g, data, reg, riesz_estimate(X), riesz_estimate(Y));
      CHECK(b.holds);
      CHECK(b.holds_direct);
      CHECK(b.lhs == doctest::Approx(oracle::norm2(g.a)));
    }
  }
}
