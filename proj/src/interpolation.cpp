#include "qsis/interpolation.hpp"

#include <algorithm>
#include <cmath>

#include "qsis/error.hpp"

namespace qsis {

CollocationSystem assemble(const Kernel& phi, const NodeSet& Y) {
  const int n = Y.size();
  for (int i = 1; i < n; ++i)
    if (!(Y[i] > Y[i - 1])) throw Error(ErrorKind::usage, "collocation nodes must be distinct", Y[i]);
  std::vector<double> diffs;
  diffs.reserve(static_cast<size_t>(n) * (n + 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) diffs.push_back(Y[i] - Y[j]);
  auto v = phi.synthesize({0.0}, {1.0}, diffs);
  CollocationSystem s{phi, Y, Eigen::MatrixXd(n, n)};
  size_t p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) s.A(i, j) = s.A(j, i) = v[p++];
  return s;
}

CollocationSolver::CollocationSolver(const CollocationSystem& system) : sys_(system) {
  const auto& A = sys_.A;
  llt_.compute(A);
  Eigen::MatrixXd inv;
  if (llt_.info() == Eigen::Success) {
    route_ = "cholesky";
    inv = llt_.solve(Eigen::MatrixXd::Identity(A.rows(), A.cols()));
  } else {
    use_llt_ = false;
    route_ = "pivoted-lu";
    lu_.compute(A);
    inv = lu_.inverse();
  }
  const double na = A.cwiseAbs().colwise().sum().maxCoeff();
  const double ni = inv.cwiseAbs().colwise().sum().maxCoeff();
  kappa_ = na * ni;
  if (!std::isfinite(kappa_) || kappa_ > 1e16)
    throw Error(ErrorKind::solvability, "collocation matrix is singular to working precision",
                std::isfinite(kappa_) ? kappa_ : std::numeric_limits<double>::infinity());
}

std::vector<double> CollocationSolver::solve(const std::vector<double>& rhs) const {
  if (static_cast<int>(rhs.size()) != sys_.Y.size())
    throw Error(ErrorKind::usage, "right-hand side does not match the node window", rhs.size());
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), rhs.size());
  Eigen::VectorXd a = use_llt_ ? Eigen::VectorXd(llt_.solve(b)) : Eigen::VectorXd(lu_.solve(b));
  return std::vector<double>(a.data(), a.data() + a.size());
}

double Interpolant::eval(double x) const { return eval(std::vector<double>{x})[0]; }

std::vector<double> Interpolant::eval(const std::vector<double>& xs) const {
  return phi.synthesize(Y.nodes(), a, xs);
}

double Interpolant::coeff_norm() const {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

nlohmann::json Interpolant::to_json() const {
  return nlohmann::json{{"kernel", phi.to_json()}, {"nodes", Y.to_json()},   {"coefficients", a},
                        {"kappa", kappa},          {"residual", residual}, {"route", route}};
}

Interpolant solve(const CollocationSolver& solver, const std::vector<double>& rhs) {
  Interpolant g;
  g.phi = solver.system().phi;
  g.Y = solver.system().Y;
  g.a = solver.solve(rhs);
  g.kappa = solver.kappa();
  g.route = solver.route();
  Eigen::Map<const Eigen::VectorXd> a(g.a.data(), g.a.size());
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), rhs.size());
  g.residual = (solver.system().A * a - b).cwiseAbs().maxCoeff();
  g.rhs_scale = b.cwiseAbs().maxCoeff();
  return g;
}

Interpolant solve(const CollocationSystem& system, const std::vector<double>& rhs) {
  return solve(CollocationSolver(system), rhs);
}

Interpolant interpolate(const QsisFunction& f, const Kernel& phi, const NodeSet& Y) {
  return solve(assemble(phi, Y), sample(f, Y));
}

ResidualReport residual_report(const QsisFunction& f, const Evaluator& g, double node_reach, const LineGrid& grid,
                               double central_fraction) {
  if (!(central_fraction > 0.0 && central_fraction <= 1.0))
    throw Error(ErrorKind::range, "central fraction must lie in (0, 1]", central_fraction);
  ResidualReport r;
  r.window = central_fraction * node_reach;
  for (int i = 0; i < grid.size(); ++i) {
    double x = grid.node(i);
    if (std::fabs(x) <= r.window + 1e-12 * std::max(1.0, r.window)) r.x.push_back(x);
  }
  r.points = static_cast<int>(r.x.size());
  if (r.x.empty()) return r;
  r.f = f.eval(r.x);
  r.g = g(r.x);
  double e2 = 0.0, f2 = 0.0;
  for (int i = 0; i < r.points; ++i) {
    double w = (i == 0 || i + 1 == r.points) ? 0.5 : 1.0;
    double d = r.f[i] - r.g[i];
    e2 += w * d * d;
    f2 += w * r.f[i] * r.f[i];
    r.sup = std::max(r.sup, std::fabs(d));
    r.f_sup = std::max(r.f_sup, std::fabs(r.f[i]));
  }
  if (r.points == 1) e2 = f2 = 0.0;
  r.l2 = std::sqrt(grid.h() * e2);
  r.f_l2 = std::sqrt(grid.h() * f2);
  r.l2_rel = r.f_l2 > 0.0 ? r.l2 / r.f_l2 : 0.0;
  r.sup_rel = r.f_sup > 0.0 ? r.sup / r.f_sup : 0.0;
  return r;
}

ResidualReport residual_report(const QsisFunction& f, const Interpolant& g, const LineGrid& grid,
                               double central_fraction) {
  double reach = 0.0;
  for (double y : g.Y.nodes()) reach = std::max(reach, std::fabs(y));
  return residual_report(f, [&g](const std::vector<double>& xs) { return g.eval(xs); }, reach, grid,
                         central_fraction);
}

nlohmann::json to_json(const ResidualReport& r) {
  return nlohmann::json{{"window", r.window}, {"points", r.points},   {"l2", r.l2},
                        {"sup", r.sup},       {"l2-rel", r.l2_rel},   {"sup-rel", r.sup_rel},
                        {"f-l2", r.f_l2},     {"f-sup", r.f_sup}};
}

CoefficientBound coefficient_bound(const Interpolant& g, const std::vector<double>& samples,
                                   const RegularityReport& phi, const RieszEstimate& rx, const RieszEstimate& ry) {
  CoefficientBound r;
  r.lhs = g.coeff_norm();
  double s = 0.0;
  for (double v : samples) s += v * v;
  r.samples = std::sqrt(s);
  const double C = std::max(rx.C_basis, ry.C_basis);
  r.rhs = std::pow(C, 4) * (phi.linf_torus / phi.delta + C * C * phi.C) * r.samples;
  r.rhs_direct = std::sqrt(kTwoPi) / (phi.delta * ry.lambda_min) * r.samples;
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-12);
  r.holds_direct = r.lhs <= r.rhs_direct * (1.0 + 1e-12);
  return r;
}

nlohmann::json to_json(const CoefficientBound& r) {
  return nlohmann::json{{"coeff-norm", r.lhs},       {"sample-norm", r.samples}, {"bound", r.rhs},
                        {"bound-direct", r.rhs_direct}, {"holds", r.holds},     {"holds-direct", r.holds_direct}};
}

}  // namespace qsis
