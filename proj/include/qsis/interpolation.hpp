#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsis/space.hpp"

namespace qsis {

// A[j,k] = phi(y_j - y_k).
struct CollocationSystem {
  Kernel phi;
  NodeSet Y;
  Eigen::MatrixXd A;
};
CollocationSystem assemble(const Kernel& phi, const NodeSet& Y);

// Factorization of a collocation matrix: Cholesky, falling back to pivoted LU.
// Solvability error when the matrix is singular to working precision.
class CollocationSolver {
 public:
  explicit CollocationSolver(const CollocationSystem& system);

  std::vector<double> solve(const std::vector<double>& rhs) const;
  // exact 1-norm condition number from the explicit inverse
  double kappa() const { return kappa_; }
  const std::string& route() const { return route_; }
  const CollocationSystem& system() const { return sys_; }

 private:
  CollocationSystem sys_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  bool use_llt_ = true;
  double kappa_ = 1.0;
  std::string route_;
};

struct Interpolant {
  Kernel phi;
  NodeSet Y;
  std::vector<double> a;
  double kappa = 1.0;
  double residual = 0.0;   // max_j |(A a)_j - rhs_j|
  double rhs_scale = 0.0;  // max_j |rhs_j|
  std::string route;

  double eval(double x) const;
  std::vector<double> eval(const std::vector<double>& xs) const;
  double coeff_norm() const;
  QsisFunction as_function() const { return QsisFunction(phi, Y, a); }
  nlohmann::json to_json() const;
};

Interpolant solve(const CollocationSolver& solver, const std::vector<double>& rhs);
Interpolant solve(const CollocationSystem& system, const std::vector<double>& rhs);
Interpolant interpolate(const QsisFunction& f, const Kernel& phi, const NodeSet& Y);

struct ResidualReport {
  double window = 0.0;  // half-width of the central interval
  int points = 0;
  double l2 = 0.0;
  double sup = 0.0;
  double l2_rel = 0.0;
  double sup_rel = 0.0;
  double f_l2 = 0.0;
  double f_sup = 0.0;
  std::vector<double> x, f, g;
};
using Evaluator = std::function<std::vector<double>(const std::vector<double>&)>;
// Errors on |x| <= fraction * max_j |y_j|, trapezoid L2 with half weights at the ends.
ResidualReport residual_report(const QsisFunction& f, const Evaluator& g, double node_reach,
                               const LineGrid& grid, double central_fraction);
ResidualReport residual_report(const QsisFunction& f, const Interpolant& g, const LineGrid& grid,
                               double central_fraction = 0.5);
nlohmann::json to_json(const ResidualReport& r);

struct CoefficientBound {
  double lhs = 0.0;         // |a|
  double samples = 0.0;     // |(f(y_j))|
  double rhs = 0.0;         // C^4 (|phi^|_Linf(T)/delta + C^2 C_phi) |f(y)|
  double rhs_direct = 0.0;  // sqrt(2pi)/(delta lambda_min(G_Y)) |f(y)|
  bool holds = false;
  bool holds_direct = false;
};
// C = max(C_X, C_Y) in basis form.
CoefficientBound coefficient_bound(const Interpolant& g, const std::vector<double>& samples,
                                   const RegularityReport& phi, const RieszEstimate& rx,
                                   const RieszEstimate& ry);
nlohmann::json to_json(const CoefficientBound& r);

}  // namespace qsis
