#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsis/fourier.hpp"
#include "qsis/json_fwd.hpp"

namespace qsis {

// Finite window x_{-J} < ... < x_J standing in for a complete interpolating
// sequence. Position p in [0, 2J] holds index j = p - J.
class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(std::vector<double> nodes, std::string spec = "explicit");

  static NodeSet lattice(int J);
  static NodeSet kadec_alternating(int J, double eps);
  static NodeSet sqrt2_swap(int J);
  static NodeSet half_shift(int J);

  int J() const { return J_; }
  int size() const { return static_cast<int>(x_.size()); }
  double operator[](int p) const { return x_[p]; }
  double at(int j) const { return x_.at(j + J_); }
  const std::vector<double>& nodes() const { return x_; }
  double separation() const { return q_; }
  double spread() const { return Q_; }
  const std::string& spec() const { return spec_; }
  nlohmann::json to_json() const;

 private:
  std::vector<double> x_;
  int J_ = 0;
  double q_ = 0.0;
  double Q_ = 0.0;
  std::string spec_;
};

// "lattice" | "kadec-alternating:0.2" | "sqrt2-swap" | "half-shift" |
// explicit list "[x1, x2, ...]" (odd count, strictly increasing).
NodeSet parse_nodes(const std::string& spec, int J);

struct KadecResult {
  double deviation = 0.0;
  bool guaranteed = false;  // deviation < 1/4
};
KadecResult kadec_check(const NodeSet& nodes);

// G[j,k] = 2 sin(pi (x_j - x_k)) / (x_j - x_k), G[j,j] = 2 pi.
Eigen::MatrixXd gram_exponentials(const NodeSet& nodes);

struct RieszEstimate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  // max(sqrt(lmax)/sqrt(2pi), sqrt(2pi)/sqrt(lmin)); equals 1 on Z
  double C = 1.0;
  // basis constant in unnormalized form, max(1, sqrt(lmax), 1/sqrt(lmin))
  double C_basis = 1.0;
  double kadec_deviation = 0.0;
  bool kadec_pass = false;
};
RieszEstimate riesz_estimate(const NodeSet& nodes);
nlohmann::json to_json(const RieszEstimate& r);

// The exponentials e^{-i x_j xi} sampled on a torus grid, with the Gram
// factorization cached. All expansion and prolongation operations live here.
class ExponentialBasis {
 public:
  ExponentialBasis(const NodeSet& nodes, const TorusGrid& grid);

  const NodeSet& nodes() const { return nodes_; }
  const TorusGrid& grid() const { return grid_; }
  int size() const { return nodes_.size(); }
  const Eigen::MatrixXd& gram() const { return G_; }
  double gram_condition() const { return cond_; }

  // sum_j c_j e^{-i x_j (xi + 2 pi k)}
  CVec prolong(const CVec& c, int k = 0) const;
  // m_j = <values, e^{-i x_j .}> by torus quadrature
  CVec moments(const CVec& values) const;
  // solve G b = m
  CVec solve_gram(const CVec& m) const;
  CVec expand(const CVec& values) const { return solve_gram(moments(values)); }
  Eigen::MatrixXcd solve_gram(const Eigen::MatrixXcd& m) const;
  // E(j, m) = e^{-i x_j xi_m}
  const Eigen::MatrixXcd& samples() const { return E_; }
  // coefficients of A^{*k} u in the window basis
  CVec adjoint_prolong_coeffs(const CVec& values, int k) const;

 private:
  NodeSet nodes_;
  TorusGrid grid_;
  Eigen::MatrixXd G_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::MatrixXcd E_;  // E(j, m) = e^{-i x_j xi_m}
  double cond_ = 1.0;
};

CVec exponential_expand(const CVec& values, const NodeSet& nodes, const TorusGrid& grid);
CVec prolong(const CVec& c, const NodeSet& nodes, int k, const TorusGrid& grid);
CVec adjoint_prolong(const CVec& values, const NodeSet& nodes, int k, const TorusGrid& grid);

// 2-norm of the window operator with coefficient matrix T (output coefficients
// = T * input coefficients) between the L2(T) spans of two bases.
double window_operator_norm(const Eigen::MatrixXcd& T, const Eigen::MatrixXd& gram_in,
                            const Eigen::MatrixXd& gram_out);

}  // namespace qsis
