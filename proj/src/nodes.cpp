#include "qsis/nodes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsis/error.hpp"

namespace qsis {

NodeSet::NodeSet(std::vector<double> nodes, std::string spec) : x_(std::move(nodes)), spec_(std::move(spec)) {
  if (x_.empty() || x_.size() % 2 == 0)
    throw Error(ErrorKind::usage, "node window needs an odd number of nodes (indices -J..J)",
                static_cast<double>(x_.size()));
  J_ = static_cast<int>(x_.size() / 2);
  q_ = std::numeric_limits<double>::infinity();
  Q_ = 0.0;
  for (size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i])) throw Error(ErrorKind::usage, "node is not finite");
    if (i == 0) continue;
    double gap = x_[i] - x_[i - 1];
    if (!(gap > 0.0))
      throw Error(ErrorKind::usage, "nodes must be distinct and strictly increasing", x_[i]);
    q_ = std::min(q_, gap);
    Q_ = std::max(Q_, gap);
  }
  if (x_.size() == 1) q_ = Q_ = 0.0;
}

NodeSet NodeSet::lattice(int J) {
  if (J < 0) throw Error(ErrorKind::usage, "window half-size must be >= 0", J);
  std::vector<double> x(2 * J + 1);
  for (int j = -J; j <= J; ++j) x[j + J] = j;
  return NodeSet(std::move(x), "lattice");
}

NodeSet NodeSet::kadec_alternating(int J, double eps) {
  if (J < 0) throw Error(ErrorKind::usage, "window half-size must be >= 0", J);
  if (!(std::fabs(eps) < 0.5))
    throw Error(ErrorKind::range, "alternating perturbation must satisfy |eps| < 1/2", eps);
  std::vector<double> x(2 * J + 1);
  for (int j = -J; j <= J; ++j) x[j + J] = j + ((j % 2 == 0) ? eps : -eps);
  std::ostringstream s;
  s << "kadec-alternating:" << eps;
  return NodeSet(std::move(x), s.str());
}

NodeSet NodeSet::sqrt2_swap(int J) {
  if (J < 2) throw Error(ErrorKind::usage, "sqrt2-swap needs J >= 2", J);
  std::vector<double> x(2 * J + 1);
  for (int j = -J; j <= J; ++j) x[j + J] = j;
  x[1 + J] = std::sqrt(2.0);
  return NodeSet(std::move(x), "sqrt2-swap");
}

NodeSet NodeSet::half_shift(int J) {
  if (J < 0) throw Error(ErrorKind::usage, "window half-size must be >= 0", J);
  std::vector<double> x(2 * J + 1);
  for (int j = -J; j <= J; ++j) x[j + J] = j + 0.5;
  return NodeSet(std::move(x), "half-shift");
}

nlohmann::json NodeSet::to_json() const {
  return nlohmann::json{{"spec", spec_}, {"J", J_}, {"nodes", x_}};
}

NodeSet parse_nodes(const std::string& spec_in, int J) {
  std::string spec = spec_in;
  spec.erase(0, spec.find_first_not_of(" \t"));
  spec.erase(spec.find_last_not_of(" \t") + 1);
  if (spec == "lattice" || spec == "Z") return NodeSet::lattice(J);
  if (spec == "sqrt2-swap") return NodeSet::sqrt2_swap(J);
  if (spec == "half-shift") return NodeSet::half_shift(J);
  const std::string kad = "kadec-alternating";
  if (spec.rfind(kad, 0) == 0) {
    double eps = 0.2;
    if (spec.size() > kad.size()) {
      if (spec[kad.size()] != ':') throw Error(ErrorKind::usage, "bad node spec '" + spec + "'");
      try {
        size_t used = 0;
        eps = std::stod(spec.substr(kad.size() + 1), &used);
        if (used != spec.size() - kad.size() - 1) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw Error(ErrorKind::usage, "bad perturbation in node spec '" + spec + "'");
      }
    }
    return NodeSet::kadec_alternating(J, eps);
  }
  // explicit list, with or without brackets
  std::string body = spec;
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']') throw Error(ErrorKind::usage, "unterminated node list");
    body = body.substr(1, body.size() - 2);
  }
  std::vector<double> x;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      double v = std::stod(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("x");
      x.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::usage, "unknown node spec '" + spec + "'");
    }
  }
  return NodeSet(std::move(x), "explicit");
}

KadecResult kadec_check(const NodeSet& nodes) {
  KadecResult r;
  for (int j = -nodes.J(); j <= nodes.J(); ++j)
    r.deviation = std::max(r.deviation, std::fabs(nodes.at(j) - j));
  r.guaranteed = r.deviation < 0.25;
  return r;
}

Eigen::MatrixXd gram_exponentials(const NodeSet& nodes) {
  const int n = nodes.size();
  Eigen::MatrixXd G(n, n);
  for (int a = 0; a < n; ++a) {
    G(a, a) = kTwoPi;
    for (int b = a + 1; b < n; ++b) {
      double d = nodes[a] - nodes[b];
      double v = 2.0 * sin_pi(d) / d;
      G(a, b) = G(b, a) = v;
    }
  }
  return G;
}

RieszEstimate riesz_estimate(const NodeSet& nodes) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_exponentials(nodes), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::numeric, "Gram eigensolve failed");
  RieszEstimate r;
  r.lambda_min = es.eigenvalues().minCoeff();
  r.lambda_max = es.eigenvalues().maxCoeff();
  if (!(r.lambda_min > 0.0)) throw Error(ErrorKind::numeric, "Gram section is not positive definite", r.lambda_min);
  const double s2pi = std::sqrt(kTwoPi);
  r.C = std::max({1.0, std::sqrt(r.lambda_max) / s2pi, s2pi / std::sqrt(r.lambda_min)});
  r.C_basis = std::max({1.0, std::sqrt(r.lambda_max), 1.0 / std::sqrt(r.lambda_min)});
  auto k = kadec_check(nodes);
  r.kadec_deviation = k.deviation;
  r.kadec_pass = k.guaranteed;
  return r;
}

nlohmann::json to_json(const RieszEstimate& r) {
  return nlohmann::json{{"lambda_min", r.lambda_min},     {"lambda_max", r.lambda_max},
                        {"C", r.C},                       {"C_basis", r.C_basis},
                        {"kadec-deviation", r.kadec_deviation}, {"kadec-pass", r.kadec_pass}};
}

ExponentialBasis::ExponentialBasis(const NodeSet& nodes, const TorusGrid& grid)
    : nodes_(nodes), grid_(grid), G_(gram_exponentials(nodes)) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G_, Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues().minCoeff(), lmax = es.eigenvalues().maxCoeff();
  cond_ = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (!(cond_ <= 1e12))
    throw Error(ErrorKind::conditioning, "Gram section of the exponentials is ill-conditioned", cond_);
  llt_.compute(G_);
  if (llt_.info() != Eigen::Success) throw Error(ErrorKind::conditioning, "Gram factorization failed", cond_);
  const int n = nodes.size(), P = grid.size();
  E_.resize(n, P);
  for (int a = 0; a < n; ++a)
    for (int m = 0; m < P; ++m) E_(a, m) = std::polar(1.0, -nodes[a] * grid.node(m));
}

CVec ExponentialBasis::prolong(const CVec& c, int k) const {
  if (static_cast<int>(c.size()) != size()) throw Error(ErrorKind::usage, "coefficient window mismatch");
  Eigen::VectorXcd ck(size());
  for (int a = 0; a < size(); ++a) ck(a) = c[a] * std::polar(1.0, -kTwoPi * k * nodes_[a]);
  Eigen::VectorXcd v = E_.transpose() * ck;
  return CVec(v.data(), v.data() + v.size());
}

CVec ExponentialBasis::moments(const CVec& values) const {
  if (static_cast<int>(values.size()) != grid_.size()) throw Error(ErrorKind::usage, "torus value count mismatch");
  Eigen::VectorXcd wv(grid_.size());
  for (int m = 0; m < grid_.size(); ++m) wv(m) = grid_.weights()[m] * values[m];
  // integral of values * conj(e^{-i x_j xi})
  Eigen::VectorXcd mo = E_.conjugate() * wv;
  return CVec(mo.data(), mo.data() + mo.size());
}

CVec ExponentialBasis::solve_gram(const CVec& m) const {
  Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
  Eigen::VectorXd re = llt_.solve(Eigen::VectorXd(rhs.real()));
  Eigen::VectorXd im = llt_.solve(Eigen::VectorXd(rhs.imag()));
  CVec out(m.size());
  for (size_t a = 0; a < m.size(); ++a) out[a] = cplx(re(a), im(a));
  return out;
}

Eigen::MatrixXcd ExponentialBasis::solve_gram(const Eigen::MatrixXcd& m) const {
  Eigen::MatrixXd re = llt_.solve(Eigen::MatrixXd(m.real()));
  Eigen::MatrixXd im = llt_.solve(Eigen::MatrixXd(m.imag()));
  Eigen::MatrixXcd out(m.rows(), m.cols());
  out.real() = re;
  out.imag() = im;
  return out;
}

CVec ExponentialBasis::adjoint_prolong_coeffs(const CVec& values, int k) const {
  CVec m = moments(values);
  // <u, A^k e_j> = e^{2 pi i k x_j} m_j
  for (int a = 0; a < size(); ++a) m[a] *= std::polar(1.0, kTwoPi * k * nodes_[a]);
  return solve_gram(m);
}

CVec exponential_expand(const CVec& values, const NodeSet& nodes, const TorusGrid& grid) {
  return ExponentialBasis(nodes, grid).expand(values);
}

CVec prolong(const CVec& c, const NodeSet& nodes, int k, const TorusGrid& grid) {
  return ExponentialBasis(nodes, grid).prolong(c, k);
}

CVec adjoint_prolong(const CVec& values, const NodeSet& nodes, int k, const TorusGrid& grid) {
  ExponentialBasis b(nodes, grid);
  return b.prolong(b.adjoint_prolong_coeffs(values, k), 0);
}

namespace {

Eigen::MatrixXd sym_power(const Eigen::MatrixXd& G, double p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  Eigen::VectorXd d = es.eigenvalues().array().pow(p);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double window_operator_norm(const Eigen::MatrixXcd& T, const Eigen::MatrixXd& gram_in,
                            const Eigen::MatrixXd& gram_out) {
  Eigen::MatrixXcd A = sym_power(gram_out, 0.5).cast<cplx>() * T * sym_power(gram_in, -0.5).cast<cplx>();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues()(0);
}

}  // namespace qsis
