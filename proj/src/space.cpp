#include "qsis/space.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qsis/error.hpp"

namespace qsis {

QsisFunction::QsisFunction(Kernel psi, NodeSet nodes, std::vector<double> coeffs)
    : psi_(std::move(psi)), nodes_(std::move(nodes)), c_(std::move(coeffs)) {
  if (!psi_.valid()) throw Error(ErrorKind::usage, "function needs a kernel");
  if (static_cast<int>(c_.size()) != nodes_.size())
    throw Error(ErrorKind::usage, "coefficient window does not match the node window",
                static_cast<double>(c_.size()));
}

double QsisFunction::coeff_norm() const {
  double s = 0.0;
  for (double c : c_) s += c * c;
  return std::sqrt(s);
}

double QsisFunction::eval(double x) const { return eval(std::vector<double>{x})[0]; }

std::vector<double> QsisFunction::eval(const std::vector<double>& xs) const {
  return psi_.synthesize(nodes_.nodes(), c_, xs);
}

CVec QsisFunction::spectrum_cell(const ExponentialBasis& basis, int k) const {
  CVec c(c_.begin(), c_.end());
  CVec v = basis.prolong(c, k);
  const auto& g = basis.grid();
  const double shift = kTwoPi * k;
  for (int m = 0; m < g.size(); ++m) {
    // closing node takes the inner limit, as in sample_cell
    double xi = m < g.M() ? g.node(m) + shift : -(kPi + shift);
    double s = psi_.fourier(xi);
    v[m] *= s;
  }
  return v;
}

nlohmann::json QsisFunction::to_json() const {
  return nlohmann::json{{"kernel", psi_.to_json()}, {"nodes", nodes_.to_json()}, {"coefficients", c_}};
}

std::vector<double> random_unit_coefficients(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> c(n);
  double s = 0.0;
  for (auto& v : c) {
    v = nd(rng);
    s += v * v;
  }
  s = std::sqrt(s);
  if (s > 0.0)
    for (auto& v : c) v /= s;
  return c;
}

QsisFunction random_function(const Kernel& psi, const NodeSet& nodes, std::uint64_t seed) {
  return QsisFunction(psi, nodes, random_unit_coefficients(nodes.size(), seed));
}

std::vector<double> sample(const QsisFunction& f, const NodeSet& at) { return f.eval(at.nodes()); }

LineGrid default_line_grid(const Kernel& psi) {
  return LineGrid(psi.space_tail_energy(24.0) < 1e-12 ? 48.0 : 256.0, 1.0 / 64.0);
}

int spectrum_cells(const Kernel& psi, int cap) {
  if (auto N = psi.cells()) return std::max(1, *N);
  return psi.auto_cells(1e-12, cap);
}

double l2_norm(const QsisFunction& f, const LineGrid& grid, double rel_tol) {
  const auto& x = f.nodes().nodes();
  const auto& c = f.coefficients();
  double reach = 0.0, l1 = 0.0;
  for (size_t j = 0; j < x.size(); ++j) {
    reach = std::max(reach, std::fabs(x[j]));
    l1 += std::fabs(c[j]);
  }
  if (l1 == 0.0) return 0.0;
  const double X = grid.X();
  if (!(X > reach)) throw Error(ErrorKind::accuracy, "line grid does not cover the node window", X);

  double e2 = l2_norm_line(f.eval(grid.nodes()), grid);
  e2 *= e2;

  double remainder;
  if (f.kernel().family() == Family::sinc) {
    // f(x) ~ Im(e^{i pi x} S)/(pi x) far out, S = sum_j c_j e^{-i pi x_j}
    cplx S = 0.0, S1 = 0.0, S2 = 0.0;
    for (size_t j = 0; j < x.size(); ++j) {
      cplx e = std::polar(c[j], -kPi * x[j]);
      S += e;
      S1 += x[j] * e;
      S2 += x[j] * x[j] * e;
    }
    const double a = std::abs(S);
    e2 += a * a / (kPi * kPi * X);
    remainder = a * a / (2.0 * kPi * kPi * kPi * X * X) +
                (std::norm(S1) + 2.0 * a * std::abs(S2)) / (3.0 * kPi * kPi * X * X * X);
  } else {
    remainder = l1 * l1 * 2.0 * f.kernel().space_tail_energy(X - reach);
  }
  if (!(remainder <= rel_tol * e2))
    throw Error(ErrorKind::accuracy, "line grid too narrow for the kernel's spatial decay", remainder / e2);
  return std::sqrt(e2);
}

SpaceConstants space_constants(const Kernel& psi, const NodeSet& nodes) {
  return SpaceConstants{regularity_report(psi, spectrum_cells(psi, 256)), riesz_estimate(nodes)};
}

NormEquivalence norm_equivalence_report(const QsisFunction& f, const LineGrid& grid, const SpaceConstants& k) {
  NormEquivalence r;
  r.f_norm = l2_norm(f, grid);
  r.c_norm = f.coeff_norm();
  auto s = sample(f, f.nodes());
  double ss = 0.0;
  for (double v : s) ss += v * v;
  r.s_norm = std::sqrt(ss);
  r.f_over_c = r.f_norm / r.c_norm;
  r.s_over_c = r.s_norm / r.c_norm;
  r.f_over_s = r.f_norm / r.s_norm;
  const double C2 = k.riesz.C_basis * k.riesz.C_basis;
  r.lower = k.regularity.delta / C2;
  r.upper = C2 * k.regularity.amalgam_full;
  r.within = r.lower <= r.f_over_c && r.f_over_c <= r.upper;
  return r;
}

NormEquivalence norm_equivalence_report(const QsisFunction& f) {
  return norm_equivalence_report(f, default_line_grid(f.kernel()), space_constants(f.kernel(), f.nodes()));
}

nlohmann::json to_json(const NormEquivalence& r) {
  return nlohmann::json{{"f-norm", r.f_norm},     {"c-norm", r.c_norm},     {"sample-norm", r.s_norm},
                        {"f-over-c", r.f_over_c}, {"s-over-c", r.s_over_c}, {"f-over-s", r.f_over_s},
                        {"lower", r.lower},       {"upper", r.upper},       {"within", r.within}};
}

BandlimitCheck bandlimit_check(const QsisFunction& f, const SpaceConstants& k, int K, const TorusGrid& grid) {
  if (K < 0) K = spectrum_cells(f.kernel(), 512);
  BandlimitCheck r;
  r.cells = K;
  r.cell_energies.assign(2 * K + 1, 0.0);
  ExponentialBasis basis(f.nodes(), grid);
  for (int c = -K; c <= K; ++c) {
    // skip cells outside a compact support
    if (auto A = f.kernel().support_half_width(); A && c != 0 && (2.0 * std::abs(c) - 1.0) * kPi >= *A)
      continue;
    double n = l2_norm_torus(f.spectrum_cell(basis, c), grid);
    r.cell_energies[c + K] = n * n;
  }
  r.energy_torus = r.cell_energies[K];
  for (int c = K; c >= 1; --c) r.energy_total += r.cell_energies[K + c] + r.cell_energies[K - c];
  const double outside = r.energy_total;
  r.energy_total += r.energy_torus;
  r.tail_fraction = r.energy_total > 0.0 ? outside / r.energy_total : 0.0;
  const double C = k.riesz.C_basis;
  r.sandwich_upper = (1.0 + std::pow(C, 4) * k.regularity.C * k.regularity.C) * r.energy_torus;
  r.sandwich_holds = r.energy_torus <= r.energy_total * (1.0 + 1e-12) &&
                     r.energy_total <= r.sandwich_upper * (1.0 + 1e-12);
  return r;
}

nlohmann::json to_json(const BandlimitCheck& r) {
  return nlohmann::json{{"cells", r.cells},
                        {"energy-torus", r.energy_torus},
                        {"energy-total", r.energy_total},
                        {"tail-fraction", r.tail_fraction},
                        {"sandwich-upper", r.sandwich_upper},
                        {"sandwich-holds", r.sandwich_holds},
                        {"cell-energies", r.cell_energies}};
}

SampleBound sample_bound_check(const QsisFunction& f, const NodeSet& Y, double f_norm, const SpaceConstants& kx,
                               const RieszEstimate& ry) {
  SampleBound r;
  double ss = 0.0;
  for (double v : sample(f, Y)) ss += v * v;
  r.lhs = std::sqrt(ss);
  const double cx = kx.riesz.C_basis, cy = ry.C_basis;
  const auto& reg = kx.regularity;
  r.rhs_f = kInvSqrt2Pi * cx * cx * std::pow(cy, 3) * (reg.linf_torus / reg.delta + reg.C) * f_norm;
  r.rhs_c = kInvSqrt2Pi * std::pow(cx, 3) * std::pow(cy, 3) * reg.amalgam_full * f.coeff_norm();
  r.holds = r.lhs <= r.rhs_f && r.lhs <= r.rhs_c;
  return r;
}

std::vector<double> fourier_side_samples(const QsisFunction& f, const NodeSet& Y, int K, const TorusGrid& grid) {
  if (K < 0) K = spectrum_cells(f.kernel(), 512);
  ExponentialBasis bx(f.nodes(), grid);
  // e^{i y_j xi_m} on the closed grid
  Eigen::MatrixXcd EY(Y.size(), grid.size());
  for (int j = 0; j < Y.size(); ++j)
    for (int m = 0; m < grid.size(); ++m) EY(j, m) = std::polar(1.0, Y[j] * grid.node(m));
  if (grid.M() > 0)
    for (int j = 0; j < Y.size(); ++j) EY(j, grid.M()) = std::polar(1.0, Y[j] * kPi);
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(Y.size());
  const auto& w = grid.weights();
  for (int k = -K; k <= K; ++k) {
    if (auto A = f.kernel().support_half_width(); A && k != 0 && (2.0 * std::abs(k) - 1.0) * kPi >= *A)
      continue;
    CVec cell = f.spectrum_cell(bx, k);
    Eigen::VectorXcd u(grid.size());
    for (int m = 0; m < grid.size(); ++m) u(m) = w[m] * cell[m];
    Eigen::VectorXcd part = EY * u;
    for (int j = 0; j < Y.size(); ++j) acc(j) += part(j) * std::polar(1.0, kTwoPi * k * Y[j]);
  }
  std::vector<double> out(Y.size());
  double scale = 0.0;
  for (int j = 0; j < Y.size(); ++j) scale = std::max(scale, std::abs(acc(j)));
  for (int j = 0; j < Y.size(); ++j) {
    if (std::fabs(acc(j).imag()) > 1e-8 * std::max(1.0, scale))
      throw Error(ErrorKind::numeric, "Fourier-side sample has a large imaginary part", acc(j).imag());
    out[j] = kInvSqrt2Pi * acc(j).real();
  }
  return out;
}

}  // namespace qsis
