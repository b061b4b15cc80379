#include "qsis/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>

#include "qsis/error.hpp"

namespace qsis {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// spectrum argument at closed-grid node m of cell k (closing node: inner limit)
double cell_arg(const TorusGrid& g, int m, int k) {
  return m < g.M() ? g.node(m) + kTwoPi * k : -(kPi + kTwoPi * k);
}

double log_grid_min(const Kernel& phi, const TorusGrid& g) {
  double lo = std::numeric_limits<double>::infinity();
  for (int m = 0; m < g.size(); ++m) lo = std::min(lo, phi.log_fourier(cell_arg(g, m, 0)));
  return lo;
}

bool lattice_nodes(const NodeSet& Y) {
  for (int j = -Y.J(); j <= Y.J(); ++j)
    if (Y.at(j) != static_cast<double>(j)) return false;
  return true;
}

int k_depth(const Kernel& phi, int requested) {
  if (requested > 0) return requested;
  if (auto N = phi.cells()) return std::max(1, *N);
  return 16;
}

// sqrt(int_T |V(:, c)|^2) for every column
Eigen::VectorXd column_norms(const Eigen::MatrixXcd& V, const TorusGrid& g) {
  Eigen::Map<const Eigen::VectorXd> w(g.weights().data(), g.size());
  Eigen::VectorXd out(V.cols());
  for (int c = 0; c < V.cols(); ++c) out(c) = std::sqrt(w.dot(V.col(c).cwiseAbs2()));
  return out;
}

// values of sum_j b_j e^{-i x_j (xi + 2 pi k)} for coefficient columns B
Eigen::MatrixXcd prolong_columns(const ExponentialBasis& basis, const Eigen::MatrixXcd& B, int k) {
  const auto& x = basis.nodes();
  Eigen::VectorXcd ph(basis.size());
  for (int j = 0; j < basis.size(); ++j) ph(j) = std::polar(1.0, -kTwoPi * k * x[j]);
  return basis.samples().transpose() * ph.asDiagonal() * B;
}

// coefficients of the window expansion of every column of H
Eigen::MatrixXcd expand_columns(const ExponentialBasis& basis, const Eigen::MatrixXcd& H) {
  Eigen::Map<const Eigen::VectorXd> w(basis.grid().weights().data(), basis.grid().size());
  Eigen::MatrixXcd m = basis.samples().conjugate() * (w.cast<cplx>().asDiagonal() * H);
  return basis.solve_gram(m);
}

bool bounded_tail(const std::vector<double>& v) {
  if (v.empty()) return false;
  for (double x : v)
    if (!std::isfinite(x)) return false;
  if (v.size() == 1) return true;
  double earlier = *std::max_element(v.begin(), v.end() - 1);
  return v.back() <= earlier * (1.0 + 1e-9) + 1e-300;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

nlohmann::json num_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace

// ---------------------------------------------------------------- families

Kernel FamilySpec::generator(double alpha) const {
  if (tag == "regular-gaussian") return gaussian(alpha);
  if (tag == "constant") return psi;
  if (tag == "multiquadric-cardinal") return multiquadric_cardinal(alpha);
  if (tag == "convolution") {
    if (base == "gaussian") return gaussian(1.0 / alpha);
    if (base == "poisson") return poisson(alpha);
    if (base == "inverse-multiquadric") return inverse_multiquadric(alpha);
    throw Error(ErrorKind::usage, "unknown convolution base '" + base + "'");
  }
  if (tag == "dilated-approx-identity") return dilated(kernel_from_json(parse_kernel_expression(base)), alpha);
  throw Error(ErrorKind::usage, "unknown family '" + tag + "'");
}

Kernel FamilySpec::interpolator(double alpha) const {
  Kernel g = generator(alpha);
  return convolves() ? convolve(g, psi) : g;
}

void FamilySpec::validate() const {
  if (!psi.valid()) throw Error(ErrorKind::usage, "family needs a target kernel");
  if (alphas.size() < 3) throw Error(ErrorKind::usage, "alpha list needs at least 3 values", alphas.size());
  for (size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0) || !std::isfinite(alphas[i]))
      throw Error(ErrorKind::range, "alpha values must be positive", alphas[i]);
    if (i > 0 && !(alphas[i] > alphas[i - 1]))
      throw Error(ErrorKind::usage, "alpha list must be strictly increasing", alphas[i]);
  }
  generator(alphas.front());
}

nlohmann::json FamilySpec::to_json() const {
  nlohmann::json j{{"tag", tag}, {"psi", psi.to_json()}, {"alphas", alphas}};
  if (!base.empty()) j["base"] = base;
  return j;
}

// ---------------------------------------------------------------- operators

SpectralOperators::SpectralOperators(const Kernel& phi, const TorusGrid& grid, double delta)
    : phi_(phi), grid_(grid) {
  const double ld = delta > 0.0 ? std::log(delta) : log_grid_min(phi, grid);
  delta_ = std::exp(ld);
  if (!(ld > -std::numeric_limits<double>::infinity()))
    throw Error(ErrorKind::degeneracy, "spectrum vanishes on the torus", 0.0);
  m_.resize(grid.size());
  for (int m = 0; m < grid.size(); ++m) m_[m] = std::min(1.0, std::exp(ld - phi.log_fourier(cell_arg(grid, m, 0))));
  log_delta_ = ld;
}

std::vector<double> SpectralOperators::T_multiplier(int k) const {
  std::vector<double> t(grid_.size());
  for (int m = 0; m < grid_.size(); ++m) {
    double l = phi_.log_fourier(cell_arg(grid_, m, k));
    t[m] = l == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(l - log_delta_);
  }
  return t;
}

CVec SpectralOperators::apply_M(const CVec& g) const {
  if (static_cast<int>(g.size()) != grid_.size()) throw Error(ErrorKind::usage, "torus value count mismatch");
  CVec out(g.size());
  for (size_t m = 0; m < g.size(); ++m) out[m] = m_[m] * g[m];
  return out;
}

CVec SpectralOperators::apply_T(int k, const CVec& g) const {
  if (static_cast<int>(g.size()) != grid_.size()) throw Error(ErrorKind::usage, "torus value count mismatch");
  auto t = T_multiplier(k);
  CVec out(g.size());
  for (size_t m = 0; m < g.size(); ++m) out[m] = t[m] * g[m];
  return out;
}

CVec apply_M(const Kernel& phi, const CVec& g, const TorusGrid& grid) {
  return SpectralOperators(phi, grid).apply_M(g);
}

CVec apply_T(const Kernel& phi, int k, const CVec& g, const TorusGrid& grid) {
  return SpectralOperators(phi, grid).apply_T(k, g);
}

Eigen::MatrixXcd B_matrix(const Kernel& phi, const ExponentialBasis& X, const ExponentialBasis& Y, int K,
                          double delta) {
  const auto& g = X.grid();
  SpectralOperators ops(phi, g, delta);
  Eigen::Map<const Eigen::VectorXd> w(g.weights().data(), g.size());
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(Y.size(), X.size());
  for (int k = -K; k <= K; ++k) {
    if (k == 0) continue;
    auto t = ops.T_multiplier(k);
    Eigen::Map<const Eigen::VectorXd> tv(t.data(), t.size());
    if (tv.cwiseAbs().maxCoeff() == 0.0) continue;
    Eigen::VectorXcd px(X.size()), py(Y.size());
    for (int j = 0; j < X.size(); ++j) px(j) = std::polar(1.0, -kTwoPi * k * X.nodes()[j]);
    for (int j = 0; j < Y.size(); ++j) py(j) = std::polar(1.0, kTwoPi * k * Y.nodes()[j]);
    Eigen::VectorXd wt = w.cwiseProduct(tv);
    Eigen::MatrixXcd mid = Y.samples().conjugate() * wt.cast<cplx>().asDiagonal() * X.samples().transpose();
    acc += py.asDiagonal() * mid * px.asDiagonal();
  }
  return Y.solve_gram(acc);
}

CVec apply_B(const Kernel& phi, const NodeSet& X, const NodeSet& Y, const CVec& coeffs, int K,
             const TorusGrid& grid) {
  ExponentialBasis bx(X, grid), by(Y, grid);
  Eigen::MatrixXcd B = B_matrix(phi, bx, by, k_depth(phi, K), -1.0);
  Eigen::Map<const Eigen::VectorXcd> c(coeffs.data(), coeffs.size());
  if (c.size() != X.size()) throw Error(ErrorKind::usage, "coefficient window mismatch");
  Eigen::VectorXcd out = B * c;
  return by.prolong(CVec(out.data(), out.data() + out.size()), 0);
}

BOperatorNorms b_operator_norms(const Kernel& phi, const NodeSet& X, const NodeSet& Y, double slack,
                                const TorusGrid& grid) {
  BOperatorNorms r;
  r.slack = slack;
  r.cells = k_depth(phi, -1);
  ExponentialBasis bx(X, grid), by(Y, grid);
  const double delta = std::exp(log_grid_min(phi, grid));
  r.norm_B = window_operator_norm(B_matrix(phi, bx, by, r.cells, delta), bx.gram(), by.gram());
  r.norm_B_tilde = window_operator_norm(B_matrix(phi, by, by, r.cells, delta), by.gram(), by.gram());
  const double Cphi = regularity_report(phi, spectrum_cells(phi, 256)).C;
  const double cx = riesz_estimate(X).C_basis, cy = riesz_estimate(Y).C_basis;
  r.bound_B = cy * cy * cx * cx * Cphi;
  r.bound_B_tilde = std::pow(cy, 4) * Cphi;
  r.holds = r.norm_B <= slack * r.bound_B + 1e-12 && r.norm_B_tilde <= slack * r.bound_B_tilde + 1e-12;
  return r;
}

nlohmann::json to_json(const BOperatorNorms& r) {
  return nlohmann::json{{"norm-B", r.norm_B},           {"norm-B-tilde", r.norm_B_tilde},
                        {"bound-B", r.bound_B},         {"bound-B-tilde", r.bound_B_tilde},
                        {"slack", r.slack},             {"holds", r.holds},
                        {"cells", r.cells}};
}

// ---------------------------------------------------------------- conditions

bool strictly_decreasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return !v.empty();
}

bool nonincreasing_top_half(const std::vector<double>& v) {
  if (v.empty()) return false;
  for (size_t i = v.size() / 2; i + 1 < v.size(); ++i)
    if (!(v[i + 1] <= v[i] * (1.0 + 1e-12) + 1e-300)) return false;
  return true;
}

bool limit_verdict(const std::vector<double>& values, double tol) {
  return !values.empty() && values.back() < tol && nonincreasing_top_half(values);
}

namespace {

void fill_b3_b4(AlphaConditions& row, const FamilySpec& fam, const Kernel& tau, const ExponentialBasis& bx,
                const ExponentialBasis& by, const Eigen::MatrixXcd& G, const Eigen::VectorXd& gnorm,
                const SpectralOperators& ops_psi, int K) {
  const auto& grid = bx.grid();
  SpectralOperators ops_tau(tau, grid);
  row.delta = ops_tau.delta();
  const int nt = static_cast<int>(G.cols());
  Eigen::Map<const Eigen::VectorXd> mpsi(ops_psi.M_multiplier().data(), grid.size());
  auto mt = ops_tau.M_multiplier();
  Eigen::Map<const Eigen::VectorXd> mtau(mt.data(), grid.size());

  // B3: T_{psi,k} A_X^k (M_psi - M_tau) g
  Eigen::MatrixXcd H3 = (mpsi - mtau).cast<cplx>().asDiagonal() * G;
  Eigen::MatrixXcd c3 = expand_columns(bx, H3);
  // B4: (T_{tau,k} A_Y^k - T_{psi,k} A_X^k) M_tau g
  Eigen::MatrixXcd H4 = mtau.cast<cplx>().asDiagonal() * G;
  Eigen::MatrixXcd c4x = expand_columns(bx, H4);
  Eigen::MatrixXcd c4y = expand_columns(by, H4);

  Eigen::VectorXd s3 = Eigen::VectorXd::Zero(nt), s4 = Eigen::VectorXd::Zero(nt);
  for (int k = -K; k <= K; ++k) {
    if (k == 0) continue;
    auto tp = ops_psi.T_multiplier(k);
    auto tt = ops_tau.T_multiplier(k);
    Eigen::Map<const Eigen::VectorXd> tpv(tp.data(), grid.size()), ttv(tt.data(), grid.size());
    const bool psi_live = tpv.cwiseAbs().maxCoeff() > 0.0;
    const bool tau_live = ttv.cwiseAbs().maxCoeff() > 0.0;
    if (psi_live) s3 += column_norms(tpv.cast<cplx>().asDiagonal() * prolong_columns(bx, c3, k), grid);
    if (psi_live || tau_live) {
      Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(grid.size(), nt);
      if (tau_live) V += ttv.cast<cplx>().asDiagonal() * prolong_columns(by, c4y, k);
      if (psi_live) V -= tpv.cast<cplx>().asDiagonal() * prolong_columns(bx, c4x, k);
      s4 += column_norms(V, grid);
    }
  }
  row.b3.resize(nt);
  row.b4.resize(nt);
  for (int c = 0; c < nt; ++c) {
    row.b3[c] = s3(c) / gnorm(c);
    row.b4[c] = s4(c) / gnorm(c);
  }
  row.b3_max = s3.cwiseQuotient(gnorm).maxCoeff();
  row.b4_max = s4.cwiseQuotient(gnorm).maxCoeff();
  row.expansion_condition = std::max(bx.gram_condition(), by.gram_condition());
  (void)fam;
}

void fill_prime(AlphaConditions& row, const FamilySpec& fam, int N, double delta_psi) {
  const Kernel phi = fam.generator(row.alpha);
  const auto rep = regularity_report(phi, N, 1024);
  double s = 0.0, off = 0.0;
  for (int k = -N; k <= N; ++k) {
    s += rep.cell_sup(k);
    if (k != 0) off += rep.cell_sup(k);
  }
  const double ld = std::log(rep.delta);
  row.b2prime = s / rep.delta;
  row.b2prime_offcenter = off / rep.delta;
  row.offcenter_series = regularity_report(phi, spectrum_cells(phi, 4096), 1024).C;

  const Kernel tau = fam.convolves() ? convolve(phi, fam.psi) : phi;
  const double delta_tau = regularity_report(tau, 1, 1024).delta;
  const double target = delta_tau / (rep.delta * delta_psi);
  double b3 = 0.0, rem = 0.0;
  const int M = 1024;
  for (int k = -N; k <= N; ++k) {
    double sup3 = 0.0, supr = 0.0;
    for (int m = 0; m <= M; ++m) {
      double xi = m < M ? -kPi + kTwoPi * m / M + kTwoPi * k : -(kPi + kTwoPi * k);
      double l = phi.log_fourier(xi);
      double r = l == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(l - ld);
      sup3 = std::max(sup3, std::fabs(r - target));
      supr = std::max(supr, std::fabs(r - 1.0));
    }
    b3 += sup3;
    rem += supr;
  }
  row.b3prime = b3;
  row.remark_distance = rem;
}

void fill_regular(AlphaConditions& row, const FamilySpec& fam, double interior) {
  const Kernel phi = fam.generator(row.alpha);
  const TorusGrid g(1024);
  const double ld = log_grid_min(phi, g);
  const double edge = (1.0 - interior) * kPi;
  double mx = 0.0;
  for (int m = 0; m < g.M(); ++m) {
    double xi = g.node(m);
    if (std::fabs(xi) > edge) continue;
    mx = std::max(mx, std::exp(ld - phi.log_fourier(xi)));
  }
  row.regular_ratio_max = mx;
  row.regular_ratio_zero = std::exp(ld - phi.log_fourier(0.0));
}

enum Parts { kB34 = 1, kPrime = 2, kRegular = 4 };

ConditionReport run_conditions(const FamilySpec& fam, const NodeSet* X, const NodeSet* Y,
                               const ConditionOptions& opt, int parts) {
  fam.validate();
  ConditionReport rep;
  const TorusGrid grid(opt.torus_points);
  const auto N = fam.psi.cells();
  rep.N = N ? std::max(1, *N) : 0;
  double delta_psi = 0.0;
  if ((parts & kPrime) && N) delta_psi = regularity_report(fam.psi, 1, 1024).delta;

  std::optional<ExponentialBasis> bx, by;
  Eigen::MatrixXcd G;
  Eigen::VectorXd gnorm;
  std::optional<SpectralOperators> ops_psi;
  if (parts & kB34) {
    bx.emplace(*X, grid);
    by.emplace(*Y, grid);
    const int n = X->size();
    const int nt = n + opt.random_vectors;
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, nt);
    for (int j = 0; j < n; ++j) C(j, j) = 1.0;
    for (int r = 0; r < opt.random_vectors; ++r) {
      auto c = random_unit_coefficients(n, opt.seed + static_cast<std::uint64_t>(r));
      for (int j = 0; j < n; ++j) C(j, n + r) = c[j];
    }
    G = prolong_columns(*bx, C, 0);
    gnorm = column_norms(G, grid);
    ops_psi.emplace(fam.psi, grid);
    rep.test_vectors = nt;
  }

  std::vector<std::future<AlphaConditions>> jobs;
  for (double a : fam.alphas) {
    jobs.push_back(std::async(std::launch::async, [&, a] {
      AlphaConditions row;
      row.alpha = a;
      try {
        const Kernel tau = fam.interpolator(a);
        const int K = k_depth(tau, opt.cells) > k_depth(fam.psi, opt.cells)
                          ? k_depth(tau, opt.cells)
                          : k_depth(fam.psi, opt.cells);
        const auto reg = regularity_report(tau, spectrum_cells(tau, 256), 1024);
        row.C = reg.C;
        row.delta = reg.delta;
        if (parts & kB34) fill_b3_b4(row, fam, tau, *bx, *by, G, gnorm, *ops_psi, K);
        row.delta = reg.delta;
        if ((parts & kPrime) && N) fill_prime(row, fam, rep.N, delta_psi);
        if (parts & kRegular) fill_regular(row, fam, opt.interior);
      } catch (const Error& e) {
        row.error = std::string(error_kind_name(e.kind())) + ": " + e.what();
      }
      return row;
    }));
  }
  for (auto& j : jobs) rep.rows.push_back(j.get());
  {
    const Kernel t0 = fam.interpolator(fam.alphas.front());
    rep.cells = std::max(k_depth(t0, opt.cells), k_depth(fam.psi, opt.cells));
  }

  std::vector<double> C, b3, b4, b2p, b3p, rem, reg, full;
  bool ok = true;
  for (const auto& r : rep.rows) {
    if (!r.error.empty()) ok = false;
    C.push_back(r.C);
    rep.C_Phi = std::max(rep.C_Phi, r.C);
    b3.push_back(r.b3_max);
    b4.push_back(r.b4_max);
    if (r.b2prime) b2p.push_back(*r.b2prime);
    if (r.b3prime) b3p.push_back(*r.b3prime);
    if (r.remark_distance) rem.push_back(*r.remark_distance);
    if (r.offcenter_series) full.push_back(*r.offcenter_series);
    reg.push_back(r.regular_ratio_max);
  }
  nlohmann::json v = nlohmann::json::object();
  v["rows-ok"] = ok;
  v["B2"] = ok && bounded_tail(C);
  if (parts & kB34) {
    v["B3"] = ok && limit_verdict(b3, opt.limit_tolerance);
    v["B4"] = ok && limit_verdict(b4, opt.limit_tolerance);
  }
  if ((parts & kPrime) && N) {
    v["B2-prime"] = ok && bounded_tail(b2p);
    v["B3-prime"] = ok && limit_verdict(b3p, opt.limit_tolerance);
    v["remark-distance"] = ok && limit_verdict(rem, opt.limit_tolerance);
    v["offcenter-series-bounded"] = ok && bounded_tail(full);
  }
  if (parts & kRegular) v["regular-interpolator"] = ok && limit_verdict(reg, opt.limit_tolerance);
  v["limit-tolerance"] = opt.limit_tolerance;
  rep.verdicts = v;
  return rep;
}

}  // namespace

ConditionReport check_conditions(const FamilySpec& family, const NodeSet& X, const NodeSet& Y,
                                 const ConditionOptions& opt) {
  return run_conditions(family, &X, &Y, opt, kB34 | kPrime | kRegular);
}

ConditionReport check_B3_B4(const FamilySpec& family, const NodeSet& X, const NodeSet& Y,
                            const ConditionOptions& opt) {
  return run_conditions(family, &X, &Y, opt, kB34);
}

ConditionReport check_B2prime_B3prime(const FamilySpec& family, const ConditionOptions& opt) {
  return run_conditions(family, nullptr, nullptr, opt, kPrime);
}

ConditionReport check_regular_interpolator(const FamilySpec& family, const ConditionOptions& opt) {
  return run_conditions(family, nullptr, nullptr, opt, kRegular);
}

nlohmann::json ConditionReport::to_json() const {
  nlohmann::json rj = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j{{"alpha", r.alpha},
                     {"delta", r.delta},
                     {"C", r.C},
                     {"B3-series", r.b3},
                     {"B4-series", r.b4},
                     {"B3-max", r.b3_max},
                     {"B4-max", r.b4_max},
                     {"expansion-condition", r.expansion_condition},
                     {"B2-prime", opt_json(r.b2prime)},
                     {"B2-prime-offcenter", opt_json(r.b2prime_offcenter)},
                     {"offcenter-series", opt_json(r.offcenter_series)},
                     {"B3-prime", opt_json(r.b3prime)},
                     {"remark-distance", opt_json(r.remark_distance)},
                     {"regular-ratio-max", r.regular_ratio_max},
                     {"regular-ratio-zero", r.regular_ratio_zero}};
    if (!r.error.empty()) j["error"] = r.error;
    rj.push_back(j);
  }
  return nlohmann::json{{"rows", rj},   {"C_Phi", C_Phi},           {"cells", cells},
                        {"N", N},       {"test-vectors", test_vectors}, {"verdicts", verdicts}};
}

// ---------------------------------------------------------------- sweeps

std::vector<double> SweepReport::l2() const {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.l2_error);
  return v;
}

std::vector<double> SweepReport::sup() const {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.sup_error);
  return v;
}

bool SweepReport::all_ok() const {
  for (const auto& r : rows)
    if (!r.error.empty()) return false;
  return !rows.empty();
}

nlohmann::json SweepReport::to_json() const {
  nlohmann::json rj = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j{{"alpha", r.alpha},
                     {"l2_error", num_or_null(r.l2_error)},
                     {"sup_error", num_or_null(r.sup_error)},
                     {"l2_rel", num_or_null(r.l2_rel)},
                     {"sup_rel", num_or_null(r.sup_rel)},
                     {"kappa", num_or_null(r.kappa)},
                     {"coeff_norm", num_or_null(r.coeff_norm)},
                     {"node_residual", num_or_null(r.node_residual)},
                     {"route", r.route},
                     {"bound_lhs", num_or_null(r.bound_lhs)},
                     {"bound_rhs", num_or_null(r.bound_rhs)},
                     {"bound_holds", r.bound_holds}};
    if (!r.error.empty()) j["error"] = r.error;
    rj.push_back(j);
  }
  return nlohmann::json{{"family", family},
                        {"function", function},
                        {"X", X},
                        {"Y", Y},
                        {"seed", seed},
                        {"grid", {{"X", grid_X}, {"h", grid_h}}},
                        {"central-fraction", central_fraction},
                        {"window", window},
                        {"f-l2", f_l2},
                        {"rows", rj}};
}

std::string SweepReport::to_csv() const {
  std::ostringstream s;
  s << "alpha,l2_error,sup_error,kappa,coeff_norm\n";
  for (const auto& r : rows)
    s << fmt17(r.alpha) << ',' << fmt17(r.l2_error) << ',' << fmt17(r.sup_error) << ',' << fmt17(r.kappa) << ','
      << fmt17(r.coeff_norm) << '\n';
  return s.str();
}

SweepReport recovery_sweep(const QsisFunction& f, const FamilySpec& fam, const NodeSet& Y, const SweepOptions& opt,
                           std::uint64_t seed) {
  fam.validate();
  SweepReport rep;
  const LineGrid grid = opt.grid ? *opt.grid : default_line_grid(f.kernel());
  std::string route = opt.route;
  if (route == "auto") route = (fam.tag == "regular-gaussian" && lattice_nodes(Y)) ? "lattice-cardinal" : "collocation";
  if (route != "collocation" && route != "lattice-cardinal")
    throw Error(ErrorKind::usage, "unknown interpolation route '" + route + "'");
  if (route == "lattice-cardinal" && !lattice_nodes(Y))
    throw Error(ErrorKind::usage, "the lattice-cardinal route needs lattice sample nodes");

  rep.family = fam.to_json();
  rep.function = f.to_json();
  rep.X = f.nodes().to_json();
  rep.Y = Y.to_json();
  rep.seed = seed;
  rep.grid_X = grid.X();
  rep.grid_h = grid.h();
  rep.central_fraction = opt.central_fraction;
  double reach = 0.0;
  for (double y : Y.nodes()) reach = std::max(reach, std::fabs(y));
  rep.window = opt.central_fraction * reach;

  const auto s = sample(f, Y);

  // shared quantities of the Fourier-side bound
  const TorusGrid tg(opt.torus_points);
  std::optional<ExponentialBasis> by;
  double fhat_T = 0.0, cx = 1.0, cy = 1.0, Cpsi = 0.0;
  if (opt.bound_check) {
    ExponentialBasis bx(f.nodes(), tg);
    by.emplace(Y, tg);
    fhat_T = l2_norm_torus(f.spectrum_cell(bx, 0), tg);
    cx = riesz_estimate(f.nodes()).C_basis;
    cy = riesz_estimate(Y).C_basis;
    Cpsi = regularity_report(f.kernel(), spectrum_cells(f.kernel(), 256)).C;
  }

  std::vector<std::future<SweepRow>> jobs;
  for (double a : fam.alphas) {
    jobs.push_back(std::async(std::launch::async, [&, a] {
      SweepRow row;
      row.alpha = a;
      row.route = route;
      try {
        const Kernel phi = fam.interpolator(a);
        Evaluator g;
        CVec u;            // sum_j a_j e^{-i y_j xi} on the torus
        Spectrum mult;     // spectrum multiplying u
        std::optional<CardinalFunction> L;
        std::optional<Interpolant> I;
        if (route == "collocation") {
          I = solve(CollocationSolver(assemble(phi, Y)), s);
          row.kappa = I->kappa;
          row.coeff_norm = I->coeff_norm();
          row.node_residual = I->residual;
          g = [&I](const std::vector<double>& xs) { return I->eval(xs); };
          if (opt.bound_check) {
            u = by->prolong(CVec(I->a.begin(), I->a.end()), 0);
            mult = phi.spectrum();
          }
        } else {
          L.emplace(phi);
          row.kappa = L->symbol_ratio();
          double n2 = 0.0;
          for (double v : s) n2 += v * v;
          row.coeff_norm = std::sqrt(n2);
          auto at_nodes = L->lattice_interpolant(s, Y.nodes());
          for (size_t j = 0; j < s.size(); ++j)
            row.node_residual = std::max(row.node_residual, std::fabs(at_nodes[j] - s[j]));
          g = [&L, &s](const std::vector<double>& xs) { return L->lattice_interpolant(s, xs); };
          if (opt.bound_check) {
            u = by->prolong(CVec(s.begin(), s.end()), 0);
            mult = [&L](double xi) { return L->spectrum(xi); };
          }
        }
        auto res = residual_report(f, g, reach, grid, opt.central_fraction);
        row.l2_error = res.l2;
        row.sup_error = res.sup;
        row.l2_rel = res.l2_rel;
        row.sup_rel = res.sup_rel;
        if (opt.bound_check) {
          for (int m = 0; m < tg.size(); ++m) u[m] *= mult(cell_arg(tg, m, 0));
          row.bound_lhs = l2_norm_torus(u, tg);
          const double Cphi = regularity_report(phi, spectrum_cells(phi, 256)).C;
          row.bound_rhs = (1.0 + std::pow(cy, 4) * Cphi) * (1.0 + cx * cx * cy * cy * Cpsi) * fhat_T;
          row.bound_holds = row.bound_lhs <= row.bound_rhs * (1.0 + 1e-9);
        }
      } catch (const Error& e) {
        row.error = std::string(error_kind_name(e.kind())) + ": " + e.what();
        row.l2_error = row.sup_error = row.l2_rel = row.sup_rel = kNaN;
        if (row.kappa == 0.0) row.kappa = e.kind() == ErrorKind::solvability ? e.value() : kNaN;
        row.coeff_norm = kNaN;
        row.bound_holds = false;
      }
      return row;
    }));
  }
  for (auto& j : jobs) rep.rows.push_back(j.get());
  // reference norm of f on the central window
  {
    auto res = residual_report(f, [](const std::vector<double>& xs) { return std::vector<double>(xs.size(), 0.0); },
                               reach, grid, opt.central_fraction);
    rep.f_l2 = res.f_l2;
  }
  return rep;
}

// ---------------------------------------------------------------- counterexample

QsisFunction counterexample_function(const Kernel& psi, const NodeSet& X, std::uint64_t seed, int special) {
  if (special < 0 || special >= X.size()) throw Error(ErrorKind::usage, "special index outside the window", special);
  auto r = random_unit_coefficients(X.size(), seed);
  r[special] = 0.0;
  double n = 0.0;
  for (double v : r) n += v * v;
  n = std::sqrt(n);
  std::vector<double> c(X.size());
  for (int j = 0; j < X.size(); ++j) c[j] = (n > 0.0 ? 0.25 * r[j] / n : 0.0);
  c[special] = 1.0;
  return QsisFunction(psi, X, std::move(c));
}

CounterexampleResult counterexample_run(const std::vector<double>& alphas, const std::vector<std::uint64_t>& seeds,
                                        int J, const SweepOptions& opt) {
  CounterexampleResult out;
  const Kernel psi = gaussian(1.0);
  FamilySpec fam{"convolution", "gaussian", psi, alphas};
  const NodeSet X = NodeSet::sqrt2_swap(J), Z = NodeSet::lattice(J);
  bool floor = !seeds.empty();
  for (auto sd : seeds) {
    auto f = counterexample_function(psi, X, sd, J + 1);
    out.runs.push_back(recovery_sweep(f, fam, Z, opt, sd));
    const auto l2 = out.runs.back().l2();
    if (!out.runs.back().all_ok() || !(l2.back() > out.floor_ratio * l2.front())) floor = false;
  }
  out.persistent_floor = floor;
  const std::uint64_t cs = seeds.empty() ? 0 : seeds.front();
  out.control = recovery_sweep(counterexample_function(psi, Z, cs, J), fam, Z, opt, cs);
  const auto l2 = out.control.l2();
  out.control_converges = out.control.all_ok() && strictly_decreasing(l2) && strictly_decreasing(out.control.sup()) &&
                          l2.back() < out.control_ratio * l2.front();
  return out;
}

nlohmann::json CounterexampleResult::to_json() const {
  nlohmann::json r = nlohmann::json::array();
  for (const auto& s : runs) r.push_back(s.to_json());
  return nlohmann::json{{"runs", r},
                        {"control", control.to_json()},
                        {"floor-ratio", floor_ratio},
                        {"persistent-floor", persistent_floor},
                        {"control-ratio", control_ratio},
                        {"control-converges", control_converges}};
}

// ---------------------------------------------------------------- half shift

namespace {

Eigen::MatrixXd cross_matrix(const Kernel& psi, const NodeSet& rows, const NodeSet& cols) {
  std::vector<double> d;
  for (int i = 0; i < rows.size(); ++i)
    for (int j = 0; j < cols.size(); ++j) d.push_back(rows[i] - cols[j]);
  auto v = psi.synthesize({0.0}, {1.0}, d);
  Eigen::MatrixXd A(rows.size(), cols.size());
  size_t p = 0;
  for (int i = 0; i < rows.size(); ++i)
    for (int j = 0; j < cols.size(); ++j) A(i, j) = v[p++];
  return A;
}

double cond2(const Eigen::MatrixXd& A, double* smin = nullptr) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  if (smin) *smin = s(s.size() - 1);
  return s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
}

}  // namespace

HalfShiftReport half_shift_conditioning(const std::vector<int>& Js, const Kernel& psi, double tol) {
  HalfShiftReport rep;
  rep.stabilization_tolerance = tol;
  for (int J : Js) {
    HalfShiftRow r;
    r.J = J;
    const NodeSet X = NodeSet::lattice(J), Y = NodeSet::half_shift(J);
    const Eigen::MatrixXd AYX = cross_matrix(psi, Y, X);
    const Eigen::MatrixXd AYY = cross_matrix(psi, Y, Y);
    r.kappa_cross = cond2(AYX, &r.smin_cross);
    Eigen::LLT<Eigen::MatrixXd> llt(AYY);
    r.solvable = llt.info() == Eigen::Success;
    r.kappa_operator = r.solvable ? cond2(llt.solve(AYX)) : std::numeric_limits<double>::infinity();
    r.kappa_control = cond2(cross_matrix(psi, X, X));
    rep.rows.push_back(r);
  }
  bool inc = rep.rows.size() >= 2;
  for (size_t i = 1; i < rep.rows.size(); ++i)
    if (!(rep.rows[i].kappa_cross > rep.rows[i - 1].kappa_cross)) inc = false;
  rep.cross_increasing = inc;
  if (rep.rows.size() >= 2) {
    const double a = rep.rows[rep.rows.size() - 2].kappa_control, b = rep.rows.back().kappa_control;
    rep.control_stabilizes = std::fabs(b - a) <= tol * b;
  }
  return rep;
}

nlohmann::json HalfShiftReport::to_json() const {
  nlohmann::json r = nlohmann::json::array();
  for (const auto& x : rows)
    r.push_back({{"J", x.J},
                 {"kappa_cross", x.kappa_cross},
                 {"kappa_operator", num_or_null(x.kappa_operator)},
                 {"kappa_control", x.kappa_control},
                 {"smin_cross", x.smin_cross},
                 {"solvable", x.solvable}});
  return nlohmann::json{{"rows", r},
                        {"cross-increasing", cross_increasing},
                        {"control-stabilizes", control_stabilizes},
                        {"stabilization-tolerance", stabilization_tolerance}};
}

std::string HalfShiftReport::to_csv() const {
  std::ostringstream s;
  s << "J,kappa_cross,kappa_operator,kappa_control,smin_cross\n";
  for (const auto& r : rows)
    s << r.J << ',' << fmt17(r.kappa_cross) << ',' << fmt17(r.kappa_operator) << ',' << fmt17(r.kappa_control) << ','
      << fmt17(r.smin_cross) << '\n';
  return s.str();
}

// ---------------------------------------------------------------- Fourier-side samples

FourierSampleCheck fourier_side_sample_check(const QsisFunction& f, const NodeSet& Y, int K, const TorusGrid& grid) {
  FourierSampleCheck r;
  r.cells = K < 0 ? spectrum_cells(f.kernel(), 512) : K;
  const auto fs = fourier_side_samples(f, Y, r.cells, grid);
  const auto ss = sample(f, Y);
  for (size_t j = 0; j < ss.size(); ++j) {
    r.max_discrepancy = std::max(r.max_discrepancy, std::fabs(fs[j] - ss[j]));
    r.scale = std::max(r.scale, std::fabs(ss[j]));
  }
  return r;
}

FourierSampleCheck fourier_side_sample_check(const Interpolant& g, const std::vector<double>& data, int K,
                                             const TorusGrid& grid) {
  FourierSampleCheck r;
  const auto fn = g.as_function();
  r.cells = K < 0 ? spectrum_cells(g.phi, 512) : K;
  const auto fs = fourier_side_samples(fn, g.Y, r.cells, grid);
  if (fs.size() != data.size()) throw Error(ErrorKind::usage, "data do not match the interpolant's nodes");
  for (size_t j = 0; j < data.size(); ++j) {
    r.max_discrepancy = std::max(r.max_discrepancy, std::fabs(fs[j] - data[j]));
    r.scale = std::max(r.scale, std::fabs(data[j]));
  }
  return r;
}

}  // namespace qsis
