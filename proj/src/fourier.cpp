#include "qsis/fourier.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qsis/error.hpp"

namespace qsis {

const char* error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::domain: return "domain";
    case ErrorKind::range: return "range";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::conditioning: return "conditioning";
    case ErrorKind::solvability: return "solvability";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::degeneracy: return "degeneracy";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

double sin_pi(double x) {
  // reduce to r in [-1, 1], then fold to [-1/2, 1/2]
  double r = x - 2.0 * std::nearbyint(x / 2.0);
  if (r > 0.5) r = 1.0 - r;
  else if (r < -0.5) r = -1.0 - r;
  return std::sin(kPi * r);
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  return sin_pi(x) / (kPi * x);
}

namespace {

constexpr int kGregoryPoints = 8;

// Left-end corrections c_i, i < 8: sum_i c_i i^d equals the left-end
// Euler-Maclaurin remainder of the trapezoid rule for t^d, d < 8.
const std::array<double, kGregoryPoints>& gregory_corrections() {
  static const std::array<double, kGregoryPoints> c = [] {
    constexpr int q = kGregoryPoints;
    long double A[q][q + 1];
    const long double bern[] = {0.0L, 1.0L / 6, 0.0L, -1.0L / 30, 0.0L, 1.0L / 42, 0.0L, -1.0L / 30};
    for (int d = 0; d < q; ++d) {
      for (int i = 0; i < q; ++i) A[d][i] = std::pow(static_cast<long double>(i), d);
      if (d == 0) A[0][0] = 1.0L;
      // left-end term for t^d is B_{d+1}/(d+1) when d+1 is even
      A[d][q] = (d % 2 == 1) ? bern[d] / (d + 1) : 0.0L;
    }
    for (int col = 0; col < q; ++col) {
      int piv = col;
      for (int r = col + 1; r < q; ++r)
        if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
      for (int j = 0; j <= q; ++j) std::swap(A[col][j], A[piv][j]);
      for (int r = 0; r < q; ++r) {
        if (r == col) continue;
        long double f = A[r][col] / A[col][col];
        for (int j = col; j <= q; ++j) A[r][j] -= f * A[col][j];
      }
    }
    std::array<double, q> out{};
    for (int i = 0; i < q; ++i) out[i] = static_cast<double>(A[i][q] / A[i][i]);
    return out;
  }();
  return c;
}

}  // namespace

std::vector<double> corrected_trapezoid_weights(int n) {
  if (n < 1) throw Error(ErrorKind::usage, "quadrature needs at least one interval");
  std::vector<double> w(n + 1, 1.0);
  w[0] = w[n] = 0.5;
  if (n >= 2 * kGregoryPoints) {
    const auto& c = gregory_corrections();
    for (int i = 0; i < kGregoryPoints; ++i) {
      w[i] += c[i];
      w[n - i] += c[i];
    }
  }
  return w;
}

TorusGrid::TorusGrid(int M) : M_(M) {
  if (M < 8 || M % 2 != 0)
    throw Error(ErrorKind::usage, "torus grid needs an even M >= 8", M);
  nodes_.resize(M + 1);
  for (int m = 0; m < M; ++m) nodes_[m] = -kPi + kTwoPi * m / M;
  nodes_[M] = kPi;
  // each half of T carries its own endpoint corrections, so spectra with a
  // kink at the origin (triangle, e^{-|xi|}) integrate to full order too
  const int half = M / 2;
  const auto wh = corrected_trapezoid_weights(half);
  weights_.assign(M + 1, 0.0);
  for (int i = 0; i <= half; ++i) {
    weights_[i] += wh[i] * h();
    weights_[half + i] += wh[i] * h();
  }
}

LineGrid::LineGrid(double X, double h) : X_(X), h_(h) {
  if (!(h > 0.0) || !(X > 0.0))
    throw Error(ErrorKind::usage, "line grid needs X > 0 and h > 0");
  double ratio = X / h;
  n_ = static_cast<int>(std::llround(ratio));
  if (std::fabs(ratio - n_) > 1e-9 * std::max(1.0, ratio))
    throw Error(ErrorKind::usage, "line grid needs X/h integral", ratio);
}

std::vector<double> LineGrid::nodes() const {
  std::vector<double> out(size());
  for (int i = 0; i < size(); ++i) out[i] = node(i);
  return out;
}

std::vector<double> sample_cell(const Spectrum& spectrum, const TorusGrid& grid, int k) {
  const int M = grid.M();
  std::vector<double> out(M + 1);
  const double shift = kTwoPi * k;
  for (int m = 0; m < M; ++m) out[m] = spectrum(grid.node(m) + shift);
  out[M] = spectrum(-(kPi + shift));
  return out;
}

std::vector<double> periodize(const Spectrum& spectrum, const TorusGrid& grid, int K) {
  if (K < 0) throw Error(ErrorKind::usage, "periodization depth must be >= 0", K);
  std::vector<double> sigma(grid.size(), 0.0);
  // sum small cells last for a little extra accuracy
  for (int a = K; a >= 0; --a) {
    for (int k : {a, -a}) {
      auto cell = sample_cell(spectrum, grid, k);
      for (size_t m = 0; m < sigma.size(); ++m) sigma[m] += cell[m];
      if (a == 0) break;
    }
  }
  return sigma;
}

double l2_norm_line(const std::vector<double>& samples, const LineGrid& grid) {
  if (static_cast<int>(samples.size()) != grid.size())
    throw Error(ErrorKind::usage, "sample count does not match the line grid");
  double s = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    double w = (i == 0 || i + 1 == samples.size()) ? 0.5 : 1.0;
    s += w * samples[i] * samples[i];
  }
  return std::sqrt(grid.h() * s);
}

double l2_norm_torus(const std::vector<double>& values, const TorusGrid& grid) {
  if (static_cast<int>(values.size()) != grid.size())
    throw Error(ErrorKind::usage, "value count does not match the torus grid");
  double s = 0.0;
  for (size_t m = 0; m < values.size(); ++m) s += grid.weights()[m] * values[m] * values[m];
  return std::sqrt(std::max(s, 0.0));
}

double l2_norm_torus(const CVec& values, const TorusGrid& grid) {
  if (static_cast<int>(values.size()) != grid.size())
    throw Error(ErrorKind::usage, "value count does not match the torus grid");
  double s = 0.0;
  for (size_t m = 0; m < values.size(); ++m) s += grid.weights()[m] * std::norm(values[m]);
  return std::sqrt(std::max(s, 0.0));
}

cplx inner_torus(const CVec& u, const CVec& v, const TorusGrid& grid) {
  if (static_cast<int>(u.size()) != grid.size() || u.size() != v.size())
    throw Error(ErrorKind::usage, "value count does not match the torus grid");
  cplx s = 0.0;
  for (size_t m = 0; m < u.size(); ++m) s += grid.weights()[m] * u[m] * std::conj(v[m]);
  return s;
}

SpectralQuadrature::SpectralQuadrature(const Spectrum& spectrum, double Xi, int M)
    : Xi_(Xi), M_(M) {
  if (!(Xi > 0.0)) throw Error(ErrorKind::usage, "quadrature cutoff must be positive", Xi);
  if (M < 2 || M % 2 != 0) throw Error(ErrorKind::usage, "quadrature needs an even M", M);
  h_ = 2.0 * Xi / M;
  const int half = M / 2;
  even_.resize(half + 1);
  odd_.resize(half + 1);
  for (int m = 0; m <= half; ++m) {
    double xi = m * h_;
    double left = spectrum(-xi);
    even_[m] = left;
    odd_[m] = (m == 0 || m == half) ? 0.0 : spectrum(xi) - left;
  }
  const auto w = corrected_trapezoid_weights(half);
  weighted_.resize(half + 1);
  for (int m = 0; m <= half; ++m) weighted_[m] = even_[m] * w[m];
  double tail = 0.0;
  for (double f : {1.0 + 1e-9, 1.01, 1.1, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0}) {
    double r = f * Xi;
    tail = std::max(tail, std::max(std::fabs(spectrum(r)), std::fabs(spectrum(-r))) * r);
  }
  tail_ = 2.0 * kInvSqrt2Pi * tail;
}

namespace {

// Re sum_{m=0}^{n} q_m z^m with |z| = 1, by Horner's rule.
double horner_real(const std::vector<double>& q, double theta) {
  const cplx z = std::polar(1.0, theta);
  cplx acc = 0.0;
  for (size_t m = q.size(); m-- > 0;) acc = acc * z + q[m];
  return acc.real();
}

double horner_imag(const std::vector<double>& q, double theta) {
  const cplx z = std::polar(1.0, theta);
  cplx acc = 0.0;
  for (size_t m = q.size(); m-- > 0;) acc = acc * z + q[m];
  return acc.imag();
}

}  // namespace

double SpectralQuadrature::eval(double x) const {
  return 2.0 * h_ * kInvSqrt2Pi * horner_real(weighted_, x * h_);
}

double SpectralQuadrature::odd_residue(double x) const {
  return h_ * kInvSqrt2Pi * std::fabs(horner_imag(odd_, x * h_));
}

std::vector<double> SpectralQuadrature::synthesize(const std::vector<double>& centers,
                                                   const std::vector<double>& coeffs,
                                                   const std::vector<double>& xs) const {
  if (centers.size() != coeffs.size())
    throw Error(ErrorKind::usage, "centers and coefficients differ in length");
  const int half = M_ / 2;
  // each half-line carries its own endpoint corrections, so a kink at 0 is fine
  const auto wc = corrected_trapezoid_weights(half);
  // Q_n for n = 0..M, xi_n = -Xi + n h
  CVec Q(M_ + 1);
  for (int n = 0; n <= M_; ++n) {
    double xi = -Xi_ + n * h_;
    int idx = std::abs(n - half);
    double w = (idx == 0 ? 2.0 * wc[0] : wc[idx]) * h_;
    cplx P = 0.0;
    for (size_t j = 0; j < centers.size(); ++j) P += coeffs[j] * std::polar(1.0, -centers[j] * xi);
    Q[n] = w * even_[idx] * P;
  }
  std::vector<double> out(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const cplx z = std::polar(1.0, x * h_);
    cplx acc = 0.0;
    for (int n = M_; n >= 0; --n) acc = acc * z + Q[n];
    acc *= std::polar(1.0, -x * Xi_);
    out[i] = kInvSqrt2Pi * acc.real();
  }
  return out;
}

double inverse_ft(const Spectrum& spectrum, double x, double Xi, int M, double tol) {
  SpectralQuadrature q(spectrum, Xi, M);
  if (q.tail_estimate() > tol)
    throw Error(ErrorKind::accuracy, "inverse transform tail beyond the cutoff exceeds tolerance",
                q.tail_estimate());
  double residue = q.odd_residue(x);
  if (residue > 1e-9)
    throw Error(ErrorKind::numeric, "spectrum has a non-negligible odd part", residue);
  return q.eval(x);
}

}  // namespace qsis
