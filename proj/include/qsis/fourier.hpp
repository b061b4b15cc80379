#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace qsis {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
// 1/sqrt(2 pi): the transform normalization constant.
inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

using Spectrum = std::function<double(double)>;
using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// sin(pi x) with exact zeros at the integers.
double sin_pi(double x);
// sin(pi x)/(pi x), equal to 1 at 0.
double sinc(double x);

// Uniform grid on T = [-pi, pi). Nodes xi_m = -pi + 2 pi m / M for m < M.
// Samples are carried on the closed grid (M+1 values, node M is +pi) because
// the nonharmonic exponentials used throughout are not 2pi-periodic. Weights
// are trapezoid weights with Gregory-type endpoint corrections applied to
// each half [-pi, 0] and [0, pi]; for periodic integrands they agree with the
// periodic trapezoid to high order.
class TorusGrid {
 public:
  explicit TorusGrid(int M = 4096);

  int M() const { return M_; }
  int size() const { return M_ + 1; }
  double h() const { return kTwoPi / M_; }
  double node(int m) const { return nodes_[m]; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  int M_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Symmetric grid -X..X with spacing h.
class LineGrid {
 public:
  explicit LineGrid(double X = 64.0, double h = 1.0 / 64.0);

  double X() const { return X_; }
  double h() const { return h_; }
  int size() const { return 2 * n_ + 1; }
  int half_count() const { return n_; }
  double node(int i) const { return (i - n_) * h_; }
  std::vector<double> nodes() const;

 private:
  double X_;
  double h_;
  int n_;
};

// Endpoint-corrected trapezoid weights for n intervals of unit spacing
// (n+1 nodes). Used by TorusGrid; exposed for tests.
std::vector<double> corrected_trapezoid_weights(int n);

// spectrum(xi + 2 pi k) on the closed torus grid. The closing node takes the
// inner one-sided limit, spectrum(-(pi + 2 pi k)), which matters only at jumps.
std::vector<double> sample_cell(const Spectrum& spectrum, const TorusGrid& grid, int k);

// sigma(xi_m) = sum_{|k|<=K} spectrum(xi_m + 2 pi k) on the closed grid.
std::vector<double> periodize(const Spectrum& spectrum, const TorusGrid& grid, int K);

double l2_norm_line(const std::vector<double>& samples, const LineGrid& grid);
double l2_norm_torus(const std::vector<double>& values, const TorusGrid& grid);
double l2_norm_torus(const CVec& values, const TorusGrid& grid);
cplx inner_torus(const CVec& u, const CVec& v, const TorusGrid& grid);  // integral of u conj(v)

// Trapezoid inverse transform of an even spectrum on [-Xi, Xi] with M
// intervals. Samples are taken once at construction; evaluation at x is a
// cosine sum.
class SpectralQuadrature {
 public:
  SpectralQuadrature() = default;
  SpectralQuadrature(const Spectrum& spectrum, double Xi, int M);

  double Xi() const { return Xi_; }
  int M() const { return M_; }
  double h() const { return h_; }

  // (1/sqrt(2pi)) * trapezoid of spectrum(xi) e^{i x xi}: real part.
  double eval(double x) const;
  // Imaginary part contributed by the odd component of the samples.
  double odd_residue(double x) const;
  // Estimate of (1/sqrt(2pi)) * integral of |spectrum| beyond Xi, from probes.
  double tail_estimate() const { return tail_; }

  // sum_j a_j psi(x - y_j) for every x, done as one spectral sum per x.
  std::vector<double> synthesize(const std::vector<double>& centers,
                                 const std::vector<double>& coeffs,
                                 const std::vector<double>& xs) const;

  // Half-grid samples spectrum(-xi_m), xi_m = m h, m = 0..M/2.
  const std::vector<double>& even_samples() const { return even_; }

 private:
  double Xi_ = 0.0;
  int M_ = 0;
  double h_ = 0.0;
  std::vector<double> even_;
  std::vector<double> weighted_;
  std::vector<double> odd_;
  double tail_ = 0.0;
};

// One-shot inverse transform. Throws accuracy error when the probed tail
// beyond Xi exceeds tol, and numeric error when the odd residue exceeds 1e-9.
double inverse_ft(const Spectrum& spectrum, double x, double Xi, int M, double tol = 1e-8);

}  // namespace qsis
