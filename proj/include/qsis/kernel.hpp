#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qsis/fourier.hpp"
#include "qsis/json_fwd.hpp"

namespace qsis {

enum class Family {
  sinc,
  gaussian,
  poisson,
  inverse_multiquadric,
  triangle_spectrum,
  dilated,
  convolution,
  cardinal,
  multiquadric_cardinal,
};

const char* family_name(Family f) noexcept;

// Upper bound for the spectrum away from the origin.
struct SpectralDecay {
  enum class Kind { compact, super_exponential, exponential, algebraic };
  Kind kind = Kind::super_exponential;
  double support = 0.0;    // compact: spectrum vanishes for |xi| >= support
  double power = 0.0;      // algebraic: spectrum <= constant * |xi|^-power
  double constant = 0.0;
};

// Polymorphic implementation behind the value type Kernel. Every concrete
// family derives from this; instances are immutable once built.
class KernelImpl {
 public:
  virtual ~KernelImpl() = default;

  virtual Family family() const = 0;
  virtual double alpha() const = 0;
  virtual double space(double x) const = 0;
  virtual double fourier(double xi) const = 0;
  virtual double log_fourier(double xi) const;
  virtual bool space_closed_form() const = 0;
  // Even and nonincreasing on [0, inf).
  virtual bool monotone() const = 0;
  virtual SpectralDecay decay() const = 0;
  // sup of the spectrum over |xi| >= r (r >= 0).
  virtual double envelope(double r) const = 0;
  // Upper estimate of the integral of psi(x)^2 over x >= R.
  virtual double space_tail_energy(double R) const = 0;
  // Closed-form 2pi-periodization when known.
  virtual std::optional<double> symbol(double xi) const { (void)xi; return std::nullopt; }
  virtual nlohmann::json describe() const = 0;

  // Batch space evaluation of sum_j a_j psi(x - c_j); quadrature-backed
  // kernels override this with a spectral sum.
  virtual std::vector<double> synthesize(const std::vector<double>& centers,
                                         const std::vector<double>& coeffs,
                                         const std::vector<double>& xs) const;
};

// Base for kernels whose space side is an inverse transform of cached
// spectrum samples. Derived constructors call init_quadrature last.
class SpectralKernelBase : public KernelImpl {
 public:
  double space(double x) const override { return quad_.eval(x); }
  bool space_closed_form() const override { return false; }
  double space_tail_energy(double R) const override;
  std::vector<double> synthesize(const std::vector<double>& centers,
                                 const std::vector<double>& coeffs,
                                 const std::vector<double>& xs) const override {
    return quad_.synthesize(centers, coeffs, xs);
  }
  const SpectralQuadrature& quadrature() const { return quad_; }

 protected:
  // M chosen so that images of the kernel under the trapezoid rule sit at
  // distance >= alias_distance.
  void init_quadrature(double Xi, double alias_distance = 4000.0, int min_M = 1024);
  void init_quadrature_fixed(double Xi, int M);

 private:
  SpectralQuadrature quad_;
  double tv_slope_ = 0.0;  // total variation of the spectrum's derivative
};

class Kernel {
 public:
  Kernel() = default;
  explicit Kernel(std::shared_ptr<const KernelImpl> impl) : impl_(std::move(impl)) {}

  bool valid() const { return static_cast<bool>(impl_); }
  Family family() const { return impl().family(); }
  std::string tag() const;
  double alpha() const { return impl().alpha(); }
  double space(double x) const { return impl().space(x); }
  double fourier(double xi) const { return impl().fourier(xi); }
  double log_fourier(double xi) const { return impl().log_fourier(xi); }
  bool space_closed_form() const { return impl().space_closed_form(); }
  bool monotone() const { return impl().monotone(); }
  SpectralDecay decay() const { return impl().decay(); }
  double envelope(double r) const { return impl().envelope(r); }
  std::optional<double> support_half_width() const;
  std::optional<double> symbol(double xi) const { return impl().symbol(xi); }
  nlohmann::json to_json() const;
  Spectrum spectrum() const;

  std::vector<double> synthesize(const std::vector<double>& centers,
                                 const std::vector<double>& coeffs,
                                 const std::vector<double>& xs) const {
    return impl().synthesize(centers, coeffs, xs);
  }

  // Number of cells N = ceil(A / 2pi) for compact spectra.
  std::optional<int> cells() const;
  // Bound on sum_{|k|>K} sup_{cell k} spectrum.
  double cell_tail_bound(int K) const;
  // Smallest K whose cell tail is below rel_tol * reference, capped.
  int auto_cells(double rel_tol = 1e-12, int cap = 4096) const;
  // Cutoff Xi for inverse transforms with tail below tol.
  double auto_cutoff(double tol) const;
  double space_tail_energy(double R) const { return impl().space_tail_energy(R); }

  const KernelImpl& impl() const;
  std::shared_ptr<const KernelImpl> shared() const { return impl_; }

 private:
  std::shared_ptr<const KernelImpl> impl_;
};

// Catalog. Shapes follow the transform normalization (1/sqrt(2pi)) int f e^{-i xi x}.
Kernel sinc_kernel();                         // sin(pi x)/(pi x)
Kernel gaussian(double alpha);                // exp(-(x/alpha)^2)
Kernel poisson(double alpha);                 // exp(-alpha |x|)
Kernel inverse_multiquadric(double alpha);    // (1 + x^2)^-alpha, alpha in [1, 40.5]
Kernel triangle_spectrum();                   // spectrum max(2pi - |xi|, 0)
// Approximate identity alpha*phi(alpha x) / int(phi): spectrum phi^(xi/alpha)/phi^(0)*(1/sqrt(2pi)).
Kernel dilated(const Kernel& base, double alpha);
// Kernel whose spectrum is the product of the two spectra.
Kernel convolve(const Kernel& phi, const Kernel& psi);
// Cardinal function of the Hardy multiquadric sqrt(x^2 + c^2) on Z.
Kernel multiquadric_cardinal(double c);

// Generalized spectrum magnitude of the Hardy multiquadric, K_1(c|xi|)/|xi|
// up to a constant factor. Domain error at xi = 0.
double multiquadric_spectrum(double c, double xi);

// Modified Bessel function of the second kind on the validated range
// nu in [0.5, 40], z in (0, 100].
double bessel_k(double nu, double z);
// Unrestricted log K_nu(z) from the same integral representation.
double log_bessel_k(double nu, double z);

// Kernel from a JSON description ({"family": ..., "alpha": ..., ...}).
Kernel kernel_from_json(const nlohmann::json& j);
// Kernel expression such as "poisson(2)", "conv(gaussian(0.25), triangle-spectrum)",
// "dilated(gaussian, 4)", "cardinal(gaussian(1))", parsed into the JSON form.
nlohmann::json parse_kernel_expression(const std::string& expr);
// Kernel from config text: kernel = "poisson", alpha = 2.0
Kernel parse_kernel(const std::string& text);

struct RegularityReport {
  double delta = 0.0;
  double amalgam_full = 0.0;
  double amalgam_offcenter = 0.0;
  double C = 0.0;
  double tail_bound = 0.0;
  int cells_used = 0;
  int grid_points_per_cell = 0;
  bool pass_A1 = false;
  bool pass_A2 = false;
  // sup over T of the spectrum (cell 0 of the amalgam norm)
  double linf_torus = 0.0;
  // sup over each cell, index k + cells_used
  std::vector<double> cell_sups;

  double cell_sup(int k) const { return cell_sups.at(k + cells_used); }
};

// Grid evaluation of delta, C and the amalgam norm over |k| <= K.
RegularityReport regularity_report(const Kernel& kernel, int K, int M = 1024,
                                   double tail_tolerance = 1e-3);
nlohmann::json to_json(const RegularityReport& r);

}  // namespace qsis
