#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qsis/kernel.hpp"

namespace qsis {

class CardinalImpl;

// Cardinal function L of a generator on Z, defined through its spectrum
//   L^(xi) = (1/sqrt(2pi)) phi^(xi) / sum_k phi^(xi + 2 pi k).
// Space values come from one of two routes:
//   direct           inverse transform of L^ on a fixed trapezoid grid
//   shift-expansion  (1/sqrt(2pi)) sum_n b_n phi(x - n), b_n the Fourier
//                    coefficients of 1/sigma (needs a closed-form phi)
class CardinalFunction {
 public:
  // K < 0 picks the periodization depth from the decay envelope.
  explicit CardinalFunction(const Kernel& base, int K = -1, int M = 1 << 15);
  // Wraps a kernel of family cardinal or multiquadric-cardinal.
  static CardinalFunction from_kernel(const Kernel& cardinal);

  const Kernel& kernel() const { return kernel_; }
  // Generator; empty for the multiquadric cardinal.
  const Kernel& base() const;
  int K() const;
  const std::string& route() const;

  double spectrum(double xi) const;
  double log_symbol(double xi) const;
  // sigma on the closed torus grid
  std::vector<double> symbol(const TorusGrid& grid) const;
  // max sigma / min sigma over T
  double symbol_ratio() const;

  double eval(double x) const;
  std::vector<double> eval(const std::vector<double>& xs) const;
  // Values on every node of a line grid, served from the evaluation cache.
  std::vector<double> tabulate(const LineGrid& grid) const;
  // sum_j samples[j] L(x - j) for lattice indices j = -J..J.
  std::vector<double> lattice_interpolant(const std::vector<double>& samples,
                                          const std::vector<double>& xs) const;
  const std::vector<double>& shift_coefficients() const;

 private:
  struct Wrap {};
  CardinalFunction(Wrap, Kernel k);
  const CardinalImpl& impl() const;
  Kernel kernel_;
};

// Cardinal function packaged as a catalog kernel (family "cardinal").
Kernel cardinal_kernel(const Kernel& base, int K = -1, int M = 1 << 15);

// Spectrum with an explicit periodization depth |k| <= K. Degeneracy error
// when the symbol vanishes.
double cardinal_spectrum(const Kernel& phi, double xi, int K);
// Inverse transform of cardinal_spectrum at x on [-Xi, Xi] with M intervals.
double cardinal_eval(const Kernel& phi, double x, double Xi, int M, int K);

struct CardinalRegularity {
  RegularityReport report;       // for L
  RegularityReport base_report;  // for phi
  // C_phi (delta_phi^-1 |phi^|_{Linf(T)} + C_phi)
  double bound = 0.0;
  bool bound_holds = false;
};
CardinalRegularity cardinal_regularity(const Kernel& phi, int K = -1, int M = 1024);
nlohmann::json to_json(const CardinalRegularity& r);

double lattice_interpolant_via_cardinal(const std::vector<double>& samples, const Kernel& phi, double x);

struct CardinalSweepRow {
  double alpha = 0.0;
  double l2 = 0.0;   // |L_{phi_alpha} - L_psi| on the grid
  double sup = 0.0;
  double generator_l2 = 0.0;  // |phi_alpha - psi| on the grid
  double generator_sup = 0.0;
  std::string route;
};
std::vector<CardinalSweepRow> cardinal_convergence_sweep(const std::function<Kernel(double)>& family,
                                                         const Kernel& psi,
                                                         const std::vector<double>& alphas,
                                                         const LineGrid& grid);

}  // namespace qsis
