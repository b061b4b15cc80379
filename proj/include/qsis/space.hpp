#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsis/kernel.hpp"
#include "qsis/nodes.hpp"

namespace qsis {

// f = sum_j c_j psi(. - x_j) over a finite node window.
class QsisFunction {
 public:
  QsisFunction(Kernel psi, NodeSet nodes, std::vector<double> coeffs);

  const Kernel& kernel() const { return psi_; }
  const NodeSet& nodes() const { return nodes_; }
  const std::vector<double>& coefficients() const { return c_; }
  double coeff_norm() const;

  double eval(double x) const;
  std::vector<double> eval(const std::vector<double>& xs) const;
  // f^ on T shifted by 2 pi k, i.e. psi^(xi + 2 pi k) sum_j c_j e^{-i x_j (xi + 2 pi k)}
  CVec spectrum_cell(const ExponentialBasis& basis, int k) const;
  nlohmann::json to_json() const;

 private:
  Kernel psi_;
  NodeSet nodes_;
  std::vector<double> c_;
};

// i.i.d. standard normal entries scaled to unit l2 norm.
std::vector<double> random_unit_coefficients(int n, std::uint64_t seed);
QsisFunction random_function(const Kernel& psi, const NodeSet& nodes, std::uint64_t seed);

std::vector<double> sample(const QsisFunction& f, const NodeSet& at);

// X = 48 for kernels with fast spatial decay, 256 otherwise; h = 1/64.
LineGrid default_line_grid(const Kernel& psi);
// Cells needed to cover the spectrum: exact for compact spectra, otherwise
// from the decay envelope (tail below 1e-12, capped).
int spectrum_cells(const Kernel& psi, int cap = 512);

// Line-grid L2 norm. Sinc gets an explicit correction for the O(1/x) tail.
// Accuracy error when the remaining tail estimate exceeds rel_tol * value.
double l2_norm(const QsisFunction& f, const LineGrid& grid, double rel_tol = 1e-6);

// Constants of a (kernel, nodes) pair used in every bound check.
struct SpaceConstants {
  RegularityReport regularity;
  RieszEstimate riesz;
};
SpaceConstants space_constants(const Kernel& psi, const NodeSet& nodes);

struct NormEquivalence {
  double f_norm = 0.0;
  double c_norm = 0.0;
  double s_norm = 0.0;       // |(f(x_j))|
  double f_over_c = 0.0;
  double s_over_c = 0.0;
  double f_over_s = 0.0;
  double lower = 0.0;        // delta / C^2
  double upper = 0.0;        // C^2 |psi^|_W
  bool within = false;       // lower <= f_over_c <= upper
};
NormEquivalence norm_equivalence_report(const QsisFunction& f, const LineGrid& grid,
                                        const SpaceConstants& k);
NormEquivalence norm_equivalence_report(const QsisFunction& f);
nlohmann::json to_json(const NormEquivalence& r);

struct BandlimitCheck {
  int cells = 0;
  double energy_torus = 0.0;   // |f^|^2 over T
  double energy_total = 0.0;   // sum over all cells = |f|^2
  double tail_fraction = 0.0;  // energy outside T / total
  double sandwich_upper = 0.0; // (1 + C^4 C_psi^2) |f^|^2_T
  bool sandwich_holds = false;
  std::vector<double> cell_energies;  // index k + cells
};
BandlimitCheck bandlimit_check(const QsisFunction& f, const SpaceConstants& k, int K = -1,
                               const TorusGrid& grid = TorusGrid(4096));
nlohmann::json to_json(const BandlimitCheck& r);

struct SampleBound {
  double lhs = 0.0;      // |(f(y_j))|
  double rhs_f = 0.0;    // (1/sqrt(2pi)) C_X^2 C_Y^3 (|psi^|_Linf(T)/delta + C_psi) |f|
  double rhs_c = 0.0;    // (1/sqrt(2pi)) C_X^3 C_Y^3 |psi^|_W |c|
  bool holds = false;
};
SampleBound sample_bound_check(const QsisFunction& f, const NodeSet& Y, double f_norm,
                               const SpaceConstants& kx, const RieszEstimate& ry);

// f(y_j) from the cellwise expansion
//   (1/sqrt(2pi)) sum_k int_T psi^(xi + 2 pi k) P_k(xi) e^{i y_j (xi + 2 pi k)} d xi.
std::vector<double> fourier_side_samples(const QsisFunction& f, const NodeSet& Y, int K = -1,
                                         const TorusGrid& grid = TorusGrid(4096));

}  // namespace qsis
