#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsis/cardinal.hpp"
#include "qsis/interpolation.hpp"

namespace qsis {

// A family (phi_alpha) of generators indexed by an increasing alpha list.
//   regular-gaussian         phi_alpha = gaussian(alpha)
//   convolution              tau_alpha = g_alpha * psi with base g_alpha:
//                              gaussian -> gaussian(1/alpha), poisson -> poisson(alpha),
//                              inverse-multiquadric -> (1 + x^2)^-alpha
//   dilated-approx-identity  tau_alpha = dilated(base, alpha) * psi
//   multiquadric-cardinal    phi_alpha = cardinal function of sqrt(x^2 + alpha^2)
//   constant                 phi_alpha = psi
struct FamilySpec {
  std::string tag;
  std::string base;  // convolution base name, or kernel expression for dilated
  Kernel psi;
  std::vector<double> alphas;

  // phi_alpha before any convolution with psi
  Kernel generator(double alpha) const;
  // kernel used for interpolation (tau_alpha for convolution families)
  Kernel interpolator(double alpha) const;
  bool convolves() const { return tag == "convolution" || tag == "dilated-approx-identity"; }
  void validate() const;
  nlohmann::json to_json() const;
};

// Pointwise torus operators.
//   M_phi g = (delta_phi / phi^) g,  T_{phi,k} g = delta_phi^-1 phi^(. + 2 pi k) g
class SpectralOperators {
 public:
  SpectralOperators(const Kernel& phi, const TorusGrid& grid, double delta = -1.0);
  double delta() const { return delta_; }
  CVec apply_M(const CVec& g) const;
  CVec apply_T(int k, const CVec& g) const;
  // multiplier values on the closed grid
  std::vector<double> T_multiplier(int k) const;
  const std::vector<double>& M_multiplier() const { return m_; }

 private:
  Kernel phi_;
  TorusGrid grid_;
  double delta_;
  double log_delta_ = 0.0;
  std::vector<double> m_;
};

CVec apply_M(const Kernel& phi, const CVec& g, const TorusGrid& grid);
CVec apply_T(const Kernel& phi, int k, const CVec& g, const TorusGrid& grid);

// Window matrix of B_phi (X -> Y) over 0 < |k| <= K: output coefficients in
// the Y basis for input coefficients in the X basis. With Y = X this is the
// companion operator with X replaced by Y.
Eigen::MatrixXcd B_matrix(const Kernel& phi, const ExponentialBasis& X, const ExponentialBasis& Y, int K,
                          double delta);
// Values over the torus of B_phi applied to X coefficients.
CVec apply_B(const Kernel& phi, const NodeSet& X, const NodeSet& Y, const CVec& coeffs, int K = -1,
             const TorusGrid& grid = TorusGrid(2048));

struct BOperatorNorms {
  double norm_B = 0.0;        // |B_phi| on the window span
  double norm_B_tilde = 0.0;  // with X replaced by Y
  double bound_B = 0.0;       // C_Y^2 C_X^2 C_phi
  double bound_B_tilde = 0.0; // C_Y^4 C_phi
  double slack = 2.0;
  bool holds = false;
  int cells = 0;
};
BOperatorNorms b_operator_norms(const Kernel& phi, const NodeSet& X, const NodeSet& Y, double slack = 2.0,
                                const TorusGrid& grid = TorusGrid(2048));
nlohmann::json to_json(const BOperatorNorms& r);

struct ConditionOptions {
  int torus_points = 2048;
  int random_vectors = 8;
  std::uint64_t seed = 1;
  double limit_tolerance = 1e-3;   // final value threshold for limit verdicts
  double interior = 0.05;          // regular-interpolator grid: |xi| <= (1 - interior) pi
  int cells = -1;                  // k-sum depth; -1 = exact for compact spectra, else 16
};

struct AlphaConditions {
  double alpha = 0.0;
  double delta = 0.0;  // of the interpolation kernel
  double C = 0.0;
  std::vector<double> b3;  // per test vector, relative to |g|
  std::vector<double> b4;
  double b3_max = 0.0;
  double b4_max = 0.0;
  double expansion_condition = 0.0;
  // finite-cell quantities of the generator (compact psi only)
  std::optional<double> b2prime;            // sum_{|k|<=N} |phi^(. + 2 pi k)|_Linf(T) / delta
  std::optional<double> b2prime_offcenter;  // same over 0 < |k| <= N
  std::optional<double> offcenter_series;   // C of the generator over all cells
  std::optional<double> b3prime;            // sum_{|k|<=N} sup |phi^/delta - delta_tau/(delta_phi delta_psi)|
  std::optional<double> remark_distance;    // sum_{|k|<=N} sup |phi^/delta - 1|
  double regular_ratio_max = 0.0;           // max over interior of delta/phi^ (generator)
  double regular_ratio_zero = 0.0;          // at xi = 0
  std::string error;
};

struct ConditionReport {
  std::vector<AlphaConditions> rows;
  double C_Phi = 0.0;
  int cells = 0;
  int test_vectors = 0;
  int N = 0;  // cells of psi when compact
  nlohmann::json verdicts;
  nlohmann::json to_json() const;
};

ConditionReport check_conditions(const FamilySpec& family, const NodeSet& X, const NodeSet& Y,
                                 const ConditionOptions& opt = {});
// Fragments with the same row layout.
ConditionReport check_B3_B4(const FamilySpec& family, const NodeSet& X, const NodeSet& Y,
                            const ConditionOptions& opt = {});
ConditionReport check_B2prime_B3prime(const FamilySpec& family, const ConditionOptions& opt = {});
ConditionReport check_regular_interpolator(const FamilySpec& family, const ConditionOptions& opt = {});

// final < tol and nonincreasing over the top half of the list
bool limit_verdict(const std::vector<double>& values, double tol);
bool strictly_decreasing(const std::vector<double>& v);
bool nonincreasing_top_half(const std::vector<double>& v);

struct SweepOptions {
  std::optional<LineGrid> grid;       // default from psi
  double central_fraction = 0.5;
  std::string route = "auto";         // auto | collocation | lattice-cardinal
  int torus_points = 2048;            // for the Fourier-side bound check
  bool bound_check = true;
};

struct SweepRow {
  double alpha = 0.0;
  double l2_error = 0.0;
  double sup_error = 0.0;
  double l2_rel = 0.0;
  double sup_rel = 0.0;
  double kappa = 0.0;
  double coeff_norm = 0.0;
  double node_residual = 0.0;
  std::string route;
  // |phi^ u|_T against (1 + C_Y^4 C_phi)(1 + C_X^2 C_Y^2 C_psi) |f^|_T
  double bound_lhs = 0.0;
  double bound_rhs = 0.0;
  bool bound_holds = true;
  std::string error;
};

struct SweepReport {
  nlohmann::json family;
  nlohmann::json function;  // the test function
  nlohmann::json X, Y;
  std::uint64_t seed = 0;
  double grid_X = 0.0, grid_h = 0.0;
  double central_fraction = 0.5;
  double window = 0.0;
  double f_l2 = 0.0;
  std::vector<SweepRow> rows;

  std::vector<double> l2() const;
  std::vector<double> sup() const;
  bool all_ok() const;
  nlohmann::json to_json() const;
  // alpha,l2_error,sup_error,kappa,coeff_norm
  std::string to_csv() const;
};

SweepReport recovery_sweep(const QsisFunction& f, const FamilySpec& family, const NodeSet& Y,
                           const SweepOptions& opt = {}, std::uint64_t seed = 0);

struct CounterexampleResult {
  std::vector<SweepReport> runs;  // one per seed
  SweepReport control;
  double floor_ratio = 0.5;
  bool persistent_floor = false;  // every run: final > floor_ratio * initial
  bool control_converges = false; // strictly decreasing, final < control_ratio * initial
  double control_ratio = 0.01;
  nlohmann::json to_json() const;
};
// f = psi(. - sqrt2) + 0.25 * (seeded unit combination of the other translates)
QsisFunction counterexample_function(const Kernel& psi, const NodeSet& X, std::uint64_t seed, int special);
CounterexampleResult counterexample_run(const std::vector<double>& alphas, const std::vector<std::uint64_t>& seeds,
                                        int J = 24, const SweepOptions& opt = {});

struct HalfShiftRow {
  int J = 0;
  double kappa_cross = 0.0;      // psi(y_i - x_j), Y = Z + 1/2
  double kappa_operator = 0.0;   // A_YY^-1 A_YX
  double kappa_control = 0.0;    // psi(x_i - x_j), X = Z
  double smin_cross = 0.0;
  bool solvable = true;
};
struct HalfShiftReport {
  std::vector<HalfShiftRow> rows;
  bool cross_increasing = false;
  bool control_stabilizes = false;
  double stabilization_tolerance = 0.05;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};
HalfShiftReport half_shift_conditioning(const std::vector<int>& Js, const Kernel& psi = gaussian(1.0),
                                        double stabilization_tolerance = 0.05);

struct FourierSampleCheck {
  double max_discrepancy = 0.0;
  double scale = 0.0;
  int cells = 0;
};
// Fourier-side samples of f at Y against space-side evaluation.
FourierSampleCheck fourier_side_sample_check(const QsisFunction& f, const NodeSet& Y, int K = -1,
                                             const TorusGrid& grid = TorusGrid(4096));
// Fourier-side samples of an interpolant at its own nodes against the data.
FourierSampleCheck fourier_side_sample_check(const Interpolant& g, const std::vector<double>& data, int K = -1,
                                             const TorusGrid& grid = TorusGrid(4096));

}  // namespace qsis
