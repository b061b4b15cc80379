#include <algorithm>
#include <cmath>
#include <limits>

#include "qsis/error.hpp"
#include "qsis/kernel.hpp"

namespace qsis {

namespace {

// spectrum on the closed cell [(2k-1)pi, (2k+1)pi] with M intervals; the right
// endpoint takes the inner limit.
std::vector<double> closed_cell(const Kernel& kernel, int k, int M) {
  std::vector<double> v(M + 1);
  const double shift = kTwoPi * k;
  for (int m = 0; m < M; ++m) v[m] = kernel.fourier(-kPi + kTwoPi * m / M + shift);
  v[M] = kernel.fourier(-(kPi + shift));
  return v;
}

}  // namespace

RegularityReport regularity_report(const Kernel& kernel, int K, int M, double tail_tolerance) {
  if (K < 1) throw Error(ErrorKind::usage, "regularity report needs K >= 1", K);
  if (M < 2) throw Error(ErrorKind::usage, "regularity report needs M >= 2", M);

  RegularityReport r;
  r.cells_used = K;
  r.grid_points_per_cell = M;
  r.cell_sups.assign(2 * K + 1, 0.0);

  const auto support = kernel.support_half_width();
  bool nonneg = true;
  bool finite = true;
  for (int k = -K; k <= K; ++k) {
    // an off-centre cell counts only if its open interior meets the open support
    if (support && k != 0 && (2.0 * std::abs(k) - 1.0) * kPi >= *support) continue;
    auto v = closed_cell(kernel, k, M);
    double sup = 0.0;
    for (double x : v) {
      if (!std::isfinite(x)) finite = false;
      if (x < 0.0) nonneg = false;
      sup = std::max(sup, x);
    }
    r.cell_sups[k + K] = sup;
    if (k == 0) r.delta = *std::min_element(v.begin(), v.end());
  }
  r.linf_torus = r.cell_sups[K];

  if (kernel.monotone() && r.delta > 0.0) {
    double at_edge = kernel.fourier(-kPi);
    if (std::fabs(r.delta - at_edge) > 1e-13 * at_edge)
      throw Error(ErrorKind::numeric, "grid minimum of a monotone spectrum disagrees with its value at pi",
                  r.delta - at_edge);
  }

  double off = 0.0;
  for (int a = K; a >= 1; --a) off += r.cell_sups[K + a] + r.cell_sups[K - a];
  r.amalgam_offcenter = off;
  r.amalgam_full = r.linf_torus + off;
  r.C = r.delta > 0.0 ? off / r.delta : std::numeric_limits<double>::infinity();
  r.tail_bound = kernel.cell_tail_bound(K);
  r.pass_A1 = nonneg && finite;
  r.pass_A2 = r.delta > 0.0 && finite && std::isfinite(r.amalgam_full) &&
              r.tail_bound <= tail_tolerance * r.amalgam_full;
  return r;
}

nlohmann::json to_json(const RegularityReport& r) {
  return nlohmann::json{
      {"delta", r.delta},
      {"amalgam-full", r.amalgam_full},
      {"amalgam-offcenter", r.amalgam_offcenter},
      {"C", r.C},
      {"tail-bound", r.tail_bound},
      {"cells-used", r.cells_used},
      {"grid-points-per-cell", r.grid_points_per_cell},
      {"pass-A1", r.pass_A1},
      {"pass-A2", r.pass_A2},
      {"linf-torus", r.linf_torus},
      {"cell-sups", r.cell_sups},
  };
}

}  // namespace qsis
