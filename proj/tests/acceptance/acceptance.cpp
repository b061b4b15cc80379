// Acceptance suite: one line per criterion, "criterion N PASS|FAIL ...".
// Exit status is nonzero when a criterion outside --known-red fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qsis/cardinal.hpp"
#include "qsis/error.hpp"
#include "qsis/harness.hpp"
#include "qsis/recovery.hpp"

using namespace qsis;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// 1. Poisson constants against the closed forms.
Outcome poisson_constants() {
  double worst = 0.0;
  for (double a : {1.0, 2.0, 4.0}) {
    auto r = regularity_report(poisson(a), 8, 1024);
    const double c = std::sqrt(2.0 / kPi) * a;
    const double delta = c / (a * a + kPi * kPi);
    worst = std::max(worst, rel(r.delta, delta));
    for (int k = -8; k <= 8; ++k) {
      if (k == 0) continue;
      const double m = (2.0 * std::abs(k) - 1.0) * kPi;
      const double sup = c / (a * a + m * m);
      worst = std::max(worst, rel(r.cell_sup(k), sup));
      worst = std::max(worst, rel(r.cell_sup(k) / r.delta, (a * a + kPi * kPi) / (a * a + m * m)));
    }
  }
  return {worst <= 1e-10, "max relative deviation " + fmt("%.3g", worst)};
}

// 2. Finite-cell statistic for the Poisson family on the triangle generator.
Outcome b2prime_limit() {
  FamilySpec fam{"convolution", "poisson", triangle_spectrum(), {1.0, 4.0, 16.0, 64.0}};
  auto rep = check_B2prime_B3prime(fam);
  std::vector<double> v;
  for (const auto& r : rep.rows) v.push_back(r.b2prime.value_or(std::nan("")));
  bool increasing = true;
  for (size_t i = 1; i < v.size(); ++i) increasing = increasing && v[i] > v[i - 1];
  const bool limit = std::fabs(v.back() - 3.0) <= 0.02 * 3.0;
  std::ostringstream d;
  d << "values";
  for (double x : v) d << ' ' << fmt("%.6g", x);
  d << "; within 2% of 3 at alpha=64: " << (limit ? "yes" : "no") << "; increasing: " << (increasing ? "yes" : "no");
  return {limit && increasing, d.str()};
}

// 3. Cardinality on the integers.
Outcome cardinality() {
  double worst = 0.0;
  std::ostringstream d;
  for (const Kernel& phi : {gaussian(1.0), poisson(2.0), triangle_spectrum()}) {
    CardinalFunction L(phi, -1, 1 << 15);
    double e = 0.0;
    for (int k = -8; k <= 8; ++k) e = std::max(e, std::fabs(L.eval(k) - (k == 0 ? 1.0 : 0.0)));
    d << phi.tag() << ' ' << fmt("%.2g", e) << "; ";
    worst = std::max(worst, e);
  }
  return {worst <= 1e-6, d.str()};
}

// 4. The sinc cardinal function is sinc.
Outcome cardinal_sinc() {
  CardinalFunction L(sinc_kernel());
  double worst = 0.0;
  for (int i = -16; i <= 16; ++i) {
    const double x = 0.25 * i;
    const double s = i == 0 ? 1.0 : std::sin(kPi * x) / (kPi * x);
    worst = std::max(worst, std::fabs(L.eval(x) - s));
  }
  return {worst <= 1e-8, "sup deviation " + fmt("%.3g", worst)};
}

// 5. Gram identity on the lattice.
Outcome lattice_gram() {
  NodeSet Z = NodeSet::lattice(16);
  auto G = gram_exponentials(Z);
  const double dev = (G - kTwoPi * Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
  const double C = riesz_estimate(Z).C;
  return {dev <= 1e-12 && std::fabs(C - 1.0) <= 1e-12,
          "|G - 2pi I|_max " + fmt("%.3g", dev) + ", C - 1 = " + fmt("%.3g", C - 1.0)};
}

// 6. Interpolation in the generating space returns the generating coefficients.
Outcome self_interpolation() {
  double worst_ratio = 0.0, worst_res = 0.0;
  for (const Kernel& psi : {gaussian(1.0), triangle_spectrum()})
    for (const NodeSet& X : {NodeSet::lattice(24), NodeSet::kadec_alternating(24, 0.2)}) {
      CollocationSolver solver(assemble(psi, X));
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto f = random_function(psi, X, seed);
        auto g = solve(solver, sample(f, X));
        double d = 0.0, n = 0.0;
        for (int j = 0; j < X.size(); ++j) {
          d += std::pow(g.a[j] - f.coefficients()[j], 2);
          n += std::pow(f.coefficients()[j], 2);
        }
        worst_ratio = std::max(worst_ratio, std::sqrt(d / n) / (g.kappa * 1e-12));
        worst_res = std::max(worst_res, g.residual);
      }
    }
  return {worst_ratio <= 1.0 && worst_res < 1e-10,
          "coefficient error / (kappa 1e-12) " + fmt("%.3g", worst_ratio) + ", node residual " + fmt("%.3g", worst_res)};
}

Outcome recover_preset(const std::string& preset, std::string& d) {
  auto r = run_command("recover", {{"preset", preset}, {"conditions", false}}, "");
  const auto& v = r.report.at("verdict");
  std::vector<double> l2;
  for (const auto& row : r.report.at("result").at("sweep").at("rows")) l2.push_back(row.at("l2_error").get<double>());
  const double ratio = l2.back() / l2.front();
  const bool ok = v.at("rows-ok").get<bool>() && v.at("l2-strictly-decreasing").get<bool>() &&
                  v.at("sup-strictly-decreasing").get<bool>() && ratio < 0.01;
  d += preset + " final/initial " + fmt("%.3g", ratio) + (ok ? " ok; " : " FAILED; ");
  return {ok, ""};
}

// 7. Recovery convergence for the two named presets.
Outcome recovery_convergence() {
  std::string d;
  const bool a = recover_preset("gaussian-conv-triangle", d).pass;
  const bool b = recover_preset("regular-gaussian-sinc", d).pass;
  return {a && b, d};
}

// 8. Counterexample floor and converging control.
Outcome counterexample() {
  auto r = run_command("counterexample", {{"preset", "sqrt2-swap"}}, "");
  const auto& res = r.report.at("result");
  auto l2_of = [](const nlohmann::json& sweep) {
    std::vector<double> v;
    for (const auto& row : sweep.at("rows")) v.push_back(row.at("l2_error").get<double>());
    return v;
  };
  std::ostringstream d;
  bool floor = res.at("runs").size() == 3;
  d << "final/initial per seed";
  for (const auto& run : res.at("runs")) {
    auto v = l2_of(run);
    d << ' ' << fmt("%.3g", v.back() / v.front());
    floor = floor && v.back() > 0.5 * v.front();
  }
  auto c = l2_of(res.at("control"));
  std::vector<double> csup;
  for (const auto& row : res.at("control").at("rows")) csup.push_back(row.at("sup_error").get<double>());
  const bool control = strictly_decreasing(c) && strictly_decreasing(csup) && c.back() < 0.01 * c.front();
  d << "; control " << fmt("%.3g", c.back() / c.front());
  return {floor && control, d.str()};
}

CVec random_cvec(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  CVec v(n);
  for (auto& x : v) x = cplx(N(rng), N(rng));
  return v;
}

// 9. Operator and sampling bounds over seeded random instances.
Outcome operator_bounds() {
  int violations = 0, instances = 0;
  std::ostringstream d;
  const std::vector<Kernel> kernels{gaussian(1.0),          poisson(2.0), triangle_spectrum(),
                                    inverse_multiquadric(2.0), sinc_kernel(),
                                    convolve(gaussian(0.5), triangle_spectrum())};
  const TorusGrid tg(1024);

  // multiplier and off-centre sums
  int m_viol = 0, t_viol = 0;
  for (int i = 0; i < 100; ++i) {
    std::mt19937_64 rng(1000 + i);
    const Kernel& phi = kernels[i % kernels.size()];
    const int K = spectrum_cells(phi, 64);
    auto rep = regularity_report(phi, K, tg.M());
    SpectralOperators ops(phi, tg);
    CVec g = random_cvec(tg.size(), rng);
    const double gn = l2_norm_torus(g, tg);
    if (l2_norm_torus(ops.apply_M(g), tg) > gn * (1.0 + 1e-12)) ++m_viol;
    double s = 0.0;
    for (int k = -K; k <= K; ++k)
      if (k != 0) s += l2_norm_torus(ops.apply_T(k, g), tg);
    if (s > rep.C * gn * (1.0 + 1e-10) + 1e-300) ++t_viol;
  }
  instances += 200;
  violations += m_viol + t_viol;
  d << "M " << m_viol << ", T-sum " << t_viol;

  // prolongation
  int p_viol = 0;
  const std::vector<NodeSet> windows{NodeSet::lattice(12), NodeSet::kadec_alternating(12, 0.2),
                                     NodeSet::sqrt2_swap(12)};
  for (int i = 0; i < 100; ++i) {
    std::mt19937_64 rng(2000 + i);
    const NodeSet& X = windows[i % windows.size()];
    ExponentialBasis b(X, tg);
    const double C = riesz_estimate(X).C;
    CVec c = random_cvec(X.size(), rng);
    double cn = 0.0;
    for (auto v : c) cn += std::norm(v);
    cn = std::sqrt(cn);
    const int k = static_cast<int>(i % 17) - 8;
    if (l2_norm_torus(b.prolong(c, k), tg) > C * C * std::sqrt(kTwoPi) * cn * (1.0 + 1e-10)) ++p_viol;
  }
  instances += 100;
  violations += p_viol;
  d << ", prolongation " << p_viol;

  // sample bound
  int s_viol = 0;
  const std::vector<Kernel> space_kernels{gaussian(1.0), triangle_spectrum(), poisson(2.0)};
  for (int i = 0; i < 100; ++i) {
    const Kernel& psi = space_kernels[i % 3];
    const NodeSet& X = windows[(i / 3) % 3];
    const NodeSet& Y = windows[(i / 9) % 3];
    auto kx = space_constants(psi, X);
    auto f = random_function(psi, X, 3000 + i);
    auto sb = sample_bound_check(f, Y, l2_norm(f, default_line_grid(psi)), kx, riesz_estimate(Y));
    if (!sb.holds) ++s_viol;
  }
  instances += 100;
  violations += s_viol;
  d << ", sample bound " << s_viol;

  // coefficient bound on unit-scale kernels
  int c_viol = 0;
  for (int i = 0; i < 100; ++i) {
    const Kernel& psi = space_kernels[i % 3];
    const Kernel& phi = space_kernels[(i / 3) % 3];
    const NodeSet& X = windows[(i / 9) % 3];
    const NodeSet& Y = windows[(i / 27) % 3];
    auto f = random_function(psi, X, 4000 + i);
    auto data = sample(f, Y);
    auto g = solve(assemble(phi, Y), data);
    auto reg = regularity_report(phi, spectrum_cells(phi, 256));
    if (!coefficient_bound(g, data, reg, riesz_estimate(X), riesz_estimate(Y)).holds) ++c_viol;
  }
  instances += 100;
  violations += c_viol;
  d << ", coefficient bound " << c_viol;

  // recovery-operator bound, one row per (seed, alpha)
  int r_viol = 0, rows = 0;
  SweepOptions so;
  so.grid = LineGrid(32.0, 1.0 / 16.0);
  so.torus_points = 1024;
  const std::vector<FamilySpec> fams{
      {"convolution", "gaussian", triangle_spectrum(), {1.0, 4.0, 16.0}},
      {"convolution", "poisson", triangle_spectrum(), {1.0, 4.0, 16.0}},
      {"regular-gaussian", "", gaussian(1.0), {0.5, 1.0, 2.0}},
  };
  for (int i = 0; rows < 100; ++i) {
    const FamilySpec& fam = fams[i % fams.size()];
    const NodeSet& X = windows[(i / 3) % 3];
    auto f = random_function(fam.psi, X, 5000 + i);
    auto rep = recovery_sweep(f, fam, X, so, 5000 + i);
    for (const auto& r : rep.rows) {
      ++rows;
      if (!r.error.empty() || !r.bound_holds) ++r_viol;
    }
  }
  instances += rows;
  violations += r_viol;
  d << ", recovery operator " << r_viol << "/" << rows;

  // B-operator norms with the documented 2x slack
  int b_viol = 0, b_cases = 0;
  for (const Kernel& phi : {convolve(gaussian(0.5), triangle_spectrum()), convolve(poisson(2.0), triangle_spectrum()),
                            triangle_spectrum(), gaussian(1.0)})
    for (const NodeSet& X : {NodeSet::lattice(8), NodeSet::kadec_alternating(8, 0.2)}) {
      ++b_cases;
      if (!b_operator_norms(phi, X, NodeSet::kadec_alternating(8, 0.2), 2.0, tg).holds) ++b_viol;
    }
  instances += b_cases;
  violations += b_viol;
  d << ", B-operators " << b_viol << "/" << b_cases;

  return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(instances) +
                               " instances (" + d.str() + ")"};
}

// 10. Bessel closed form and the inverse multiquadric cell ratio.
Outcome bessel_validation() {
  double worst = 0.0;
  for (double z : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double exact = std::sqrt(kPi / (2.0 * z)) * std::exp(-z);
    worst = std::max(worst, rel(bessel_k(0.5, z), exact));
  }
  const Kernel imq = inverse_multiquadric(30.0);
  const double ref = imq.fourier(kPi);
  double ratio_dev = 0.0;
  for (double xi : {0.0, kPi / 2, -kPi / 2})
    for (int k = -1; k <= 1; ++k) ratio_dev = std::max(ratio_dev, std::fabs(imq.fourier(xi + kTwoPi * k) / ref - 1.0));
  const bool a = worst <= 1e-10, b = ratio_dev <= 0.05;
  return {a && b, "K_1/2 relative error " + fmt("%.3g", worst) + (a ? " ok" : " FAILED") +
                      "; alpha=30 cell ratio max |r - 1| = " + fmt("%.3g", ratio_dev) + (b ? " ok" : " FAILED")};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known_red;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--known-red" && i + 1 < argc) {
      std::stringstream s(argv[++i]);
      std::string tok;
      while (std::getline(s, tok, ',')) known_red.insert(std::stoi(tok));
    }
  }
  const std::vector<Criterion> all{
      {1, "Poisson constants", 1.0, poisson_constants},
      {2, "finite-cell limit", 5.0, b2prime_limit},
      {3, "cardinality", 30.0, cardinality},
      {4, "sinc cardinal function", 5.0, cardinal_sinc},
      {5, "lattice Gram identity", 1.0, lattice_gram},
      {6, "self-interpolation", 30.0, self_interpolation},
      {7, "recovery convergence", 180.0, recovery_convergence},
      {8, "non-recovery counterexample", 180.0, counterexample},
      {9, "operator bounds", 60.0, operator_bounds},
      {10, "Bessel validation", 10.0, bessel_validation},
  };
  int unexpected = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt <= c.limit_s;
    const bool pass = o.pass && in_time;
    std::printf("criterion %d %s %s: %s [%.2fs of %.0fs]%s\n", c.id, pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), dt, c.limit_s, known_red.count(c.id) && !pass ? " (known red)" : "");
    std::fflush(stdout);
    if (!pass && !known_red.count(c.id)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
