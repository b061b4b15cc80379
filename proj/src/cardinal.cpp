#include "qsis/cardinal.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <mutex>
#include <unordered_map>

#include "qsis/error.hpp"

namespace qsis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// reduce xi to xi0 in [-pi, pi] with xi = xi0 + 2 pi k0
double reduce(double xi, long& k0) {
  k0 = std::lround(xi / kTwoPi);
  return xi - kTwoPi * static_cast<double>(k0);
}

double log_sum_exp(const std::vector<double>& t) {
  double m = -kInf;
  for (double v : t) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : t) s += std::exp(v - m);
  return m + std::log(s);
}

}  // namespace

// Shared by the catalog cardinal and the multiquadric cardinal. The generator
// enters only through log_g (log of its spectrum, +inf allowed at isolated
// singular points) and an optional closed-form periodization.
class CardinalImpl final : public SpectralKernelBase {
 public:
  struct Setup {
    Family family = Family::cardinal;
    Kernel base;            // empty for the multiquadric cardinal
    double alpha = 1.0;
    std::function<double(double)> log_g;
    std::function<double(double)> log_env;  // log sup of g over |xi| >= r
    SpectralDecay base_decay;
    bool use_closed_symbol = false;
    int K = 1;
    int M = 1 << 15;
    nlohmann::json description;
  };

  explicit CardinalImpl(Setup s) : s_(std::move(s)) {
    if (s_.K < 0) throw Error(ErrorKind::usage, "periodization depth must be >= 0", s_.K);
    // symbol range over T
    const TorusGrid grid(1024);
    log_sigma_min_ = kInf;
    log_sigma_max_ = -kInf;
    for (int m = 0; m <= grid.M(); ++m) {
      double ls = log_symbol(grid.node(m));
      log_sigma_min_ = std::min(log_sigma_min_, ls);
      log_sigma_max_ = std::max(log_sigma_max_, ls);
    }
    if (!(log_sigma_min_ > -kInf))
      throw Error(ErrorKind::degeneracy, "periodized spectrum vanishes on the torus");

    decay_ = s_.base_decay;
    if (decay_.kind == SpectralDecay::Kind::algebraic)
      decay_.constant *= kInvSqrt2Pi * std::exp(-log_sigma_min_);

    // direct route when the spectrum decays fast enough for a finite cutoff
    const double tol = 1e-12;
    double Xi = 0.0;
    bool direct = true;
    try {
      Xi = Kernel(std::shared_ptr<const KernelImpl>(this, [](const KernelImpl*) {})).auto_cutoff(tol);
      if (Xi > 4000.0) direct = false;
    } catch (const Error&) {
      direct = false;
    }
    if (!direct && !(s_.base.valid() && s_.base.space_closed_form())) {
      // no alternative: accept a large cutoff and let the tail estimate speak
      direct = true;
      if (!(Xi > 0.0)) Xi = 4000.0;
    }
    if (direct) {
      route_ = "direct";
      // keep trapezoid images at least 500 away from the origin
      int M = std::max(s_.M, static_cast<int>(std::ceil(2.0 * Xi * 500.0 / kTwoPi)));
      M += M % 2;
      init_quadrature_fixed(Xi, M);
    } else {
      route_ = "shift-expansion";
      build_shift_expansion();
    }
  }

  Family family() const override { return s_.family; }
  double alpha() const override { return s_.alpha; }
  const Kernel& base() const { return s_.base; }
  int K() const { return s_.K; }
  const std::string& route() const { return route_; }
  const std::vector<double>& shift_coefficients() const { return b_; }
  double symbol_ratio() const { return std::exp(log_sigma_max_ - log_sigma_min_); }

  double log_symbol(double xi) const {
    long k0;
    double x0 = reduce(xi, k0);
    if (s_.use_closed_symbol) {
      auto v = s_.base.symbol(x0);
      return std::log(*v);
    }
    std::vector<double> t;
    t.reserve(2 * s_.K + 1);
    for (int k = -s_.K; k <= s_.K; ++k) t.push_back(s_.log_g(x0 + kTwoPi * k));
    return log_sum_exp(t);
  }

  double fourier(double xi) const override {
    double ls = log_symbol(xi);
    if (ls == -kInf) throw Error(ErrorKind::degeneracy, "cardinal denominator vanishes", xi);
    double num = s_.log_g(xi);
    if (ls == kInf) return num == kInf ? kInvSqrt2Pi : 0.0;
    if (num == -kInf) return 0.0;
    return std::min(kInvSqrt2Pi, kInvSqrt2Pi * std::exp(num - ls));
  }

  double log_fourier(double xi) const override {
    double v = fourier(xi);
    return v > 0.0 ? std::log(v) : -kInf;
  }

  double space(double x) const override {
    {
      std::lock_guard<std::mutex> lk(mu_);
      auto it = cache_.find(x);
      if (it != cache_.end()) return it->second;
    }
    double v;
    if (route_ == "direct") {
      v = SpectralKernelBase::space(x);
    } else {
      v = 0.0;
      const int n0 = static_cast<int>(b_.size() / 2);
      for (int i = static_cast<int>(b_.size()) - 1; i >= 0; --i) v += b_[i] * s_.base.space(x - (i - n0));
      v *= kInvSqrt2Pi;
    }
    std::lock_guard<std::mutex> lk(mu_);
    cache_.emplace(x, v);
    return v;
  }

  bool space_closed_form() const override { return false; }
  bool monotone() const override { return false; }
  SpectralDecay decay() const override { return decay_; }

  double envelope(double r) const override {
    double le = s_.log_env(r);
    if (le == -kInf) return 0.0;
    return std::min(kInvSqrt2Pi, kInvSqrt2Pi * std::exp(le - log_sigma_min_));
  }

  double space_tail_energy(double R) const override {
    if (route_ == "direct") return SpectralKernelBase::space_tail_energy(R);
    double s = 0.0;
    for (double b : b_) s += std::fabs(b);
    const double nmax = static_cast<double>(b_.size() / 2);
    double amp = kInvSqrt2Pi * s;
    return amp * amp * s_.base.space_tail_energy(std::max(R - nmax, 0.0));
  }

  std::vector<double> synthesize(const std::vector<double>& centers, const std::vector<double>& coeffs,
                                 const std::vector<double>& xs) const override {
    if (route_ == "direct") return SpectralKernelBase::synthesize(centers, coeffs, xs);
    if (centers.size() != coeffs.size())
      throw Error(ErrorKind::usage, "centers and coefficients differ in length");
    std::vector<double> c2, a2;
    const int n0 = static_cast<int>(b_.size() / 2);
    for (size_t j = 0; j < centers.size(); ++j)
      for (size_t i = 0; i < b_.size(); ++i) {
        c2.push_back(centers[j] + (static_cast<int>(i) - n0));
        a2.push_back(kInvSqrt2Pi * coeffs[j] * b_[i]);
      }
    return s_.base.synthesize(c2, a2, xs);
  }

  nlohmann::json describe() const override { return s_.description; }

 private:
  void build_shift_expansion() {
    // b_n = (1/2pi) int_T e^{i n xi} / sigma(xi); 1/sigma is smooth and
    // periodic so the periodic trapezoid converges geometrically
    const int Nq = 4096;
    std::vector<double> inv(Nq);
    for (int m = 0; m < Nq; ++m) inv[m] = std::exp(-log_symbol(-kPi + kTwoPi * m / Nq));
    std::vector<double> b(Nq / 2);
    double bmax = 0.0;
    for (int n = 0; n < Nq / 2; ++n) {
      double s = 0.0;
      for (int m = 0; m < Nq; ++m) s += inv[m] * std::cos(n * (-kPi + kTwoPi * m / Nq));
      b[n] = s / Nq;
      bmax = std::max(bmax, std::fabs(b[n]));
    }
    int nmax = 0;
    for (int n = 0; n < Nq / 2; ++n)
      if (std::fabs(b[n]) > 1e-14 * bmax) nmax = n;  // roundoff floor of the sum
    if (nmax >= Nq / 2 - 8)
      throw Error(ErrorKind::accuracy, "shift expansion of the cardinal function does not converge", nmax);
    b_.assign(2 * nmax + 1, 0.0);
    for (int n = -nmax; n <= nmax; ++n) b_[n + nmax] = b[std::abs(n)];
  }

  Setup s_;
  double log_sigma_min_ = 0.0;
  double log_sigma_max_ = 0.0;
  SpectralDecay decay_;
  std::string route_;
  std::vector<double> b_;
  mutable std::mutex mu_;
  mutable std::unordered_map<double, double> cache_;
};

namespace {

int default_depth(const Kernel& base) {
  // tail of the periodization below 1e-13 of the spectrum's peak
  return base.auto_cells(1e-13, 4096);
}

}  // namespace

Kernel cardinal_kernel(const Kernel& base, int K, int M) {
  if (!base.valid()) throw Error(ErrorKind::usage, "cardinal function needs a base kernel");
  CardinalImpl::Setup s;
  s.family = Family::cardinal;
  s.base = base;
  s.alpha = base.alpha();
  auto p = base.shared();
  s.log_g = [p](double xi) { return p->log_fourier(xi); };
  s.log_env = [p](double r) {
    double e = p->envelope(r);
    return e > 0.0 ? std::log(e) : -kInf;
  };
  s.base_decay = base.decay();
  s.use_closed_symbol = K < 0 && base.symbol(0.0).has_value();
  s.K = K < 0 ? default_depth(base) : K;
  s.M = M;
  s.description = {{"family", "cardinal"}, {"base", base.to_json()}};
  if (K >= 0) s.description["K"] = K;
  return Kernel(std::make_shared<CardinalImpl>(std::move(s)));
}

Kernel multiquadric_cardinal(double c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw Error(ErrorKind::range, "multiquadric shape parameter must be positive", c);
  CardinalImpl::Setup s;
  s.family = Family::multiquadric_cardinal;
  s.alpha = c;
  // g(xi) = K_1(c|xi|)/|xi|, singular at the origin
  s.log_g = [c](double xi) {
    double z = std::fabs(xi);
    if (z == 0.0) return kInf;
    return log_bessel_k(1.0, c * z) - std::log(z);
  };
  s.log_env = [c](double r) {
    if (r <= 0.0) return kInf;
    return log_bessel_k(1.0, c * r) - std::log(r);
  };
  s.base_decay = {SpectralDecay::Kind::exponential, 0, 0, 0};
  s.K = static_cast<int>(std::ceil(30.0 / (kTwoPi * c))) + 1;
  s.description = {{"family", "multiquadric-cardinal"}, {"alpha", c}};
  return Kernel(std::make_shared<CardinalImpl>(std::move(s)));
}

CardinalFunction::CardinalFunction(const Kernel& base, int K, int M) : kernel_(cardinal_kernel(base, K, M)) {}

CardinalFunction::CardinalFunction(Wrap, Kernel k) : kernel_(std::move(k)) {}

CardinalFunction CardinalFunction::from_kernel(const Kernel& cardinal) {
  if (!dynamic_cast<const CardinalImpl*>(&cardinal.impl()))
    throw Error(ErrorKind::usage, "kernel is not a cardinal function");
  return CardinalFunction(Wrap{}, cardinal);
}

const CardinalImpl& CardinalFunction::impl() const {
  return static_cast<const CardinalImpl&>(kernel_.impl());
}

const Kernel& CardinalFunction::base() const { return impl().base(); }
int CardinalFunction::K() const { return impl().K(); }
const std::string& CardinalFunction::route() const { return impl().route(); }
double CardinalFunction::spectrum(double xi) const { return impl().fourier(xi); }
double CardinalFunction::log_symbol(double xi) const { return impl().log_symbol(xi); }
double CardinalFunction::symbol_ratio() const { return impl().symbol_ratio(); }
double CardinalFunction::eval(double x) const { return impl().space(x); }
const std::vector<double>& CardinalFunction::shift_coefficients() const { return impl().shift_coefficients(); }

std::vector<double> CardinalFunction::symbol(const TorusGrid& grid) const {
  std::vector<double> out(grid.size());
  for (int m = 0; m < grid.M(); ++m) out[m] = std::exp(log_symbol(grid.node(m)));
  out[grid.M()] = std::exp(log_symbol(-kPi));
  return out;
}

std::vector<double> CardinalFunction::eval(const std::vector<double>& xs) const {
  std::vector<double> out(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) out[i] = eval(xs[i]);
  return out;
}

std::vector<double> CardinalFunction::tabulate(const LineGrid& grid) const {
  return eval(grid.nodes());
}

std::vector<double> CardinalFunction::lattice_interpolant(const std::vector<double>& samples,
                                                          const std::vector<double>& xs) const {
  if (samples.size() % 2 == 0) throw Error(ErrorKind::usage, "lattice samples need an odd window");
  const int J = static_cast<int>(samples.size() / 2);
  std::vector<double> centers(samples.size());
  for (int j = -J; j <= J; ++j) centers[j + J] = j;
  return kernel_.synthesize(centers, samples, xs);
}

double cardinal_spectrum(const Kernel& phi, double xi, int K) {
  if (K < 0) throw Error(ErrorKind::usage, "periodization depth must be >= 0", K);
  long k0;
  double x0 = reduce(xi, k0);
  std::vector<double> t;
  for (int k = -K; k <= K; ++k) t.push_back(phi.log_fourier(x0 + kTwoPi * k));
  double ls = log_sum_exp(t);
  if (ls == -kInf) throw Error(ErrorKind::degeneracy, "cardinal denominator vanishes", xi);
  double num = phi.log_fourier(xi);
  if (num == -kInf) return 0.0;
  return std::min(kInvSqrt2Pi, kInvSqrt2Pi * std::exp(num - ls));
}

double cardinal_eval(const Kernel& phi, double x, double Xi, int M, int K) {
  return inverse_ft([&](double xi) { return cardinal_spectrum(phi, xi, K); }, x, Xi, M);
}

CardinalRegularity cardinal_regularity(const Kernel& phi, int K, int M) {
  CardinalRegularity r;
  Kernel L = cardinal_kernel(phi, -1);
  int Kr = K > 0 ? K : std::max(1, std::max(phi.auto_cells(1e-12, 4096), L.auto_cells(1e-12, 4096)));
  r.base_report = regularity_report(phi, Kr, M);
  r.report = regularity_report(L, Kr, M);
  const auto& b = r.base_report;
  r.bound = b.C * (b.linf_torus / b.delta + b.C);
  r.bound_holds = r.report.C <= r.bound * (1.0 + 1e-9) + 1e-12;
  return r;
}

nlohmann::json to_json(const CardinalRegularity& r) {
  return nlohmann::json{{"cardinal", to_json(r.report)},
                        {"base", to_json(r.base_report)},
                        {"bound", r.bound},
                        {"bound-holds", r.bound_holds}};
}

double lattice_interpolant_via_cardinal(const std::vector<double>& samples, const Kernel& phi, double x) {
  CardinalFunction L(phi);
  return L.lattice_interpolant(samples, {x}).at(0);
}

std::vector<CardinalSweepRow> cardinal_convergence_sweep(const std::function<Kernel(double)>& family,
                                                         const Kernel& psi,
                                                         const std::vector<double>& alphas,
                                                         const LineGrid& grid) {
  const auto xs = grid.nodes();
  CardinalFunction Lpsi(psi);
  const auto lpsi = Lpsi.kernel().synthesize({0.0}, {1.0}, xs);
  const auto gpsi = psi.synthesize({0.0}, {1.0}, xs);
  std::vector<std::future<CardinalSweepRow>> jobs;
  for (double a : alphas) {
    jobs.push_back(std::async(std::launch::async, [&, a] {
      CardinalSweepRow row;
      row.alpha = a;
      Kernel phi = family(a);
      CardinalFunction L(phi);
      row.route = L.route();
      auto la = L.kernel().synthesize({0.0}, {1.0}, xs);
      auto ga = phi.synthesize({0.0}, {1.0}, xs);
      std::vector<double> d(xs.size()), g(xs.size());
      for (size_t i = 0; i < xs.size(); ++i) {
        d[i] = la[i] - lpsi[i];
        g[i] = ga[i] - gpsi[i];
        row.sup = std::max(row.sup, std::fabs(d[i]));
        row.generator_sup = std::max(row.generator_sup, std::fabs(g[i]));
      }
      row.l2 = l2_norm_line(d, grid);
      row.generator_l2 = l2_norm_line(g, grid);
      return row;
    }));
  }
  std::vector<CardinalSweepRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

}  // namespace qsis
