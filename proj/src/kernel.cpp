#include "qsis/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsis/cardinal.hpp"
#include "qsis/config.hpp"
#include "qsis/error.hpp"

namespace qsis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2OverPi = 0.797884560802865355879892119869;  // sqrt(2/pi)

nlohmann::json simple_json(Family f, double alpha) {
  return nlohmann::json{{"family", family_name(f)}, {"alpha", alpha}};
}

void require_positive(const char* what, double a) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw Error(ErrorKind::range, std::string(what) + " shape parameter must be positive and finite", a);
}

class SincImpl final : public KernelImpl {
 public:
  Family family() const override { return Family::sinc; }
  double alpha() const override { return 1.0; }
  double space(double x) const override { return sinc(x); }
  // half-open indicator of [-pi, pi)
  double fourier(double xi) const override { return (xi >= -kPi && xi < kPi) ? kInvSqrt2Pi : 0.0; }
  bool space_closed_form() const override { return true; }
  bool monotone() const override { return true; }
  SpectralDecay decay() const override {
    return {SpectralDecay::Kind::compact, kPi, 0.0, 0.0};
  }
  double envelope(double r) const override { return r < kPi ? kInvSqrt2Pi : 0.0; }
  double space_tail_energy(double R) const override { return 1.0 / (kPi * kPi * R); }
  std::optional<double> symbol(double) const override { return kInvSqrt2Pi; }
  nlohmann::json describe() const override { return nlohmann::json{{"family", "sinc"}}; }
};

class GaussianImpl final : public KernelImpl {
 public:
  explicit GaussianImpl(double a) : a_(a) { require_positive("gaussian", a); }
  Family family() const override { return Family::gaussian; }
  double alpha() const override { return a_; }
  double space(double x) const override { double t = x / a_; return std::exp(-t * t); }
  double fourier(double xi) const override { return std::exp(log_fourier(xi)); }
  double log_fourier(double xi) const override {
    return std::log(a_ / std::sqrt(2.0)) - a_ * a_ * xi * xi / 4.0;
  }
  bool space_closed_form() const override { return true; }
  bool monotone() const override { return true; }
  SpectralDecay decay() const override { return {SpectralDecay::Kind::super_exponential, 0, 0, 0}; }
  double envelope(double r) const override { return fourier(r); }
  double space_tail_energy(double R) const override {
    return a_ * std::sqrt(kPi / 8.0) * std::erfc(std::sqrt(2.0) * R / a_);
  }
  nlohmann::json describe() const override { return simple_json(family(), a_); }

 private:
  double a_;
};

class PoissonImpl final : public KernelImpl {
 public:
  explicit PoissonImpl(double a) : a_(a) { require_positive("poisson", a); }
  Family family() const override { return Family::poisson; }
  double alpha() const override { return a_; }
  double space(double x) const override { return std::exp(-a_ * std::fabs(x)); }
  double fourier(double xi) const override { return kSqrt2OverPi * a_ / (a_ * a_ + xi * xi); }
  bool space_closed_form() const override { return true; }
  bool monotone() const override { return true; }
  SpectralDecay decay() const override {
    return {SpectralDecay::Kind::algebraic, 0.0, 2.0, kSqrt2OverPi * a_};
  }
  double envelope(double r) const override { return fourier(r); }
  double space_tail_energy(double R) const override { return std::exp(-2.0 * a_ * R) / (2.0 * a_); }
  // sum_k 2a/(a^2 + (xi + 2 pi k)^2) = sinh a / (cosh a - cos xi)
  std::optional<double> symbol(double xi) const override {
    double d;
    // cosh a - cos xi without cancellation: 2 sinh^2(a/2) + 2 sin^2(xi/2)
    double sa = std::sinh(a_ / 2.0), sx = std::sin(xi / 2.0);
    d = 2.0 * (sa * sa + sx * sx);
    return kSqrt2OverPi * 0.5 * std::sinh(a_) / d;
  }
  nlohmann::json describe() const override { return simple_json(family(), a_); }

 private:
  double a_;
};

class InverseMultiquadricImpl final : public KernelImpl {
 public:
  explicit InverseMultiquadricImpl(double a) : a_(a), nu_(a - 0.5) {
    if (!(a >= 1.0 && a <= 40.5))
      throw Error(ErrorKind::range, "inverse multiquadric exponent outside [1, 40.5]", a);
    log_scale_ = (1.0 - a_) * std::log(2.0) - std::lgamma(a_);
    // |xi|^nu K_nu(|xi|) -> 2^{nu-1} Gamma(nu) at the origin
    log_origin_ = log_scale_ + (nu_ - 1.0) * std::log(2.0) + std::lgamma(nu_);
  }
  Family family() const override { return Family::inverse_multiquadric; }
  double alpha() const override { return a_; }
  double space(double x) const override { return std::pow(1.0 + x * x, -a_); }
  double fourier(double xi) const override { return std::exp(log_fourier(xi)); }
  double log_fourier(double xi) const override {
    double z = std::fabs(xi);
    if (z == 0.0) return log_origin_;
    // below this the small-argument limit is exact to double precision
    if (z < 1e-8 && nu_ > 1.0) return log_origin_;
    return log_scale_ + nu_ * std::log(z) + log_bessel_k(nu_, z);
  }
  bool space_closed_form() const override { return true; }
  bool monotone() const override { return true; }
  SpectralDecay decay() const override { return {SpectralDecay::Kind::exponential, 0, 0, 0}; }
  double envelope(double r) const override { return fourier(r); }
  double space_tail_energy(double R) const override {
    return std::pow(R, 1.0 - 4.0 * a_) / (4.0 * a_ - 1.0);
  }
  nlohmann::json describe() const override { return simple_json(family(), a_); }

 private:
  double a_;
  double nu_;
  double log_scale_;
  double log_origin_;
};

class TriangleImpl final : public KernelImpl {
 public:
  Family family() const override { return Family::triangle_spectrum; }
  double alpha() const override { return 1.0; }
  double space(double x) const override {
    if (x == 0.0) return 4.0 * kPi * kPi * kInvSqrt2Pi;
    double s = sin_pi(x);
    return 4.0 * kInvSqrt2Pi * s * s / (x * x);
  }
  double fourier(double xi) const override { return std::max(kTwoPi - std::fabs(xi), 0.0); }
  bool space_closed_form() const override { return true; }
  bool monotone() const override { return true; }
  SpectralDecay decay() const override { return {SpectralDecay::Kind::compact, kTwoPi, 0, 0}; }
  double envelope(double r) const override { return fourier(r); }
  double space_tail_energy(double R) const override {
    double A = 4.0 * kInvSqrt2Pi;
    return A * A / (3.0 * R * R * R);
  }
  std::optional<double> symbol(double) const override { return kTwoPi; }
  nlohmann::json describe() const override { return nlohmann::json{{"family", "triangle-spectrum"}}; }
};

class DilatedImpl final : public KernelImpl {
 public:
  DilatedImpl(Kernel base, double a) : base_(std::move(base)), a_(a) {
    require_positive("dilated", a);
    norm_ = std::sqrt(kTwoPi) * base_.fourier(0.0);
    if (!(norm_ > 0.0) || !std::isfinite(norm_))
      throw Error(ErrorKind::domain, "dilation base must have a positive finite integral", norm_);
  }
  Family family() const override { return Family::dilated; }
  double alpha() const override { return a_; }
  double space(double x) const override { return a_ * base_.space(a_ * x) / norm_; }
  double fourier(double xi) const override { return base_.fourier(xi / a_) / norm_; }
  double log_fourier(double xi) const override { return base_.log_fourier(xi / a_) - std::log(norm_); }
  bool space_closed_form() const override { return base_.space_closed_form(); }
  bool monotone() const override { return base_.monotone(); }
  SpectralDecay decay() const override {
    SpectralDecay d = base_.decay();
    if (d.kind == SpectralDecay::Kind::compact) d.support *= a_;
    if (d.kind == SpectralDecay::Kind::algebraic) d.constant *= std::pow(a_, d.power) / norm_;
    return d;
  }
  double envelope(double r) const override { return base_.envelope(r / a_) / norm_; }
  double space_tail_energy(double R) const override {
    return a_ / (norm_ * norm_) * base_.space_tail_energy(a_ * R);
  }
  std::vector<double> synthesize(const std::vector<double>& centers,
                                 const std::vector<double>& coeffs,
                                 const std::vector<double>& xs) const override {
    if (base_.space_closed_form()) return KernelImpl::synthesize(centers, coeffs, xs);
    throw Error(ErrorKind::usage, "dilation of a quadrature-backed kernel is not supported");
  }
  nlohmann::json describe() const override {
    return nlohmann::json{{"family", "dilated"}, {"alpha", a_}, {"base", base_.to_json()}};
  }

 private:
  Kernel base_;
  double a_;
  double norm_;
};

int decay_rank(SpectralDecay::Kind k) {
  switch (k) {
    case SpectralDecay::Kind::compact: return 3;
    case SpectralDecay::Kind::super_exponential: return 2;
    case SpectralDecay::Kind::exponential: return 1;
    case SpectralDecay::Kind::algebraic: return 0;
  }
  return 0;
}

class ConvolutionImpl final : public SpectralKernelBase {
 public:
  ConvolutionImpl(Kernel phi, Kernel psi) : phi_(std::move(phi)), psi_(std::move(psi)) {
    SpectralDecay a = phi_.decay(), b = psi_.decay();
    if (a.kind == SpectralDecay::Kind::compact && b.kind == SpectralDecay::Kind::compact) {
      decay_ = {SpectralDecay::Kind::compact, std::min(a.support, b.support), 0, 0};
    } else if (a.kind == SpectralDecay::Kind::compact || b.kind == SpectralDecay::Kind::compact) {
      decay_ = a.kind == SpectralDecay::Kind::compact ? a : b;
    } else if (a.kind == SpectralDecay::Kind::algebraic && b.kind == SpectralDecay::Kind::algebraic) {
      decay_ = {SpectralDecay::Kind::algebraic, 0, a.power + b.power, a.constant * b.constant};
    } else {
      decay_ = decay_rank(a.kind) >= decay_rank(b.kind) ? a : b;
      if (decay_.kind == SpectralDecay::Kind::algebraic) {
        // the other factor is bounded; scale the constant by its sup
        const Kernel& other = (decay_rank(a.kind) >= decay_rank(b.kind)) ? psi_ : phi_;
        decay_.constant *= other.envelope(0.0);
      }
    }
    gaussian_pair_ = phi_.family() == Family::gaussian && psi_.family() == Family::gaussian;
    if (!gaussian_pair_) {
      double Xi = decay_.kind == SpectralDecay::Kind::compact
                      ? decay_.support
                      : Kernel(std::shared_ptr<const KernelImpl>(this, [](const KernelImpl*) {}))
                            .auto_cutoff(1e-13 * fourier(0.0));
      init_quadrature(Xi);
    }
  }
  Family family() const override { return Family::convolution; }
  double alpha() const override { return phi_.alpha(); }
  double space(double x) const override {
    if (gaussian_pair_) {
      double a = phi_.alpha(), b = psi_.alpha(), s2 = a * a + b * b;
      return std::sqrt(kPi) * a * b / std::sqrt(s2) * std::exp(-x * x / s2);
    }
    return SpectralKernelBase::space(x);
  }
  bool space_closed_form() const override { return gaussian_pair_; }
  std::vector<double> synthesize(const std::vector<double>& centers,
                                 const std::vector<double>& coeffs,
                                 const std::vector<double>& xs) const override {
    if (gaussian_pair_) return KernelImpl::synthesize(centers, coeffs, xs);
    return SpectralKernelBase::synthesize(centers, coeffs, xs);
  }
  double space_tail_energy(double R) const override {
    if (gaussian_pair_) {
      double a = phi_.alpha(), b = psi_.alpha(), s2 = a * a + b * b;
      double amp = std::sqrt(kPi) * a * b / std::sqrt(s2);
      return amp * amp * std::sqrt(s2) * std::sqrt(kPi / 8.0) * std::erfc(std::sqrt(2.0 / s2) * R);
    }
    return SpectralKernelBase::space_tail_energy(R);
  }
  double fourier(double xi) const override {
    double a = phi_.fourier(xi);
    if (a == 0.0) return 0.0;
    return a * psi_.fourier(xi);
  }
  double log_fourier(double xi) const override { return phi_.log_fourier(xi) + psi_.log_fourier(xi); }
  bool monotone() const override { return phi_.monotone() && psi_.monotone(); }
  SpectralDecay decay() const override { return decay_; }
  double envelope(double r) const override { return phi_.envelope(r) * psi_.envelope(r); }
  nlohmann::json describe() const override {
    return nlohmann::json{{"family", "convolution"}, {"factors", {phi_.to_json(), psi_.to_json()}}};
  }

 private:
  Kernel phi_;
  Kernel psi_;
  SpectralDecay decay_;
  bool gaussian_pair_ = false;
};

}  // namespace

const char* family_name(Family f) noexcept {
  switch (f) {
    case Family::sinc: return "sinc";
    case Family::gaussian: return "gaussian";
    case Family::poisson: return "poisson";
    case Family::inverse_multiquadric: return "inverse-multiquadric";
    case Family::triangle_spectrum: return "triangle-spectrum";
    case Family::dilated: return "dilated";
    case Family::convolution: return "convolution";
    case Family::cardinal: return "cardinal";
    case Family::multiquadric_cardinal: return "multiquadric-cardinal";
  }
  return "unknown";
}

double KernelImpl::log_fourier(double xi) const {
  double v = fourier(xi);
  return v > 0.0 ? std::log(v) : -kInf;
}

std::vector<double> KernelImpl::synthesize(const std::vector<double>& centers,
                                           const std::vector<double>& coeffs,
                                           const std::vector<double>& xs) const {
  if (centers.size() != coeffs.size())
    throw Error(ErrorKind::usage, "centers and coefficients differ in length");
  std::vector<double> out(xs.size(), 0.0);
  for (size_t i = 0; i < xs.size(); ++i) {
    double s = 0.0;
    for (size_t j = 0; j < centers.size(); ++j) s += coeffs[j] * space(xs[i] - centers[j]);
    out[i] = s;
  }
  return out;
}

void SpectralKernelBase::init_quadrature(double Xi, double alias_distance, int min_M) {
  double hmax = kTwoPi / alias_distance;
  int M = static_cast<int>(std::ceil(2.0 * Xi / hmax));
  M = std::max(M, min_M);
  M += M % 2;
  init_quadrature_fixed(Xi, M);
}

void SpectralKernelBase::init_quadrature_fixed(double Xi, int M) {
  quad_ = SpectralQuadrature([this](double xi) { return fourier(xi); }, Xi, M);
  // total variation of the derivative of the even extension
  const auto& e = quad_.even_samples();
  const double h = quad_.h();
  double tv = 0.0;
  double prev = (e.size() > 1) ? (e[1] - e[0]) / h : 0.0;
  tv += 2.0 * std::fabs(prev);  // kink at the origin
  for (size_t m = 1; m + 1 < e.size(); ++m) {
    double d = (e[m + 1] - e[m]) / h;
    tv += std::fabs(d - prev);
    prev = d;
  }
  tv += std::fabs(prev);  // drop to zero beyond the cutoff
  tv_slope_ = 2.0 * tv;
}

// |psi(x)| <= TV(psi^')/(sqrt(2pi) x^2) by two integrations by parts
double SpectralKernelBase::space_tail_energy(double R) const {
  double A = kInvSqrt2Pi * tv_slope_;
  return A * A / (3.0 * R * R * R);
}

const KernelImpl& Kernel::impl() const {
  if (!impl_) throw Error(ErrorKind::usage, "kernel is empty");
  return *impl_;
}

std::string Kernel::tag() const {
  const auto j = to_json();
  std::string s = family_name(family());
  if (j.contains("alpha")) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.12g)", j["alpha"].get<double>());
    s += buf;
  }
  return s;
}

std::optional<double> Kernel::support_half_width() const {
  auto d = decay();
  if (d.kind == SpectralDecay::Kind::compact) return d.support;
  return std::nullopt;
}

std::optional<int> Kernel::cells() const {
  auto A = support_half_width();
  if (!A) return std::nullopt;
  return static_cast<int>(std::ceil(*A / kTwoPi - 1e-12));
}

nlohmann::json Kernel::to_json() const { return impl().describe(); }

Spectrum Kernel::spectrum() const {
  auto p = impl_;
  return [p](double xi) { return p->fourier(xi); };
}

double Kernel::cell_tail_bound(int K) const {
  if (K < 0) throw Error(ErrorKind::usage, "cell count must be >= 0", K);
  const SpectralDecay d = decay();
  auto cell_sup = [&](long k) { return envelope((2.0 * k - 1.0) * kPi); };
  if (d.kind == SpectralDecay::Kind::compact) {
    double s = 0.0;
    for (long k = K + 1; (2.0 * k - 1.0) * kPi < d.support; ++k) s += 2.0 * cell_sup(k);
    return s;
  }
  double s = 0.0;
  if (d.kind == SpectralDecay::Kind::algebraic) {
    const long n = K + 2000;
    for (long k = K + 1; k <= n; ++k) s += 2.0 * cell_sup(k);
    // sum_{k>n} A ((2k-1) pi)^{-p} <= A pi^{-p} (2n-1)^{1-p} / (2(p-1))
    double p = d.power;
    if (p <= 1.0) return kInf;
    s += 2.0 * d.constant * std::pow(kPi, -p) * std::pow(2.0 * n - 1.0, 1.0 - p) / (2.0 * (p - 1.0));
    return s;
  }
  double prev = 0.0;
  for (long k = K + 1; k < K + 100000; ++k) {
    double t = 2.0 * cell_sup(k);
    s += t;
    if (t == 0.0) break;
    if (k > K + 2 && t < 1e-17 * s) {
      double q = prev > 0.0 ? t / prev : 0.0;
      if (q < 1.0) s += t * q / (1.0 - q);
      break;
    }
    prev = t;
  }
  return s;
}

int Kernel::auto_cells(double rel_tol, int cap) const {
  if (auto N = cells()) {
    // smallest K with (2K+1) pi >= A
    auto A = *support_half_width();
    int K = std::max(1, static_cast<int>(std::ceil((A / kPi - 1.0) / 2.0 - 1e-12)));
    return std::min(K, cap);
  }
  const double ref = envelope(0.0);
  int K = 1;
  while (K < cap && cell_tail_bound(K) > rel_tol * ref) K *= 2;
  if (K >= cap) return cap;
  int lo = K / 2, hi = K;
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (cell_tail_bound(mid) > rel_tol * ref) lo = mid;
    else hi = mid;
  }
  return std::max(1, hi);
}

double Kernel::auto_cutoff(double tol) const {
  if (auto A = support_half_width()) return *A;
  // same probe rule as SpectralQuadrature: max_{r >= Xi} 2 env(r) r / sqrt(2pi)
  auto tail = [&](double Xi) {
    double t = 0.0;
    for (double f : {1.0, 1.5, 2.0, 4.0, 8.0}) t = std::max(t, envelope(f * Xi) * f * Xi);
    return 2.0 * kInvSqrt2Pi * t;
  };
  double hi = kPi;
  while (tail(hi) > tol) {
    hi *= 2.0;
    if (hi > 1e7) throw Error(ErrorKind::accuracy, "spectrum decays too slowly for a finite cutoff", tail(hi));
  }
  double lo = hi / 2.0;
  for (int i = 0; i < 60 && hi - lo > 1e-6 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    if (tail(mid) > tol) lo = mid;
    else hi = mid;
  }
  return hi;
}

Kernel sinc_kernel() { return Kernel(std::make_shared<SincImpl>()); }
Kernel gaussian(double alpha) { return Kernel(std::make_shared<GaussianImpl>(alpha)); }
Kernel poisson(double alpha) { return Kernel(std::make_shared<PoissonImpl>(alpha)); }
Kernel inverse_multiquadric(double alpha) {
  return Kernel(std::make_shared<InverseMultiquadricImpl>(alpha));
}
Kernel triangle_spectrum() { return Kernel(std::make_shared<TriangleImpl>()); }
Kernel dilated(const Kernel& base, double alpha) {
  return Kernel(std::make_shared<DilatedImpl>(base, alpha));
}
Kernel convolve(const Kernel& phi, const Kernel& psi) {
  return Kernel(std::make_shared<ConvolutionImpl>(phi, psi));
}

double multiquadric_spectrum(double c, double xi) {
  require_positive("multiquadric", c);
  double z = std::fabs(xi);
  if (z == 0.0)
    throw Error(ErrorKind::domain, "multiquadric spectrum has an algebraic singularity at xi = 0", xi);
  return std::exp(log_bessel_k(1.0, c * z) - std::log(z));
}

Kernel kernel_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family"))
    throw Error(ErrorKind::usage, "kernel description needs a family");
  const std::string f = j.at("family").get<std::string>();
  auto alpha = [&](double dflt) { return j.contains("alpha") ? j.at("alpha").get<double>() : dflt; };
  if (f == "sinc") return sinc_kernel();
  if (f == "gaussian") return gaussian(alpha(1.0));
  if (f == "poisson") return poisson(alpha(1.0));
  if (f == "inverse-multiquadric" || f == "imq") return inverse_multiquadric(alpha(1.0));
  if (f == "triangle-spectrum" || f == "triangle") return triangle_spectrum();
  if (f == "dilated") return dilated(kernel_from_json(j.at("base")), alpha(1.0));
  if (f == "convolution") {
    const auto& fs = j.at("factors");
    if (!fs.is_array() || fs.size() != 2) throw Error(ErrorKind::usage, "convolution needs two factors");
    return convolve(kernel_from_json(fs[0]), kernel_from_json(fs[1]));
  }
  if (f == "cardinal") {
    int K = j.contains("K") ? j.at("K").get<int>() : -1;
    return cardinal_kernel(kernel_from_json(j.at("base")), K);
  }
  if (f == "multiquadric-cardinal") return multiquadric_cardinal(alpha(1.0));
  throw Error(ErrorKind::usage, "unknown kernel family '" + f + "'");
}

namespace {

// expr := name [ '(' arg {',' arg} ')' ] ; arg := number | expr
struct ExprParser {
  const std::string& s;
  size_t i = 0;

  void skip() { while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i; }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::usage, "kernel expression '" + s + "': " + what);
  }
  bool peek(char c) { skip(); return i < s.size() && s[i] == c; }
  void expect(char c) { if (!peek(c)) fail(std::string("expected '") + c + "'"); ++i; }

  nlohmann::json arg() {
    skip();
    if (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.' || s[i] == '+' || s[i] == '-')) {
      size_t used = 0;
      double v;
      try { v = std::stod(s.substr(i), &used); } catch (...) { fail("bad number"); }
      i += used;
      return v;
    }
    return expr();
  }

  nlohmann::json expr() {
    skip();
    size_t start = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '-' || s[i] == '_')) ++i;
    std::string name = s.substr(start, i - start);
    if (name.empty()) fail("expected a kernel name");
    std::vector<nlohmann::json> args;
    if (peek('(')) {
      ++i;
      args.push_back(arg());
      while (peek(',')) { ++i; args.push_back(arg()); }
      expect(')');
    }
    nlohmann::json j;
    auto num = [&](size_t k) {
      if (k >= args.size() || !args[k].is_number()) fail("expected a numeric parameter");
      return args[k].get<double>();
    };
    auto sub = [&](size_t k) {
      if (k >= args.size() || !args[k].is_object()) fail("expected a kernel argument");
      return args[k];
    };
    if (name == "conv" || name == "convolution") {
      j = {{"family", "convolution"}, {"factors", {sub(0), sub(1)}}};
    } else if (name == "dilated") {
      j = {{"family", "dilated"}, {"base", sub(0)}};
      if (args.size() > 1) j["alpha"] = num(1);
    } else if (name == "cardinal") {
      j = {{"family", "cardinal"}, {"base", sub(0)}};
      if (args.size() > 1) j["K"] = static_cast<int>(num(1));
    } else {
      j = {{"family", name}};
      if (!args.empty()) j["alpha"] = num(0);
    }
    return j;
  }
};

}  // namespace

nlohmann::json parse_kernel_expression(const std::string& expr) {
  ExprParser p{expr};
  auto j = p.expr();
  p.skip();
  if (p.i != expr.size()) p.fail("trailing characters");
  return j;
}

Kernel parse_kernel(const std::string& text) {
  auto cfg = parse_config_text(text);
  if (!cfg.contains("kernel")) throw Error(ErrorKind::usage, "kernel specification needs 'kernel'");
  for (auto it = cfg.begin(); it != cfg.end(); ++it)
    if (it.key() != "kernel" && it.key() != "alpha")
      throw Error(ErrorKind::usage, "unknown kernel key '" + it.key() + "'");
  auto j = parse_kernel_expression(cfg.at("kernel").get<std::string>());
  if (cfg.contains("alpha")) {
    if (!cfg.at("alpha").is_number()) throw Error(ErrorKind::usage, "alpha must be a number");
    j["alpha"] = cfg.at("alpha").get<double>();
  }
  return kernel_from_json(j);
}

}  // namespace qsis
