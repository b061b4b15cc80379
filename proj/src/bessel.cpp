#include <cmath>
#include <limits>

#include "qsis/error.hpp"
#include "qsis/kernel.hpp"

namespace qsis {

namespace {

// log of e^{-z cosh t} cosh(nu t), written to avoid overflow of cosh(nu t).
double log_integrand(double nu, double z, double t) {
  double nt = nu * t;
  return -z * std::cosh(t) + nt + std::log1p(std::exp(-2.0 * nt)) - std::log(2.0);
}

}  // namespace

// K_nu(z) = int_0^inf e^{-z cosh t} cosh(nu t) dt. The integrand is even in
// t, so the trapezoid rule on [0, T] converges geometrically; the step is
// halved until two successive sums agree.
double log_bessel_k(double nu, double z) {
  if (!(z > 0.0) || !std::isfinite(z) || !(nu >= 0.0) || !std::isfinite(nu))
    throw Error(ErrorKind::domain, "bessel_k needs nu >= 0 and z > 0", z);
  const double tpeak = std::asinh(nu / z);
  const double peak = log_integrand(nu, z, tpeak);
  double d = 0.5;
  while (log_integrand(nu, z, tpeak + d) - peak > -60.0) d *= 2.0;
  const double T = tpeak + d;

  auto f = [&](double t) { return std::exp(log_integrand(nu, z, t) - peak); };
  int n = 32;
  double h = T / n;
  double sum = 0.5 * (f(0.0) + f(T));
  for (int i = 1; i < n; ++i) sum += f(i * h);
  double prev = sum * h;
  for (int iter = 0; iter < 16; ++iter) {
    h *= 0.5;
    for (int i = 1; i < 2 * n; i += 2) sum += f(i * h);
    n *= 2;
    double cur = sum * h;
    if (std::fabs(cur - prev) <= 1e-14 * cur) return peak + std::log(cur);
    prev = cur;
  }
  throw Error(ErrorKind::numeric, "bessel_k quadrature did not converge", z);
}

double bessel_k(double nu, double z) {
  if (!(nu >= 0.5 && nu <= 40.0))
    throw Error(ErrorKind::range, "bessel_k order outside the validated range [0.5, 40]", nu);
  if (!(z > 0.0 && z <= 100.0))
    throw Error(ErrorKind::range, "bessel_k argument outside the validated range (0, 100]", z);
  return std::exp(log_bessel_k(nu, z));
}

}  // namespace qsis
