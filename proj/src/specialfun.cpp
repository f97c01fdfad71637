#include "hyprec/specialfun.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "hyprec/error.hpp"

namespace hyprec {
namespace {

template <class F>
constexpr F kPi = std::numbers::pi_v<F>;

// Largest x with Gamma(x) finite.
template <class F>
constexpr F max_gamma_arg();
template <>
constexpr double max_gamma_arg<double>() {
  return 171.6243769563027;
}
template <>
constexpr long double max_gamma_arg<long double>() {
  return 1755.4549437584446L;
}

template <class F>
F log_max();
template <>
double log_max<double>() {
  return 709.78;
}
template <>
long double log_max<long double>() {
  return 11356.5L;
}

std::string fmt(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17Lg", x);
  return buf;
}

inline double lgamma_signed_raw(double x, int* sign) { return ::lgamma_r(x, sign); }
inline long double lgamma_signed_raw(long double x, int* sign) { return ::lgammal_r(x, sign); }

// sin(pi x) after reducing x to [-1/2, 1/2] (remainder is exact).
template <class F>
F reduced_sin(F x) {
  F r = std::remainder(x, F(2));
  if (r > F(0.5)) r = F(1) - r;
  else if (r < F(-0.5)) r = F(-1) - r;
  return std::sin(kPi<F> * r);
}

template <class F>
bool near_pole(F x, F tol) {
  if (x > tol) return false;
  const F nearest = std::round(x);
  return nearest <= F(0) && std::fabs(x - nearest) < tol;
}

template <class F>
F sinpi_impl(F x) {
  if (!std::isfinite(x)) return std::numeric_limits<F>::quiet_NaN();
  if (x == std::floor(x)) return F(0);
  return reduced_sin(x);
}

template <class F>
F cospi_impl(F x) {
  if (!std::isfinite(x)) return std::numeric_limits<F>::quiet_NaN();
  if (std::fabs(x - std::round(x)) == F(0.5)) return F(0);
  return reduced_sin(x + F(0.5));
}

template <class F>
BasicSignedLog<F> log_gamma_impl(F x) {
  if (std::isnan(x)) throw DomainError("log-gamma of NaN");
  if (near_pole<F>(x, kPoleTolerance)) throw PoleError("gamma pole at x = " + fmt(x));
  int sign = 1;
  if (x > F(0)) return {lgamma_signed_raw(x, &sign), 1};
  const F log_abs = std::log(kPi<F>) - std::log(std::fabs(sinpi_impl(x))) - lgamma_signed_raw(F(1) - x, &sign);
  // Gamma is negative on (-1, 0), (-3, -2), ...
  const bool odd_floor = static_cast<long long>(std::floor(x)) % 2 != 0;
  return {log_abs, odd_floor ? -1 : 1};
}

template <class F>
F gamma_impl(F x) {
  if (std::isnan(x)) throw DomainError("gamma of NaN");
  if (near_pole<F>(x, kPoleTolerance)) throw PoleError("gamma pole at x = " + fmt(x));
  if (x > max_gamma_arg<F>()) throw OverflowError("gamma overflows at x = " + fmt(x));
  if (x >= F(0.5)) return std::tgamma(x);
  // Gamma(x) Gamma(1-x) = pi / sin(pi x)
  const F complement = F(1) - x;
  if (complement > max_gamma_arg<F>()) {
    const auto lg = log_gamma_impl(x);
    return lg.sign * std::exp(lg.log_abs);
  }
  return kPi<F> / (sinpi_impl(x) * std::tgamma(complement));
}

template <class F>
F reciprocal_gamma_impl(F x) {
  if (std::isnan(x)) return x;
  if (near_pole<F>(x, kPoleTolerance)) return F(0);
  if (x >= F(0.5)) {
    if (x > max_gamma_arg<F>()) {
      int sign = 1;
      return std::exp(-lgamma_signed_raw(x, &sign));
    }
    return F(1) / std::tgamma(x);
  }
  const F complement = F(1) - x;
  if (complement > max_gamma_arg<F>()) {
    const auto lg = log_gamma_impl(x);
    return lg.sign * std::exp(-lg.log_abs);
  }
  return sinpi_impl(x) * std::tgamma(complement) / kPi<F>;
}

template <class F>
F gamma_ratio_impl(std::initializer_list<F> num, std::initializer_list<F> den) {
  // Direct products stay accurate and cannot overflow while every argument is
  // below 40 and there are at most a handful of factors.
  bool large = num.size() + den.size() > 8;
  for (F x : num) large = large || std::fabs(x) > F(40);
  for (F x : den) large = large || std::fabs(x) > F(40);
  if (!large) {
    F r = 1;
    for (F x : num) r *= gamma_impl(x);
    for (F x : den) r *= reciprocal_gamma_impl(x);
    return r;
  }
  F log_abs = 0;
  int sign = 1;
  for (F x : num) {
    const auto s = log_gamma_impl(x);
    log_abs += s.log_abs;
    sign *= s.sign;
  }
  for (F x : den) {
    if (near_pole<F>(x, kPoleTolerance)) return F(0);
    const auto s = log_gamma_impl(x);
    log_abs -= s.log_abs;
    sign *= s.sign;
  }
  if (log_abs > log_max<F>()) throw OverflowError("Gamma ratio exceeds the floating range");
  return sign * std::exp(log_abs);
}

template <class F>
F digamma_impl(F x) {
  if (std::isnan(x)) throw DomainError("digamma of NaN");
  if (near_pole<F>(x, kPoleTolerance)) throw PoleError("digamma pole at x = " + fmt(x));
  F result = 0;
  if (x < F(0)) {
    // psi(x) = psi(1 - x) - pi cot(pi x)
    result = -kPi<F> * cospi_impl(x) / sinpi_impl(x);
    x = F(1) - x;
  }
  while (x < F(16)) {
    result -= F(1) / x;
    x += F(1);
  }
  const F inv = F(1) / x;
  const F inv2 = inv * inv;
  // B_{2n} / (2n): 1/12, -1/120, 1/252, -1/240, 1/132, -691/32760, 1/12
  const F series =
      inv2 * (F(1) / 12 -
              inv2 * (F(1) / 120 -
                      inv2 * (F(1) / 252 -
                              inv2 * (F(1) / 240 - inv2 * (F(1) / 132 - inv2 * (F(691) / 32760 - inv2 / 12))))));
  return result + std::log(x) - F(0.5) * inv - series;
}

template <class F>
F pochhammer_impl(F x, int m) {
  if (m < 0) throw InvalidArgumentError("pochhammer requires m >= 0");
  F p = 1;
  for (int i = 0; i < m; ++i) p *= x + i;
  return p;
}

}  // namespace

bool near_nonpositive_integer(double x, double tol) { return near_pole<double>(x, tol); }
bool near_nonpositive_integer(long double x, long double tol) { return near_pole<long double>(x, tol); }
double sinpi(double x) { return sinpi_impl(x); }
long double sinpi(long double x) { return sinpi_impl(x); }
double cospi(double x) { return cospi_impl(x); }
long double cospi(long double x) { return cospi_impl(x); }
double gamma(double x) { return gamma_impl(x); }
long double gamma(long double x) { return gamma_impl(x); }
double reciprocal_gamma(double x) { return reciprocal_gamma_impl(x); }
long double reciprocal_gamma(long double x) { return reciprocal_gamma_impl(x); }
SignedLog log_gamma_signed(double x) { return log_gamma_impl(x); }
BasicSignedLog<long double> log_gamma_signed(long double x) { return log_gamma_impl(x); }
double gamma_ratio(std::initializer_list<double> num, std::initializer_list<double> den) {
  return gamma_ratio_impl(num, den);
}
long double gamma_ratio(std::initializer_list<long double> num, std::initializer_list<long double> den) {
  return gamma_ratio_impl(num, den);
}
double digamma(double x) { return digamma_impl(x); }
long double digamma(long double x) { return digamma_impl(x); }
double pochhammer(double x, int m) { return pochhammer_impl(x, m); }
long double pochhammer(long double x, int m) { return pochhammer_impl(x, m); }

Rational pochhammer(const Rational& x, int m) {
  if (m < 0) throw InvalidArgumentError("pochhammer requires m >= 0");
  Rational p = 1;
  for (int i = 0; i < m; ++i) p *= x + i;
  return p;
}

}  // namespace hyprec
