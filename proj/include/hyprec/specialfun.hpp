#pragma once

#include <initializer_list>

#include "hyprec/rational.hpp"

namespace hyprec {

/// Arguments closer than this to 0, -1, -2, ... are treated as sitting on a pole.
inline constexpr double kPoleTolerance = 1e-12;

// Every kernel comes in binary64 and x87 extended precision; the recursion
// engine evaluates in the latter.

/// True when x is within tol of a nonpositive integer.
bool near_nonpositive_integer(double x, double tol = kPoleTolerance);
bool near_nonpositive_integer(long double x, long double tol = kPoleTolerance);

/// sin(pi x) and cos(pi x) with exact zeros at integers and half-integers.
double sinpi(double x);
long double sinpi(long double x);
double cospi(double x);
long double cospi(long double x);

/// Gamma function. Reflection is used for x < 1/2.
/// Throws PoleError at nonpositive integers, OverflowError beyond the format's range.
double gamma(double x);
long double gamma(long double x);

/// 1/Gamma(x); total, and exactly zero at the poles of Gamma.
double reciprocal_gamma(double x);
long double reciprocal_gamma(long double x);

template <class F>
struct BasicSignedLog {
  F log_abs;
  int sign;
};
using SignedLog = BasicSignedLog<double>;

/// log|Gamma(x)| and the sign of Gamma(x). Finite where gamma() overflows.
SignedLog log_gamma_signed(double x);
BasicSignedLog<long double> log_gamma_signed(long double x);

/// prod Gamma(num[i]) / prod Gamma(den[i]). Large arguments are combined in
/// signed-log space. A numerator pole throws PoleError; a denominator pole yields 0.
double gamma_ratio(std::initializer_list<double> num, std::initializer_list<double> den);
long double gamma_ratio(std::initializer_list<long double> num, std::initializer_list<long double> den);

/// Digamma (psi) function: reflection for x < 0, upward recurrence until
/// x >= 16, then the asymptotic series through the B14 term.
/// Throws PoleError at the poles.
double digamma(double x);
long double digamma(long double x);

/// Rising factorial (x)_m = x (x+1) ... (x+m-1); (x)_0 = 1.
double pochhammer(double x, int m);
long double pochhammer(long double x, int m);
Rational pochhammer(const Rational& x, int m);

}  // namespace hyprec
