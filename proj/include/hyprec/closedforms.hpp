#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hyprec/family.hpp"
#include "hyprec/rational.hpp"
#include "hyprec/recursions.hpp"

namespace hyprec {

enum class ClosedFormId { HalfArgumentPower, KummerChoi, ChoiGammaIdentity, MillerClosed, PfaffClosed, BaileyClosed };

struct ClosedFormInfo {
  ClosedFormId id;
  std::string_view name;
  std::size_t arity;  // real parameters, excluding k
  int k_min;
  std::optional<FamilyId> family;  // recursion family it cross-checks, if any
};

const ClosedFormInfo& closed_form_info(ClosedFormId id);
std::span<const ClosedFormId> all_closed_forms();

/// 2F1(a, a+k; a+1 | 1/2) = 2^a (2^(k-1) - sum_{i=1}^{k-1} (k-1)! / ((i-1)! (k-i-1)! (a+i))), k >= 1.
double half_argument_power(double a, int k);

/// Same value through 2^a (2^(k-1) - (k-1)/(a+1) 2F1(2-k, a+1; a+2 | -1)).
double half_argument_power_series_form(double a, int k);

/// 2F1(a+k, b; a-b+1 | -1) as a finite binomial sum of gamma quotients, k >= 0.
double kummer_choi(double a, double b, int k);

struct IdentitySides {
  double lhs;
  double rhs;
  double scale;  // largest magnitude among the summed terms, for relative checks
};

/// Both sides of the gamma-sum identity that makes the Kummer recursion close, k >= 1.
IdentitySides choi_identity_sides(double a, double b, int k);
double choi_identity_residual(double a, double b, int k);

/// 3F2(a, b, c+k+1; d+1, c | 1) from its finite j-sum.
double miller_closed(double a, double b, double c, double d, int k);

/// The bracket multiplying the first terminating 3F2 in the two published
/// repackagings of the Miller j-sum.
enum class MillerBracket {
  DMinusB,  // [a(b-c) + c(d-b)]
  DMinusC,  // [a(b-c) + c(d-c)]
};

/// The j-sum split into two terminating 3F2 series.
double miller_relation(double a, double b, double c, double d, int k, MillerBracket bracket = MillerBracket::DMinusB);

/// (c-a)_n (c-b+k)_n / ((c+k)_n (c-a-b)_n) 3F2(-k, -n, b; c-a, b-c-k-n+1 | 1).
double pfaff_closed(int n, double a, double b, double c, int k);
Rational pfaff_closed(int n, const Rational& a, const Rational& b, const Rational& c, int k);

/// The gamma-weighted j-sum that the terminating form above repackages.
double pfaff_gamma_sum(int n, double a, double b, double c, int k);

/// 3F2(a, b, c+1; 1+2c-b+k, c | 1)
///   = [(a-2c)(b-c) + kc] G(2c-b+k+1) G(2c-a-2b+k) / (c G(2c-2b+k+1) G(2c-a-b+k+1)).
double bailey_closed(double a, double b, double c, int k);

/// The closed form that cross-checks family G_k, when one exists at this k.
std::optional<ClosedFormId> closed_form_for(FamilyId family, int k);

/// Evaluates closed_form_for(family, k) at the family's parameters.
double closed_value(FamilyId family, int k, std::span<const double> params);

/// Gamma arguments and divisors of that closed form, for pole screening.
std::vector<Singularity> closed_form_singularities(FamilyId family, int k, std::span<const double> params);

}  // namespace hyprec
