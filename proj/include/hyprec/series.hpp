#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "hyprec/rational.hpp"

namespace hyprec {

/// A generalized hypergeometric series pFq(upper; lower | z).
template <class T>
struct BasicHypSpec {
  std::vector<T> upper;
  std::vector<T> lower;
  T z{};
};

using HypSpec = BasicHypSpec<double>;
using RationalHypSpec = BasicHypSpec<Rational>;

HypSpec to_double(const RationalHypSpec& spec);

enum class ConvergenceClass { Terminating, AbsolutelyConvergent, ConditionallyConvergent, Divergent };

std::string_view to_string(ConvergenceClass c);

enum class TailMode {
  Auto,       // geometric for |z| < 1 or p <= q, algebraic at |z| = 1
  Geometric,  // ratio bound |t_N| r / (1 - r)
  Algebraic,  // Richardson extrapolation in N^-s, N^-(s+1), ...
  None,       // plain partial sum until |term| < target
};

struct SummationPolicy {
  std::int64_t max_terms = 2'000'000;
  double target_abs_error = 1e-12;
  TailMode tail_mode = TailMode::Auto;
};

struct EvalResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::int64_t terms_used = 1;
  ConvergenceClass cls = ConvergenceClass::AbsolutelyConvergent;
};

/// Index n of the terminating upper parameter -n with the smallest |n|, if any.
std::optional<std::int64_t> termination_index(const HypSpec& spec);
std::optional<std::int64_t> termination_index(const RationalHypSpec& spec);

/// Throws DomainError if the series has a lower-parameter pole that is reached
/// before the series terminates (or the series never terminates).
void validate(const HypSpec& spec);
void validate(const RationalHypSpec& spec);

/// Convergence classification for real parameters and real z.
ConvergenceClass classify(const HypSpec& spec);
ConvergenceClass classify(const RationalHypSpec& spec);

/// The first `count` terms t_0, t_1, ... produced by the running term
/// recurrence used for summation; terms past termination are zero.
std::vector<double> series_terms(const HypSpec& spec, std::size_t count);

/// Exact finite sum of a terminating series with rational data.
Rational evaluate_terminating_exact(const RationalHypSpec& spec);

/// Definitional summation of a terminating or absolutely convergent series.
EvalResult evaluate_series(const HypSpec& spec, const SummationPolicy& policy = {});

struct TransformedSpec {
  HypSpec spec;
  double prefactor = 1.0;
};

/// 2F1(a, b; c | z) = (1-z)^-a 2F1(a, c-b; c | z/(z-1)), valid for z < 1.
TransformedSpec pfaff_transform_2f1(const HypSpec& spec);

}  // namespace hyprec
