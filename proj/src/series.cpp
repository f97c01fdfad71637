#include "hyprec/series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hyprec/error.hpp"
#include "hyprec/specialfun.hpp"

namespace hyprec {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kRichardsonLevels = 5;

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
    abs_ += std::fabs(x);
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }
  [[nodiscard]] double abs_sum() const { return abs_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_ = 0.0;
};

double max_abs_param(const HypSpec& spec) {
  double m = 0.0;
  for (double x : spec.upper) m = std::max(m, std::fabs(x));
  for (double x : spec.lower) m = std::max(m, std::fabs(x));
  return m;
}

// t_{m+1} / t_m without the factor z.
double ratio_factor(const HypSpec& spec, std::int64_t m) {
  const double md = static_cast<double>(m);
  double r = 1.0 / (md + 1.0);
  for (double a : spec.upper) r *= a + md;
  for (double b : spec.lower) r /= b + md;
  return r;
}

double parameter_excess(const HypSpec& spec) {
  return std::accumulate(spec.lower.begin(), spec.lower.end(), 0.0) -
         std::accumulate(spec.upper.begin(), spec.upper.end(), 0.0);
}

EvalResult sum_terminating(const HypSpec& spec, std::int64_t n) {
  CompensatedSum acc;
  double t = 1.0;
  for (std::int64_t m = 0; m <= n; ++m) {
    acc.add(t);
    if (m < n) t *= ratio_factor(spec, m) * spec.z;
  }
  const double ops = static_cast<double>(spec.upper.size() + spec.lower.size() + 2);
  return {acc.value(), 2.0 * kEps * ops * acc.abs_sum(), n + 1, ConvergenceClass::Terminating};
}

EvalResult sum_geometric(const HypSpec& spec, const SummationPolicy& policy, ConvergenceClass cls, bool bound_tail) {
  const double az = std::fabs(spec.z);
  const bool balanced_degree = spec.upper.size() == spec.lower.size() + 1;
  const auto m_min = static_cast<std::int64_t>(std::ceil(2.0 * max_abs_param(spec) + 2.0));
  CompensatedSum acc;
  double t = 1.0;
  for (std::int64_t m = 0;; ++m) {
    acc.add(t);
    if (m + 1 >= policy.max_terms) {
      throw NoConvergenceError("series did not reach the target error within " +
                               std::to_string(policy.max_terms) + " terms");
    }
    if (m >= m_min && std::fabs(t) < policy.target_abs_error) {
      const double roundoff = 4.0 * kEps * acc.abs_sum();
      if (!bound_tail) return {acc.value(), std::fabs(t) + roundoff, m + 1, cls};
      double r = 0.0;
      for (int i = 0; i < 3; ++i) r = std::max(r, std::fabs(ratio_factor(spec, m + i)));
      // Ratio factors of a p = q+1 series approach 1; clamping keeps the bound
      // valid when they approach it from below.
      if (balanced_degree) r = std::max(r, 1.0);
      r *= az;
      if (r < 1.0) {
        const double tail = std::fabs(t) * r / (1.0 - r);
        if (tail < policy.target_abs_error) return {acc.value(), tail + roundoff, m + 1, cls};
      }
    }
    t *= ratio_factor(spec, m) * spec.z;
    if (t == 0.0) return {acc.value(), 4.0 * kEps * acc.abs_sum(), m + 1, cls};
  }
}

// Sums a p = q+1 series at |z| = 1 and extrapolates the partial sums in N.
// At z = 1 the remainder behaves like N^-s (1 + c1/N + ...); at z = -1 the
// averaged partial sums (S_N + S_{N+1})/2 at even N behave like N^-(s+2) (...).
EvalResult sum_algebraic(const HypSpec& spec, const SummationPolicy& policy, ConvergenceClass cls) {
  const double s = parameter_excess(spec);
  if (!(s > 0.0)) throw DomainError("algebraic tail extrapolation needs Re(sum lower - sum upper) > 0");
  const bool alternating = spec.z < 0.0;
  const double first_exponent = alternating ? s + 2.0 : s;
  std::int64_t n0 = std::max<std::int64_t>(1024, 64 * static_cast<std::int64_t>(std::ceil(max_abs_param(spec) + 1)));
  if (n0 % 2 != 0) ++n0;

  for (;;) {
    const std::int64_t n_last = n0 << (kRichardsonLevels - 1);
    if (n_last + 1 > policy.max_terms) {
      throw NoConvergenceError("extrapolated series needs more than " + std::to_string(policy.max_terms) + " terms");
    }
    std::array<double, kRichardsonLevels> partial{};
    CompensatedSum acc;
    double t = 1.0;
    int level = 0;
    for (std::int64_t m = 0; level < kRichardsonLevels; ++m) {
      if (m == (n0 << level)) {
        partial[level] = alternating ? acc.value() + 0.5 * t : acc.value();
        ++level;
        if (level == kRichardsonLevels) break;
      }
      acc.add(t);
      t *= ratio_factor(spec, m) * spec.z;
    }
    std::array<std::array<double, kRichardsonLevels>, kRichardsonLevels> table{};
    table[0] = partial;
    for (int j = 1; j < kRichardsonLevels; ++j) {
      const double f = std::exp2(first_exponent + (j - 1));
      for (int i = 0; i + j < kRichardsonLevels; ++i) {
        table[j][i] = (f * table[j - 1][i + 1] - table[j - 1][i]) / (f - 1.0);
      }
    }
    const double value = table[kRichardsonLevels - 1][0];
    const double extrapolation_error = std::fabs(value - table[kRichardsonLevels - 2][1]);
    const double roundoff = 64.0 * kEps * acc.abs_sum();
    const double estimate = extrapolation_error + roundoff;
    if (estimate <= std::max(policy.target_abs_error, 2.0 * roundoff)) {
      return {value, estimate, n_last + 1, cls};
    }
    n0 *= 4;
  }
}

}  // namespace

HypSpec to_double(const RationalHypSpec& spec) {
  HypSpec out;
  for (const auto& a : spec.upper) out.upper.push_back(a.get_d());
  for (const auto& b : spec.lower) out.lower.push_back(b.get_d());
  out.z = spec.z.get_d();
  return out;
}

std::string_view to_string(ConvergenceClass c) {
  switch (c) {
    case ConvergenceClass::Terminating: return "terminating";
    case ConvergenceClass::AbsolutelyConvergent: return "absolutely_convergent";
    case ConvergenceClass::ConditionallyConvergent: return "conditionally_convergent";
    case ConvergenceClass::Divergent: return "divergent";
  }
  return "unknown";
}

std::optional<std::int64_t> termination_index(const HypSpec& spec) {
  std::optional<std::int64_t> n;
  for (double a : spec.upper) {
    if (near_nonpositive_integer(a)) {
      const auto idx = static_cast<std::int64_t>(-std::round(a));
      if (!n || idx < *n) n = idx;
    }
  }
  return n;
}

std::optional<std::int64_t> termination_index(const RationalHypSpec& spec) {
  std::optional<std::int64_t> n;
  for (const auto& a : spec.upper) {
    if (a.get_den() == 1 && a <= 0) {
      const auto idx = static_cast<std::int64_t>(-a.get_num().get_si());
      if (!n || idx < *n) n = idx;
    }
  }
  return n;
}

namespace {

template <class Spec, class IsPole, class PoleIndex>
void validate_impl(const Spec& spec, IsPole is_pole, PoleIndex pole_index) {
  const auto n = termination_index(spec);
  for (const auto& b : spec.lower) {
    if (!is_pole(b)) continue;
    const std::int64_t ell = pole_index(b);
    if (!n) throw DomainError("lower parameter " + std::to_string(-ell) + " is a pole of a non-terminating series");
    // (b)_m with b = -ell first vanishes at m = ell + 1; the sum stops at m = n.
    if (ell < *n) {
      throw DomainError("lower parameter " + std::to_string(-ell) + " is reached before the series terminates at m = " +
                        std::to_string(*n));
    }
  }
}

}  // namespace

void validate(const HypSpec& spec) {
  validate_impl(
      spec, [](double b) { return near_nonpositive_integer(b); },
      [](double b) { return static_cast<std::int64_t>(-std::round(b)); });
}

void validate(const RationalHypSpec& spec) {
  validate_impl(
      spec, [](const Rational& b) { return b.get_den() == 1 && b <= 0; },
      [](const Rational& b) { return static_cast<std::int64_t>(-b.get_num().get_si()); });
}

ConvergenceClass classify(const HypSpec& spec) {
  if (termination_index(spec)) return ConvergenceClass::Terminating;
  if (spec.z == 0.0) return ConvergenceClass::AbsolutelyConvergent;
  const auto p = spec.upper.size();
  const auto q = spec.lower.size();
  if (p <= q) return ConvergenceClass::AbsolutelyConvergent;
  if (p > q + 1) return ConvergenceClass::Divergent;
  const double az = std::fabs(spec.z);
  if (az < 1.0) return ConvergenceClass::AbsolutelyConvergent;
  if (az > 1.0) return ConvergenceClass::Divergent;
  const double s = parameter_excess(spec);
  if (s > 0.0) return ConvergenceClass::AbsolutelyConvergent;
  if (spec.z != 1.0) {
    // 2F1 band is -1 < s <= 0; the general pFq band excludes s = 0.
    const bool conditional = (p == 2) ? (s > -1.0 && s <= 0.0) : (s > -1.0 && s < 0.0);
    if (conditional) return ConvergenceClass::ConditionallyConvergent;
  }
  return ConvergenceClass::Divergent;
}

ConvergenceClass classify(const RationalHypSpec& spec) {
  if (termination_index(spec)) return ConvergenceClass::Terminating;
  return classify(to_double(spec));
}

std::vector<double> series_terms(const HypSpec& spec, std::size_t count) {
  validate(spec);
  const auto n = termination_index(spec);
  std::vector<double> out;
  out.reserve(count);
  double t = 1.0;
  for (std::size_t m = 0; m < count; ++m) {
    out.push_back(t);
    const auto mi = static_cast<std::int64_t>(m);
    t = (n && mi >= *n) ? 0.0 : t * ratio_factor(spec, mi) * spec.z;
  }
  return out;
}

Rational evaluate_terminating_exact(const RationalHypSpec& spec) {
  const auto n = termination_index(spec);
  if (!n) throw DomainError("exact evaluation requires a terminating series");
  validate(spec);
  Rational sum = 0;
  Rational t = 1;
  for (std::int64_t m = 0; m <= *n; ++m) {
    sum += t;
    if (m == *n) break;
    Rational ratio = spec.z;
    for (const auto& a : spec.upper) ratio *= a + m;
    for (const auto& b : spec.lower) {
      Rational den = b + m;
      if (den == 0) throw DomainError("lower-parameter pole reached before termination");
      ratio /= den;
    }
    ratio /= m + 1;
    t *= ratio;
  }
  return sum;
}

EvalResult evaluate_series(const HypSpec& spec, const SummationPolicy& policy) {
  if (policy.max_terms < 1) throw InvalidArgumentError("max_terms must be at least 1");
  validate(spec);
  const auto cls = classify(spec);
  if (cls == ConvergenceClass::ConditionallyConvergent || cls == ConvergenceClass::Divergent) {
    throw DomainError(std::string("series is ") + std::string(to_string(cls)) + "; definitional summation refused");
  }
  if (cls == ConvergenceClass::Terminating) return sum_terminating(spec, *termination_index(spec));
  if (spec.z == 0.0) return {1.0, 0.0, 1, cls};

  const bool on_circle = std::fabs(spec.z) == 1.0 && spec.upper.size() == spec.lower.size() + 1;
  TailMode mode = policy.tail_mode;
  if (mode == TailMode::Auto) mode = on_circle ? TailMode::Algebraic : TailMode::Geometric;
  switch (mode) {
    case TailMode::Algebraic:
      if (!on_circle) throw DomainError("algebraic tail mode applies to p = q+1 series at |z| = 1");
      return sum_algebraic(spec, policy, cls);
    case TailMode::Geometric:
      if (on_circle) throw DomainError("geometric tail bound does not apply at |z| = 1");
      return sum_geometric(spec, policy, cls, true);
    case TailMode::None:
    case TailMode::Auto:
      break;
  }
  return sum_geometric(spec, policy, cls, false);
}

TransformedSpec pfaff_transform_2f1(const HypSpec& spec) {
  if (spec.upper.size() != 2 || spec.lower.size() != 1) {
    throw InvalidArgumentError("Pfaff transformation applies to 2F1 only");
  }
  if (!(spec.z < 1.0) || spec.z == 0.0) throw InvalidArgumentError("Pfaff transformation requires z < 1, z != 0");
  const double a = spec.upper[0];
  const double b = spec.upper[1];
  const double c = spec.lower[0];
  TransformedSpec out;
  out.spec.upper = {a, c - b};
  out.spec.lower = {c};
  out.spec.z = spec.z / (spec.z - 1.0);
  out.prefactor = std::pow(1.0 - spec.z, -a);
  return out;
}

}  // namespace hyprec
