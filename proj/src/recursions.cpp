#include "hyprec/recursions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>

#include "hyprec/error.hpp"
#include "hyprec/specialfun.hpp"

namespace hyprec {
namespace {

// The engine evaluates in x87 extended precision: some families (Dixon at
// large a) amplify rounding by 1e8 through cancellation.
using Real = long double;

constexpr Real kSqrtPi = 1.772453850905516027298167483341145183L;

bool is_zero(double x) { return std::fabs(x) < kPoleTolerance; }
bool is_zero(Real x) { return std::fabs(x) < kPoleTolerance; }
bool is_zero(const Rational& x) { return x == 0; }

int as_int(double x) { return static_cast<int>(std::llround(x)); }
int as_int(Real x) { return static_cast<int>(std::llround(x)); }
int as_int(const Rational& x) { return static_cast<int>(std::llround(x.get_d())); }

std::vector<Real> extended(std::span<const double> p) { return {p.begin(), p.end()}; }

// Lattice-point parameters; base + shift is exact in extended precision.
std::vector<Real> extended_params(const FamilyPoint& point) {
  std::vector<Real> out(point.base.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<Real>(point.base[i]) + point.shift[i];
  return out;
}

bool is_integer(double x) { return x == std::floor(x); }

struct Child {
  int k;
  std::array<int, 4> delta;
};

enum class NodeKind { Recursive, Base, Classical };

NodeKind node_kind(FamilyId f, int k) {
  const auto& info = family_info(f);
  if (k == info.base_k) return NodeKind::Base;
  if ((f == FamilyId::Kummer || f == FamilyId::Dixon) && k == 0) return NodeKind::Classical;
  return NodeKind::Recursive;
}

// Child layout of a recursive node. Pfaff-Saalschutz drops its second child
// when n = 0 since that coefficient carries a factor n.
std::vector<Child> node_children(FamilyId f, int k, int n_int) {
  switch (f) {
    case FamilyId::Gauss2nd: return {{k - 1, {0, 0, 0, 0}}, {k - 1, {1, 1, 0, 0}}};
    case FamilyId::Gauss2ndDiag: return {{k - 1, {0, 0, 0, 0}}, {k - 1, {1, 0, 0, 0}}};
    case FamilyId::Srivastava: return {{k + 1, {0, 0, 0, 0}}, {k + 1, {0, -1, 0, 0}}};
    case FamilyId::Kummer: return {{k - 1, {0, 0, 0, 0}}, {k - 1, {2, 1, 0, 0}}};
    case FamilyId::Miller: return {{k - 1, {0, 0, 0, 0}}, {k - 1, {1, 1, 1, 1}}};
    case FamilyId::PfaffSaalschutz:
      if (n_int == 0) return {{k - 1, {0, 1, 0, 1}}};
      return {{k - 1, {0, 1, 0, 1}}, {k - 1, {-1, 1, 1, 2}}};
    case FamilyId::Dixon: return {{k - 1, {1, 1, 1, 0}}, {k - 1, {-1, 0, 0, 0}}};
    case FamilyId::WatsonLavoie: return {{k - 1, {0, 0, 0, 0}}, {k - 1, {1, 1, 1, 0}}};
    case FamilyId::WatsonShift:
      return {{k - 1, {0, 0, 0, 0}}, {k - 1, {2, 2, 1, 0}}, {k - 1, {1, 1, 0, 0}}};
    case FamilyId::Bailey: return {{k - 1, {-1, -1, -1, 0}}, {k - 1, {-1, 0, 0, 0}}};
  }
  return {};
}

template <class T>
using Labelled = std::vector<std::pair<T, std::string_view>>;

// Denominators of the step coefficients at node K (values that must not vanish).
template <class T>
Labelled<T> node_denominators(FamilyId f, int K, std::span<const T> p) {
  const T k(K);
  switch (f) {
    case FamilyId::Gauss2nd: return {{p[0] + p[1] + T(1) + p[2], "a+b+1+j"}};
    case FamilyId::Gauss2ndDiag: return {{p[0] + T(1), "a+1"}};
    case FamilyId::Srivastava: {
      const T& a = p[1];
      return {{k, "k"}, {T(2) * a + k - T(1), "2a+k-1"}};
    }
    case FamilyId::Kummer: {
      const T km = k - T(1);
      return {{km, "k"}, {p[0] - p[1] + T(1), "a-b+1"}};
    }
    case FamilyId::Miller: return {{p[2], "c"}, {p[3] + T(1), "d+1"}};
    case FamilyId::PfaffSaalschutz: {
      const T &n = p[0], &a = p[1], &b = p[2], &c = p[3];
      if (as_int(n) == 0) return {};
      return {{c + k, "c+k"}, {a + b + T(1) - n - c, "a+b+1-n-c"}};
    }
    case FamilyId::Dixon: {
      const T km = k - T(1);
      return {{km, "k"}, {p[1] + p[2] + km, "b+c+k"}};
    }
    case FamilyId::WatsonLavoie: {
      const T &a = p[0], &b = p[1], &c = p[2];
      return {{a + b + T(1), "a+b+1"}, {T(2) * c + k - T(1), "2c+k-1"}, {T(2) * c + k, "2c+k"}};
    }
    case FamilyId::WatsonShift: {
      const T &a = p[0], &b = p[1], &c = p[2];
      return {{a + b + T(1), "a+b+1"}, {T(2) * c + T(1), "2c+1"}, {a + b + T(3), "a+b+3"}};
    }
    case FamilyId::Bailey: {
      const T &a = p[0], &b = p[1], &c = p[2];
      const T km = k - T(1);
      return {{a - T(1), "a-1"}, {T(2) * c - T(2) * b + km + T(1), "2c-2b+k+1"}, {c - b + km, "c-b+k"}};
    }
  }
  return {};
}

// Step coefficients at node K in the order of node_children. Assumes the
// denominators have been checked.
template <class T>
std::vector<T> node_coefficients(FamilyId f, int K, std::span<const T> p) {
  const T k(K);
  switch (f) {
    case FamilyId::Gauss2nd: {
      const T &a = p[0], &b = p[1], &j = p[2];
      return {T(1), T(a / (a + b + T(1) + j))};
    }
    case FamilyId::Gauss2ndDiag: {
      const T& a = p[0];
      return {T(1), T(a / (T(2) * (a + T(1))))};
    }
    case FamilyId::Srivastava: {
      const T &n = p[0], &a = p[1];
      T first = T(2) * (a + k - T(1)) * (T(2) * a + k + n - T(1)) / (k * (T(2) * a + k - T(1)));
      T second = -(T(2) * a + k - T(2)) / k;
      return {first, second};
    }
    case FamilyId::Kummer: {
      const T &a = p[0], &b = p[1];
      const T km = k - T(1);
      T first = (b + km) / km;
      T second = -T(2) * b * (a + km + T(1)) / (km * (a - b + T(1)));
      return {first, second};
    }
    case FamilyId::Miller: {
      const T &a = p[0], &b = p[1], &c = p[2], &d = p[3];
      return {T(1), T(a * b / (c * (d + T(1))))};
    }
    case FamilyId::PfaffSaalschutz: {
      const T &n = p[0], &a = p[1], &b = p[2], &c = p[3];
      if (as_int(n) == 0) return {T(1)};
      return {T(1), T(n * b / ((c + k) * (a + b + T(1) - n - c)))};
    }
    case FamilyId::Dixon: {
      const T &a = p[0], &b = p[1], &c = p[2];
      const T km = k - T(1);
      const T den = km * (b + c + km);
      T first = a * (a - T(1) - T(2) * (b + c + km)) / den;
      T second = -(a - b) * (a - c) / den;
      return {first, second};
    }
    case FamilyId::WatsonLavoie: {
      const T &a = p[0], &b = p[1], &c = p[2];
      T second = -T(2) * a * b * c / ((a + b + T(1)) * (T(2) * c + k - T(1)) * (T(2) * c + k));
      return {T(1), second};
    }
    case FamilyId::WatsonShift: {
      const T &a = p[0], &b = p[1], &c = p[2];
      const T outer = b / (a + b + T(1));
      T second = outer * (a + k) * (b + T(1)) / ((T(2) * c + T(1)) * (a + b + T(3)));
      return {T(1), second, outer};
    }
    case FamilyId::Bailey: {
      const T &a = p[0], &b = p[1], &c = p[2];
      const T km = k - T(1);
      const T C = (T(2) * c - b + km) * (T(2) * c - b + km + T(1)) /
                  ((a - T(1)) * (T(2) * c - T(2) * b + km + T(1)) * (c - b + km));
      return {T(C * (c - T(1))), T(-C * (c - a))};
    }
  }
  return {};
}

template <class T>
T srivastava_base(const T& n_val, const T& a) {
  const int n = as_int(n_val);
  const T half = T(1) / T(2);
  const int m = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
  T den = pochhammer(T(a - half), m);
  if (is_zero(den)) throw PoleError("Pochhammer (a-1/2)_m vanishes");
  T r = pochhammer(half, m) / den;
  return (n % 2 == 0) ? r : T(-r);
}

template <class T>
T pfaff_base(std::span<const T> p) {
  const int n = as_int(p[0]);
  const T &a = p[1], &b = p[2], &c = p[3];
  T den = pochhammer(c, n) * pochhammer(T(c - a - b), n);
  if (is_zero(den)) throw PoleError("Pochhammer denominator vanishes");
  return pochhammer(T(c - a), n) * pochhammer(T(c - b), n) / den;
}

void require_integer_params(FamilyId f, std::span<const double> params) {
  const auto& info = family_info(f);
  if (params.size() != info.param_names.size())
    throw InvalidArgumentError(std::string(info.name) + " expects " + std::to_string(info.param_names.size()) +
                               " parameters");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!std::isfinite(params[i])) throw InvalidArgumentError("non-finite parameter");
    if (info.integer_param[i] && !is_integer(params[i]))
      throw InvalidArgumentError(std::string(info.param_names[i]) + " must be an integer");
  }
  if (f == FamilyId::Srivastava || f == FamilyId::PfaffSaalschutz) {
    if (params[0] < 0) throw InvalidArgumentError("n must be nonnegative");
  }
  if (f == FamilyId::Gauss2nd && params[2] != 0.0 && params[2] != 1.0)
    throw InvalidArgumentError("j must be 0 or 1");
}

void require_admissible(FamilyId f, int k) {
  if (!k_admissible(f, k))
    throw DomainError("k = " + std::to_string(k) + " is outside the range of " + std::string(family_info(f).name));
}

}  // namespace

namespace {

template <class T>
T base_impl(FamilyId f, std::span<const T> p) {
  switch (f) {
    case FamilyId::Gauss2nd: {
      const T a = p[0], b = p[1];
      if (p[2] == 0) {
        return T(kSqrtPi) * gamma_ratio({(a + b + 1) / 2}, {(a + 1) / 2, (b + 1) / 2});
      }
      if (std::fabs(a - b) < 0.05) throw DegenerateBaseError("Gauss2nd j=1 base needs |a-b| >= 0.05");
      const T bracket = reciprocal_gamma(a / 2) * reciprocal_gamma((b + 1) / 2) -
                             reciprocal_gamma((a + 1) / 2) * reciprocal_gamma(b / 2);
      return 2 * T(kSqrtPi) / (a - b) * gamma((a + b) / 2 + 1) * bracket;
    }
    case FamilyId::Gauss2ndDiag: {
      const T a = p[0];
      if (is_zero(a)) return T(1);
      return std::exp2(a - 1) * a * (digamma((a + 1) / 2) - digamma(a / 2));
    }
    case FamilyId::Srivastava: return srivastava_base(p[0], p[1]);
    case FamilyId::Kummer: {
      const T a = p[0], b = p[1];
      const T s = reciprocal_gamma(a / 2 + 1) * reciprocal_gamma((a + 1) / 2 - b) +
                       reciprocal_gamma((a + 1) / 2) * reciprocal_gamma(a / 2 - b + 1);
      return T(kSqrtPi) * gamma(a + 1 - b) / std::exp2(a + 1) * s;
    }
    case FamilyId::Miller: {
      const T a = p[0], b = p[1], c = p[2], d = p[3];
      if (is_zero(c)) throw DegenerateBaseError("Miller base divides by c");
      const T bracket = a * (b - c) + c * (d - b);
      return gamma_ratio({d + 1, d - a - b}, {d - a + 1, d - b + 1}) / c * bracket;
    }
    case FamilyId::PfaffSaalschutz: return pfaff_base(p);
    case FamilyId::Dixon: {
      const T a = p[0], b = p[1], c = p[2];
      if (is_zero(b) || is_zero(c)) throw DegenerateBaseError("Dixon base divides by b c");
      const T pre = gamma_ratio({1 + a - b, 1 + a - c}, {a - 2 * c, a - b - c}) /
                         (std::exp2(2 * c + 1) * b * c);
      const T t1 = gamma_ratio({(a + 1) / 2 - c, a / 2 - b - c}, {(a + 1) / 2, a / 2 - b});
      const T t2 = gamma_ratio({(a + 1) / 2 - b - c, a / 2 - c}, {a / 2, (a + 1) / 2 - b});
      return pre * (t1 - t2);
    }
    case FamilyId::WatsonLavoie:
    case FamilyId::WatsonShift: {
      const T a = p[0], b = p[1], c = p[2];
      return T(kSqrtPi) * gamma_ratio({c + 0.5, (a + b + 1) / 2, (1 - a - b) / 2 + c},
                                      {(a + 1) / 2, (b + 1) / 2, (1 - a) / 2 + c, (1 - b) / 2 + c});
    }
    case FamilyId::Bailey: {
      const T a = p[0], b = p[1], c = p[2];
      if (is_zero(c)) throw DegenerateBaseError("Bailey base divides by c");
      return (1 - a / (2 * c)) * gamma_ratio({2 * c - b + 1, 2 * c - a - 2 * b}, {2 * c - 2 * b, 2 * c - a - b + 1});
    }
  }
  throw InvalidArgumentError("unknown family");
}

template <class T>
T classical_impl(FamilyId f, std::span<const T> p) {
  if (f == FamilyId::Kummer) {
    const T a = p[0], b = p[1];
    return gamma_ratio({a - b + 1, a / 2 + 1}, {a + 1, a / 2 - b + 1});
  }
  if (f == FamilyId::Dixon) {
    const T a = p[0], b = p[1], c = p[2];
    return gamma_ratio({1 + a / 2, 1 + a - b, 1 + a - c, 1 + a / 2 - b - c},
                          {1 + a, 1 + a / 2 - b, 1 + a / 2 - c, 1 + a - b - c});
  }
  throw InvalidArgumentError("classical value exists only for kummer and dixon");
}

}  // namespace

double base_value(FamilyId f, std::span<const double> p) {
  require_integer_params(f, p);
  const auto ext = extended(p);
  return static_cast<double>(base_impl<Real>(f, std::span<const Real>(ext)));
}

double classical_value(FamilyId f, std::span<const double> p) {
  require_integer_params(f, p);
  const auto ext = extended(p);
  return static_cast<double>(classical_impl<Real>(f, std::span<const Real>(ext)));
}

std::vector<RecursionTerm> recursion_step(const FamilyPoint& point) {
  const FamilyId f = point.family;
  if (node_kind(f, point.k) != NodeKind::Recursive)
    throw DomainError("k = " + std::to_string(point.k) + " is a base index, not a recursion step", point);
  require_admissible(f, point.k);
  const auto params = point.params();
  std::span<const double> p(params);
  for (const auto& [value, what] : node_denominators<double>(f, point.k, p)) {
    if (is_zero(value)) throw CoefficientPoleError("recursion coefficient denominator " + std::string(what) + " vanishes", point);
  }
  const auto coeffs = node_coefficients<double>(f, point.k, p);
  const auto kids = node_children(f, point.k, f == FamilyId::PfaffSaalschutz ? as_int(p[0]) : -1);
  std::vector<RecursionTerm> out;
  out.reserve(kids.size());
  for (std::size_t i = 0; i < kids.size(); ++i) {
    out.push_back({coeffs[i], point.child(kids[i].k, std::span<const int>(kids[i].delta.data(), point.shift.size()))});
  }
  return out;
}

std::vector<RecursionTerm> recursion_step(FamilyId family, int k, std::span<const double> params) {
  require_integer_params(family, params);
  return recursion_step(FamilyPoint(family, k, std::vector<double>(params.begin(), params.end())));
}

std::optional<long double> MemoTable::find(const FamilyPoint& point) const {
  std::shared_lock lock(mutex_);
  auto it = values_.find(point);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

long double MemoTable::insert(const FamilyPoint& point, long double value) {
  std::unique_lock lock(mutex_);
  auto [it, inserted] = values_.emplace(point, value);
  return it->second;
}

std::size_t MemoTable::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

std::size_t MemoTable::distinct_shifts() const {
  std::shared_lock lock(mutex_);
  std::set<std::pair<int, std::vector<int>>> seen;
  for (const auto& [p, v] : values_) seen.emplace(static_cast<int>(p.family), p.shift);
  return seen.size();
}

void MemoTable::clear() {
  std::unique_lock lock(mutex_);
  values_.clear();
}

namespace {

// The common factor (2c-b+k)(2c-b+k+1)/((a-1)(2c-2b+k+1)(c-b+k)) at a Bailey node.
Real bailey_factor(const FamilyPoint& point) {
  const auto p = extended_params(point);
  const Real a = p[0], b = p[1], c = p[2];
  const Real km = point.k - 1;
  return (2 * c - b + km) * (2 * c - b + km + 1) / ((a - 1) * (2 * c - 2 * b + km + 1) * (c - b + km));
}

// H_k(a, b, c) = c G_k(a, b, c) for the Bailey family. H is regular at c = 0,
// which the Bailey lattice reaches through the factor (c-1) of its first
// child: at c = 1 that term is the finite product H_k(a-1, b-1, 0).
Real bailey_scaled(const FamilyPoint& point, std::unordered_map<FamilyPoint, Real, FamilyPointHash>& memo) {
  if (auto it = memo.find(point); it != memo.end()) return it->second;
  const auto p = extended_params(point);
  const Real a = p[0], b = p[1], c = p[2];
  Real value = 0;
  if (point.k == 0) {
    value = (c - a / 2) * gamma_ratio({2 * c - b + 1, 2 * c - a - 2 * b}, {2 * c - 2 * b, 2 * c - a - b + 1});
  } else {
    for (const auto& [d, what] : node_denominators<Real>(FamilyId::Bailey, point.k, std::span<const Real>(p)))
      if (is_zero(d)) throw CoefficientPoleError("recursion coefficient denominator " + std::string(what) + " vanishes", point);
    const Real C = bailey_factor(point);
    const std::array<int, 3> d1 = {-1, -1, -1}, d2 = {-1, 0, 0};
    value = c * C * bailey_scaled(point.child(point.k - 1, d1), memo) -
            (c - a) * C * bailey_scaled(point.child(point.k - 1, d2), memo);
  }
  memo.emplace(point, value);
  return value;
}

Real recurse_ext(const FamilyPoint& point, MemoTable& memo) {
  if (auto hit = memo.find(point)) return *hit;
  const FamilyId f = point.family;
  const auto p = extended_params(point);
  const std::span<const Real> ps(p);
  Real value = 0;
  try {
    switch (node_kind(f, point.k)) {
      case NodeKind::Base: value = base_impl<Real>(f, ps); break;
      case NodeKind::Classical: value = classical_impl<Real>(f, ps); break;
      case NodeKind::Recursive: {
        require_admissible(f, point.k);
        for (const auto& [d, what] : node_denominators<Real>(f, point.k, ps))
          if (is_zero(d)) throw CoefficientPoleError("recursion coefficient denominator " + std::string(what) + " vanishes", point);
        const auto coeffs = node_coefficients<Real>(f, point.k, ps);
        const auto kids = node_children(f, point.k, f == FamilyId::PfaffSaalschutz ? as_int(p[0]) : -1);
        for (std::size_t i = 0; i < kids.size(); ++i) {
          const FamilyPoint child =
              point.child(kids[i].k, std::span<const int>(kids[i].delta.data(), point.shift.size()));
          if (f == FamilyId::Bailey && i == 0 && is_zero(p[2] - 1)) {
            std::unordered_map<FamilyPoint, Real, FamilyPointHash> scaled;
            value += bailey_factor(point) * bailey_scaled(child, scaled);
            continue;
          }
          // A zero coefficient still visits its child: 0 times a pole child is
          // an indeterminate limit, reported rather than dropped.
          value += coeffs[i] * recurse_ext(child, memo);
        }
        break;
      }
    }
  } catch (Error& e) {
    e.attach(point);
    throw;
  }
  if (!std::isfinite(value) || !std::isfinite(static_cast<double>(value)))
    throw OverflowError("non-finite value in recursion", point);
  return memo.insert(point, value);
}

}  // namespace

double recurse(const FamilyPoint& point, MemoTable& memo) { return static_cast<double>(recurse_ext(point, memo)); }

double recurse(FamilyId family, int k, std::span<const double> params, MemoTable& memo) {
  require_integer_params(family, params);
  require_admissible(family, k);
  return recurse(FamilyPoint(family, k, std::vector<double>(params.begin(), params.end())), memo);
}

double recurse(FamilyId family, int k, std::span<const double> params) {
  MemoTable memo;
  return recurse(family, k, params, memo);
}

namespace {

template <class T>
BasicHypSpec<T> make_spec(FamilyId f, int K, std::span<const T> p) {
  const T k(K);
  const T one(1), two(2), half = T(1) / T(2);
  switch (f) {
    case FamilyId::Gauss2nd:
      return {{p[0], T(p[1] + k)}, {T((p[0] + p[1] + p[2] + one) / two)}, half};
    case FamilyId::Gauss2ndDiag: return {{p[0], T(p[0] + k)}, {T(p[0] + one)}, half};
    case FamilyId::Srivastava: return {{T(-p[0]), p[1]}, {T(two * p[1] - one + k)}, two};
    case FamilyId::Kummer: return {{T(p[0] + k), p[1]}, {T(p[0] - p[1] + one)}, T(-1)};
    case FamilyId::Miller: return {{p[0], p[1], T(p[2] + k + one)}, {T(p[3] + one), p[2]}, one};
    case FamilyId::PfaffSaalschutz:
      return {{T(-p[0]), p[1], p[2]}, {T(p[3] + k), T(p[1] + p[2] + one - p[0] - p[3])}, one};
    case FamilyId::Dixon:
      return {{p[0], T(p[1] + k), T(p[2] + k)}, {T(p[0] - p[1] + one), T(p[0] - p[2] + one)}, one};
    case FamilyId::WatsonLavoie:
      return {{p[0], p[1], p[2]}, {T((p[0] + p[1] + one) / two), T(two * p[2] + k)}, one};
    case FamilyId::WatsonShift:
      return {{T(p[0] + k), p[1], p[2]}, {T((p[0] + p[1] + one) / two), T(two * p[2])}, one};
    case FamilyId::Bailey:
      return {{p[0], p[1], T(p[2] + one)}, {T(one + two * p[2] - p[1] + k), p[2]}, one};
  }
  return {};
}

}  // namespace

HypSpec defining_spec(FamilyId family, int k, std::span<const double> params) {
  require_integer_params(family, params);
  require_admissible(family, k);
  return make_spec<double>(family, k, params);
}

EvalResult direct_value(FamilyId family, int k, std::span<const double> params, const SummationPolicy& policy) {
  const HypSpec spec = defining_spec(family, k, params);
  if (family == FamilyId::Srivastava || family == FamilyId::PfaffSaalschutz) {
    RationalHypSpec exact;
    for (double u : spec.upper) exact.upper.push_back(rational_from_double(u));
    for (double l : spec.lower) exact.lower.push_back(rational_from_double(l));
    exact.z = rational_from_double(spec.z);
    validate(exact);
    EvalResult r;
    r.value = to_double(evaluate_terminating_exact(exact));
    r.abs_error_estimate = std::fabs(r.value) * std::numeric_limits<double>::epsilon();
    r.terms_used = *termination_index(exact) + 1;
    r.cls = ConvergenceClass::Terminating;
    return r;
  }
  if (family == FamilyId::Kummer && !termination_index(spec)) {
    const auto t = pfaff_transform_2f1(spec);
    EvalResult r = evaluate_series(t.spec, policy);
    r.value *= t.prefactor;
    r.abs_error_estimate *= std::fabs(t.prefactor);
    r.cls = classify(spec);
    return r;
  }
  return evaluate_series(spec, policy);
}

bool supports_exact(FamilyId family) {
  return family == FamilyId::Srivastava || family == FamilyId::PfaffSaalschutz;
}

namespace {

void require_exact(FamilyId family, std::span<const Rational> params) {
  if (!supports_exact(family))
    throw InvalidArgumentError("exact arithmetic is offered only for srivastava and pfaff-saalschutz");
  if (params.size() != family_info(family).param_names.size()) throw InvalidArgumentError("wrong parameter count");
  const Rational& n = params[0];
  if (n.get_den() != 1 || n < 0) throw InvalidArgumentError("n must be a nonnegative integer");
}

struct ExactKey {
  int k;
  std::vector<int> shift;
  auto operator<=>(const ExactKey&) const = default;
};

Rational recurse_exact_impl(FamilyId f, int K, std::span<const Rational> base, const std::vector<int>& shift,
                            std::map<ExactKey, Rational>& memo) {
  ExactKey key{K, shift};
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::vector<Rational> p(base.begin(), base.end());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] += shift[i];
  std::span<const Rational> ps(p);
  Rational value;
  if (node_kind(f, K) == NodeKind::Base) {
    value = f == FamilyId::Srivastava ? srivastava_base(p[0], p[1]) : pfaff_base(ps);
  } else {
    for (const auto& [d, what] : node_denominators<Rational>(f, K, ps)) {
      if (d == 0) throw CoefficientPoleError("recursion coefficient denominator " + std::string(what) + " vanishes");
    }
    const auto coeffs = node_coefficients<Rational>(f, K, ps);
    const auto kids = node_children(f, K, as_int(p[0]));
    for (std::size_t i = 0; i < kids.size(); ++i) {
      std::vector<int> s = shift;
      for (std::size_t j = 0; j < s.size(); ++j) s[j] += kids[i].delta[j];
      value += coeffs[i] * recurse_exact_impl(f, kids[i].k, base, s, memo);
    }
  }
  memo.emplace(key, value);
  return value;
}

}  // namespace

Rational base_value_exact(FamilyId family, std::span<const Rational> params) {
  require_exact(family, params);
  return family == FamilyId::Srivastava ? srivastava_base(params[0], params[1]) : pfaff_base(params);
}

Rational recurse_exact(FamilyId family, int k, std::span<const Rational> params) {
  require_exact(family, params);
  require_admissible(family, k);
  std::map<ExactKey, Rational> memo;
  return recurse_exact_impl(family, k, params, std::vector<int>(params.size(), 0), memo);
}

RationalHypSpec defining_spec_exact(FamilyId family, int k, std::span<const Rational> params) {
  require_exact(family, params);
  require_admissible(family, k);
  return make_spec<Rational>(family, k, params);
}

Rational direct_value_exact(FamilyId family, int k, std::span<const Rational> params) {
  return evaluate_terminating_exact(defining_spec_exact(family, k, params));
}

bool within_margin(const Singularity& s, double margin) {
  if (s.kind == SingularityKind::Zero) return std::fabs(s.value) < margin;
  if (s.value > margin) return false;
  return std::fabs(s.value - std::round(s.value)) < margin;
}

namespace {

std::vector<Singularity> base_singularities(FamilyId f, int k, std::span<const double> p) {
  using K = SingularityKind;
  auto G = [](double v, std::string_view w) { return Singularity{v, K::GammaPole, w}; };
  auto Z = [](double v, std::string_view w) { return Singularity{v, K::Zero, w}; };
  const bool classical = node_kind(f, k) == NodeKind::Classical;
  switch (f) {
    case FamilyId::Gauss2nd: {
      const double a = p[0], b = p[1];
      if (p[2] == 0.0) return {G((a + b + 1) / 2, "(a+b+1)/2")};
      return {Z(a - b, "a-b"), G((a + b) / 2 + 1, "(a+b)/2+1")};
    }
    case FamilyId::Gauss2ndDiag: {
      const double a = p[0];
      return {G((a + 1) / 2, "(a+1)/2"), G(a / 2 + 1, "a/2+1"), Z(a + 1, "a+1")};
    }
    case FamilyId::Srivastava: {
      const int n = as_int(p[0]);
      const int m = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
      std::vector<Singularity> out;
      for (int i = 0; i < m; ++i) out.push_back(Z(p[1] - 0.5 + i, "(a-1/2)_m"));
      return out;
    }
    case FamilyId::Kummer: {
      const double a = p[0], b = p[1];
      if (classical) return {G(a - b + 1, "a-b+1"), G(a / 2 + 1, "a/2+1")};
      return {G(a + 1 - b, "a+1-b")};
    }
    case FamilyId::Miller: {
      const double a = p[0], b = p[1], d = p[3];
      return {Z(p[2], "c"), G(d + 1, "d+1"), G(d - a - b, "d-a-b")};
    }
    case FamilyId::PfaffSaalschutz: {
      const int n = as_int(p[0]);
      const double a = p[1], b = p[2], c = p[3];
      std::vector<Singularity> out;
      for (int i = 0; i < n; ++i) {
        out.push_back(Z(c + i, "(c)_n"));
        out.push_back(Z(c - a - b + i, "(c-a-b)_n"));
      }
      return out;
    }
    case FamilyId::Dixon: {
      const double a = p[0], b = p[1], c = p[2];
      if (classical) return {G(1 + a / 2, "1+a/2"), G(1 + a - b, "1+a-b"), G(1 + a - c, "1+a-c"),
                             G(1 + a / 2 - b - c, "1+a/2-b-c")};
      return {Z(b, "b"), Z(c, "c"), G(1 + a - b, "1+a-b"), G(1 + a - c, "1+a-c"),
              G((a + 1) / 2 - c, "(a+1)/2-c"), G(a / 2 - b - c, "a/2-b-c"),
              G((a + 1) / 2 - b - c, "(a+1)/2-b-c"), G(a / 2 - c, "a/2-c")};
    }
    case FamilyId::WatsonLavoie:
    case FamilyId::WatsonShift: {
      const double a = p[0], b = p[1], c = p[2];
      return {G(c + 0.5, "c+1/2"), G((a + b + 1) / 2, "(a+b+1)/2"), G((1 - a - b) / 2 + c, "(1-a-b)/2+c")};
    }
    case FamilyId::Bailey: {
      const double a = p[0], b = p[1], c = p[2];
      return {Z(c, "c"), G(2 * c - b + 1, "2c-b+1"), G(2 * c - a - 2 * b, "2c-a-2b")};
    }
  }
  return {};
}

}  // namespace

std::vector<Singularity> node_singularities(const FamilyPoint& point) {
  const auto params = point.params();
  std::span<const double> p(params);
  if (node_kind(point.family, point.k) != NodeKind::Recursive) return base_singularities(point.family, point.k, p);
  std::vector<Singularity> out;
  for (const auto& [v, what] : node_denominators<double>(point.family, point.k, p))
    out.push_back({v, SingularityKind::Zero, what});
  return out;
}

std::optional<ScanFinding> scan_recursion_tree(FamilyId family, int k, std::span<const double> params, double margin,
                                               std::size_t* points_visited) {
  require_integer_params(family, params);
  require_admissible(family, k);
  std::unordered_set<FamilyPoint, FamilyPointHash> seen;
  std::vector<FamilyPoint> stack{FamilyPoint(family, k, std::vector<double>(params.begin(), params.end()))};
  std::optional<ScanFinding> finding;
  while (!stack.empty() && !finding) {
    FamilyPoint pt = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(pt).second) continue;
    for (const auto& s : node_singularities(pt)) {
      if (within_margin(s, margin)) {
        finding = ScanFinding{pt, s};
        break;
      }
    }
    if (finding || node_kind(family, pt.k) != NodeKind::Recursive) continue;
    const int n_int = family == FamilyId::PfaffSaalschutz ? as_int(pt.param(0)) : -1;
    for (const auto& c : node_children(family, pt.k, n_int))
      stack.push_back(pt.child(c.k, std::span<const int>(c.delta.data(), pt.shift.size())));
  }
  if (points_visited) *points_visited = seen.size();
  return finding;
}

}  // namespace hyprec
