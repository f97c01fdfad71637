#include "hyprec/closedforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "hyprec/error.hpp"
#include "hyprec/specialfun.hpp"

namespace hyprec {
namespace {

const std::array<ClosedFormInfo, 6> kInfos = {{
    {ClosedFormId::HalfArgumentPower, "half-argument-power", 1, 1, FamilyId::Gauss2ndDiag},
    {ClosedFormId::KummerChoi, "kummer-choi", 2, 0, FamilyId::Kummer},
    {ClosedFormId::ChoiGammaIdentity, "choi-identity", 2, 1, std::nullopt},
    {ClosedFormId::MillerClosed, "miller-closed", 4, 0, FamilyId::Miller},
    {ClosedFormId::PfaffClosed, "pfaff-closed", 4, 0, FamilyId::PfaffSaalschutz},
    {ClosedFormId::BaileyClosed, "bailey-closed", 3, 0, FamilyId::Bailey},
}};

constexpr std::array<ClosedFormId, 6> kAllIds = {ClosedFormId::HalfArgumentPower, ClosedFormId::KummerChoi,
                                                 ClosedFormId::ChoiGammaIdentity,  ClosedFormId::MillerClosed,
                                                 ClosedFormId::PfaffClosed,        ClosedFormId::BaileyClosed};

bool is_zero(double x) { return std::fabs(x) < kPoleTolerance; }
bool is_zero(const Rational& x) { return x == 0; }

double binomial(int k, int m) {
  double r = 1.0;
  for (int i = 1; i <= m; ++i) r = r * (k - m + i) / i;
  return r;
}

void require_k(int k, int k_min, std::string_view what) {
  if (k < k_min) throw DomainError(std::string(what) + " is defined for k >= " + std::to_string(k_min));
}

// Sum of the first `count` + 1 terms of pFq(upper; lower | 1); the caller
// guarantees the series has terminated by then.
template <class T>
T finite_sum(std::span<const T> upper, std::span<const T> lower, int count) {
  T term(1), sum(1);
  for (int j = 0; j < count; ++j) {
    T num(1), den(j + 1);
    for (const T& u : upper) num *= u + j;
    for (const T& l : lower) den *= l + j;
    if (is_zero(num)) break;
    if (is_zero(den)) throw PoleError("lower parameter reaches a nonpositive integer before termination");
    term *= num / den;
    sum += term;
  }
  return sum;
}

template <class T>
T pfaff_closed_impl(int n, const T& a, const T& b, const T& c, int k) {
  if (n < 0) throw InvalidArgumentError("n must be nonnegative");
  require_k(k, 0, "pfaff_closed");
  const T den = pochhammer(T(c + k), n) * pochhammer(T(c - a - b), n);
  if (is_zero(den)) throw PoleError("Pochhammer denominator vanishes");
  const T pre = pochhammer(T(c - a), n) * pochhammer(T(c - b + k), n) / den;
  const std::array<T, 3> upper = {T(-k), T(-n), b};
  const std::array<T, 2> lower = {T(c - a), T(b - c - k - n + 1)};
  return pre * finite_sum<T>(upper, lower, std::min(k, n));
}

}  // namespace

const ClosedFormInfo& closed_form_info(ClosedFormId id) { return kInfos[static_cast<std::size_t>(id)]; }

std::span<const ClosedFormId> all_closed_forms() { return kAllIds; }

double half_argument_power(double a, int k) {
  require_k(k, 1, "half_argument_power");
  // (k-1)! / ((i-1)! (k-i-1)!) = (k-1) C(k-2, i-1)
  double sum = 0.0;
  for (int i = 1; i <= k - 1; ++i) {
    if (is_zero(a + i)) throw PoleError("a + i vanishes in the half-argument sum");
    sum += (k - 1) * binomial(k - 2, i - 1) / (a + i);
  }
  return std::exp2(a) * (std::exp2(k - 1) - sum);
}

double half_argument_power_series_form(double a, int k) {
  require_k(k, 1, "half_argument_power_series_form");
  if (k == 1) return std::exp2(a);
  if (is_zero(a + 1) || is_zero(a + 2)) throw PoleError("a + 1 or a + 2 vanishes");
  HypSpec spec{{2.0 - k, a + 1}, {a + 2}, -1.0};
  const double f = evaluate_series(spec).value;
  return std::exp2(a) * (std::exp2(k - 1) - (k - 1) / (a + 1) * f);
}

double kummer_choi(double a, double b, int k) {
  require_k(k, 0, "kummer_choi");
  if (near_nonpositive_integer(a + k)) throw PoleError("Gamma(a+k) has a pole");
  double sum = 0.0;
  for (int m = 0; m <= k; ++m) {
    sum += binomial(k, m) * gamma_ratio({1 + a - b, (a + k + m) / 2}, {a + k, (a - k + m) / 2 - b + 1});
  }
  return sum / 2;
}

IdentitySides choi_identity_sides(double a, double b, int k) {
  require_k(k, 1, "choi_identity");
  IdentitySides s{gamma_ratio({(a + k + 1) / 2}, {(a - k + 1) / 2 - b}), 0.0, 0.0};
  s.scale = std::fabs(s.lhs);
  for (int m = 0; m <= k; ++m) {
    const double w = a + (k - 1) / 2.0 - b * m / k - (k + 1) * (a + k - 1) / (2.0 * (m + 1));
    const double t = binomial(k, m) * w * gamma_ratio({(a + k + m) / 2}, {(a - k + m) / 2 - b + 1});
    s.rhs += t;
    s.scale = std::max(s.scale, std::fabs(t));
  }
  return s;
}

double choi_identity_residual(double a, double b, int k) {
  const auto s = choi_identity_sides(a, b, k);
  return s.lhs - s.rhs;
}

double miller_closed(double a, double b, double c, double d, int k) {
  require_k(k, 0, "miller_closed");
  if (is_zero(c)) throw DomainError("miller_closed requires c != 0");
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  const double pre = sign * gamma_ratio({d + 1, d - a - b - k}, {d - a + 1, d - b + 1}) / c;
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double den = pochhammer(c + 1, j);
    if (is_zero(den)) throw PoleError("(c+1)_j vanishes");
    const double bracket = a * (b - c) - (b + j) * c + (c + j) * d;
    const double jsign = (j % 2 == 0) ? 1.0 : -1.0;
    sum += jsign * pochhammer(a + b - d + j + 1, k - j) * pochhammer(a, j) * pochhammer(b, j) / den *
           binomial(k, j) * bracket;
  }
  return pre * sum;
}

double miller_relation(double a, double b, double c, double d, int k, MillerBracket bracket) {
  require_k(k, 0, "miller_relation");
  if (is_zero(c)) throw DomainError("miller_relation requires c != 0");
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  const double e = a + b - d;
  const double pre = sign * gamma_ratio({d + 1, d - a - b - k}, {d - a + 1, d - b + 1}) * pochhammer(e + 1, k) / c;
  const double br = a * (b - c) + c * (bracket == MillerBracket::DMinusB ? d - b : d - c);
  const std::array<double, 3> up1 = {-static_cast<double>(k), a, b};
  const std::array<double, 2> lo1 = {c + 1, e + 1};
  double inner = br * finite_sum<double>(up1, lo1, k);
  if (k >= 1) {
    const std::array<double, 3> up2 = {1.0 - k, a + 1, b + 1};
    const std::array<double, 2> lo2 = {c + 2, e + 2};
    inner += a * b * (c - d) * k / ((c + 1) * (e + 1)) * finite_sum<double>(up2, lo2, k - 1);
  }
  return pre * inner;
}

double pfaff_closed(int n, double a, double b, double c, int k) { return pfaff_closed_impl<double>(n, a, b, c, k); }

Rational pfaff_closed(int n, const Rational& a, const Rational& b, const Rational& c, int k) {
  return pfaff_closed_impl<Rational>(n, a, b, c, k);
}

double pfaff_gamma_sum(int n, double a, double b, double c, int k) {
  if (n < 0) throw InvalidArgumentError("n must be nonnegative");
  require_k(k, 0, "pfaff_gamma_sum");
  const double den = pochhammer(c + k, n) * pochhammer(c - a - b, n);
  if (is_zero(den)) throw PoleError("Pochhammer denominator vanishes");
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double w = pochhammer(b, j) * pochhammer(n - j + 1.0, j);
    if (w == 0.0) continue;
    const double jsign = (j % 2 == 0) ? 1.0 : -1.0;
    sum += jsign * binomial(k, j) * w * gamma_ratio({c - a + n, c - b + n + k - j}, {c - b + k, c - a + j});
  }
  return sum / den;
}

double bailey_closed(double a, double b, double c, int k) {
  require_k(k, 0, "bailey_closed");
  if (is_zero(c)) throw DomainError("bailey_closed requires c != 0");
  const double bracket = (a - 2 * c) * (b - c) + k * c;
  return bracket / c *
         gamma_ratio({2 * c - b + k + 1, 2 * c - a - 2 * b + k}, {2 * c - 2 * b + k + 1, 2 * c - a - b + k + 1});
}

std::optional<ClosedFormId> closed_form_for(FamilyId family, int k) {
  switch (family) {
    case FamilyId::Gauss2ndDiag:
      if (k >= 1) return ClosedFormId::HalfArgumentPower;
      return std::nullopt;
    case FamilyId::Kummer: return ClosedFormId::KummerChoi;
    case FamilyId::Miller: return ClosedFormId::MillerClosed;
    case FamilyId::PfaffSaalschutz: return ClosedFormId::PfaffClosed;
    case FamilyId::Bailey: return ClosedFormId::BaileyClosed;
    default: return std::nullopt;
  }
}

double closed_value(FamilyId family, int k, std::span<const double> p) {
  switch (family) {
    case FamilyId::Gauss2ndDiag: return half_argument_power(p[0], k);
    case FamilyId::Kummer: return kummer_choi(p[0], p[1], k);
    case FamilyId::Miller: return miller_closed(p[0], p[1], p[2], p[3], k);
    case FamilyId::PfaffSaalschutz: return pfaff_closed(static_cast<int>(std::llround(p[0])), p[1], p[2], p[3], k);
    case FamilyId::Bailey: return bailey_closed(p[0], p[1], p[2], k);
    default: throw InvalidArgumentError("no closed form for " + std::string(family_info(family).name));
  }
}

std::vector<Singularity> closed_form_singularities(FamilyId family, int k, std::span<const double> p) {
  using K = SingularityKind;
  std::vector<Singularity> out;
  auto G = [&](double v, std::string_view w) { out.push_back({v, K::GammaPole, w}); };
  auto Z = [&](double v, std::string_view w) { out.push_back({v, K::Zero, w}); };
  switch (family) {
    case FamilyId::Gauss2ndDiag:
      for (int i = 1; i < k; ++i) Z(p[0] + i, "a+i");
      break;
    case FamilyId::Kummer: {
      const double a = p[0], b = p[1];
      G(1 + a - b, "1+a-b");
      G(a + k, "a+k");
      for (int m = 0; m <= k; ++m) G((a + k + m) / 2, "(a+k+m)/2");
      break;
    }
    case FamilyId::Miller: {
      const double a = p[0], b = p[1], c = p[2], d = p[3];
      Z(c, "c");
      G(d + 1, "d+1");
      G(d - a - b - k, "d-a-b-k");
      for (int j = 0; j < k; ++j) Z(c + 1 + j, "(c+1)_j");
      break;
    }
    case FamilyId::PfaffSaalschutz: {
      const int n = static_cast<int>(std::llround(p[0]));
      const double a = p[1], b = p[2], c = p[3];
      for (int i = 0; i < n; ++i) {
        Z(c + k + i, "(c+k)_n");
        Z(c - a - b + i, "(c-a-b)_n");
      }
      for (int j = 0; j < std::min(k, n); ++j) {
        Z(c - a + j, "(c-a)_j");
        Z(b - c - k - n + 1 + j, "(b-c-k-n+1)_j");
      }
      break;
    }
    case FamilyId::Bailey: {
      const double a = p[0], b = p[1], c = p[2];
      Z(c, "c");
      G(2 * c - b + k + 1, "2c-b+k+1");
      G(2 * c - a - 2 * b + k, "2c-a-2b+k");
      break;
    }
    default: break;
  }
  return out;
}

}  // namespace hyprec
