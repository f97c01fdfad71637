#include "hyprec/contiguous.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "hyprec/error.hpp"
#include "hyprec/specialfun.hpp"

namespace hyprec {
namespace {

template <class T>
T over(const T& num, const T& den) {
  if constexpr (std::is_same_v<T, double>) {
    if (std::fabs(den) < kPoleTolerance) throw DomainError("relation coefficient has a vanishing denominator");
  } else {
    if (den == 0) throw DomainError("relation coefficient has a vanishing denominator");
  }
  return num / den;
}

template <class T>
using CoefFn = std::function<T(std::span<const T>, const T&)>;

struct Term {
  CoefFn<double> coef_d;
  CoefFn<Rational> coef_q;
  std::array<int, 5> shift;  // alpha, beta, gamma, delta, epsilon
};

template <class L>
Term term(L fn, std::array<int, 5> shift) {
  return {CoefFn<double>([fn](std::span<const double> p, const double& z) { return fn.template operator()<double>(p, z); }),
          CoefFn<Rational>([fn](std::span<const Rational> p, const Rational& z) {
            return fn.template operator()<Rational>(p, z);
          }),
          shift};
}

// Coefficient bodies see al, be, ga (and de, ep for 3F2) and z.
#define HYPREC_C2(expr)                                                   \
  []<class T>(std::span<const T> p, const T& z) -> T {                    \
    [[maybe_unused]] const T &al = p[0], &be = p[1], &ga = p[2];          \
    (void)z;                                                              \
    return T(expr);                                                       \
  }
#define HYPREC_C3(expr)                                                                       \
  []<class T>(std::span<const T> p, const T& z) -> T {                                        \
    [[maybe_unused]] const T &al = p[0], &be = p[1], &ga = p[2], &de = p[3], &ep = p[4];      \
    (void)z;                                                                                  \
    return T(expr);                                                                           \
  }

struct Relation {
  RelationInfo info;
  std::vector<Term> terms;  // residual = terms[0] - (-(terms[1] + ...)); terms[0] is the LHS
};

const std::vector<Relation>& catalog() {
  static const std::vector<Relation> relations = [] {
    std::vector<Relation> r;
    r.push_back({{RelationId::Lebedev_9_2_13, "Lebedev_9_2_13",
                  "F(al,be+1;ga|z) - F(al,be;ga|z) - al z/ga F(al+1,be+1;ga+1|z) = 0", "Eq. 9.2.13", 2, true},
                 {term(HYPREC_C2(1), {0, 1, 0, 0, 0}), term(HYPREC_C2(-1), {0, 0, 0, 0, 0}),
                  term(HYPREC_C2(-over(T(al * z), ga)), {1, 1, 1, 0, 0})}});
    r.push_back({{RelationId::Lebedev_Combined, "Lebedev_Combined_2F1",
                  "ga F(al,be;ga|z) - (ga-al+1)(ga-be) z/(ga+1) F(al,be+1;ga+2|z) - [ga-(ga-be)z] F(al,be+1;ga+1|z) = 0",
                  "Eqs. (Lebedev_1) and (Lebedev_2)", 2, true},
                 {term(HYPREC_C2(ga), {0, 0, 0, 0, 0}),
                  term(HYPREC_C2(-over(T((ga - al + 1) * (ga - be) * z), T(ga + 1))), {0, 1, 2, 0, 0}),
                  term(HYPREC_C2(-(ga - (ga - be) * z)), {0, 1, 1, 0, 0})}});
    r.push_back({{RelationId::Kummer_Derived, "Kummer_Derived",
                  "z(1-z)(al+1)be/ga F(al+2,be+1;ga+1|z) - (ga-al-1) F(al,be;ga|z) - (al+1-ga+be z) F(al+1,be;ga|z) = 0",
                  "DLMF 15.5.20 with 15.5.1", 2, true},
                 {term(HYPREC_C2(over(T(z * (1 - z) * (al + 1) * be), ga)), {2, 1, 1, 0, 0}),
                  term(HYPREC_C2(-(ga - al - 1)), {0, 0, 0, 0, 0}),
                  term(HYPREC_C2(-(al + 1 - ga + be * z)), {1, 0, 0, 0, 0})}});
    r.push_back({{RelationId::Andrews_3_7_9, "Andrews_3_7_9",
                  "F(al+1,be,ga;de,ep) - F(al,be,ga;de,ep) - be ga/(de ep) F(al+1,be+1,ga+1;de+1,ep+1) = 0",
                  "Eq. 3.7.9", 3, true},
                 {term(HYPREC_C3(1), {1, 0, 0, 0, 0}), term(HYPREC_C3(-1), {0, 0, 0, 0, 0}),
                  term(HYPREC_C3(-over(T(be * ga), T(de * ep))), {1, 1, 1, 1, 1})}});
    r.push_back({{RelationId::Dixon_Combined, "Dixon_Combined",
                  "de ep F(al,be,ga;de,ep) - (al+1)(de+ep-al-be-ga-2) F(al+2,be+1,ga+1;de+1,ep+1)"
                  " - [(de-al-1)(ep-al-1)-be ga] F(al+1,be+1,ga+1;de+1,ep+1) = 0",
                  "Eq. (Dixon_3)", 3, true},
                 {term(HYPREC_C3(de * ep), {0, 0, 0, 0, 0}),
                  term(HYPREC_C3(-(al + 1) * (de + ep - al - be - ga - 2)), {2, 1, 1, 1, 1}),
                  term(HYPREC_C3(-((de - al - 1) * (ep - al - 1) - be * ga)), {1, 1, 1, 1, 1})}});
    r.push_back({{RelationId::Watson_Combined, "Watson_Combined",
                  "F(al,be,ga;de,ep+1) - F(al,be,ga;de,ep) + al be ga/(de ep (ep+1)) F(al+1,be+1,ga+1;de+1,ep+2) = 0",
                  "Sect. 3.7 relation with Eq. (Miller_1)", 3, true},
                 {term(HYPREC_C3(1), {0, 0, 0, 0, 1}), term(HYPREC_C3(-1), {0, 0, 0, 0, 0}),
                  term(HYPREC_C3(over(T(al * be * ga), T(de * ep * (ep + 1)))), {1, 1, 1, 1, 2})}});
    r.push_back({{RelationId::Watson_3_7_Shifted, "Watson_3_7_Shifted",
                  "F(al,be+1,ga;de,ep) = F(al,be,ga;de,ep) + al ga/(de ep) [(be+1)(de-al)(ga+1)/(de(de+1)(ep+1))"
                  " F(al+1,be+2,ga+2;de+2,ep+2) + F(al,be+1,ga+1;de,ep+1)]",
                  "Eq. (Watson_1) with Eq. (Miller_1)", 3, true},
                 {term(HYPREC_C3(1), {0, 1, 0, 0, 0}), term(HYPREC_C3(-1), {0, 0, 0, 0, 0}),
                  term(HYPREC_C3(-over(T(al * ga * (be + 1) * (de - al) * (ga + 1)),
                                       T(de * ep * de * (de + 1) * (ep + 1)))),
                       {1, 2, 2, 2, 2}),
                  term(HYPREC_C3(-over(T(al * ga), T(de * ep))), {0, 1, 1, 0, 1})}});
    r.push_back({{RelationId::Andrews_3_7_14, "Andrews_3_7_14",
                  "ep F(al,be,ga;de,ep) - (ep-al) F(al,be+1,ga+1;de+1,ep+1)"
                  " - al(de-be)(de-ga)/(de(de+1)) F(al+1,be+1,ga+1;de+2,ep+1) = 0",
                  "Eq. 3.7.14", 3, true},
                 {term(HYPREC_C3(ep), {0, 0, 0, 0, 0}), term(HYPREC_C3(-(ep - al)), {0, 1, 1, 1, 1}),
                  term(HYPREC_C3(-over(T(al * (de - be) * (de - ga)), T(de * (de + 1)))), {1, 1, 1, 2, 1})}});
    r.push_back({{RelationId::Lebedev_1, "Lebedev_1",
                  "ga(ga+1) F(al,be;ga|z) = ga(ga-al+1) F(al,be+1;ga+2|z) + al[ga-(ga-be)z] F(al+1,be+1;ga+2|z)",
                  "Eq. (Lebedev_1)", 2, false},
                 {term(HYPREC_C2(ga * (ga + 1)), {0, 0, 0, 0, 0}), term(HYPREC_C2(-ga * (ga - al + 1)), {0, 1, 2, 0, 0}),
                  term(HYPREC_C2(-al * (ga - (ga - be) * z)), {1, 1, 2, 0, 0})}});
    r.push_back({{RelationId::Lebedev_2, "Lebedev_2",
                  "F(al,be+1;ga+1|z) - F(al,be;ga|z) = al(ga-be) z/(ga(ga+1)) F(al+1,be+1;ga+2|z)", "Eq. (Lebedev_2)", 2,
                  false},
                 {term(HYPREC_C2(1), {0, 1, 1, 0, 0}), term(HYPREC_C2(-1), {0, 0, 0, 0, 0}),
                  term(HYPREC_C2(-over(T(al * (ga - be) * z), T(ga * (ga + 1)))), {1, 1, 2, 0, 0})}});
    r.push_back({{RelationId::Dixon_1, "Dixon_1",
                  "de ep F(al+1,be,ga;de,ep) = (al+1)(de+ep-al-be-ga-2) F(al+2,be+1,ga+1;de+1,ep+1)"
                  " + (de-al-1)(ep-al-1) F(al+1,be+1,ga+1;de+1,ep+1)",
                  "Eq. (Dixon_1)", 3, false},
                 {term(HYPREC_C3(de * ep), {1, 0, 0, 0, 0}),
                  term(HYPREC_C3(-(al + 1) * (de + ep - al - be - ga - 2)), {2, 1, 1, 1, 1}),
                  term(HYPREC_C3(-(de - al - 1) * (ep - al - 1)), {1, 1, 1, 1, 1})}});
    r.push_back({{RelationId::Dixon_2, "Dixon_2",
                  "F(al+1,be,ga;de,ep) = F(al,be,ga;de,ep) + be ga/(de ep) F(al+1,be+1,ga+1;de+1,ep+1)",
                  "Eq. (Dixon_2)", 3, false},
                 {term(HYPREC_C3(1), {1, 0, 0, 0, 0}), term(HYPREC_C3(-1), {0, 0, 0, 0, 0}),
                  term(HYPREC_C3(-over(T(be * ga), T(de * ep))), {1, 1, 1, 1, 1})}});
    r.push_back({{RelationId::Miller_1, "Miller_1",
                  "F(al,be,ga+1;de,ep) = F(al,be,ga;de,ep) + al be/(de ep) F(al+1,be+1,ga+1;de+1,ep+1)",
                  "Eq. (Miller_1)", 3, false},
                 {term(HYPREC_C3(1), {0, 0, 1, 0, 0}), term(HYPREC_C3(-1), {0, 0, 0, 0, 0}),
                  term(HYPREC_C3(-over(T(al * be), T(de * ep))), {1, 1, 1, 1, 1})}});
    r.push_back({{RelationId::Watson_1, "Watson_1",
                  "F(al+1,be+1,ga+1;de+1,ep+1) = (be+1)(de-al)(ga+1)/(de(de+1)(ep+1)) F(al+1,be+2,ga+2;de+2,ep+2)"
                  " + F(al,be+1,ga+1;de,ep+1)",
                  "Eq. (Watson_1)", 3, false},
                 {term(HYPREC_C3(1), {1, 1, 1, 1, 1}),
                  term(HYPREC_C3(-over(T((be + 1) * (de - al) * (ga + 1)), T(de * (de + 1) * (ep + 1)))),
                       {1, 2, 2, 2, 2}),
                  term(HYPREC_C3(-1), {0, 1, 1, 0, 1})}});
    return r;
  }();
  return relations;
}

#undef HYPREC_C2
#undef HYPREC_C3

const Relation& relation(RelationId id) { return catalog()[static_cast<std::size_t>(id)]; }

template <class T>
std::vector<T> check_params(RelationId id, std::span<const T> params) {
  if (params.size() != relation_arity(id))
    throw InvalidArgumentError(std::string(relation_info(id).name) + " expects " +
                               std::to_string(relation_arity(id)) + " parameters");
  return std::vector<T>(params.begin(), params.end());
}

template <class T>
T resolve_z(RelationId id, const std::optional<T>& z) {
  if (relation_info(id).p == 2) {
    if (!z) throw InvalidArgumentError(std::string(relation_info(id).name) + " needs an argument z");
    return *z;
  }
  if (z && *z != 1) throw InvalidArgumentError("3F2 relations are evaluated at z = 1");
  return T(1);
}

template <class T>
BasicHypSpec<T> instance(int p, const std::vector<T>& params, const std::array<int, 5>& s, const T& z) {
  if (p == 2) return {{T(params[0] + s[0]), T(params[1] + s[1])}, {T(params[2] + s[2])}, z};
  return {{T(params[0] + s[0]), T(params[1] + s[1]), T(params[2] + s[2])},
          {T(params[3] + s[3]), T(params[4] + s[4])},
          z};
}

template <class T>
std::vector<BasicHypSpec<T>> instances_impl(RelationId id, std::span<const T> params, const std::optional<T>& zopt) {
  const auto p = check_params(id, params);
  const T z = resolve_z(id, zopt);
  std::vector<BasicHypSpec<T>> out;
  for (const auto& t : relation(id).terms) out.push_back(instance(relation_info(id).p, p, t.shift, z));
  return out;
}

}  // namespace

const RelationInfo& relation_info(RelationId id) { return relation(id).info; }

std::optional<RelationId> parse_relation(std::string_view name) {
  for (const auto& r : catalog()) {
    if (r.info.name == name) return r.info.id;
  }
  if (name == "Lebedev_Combined") return RelationId::Lebedev_Combined;
  return std::nullopt;
}

std::size_t relation_arity(RelationId id) { return relation_info(id).p == 2 ? 3 : 5; }

std::vector<RelationInfo> list_relations() {
  std::vector<RelationInfo> out;
  for (const auto& r : catalog())
    if (r.info.cataloged) out.push_back(r.info);
  return out;
}

std::vector<RelationInfo> list_intermediate_relations() {
  std::vector<RelationInfo> out;
  for (const auto& r : catalog())
    if (!r.info.cataloged) out.push_back(r.info);
  return out;
}

std::vector<HypSpec> relation_instances(RelationId id, std::span<const double> params, std::optional<double> z) {
  return instances_impl<double>(id, params, z);
}

std::vector<RationalHypSpec> relation_instances(RelationId id, std::span<const Rational> params,
                                                std::optional<Rational> z) {
  return instances_impl<Rational>(id, params, z);
}

ResidualResult relation_residual(RelationId id, std::span<const double> params, std::optional<double> zopt,
                                 const SummationPolicy& policy) {
  const auto p = check_params(id, params);
  const double z = resolve_z(id, zopt);
  const auto& rel = relation(id);
  ResidualResult out;
  for (std::size_t i = 0; i < rel.terms.size(); ++i) {
    const auto& t = rel.terms[i];
    const double coef = t.coef_d(std::span<const double>(p), z);
    const auto r = evaluate_series(instance(rel.info.p, p, t.shift, z), policy);
    const double contribution = coef * r.value;
    out.oracle_error += std::fabs(coef) * r.abs_error_estimate;
    if (i == 0) out.lhs += contribution;
    else out.rhs -= contribution;
  }
  out.residual = out.lhs - out.rhs;
  return out;
}

Rational relation_residual_exact(RelationId id, std::span<const Rational> params, std::optional<Rational> zopt) {
  const auto p = check_params(id, params);
  const Rational z = resolve_z(id, zopt);
  const auto& rel = relation(id);
  Rational residual = 0;
  for (const auto& t : rel.terms) {
    const auto spec = instance(rel.info.p, p, t.shift, z);
    if (!termination_index(spec)) throw DomainError("exact residuals need every series to terminate");
    residual += t.coef_q(std::span<const Rational>(p), z) * evaluate_terminating_exact(spec);
  }
  return residual;
}

}  // namespace hyprec
