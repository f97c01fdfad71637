#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hyprec/rational.hpp"
#include "hyprec/series.hpp"

namespace hyprec {

/// The first eight ids form the published catalog; the remaining six are the
/// intermediate relations the combined forms are built from.
enum class RelationId {
  Lebedev_9_2_13,
  Lebedev_Combined,
  Kummer_Derived,
  Andrews_3_7_9,
  Dixon_Combined,
  Watson_Combined,
  Watson_3_7_Shifted,
  Andrews_3_7_14,
  Lebedev_1,
  Lebedev_2,
  Dixon_1,
  Dixon_2,
  Miller_1,
  Watson_1,
};

struct RelationInfo {
  RelationId id;
  std::string_view name;
  std::string_view statement;
  std::string_view anchor;
  int p;  // 2: 2F1(alpha, beta; gamma | z); 3: 3F2(alpha, beta, gamma; delta, epsilon | 1)
  bool cataloged;
};

const RelationInfo& relation_info(RelationId id);
std::optional<RelationId> parse_relation(std::string_view name);

/// Number of parameters: 3 for 2F1 relations, 5 for 3F2 relations.
std::size_t relation_arity(RelationId id);

/// The eight cataloged relations.
std::vector<RelationInfo> list_relations();
/// The six intermediate relations.
std::vector<RelationInfo> list_intermediate_relations();

/// Every hypergeometric instance appearing in the relation.
std::vector<HypSpec> relation_instances(RelationId id, std::span<const double> params, std::optional<double> z = {});
std::vector<RationalHypSpec> relation_instances(RelationId id, std::span<const Rational> params,
                                                std::optional<Rational> z = {});

struct ResidualResult {
  double residual = 0.0;  // lhs - rhs
  double lhs = 0.0;
  double rhs = 0.0;
  double oracle_error = 0.0;  // summed error estimates of the series evaluations
};

/// LHS - RHS with every hypergeometric value taken from the series oracle.
/// 2F1 relations need z; 3F2 relations are evaluated at z = 1.
ResidualResult relation_residual(RelationId id, std::span<const double> params, std::optional<double> z = {},
                                 const SummationPolicy& policy = {});

/// Exact residual for instantiations in which every series terminates.
Rational relation_residual_exact(RelationId id, std::span<const Rational> params, std::optional<Rational> z = {});

}  // namespace hyprec
