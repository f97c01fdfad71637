#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "hyprec/contiguous.hpp"
#include "hyprec/error.hpp"
#include "test_support.hpp"

using namespace hyprec;
using hyprec::oracle::uniform;
using hyprec::oracle::uniform_int;

namespace {

std::vector<RelationId> every_relation() {
  std::vector<RelationId> ids;
  for (const auto& r : list_relations()) ids.push_back(r.id);
  for (const auto& r : list_intermediate_relations()) ids.push_back(r.id);
  return ids;
}

// Parameters with every instance comfortably inside its convergence domain.
std::vector<double> random_params(RelationId id) {
  std::vector<double> p = {uniform(0.1, 3), uniform(0.1, 3), uniform(0.1, 3)};
  if (relation_info(id).p == 3) {
    const double lift = (p[0] + p[1] + p[2]) / 2 + 1.5;
    p.push_back(uniform(0.1, 3) + lift);
    p.push_back(uniform(0.1, 3) + lift);
  }
  return p;
}

}  // namespace

TEST(Catalog, EightRelations) {
  const auto list = list_relations();
  ASSERT_EQ(list.size(), 8u);
  std::set<std::string_view> names;
  for (const auto& r : list) {
    EXPECT_TRUE(r.cataloged);
    EXPECT_FALSE(r.statement.empty());
    EXPECT_FALSE(r.anchor.empty());
    names.insert(r.name);
    EXPECT_EQ(parse_relation(r.name), r.id);
  }
  EXPECT_EQ(names.size(), 8u);
  EXPECT_EQ(list_intermediate_relations().size(), 6u);
  EXPECT_EQ(parse_relation("Lebedev_Combined"), RelationId::Lebedev_Combined);
  EXPECT_FALSE(parse_relation("nosuch").has_value());
  EXPECT_EQ(relation_arity(RelationId::Lebedev_9_2_13), 3u);
  EXPECT_EQ(relation_arity(RelationId::Dixon_Combined), 5u);
}

TEST(Residual, LebedevAtHalf) {
  // F(1,2;2|1/2) = 2, F(1,1;2|1/2) = 2 ln 2 and F(2,2;3|1/2) = 8 - 8 ln 2,
  // so 2 - 2 ln 2 - (1/4)(8 - 8 ln 2) = 0.
  const std::vector<double> p = {1, 1, 2};
  const auto r = relation_residual(RelationId::Lebedev_9_2_13, p, 0.5);
  EXPECT_LT(std::fabs(r.residual), 1e-11);
  EXPECT_NEAR(r.lhs, 2.0, 2e-12);
  EXPECT_NEAR(r.rhs, 2.0, 2e-12);
  const auto inst = relation_instances(RelationId::Lebedev_9_2_13, p, 0.5);
  ASSERT_EQ(inst.size(), 3u);
  const std::vector<double> expected = {2.0, 2 * std::log(2.0), 8 - 8 * std::log(2.0)};
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_NEAR(evaluate_series(inst[i]).value, expected[i], 2e-12) << i;
}

TEST(Residual, AndrewsExample) {
  const std::vector<double> p = {0.3, 0.5, 0.7, 2.0, 2.5};
  EXPECT_LT(std::fabs(relation_residual(RelationId::Andrews_3_7_9, p).residual), 1e-9);
}

TEST(Residual, NeedsZForTwoFOne) {
  const std::vector<double> p = {1, 1, 2};
  EXPECT_THROW(relation_residual(RelationId::Lebedev_9_2_13, p), InvalidArgumentError);
  const std::vector<double> short_p = {1, 1};
  EXPECT_THROW(relation_residual(RelationId::Lebedev_9_2_13, short_p, 0.5), InvalidArgumentError);
}

TEST(Residual, RandomDrawsEveryRelation) {
  for (RelationId id : every_relation()) {
    for (int i = 0; i < 100; ++i) {
      const auto p = random_params(id);
      const std::optional<double> z =
          relation_info(id).p == 2 ? std::optional<double>(uniform(-0.5, 0.5)) : std::nullopt;
      const auto r = relation_residual(id, p, z);
      ASSERT_LE(std::fabs(r.residual), std::max(1e-8, 1e-8 * std::max(std::fabs(r.lhs), std::fabs(r.rhs))))
          << relation_info(id).name << " draw " << i;
    }
  }
}

TEST(Residual, ExactZeroWhenEverySeriesTerminates) {
  for (RelationId id : every_relation()) {
    const int upper = relation_info(id).p == 2 ? 2 : 3;
    int exact_checks = 0;
    for (int which = 0; which < upper; ++which) {
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<Rational> p;
        for (std::size_t i = 0; i < relation_arity(id); ++i) {
          Rational q(uniform_int(1, 30), uniform_int(1, 7));
          q.canonicalize();
          p.push_back(q);
        }
        p[which] = Rational(-uniform_int(2, 5));
        std::optional<Rational> z;
        if (relation_info(id).p == 2) z = Rational(uniform_int(-9, 9), uniform_int(1, 9));
        try {
          EXPECT_EQ(relation_residual_exact(id, p, z), Rational(0)) << relation_info(id).name;
          ++exact_checks;
        } catch (const DomainError&) {
          // Some instance does not terminate for this choice.
        }
      }
    }
    EXPECT_GT(exact_checks, 0) << relation_info(id).name;
  }
}

TEST(Instances, ShapesAndArguments) {
  const std::vector<double> p = {0.3, 0.5, 0.7, 2.0, 2.5};
  for (const auto& s : relation_instances(RelationId::Dixon_Combined, p)) {
    EXPECT_EQ(s.upper.size(), 3u);
    EXPECT_EQ(s.lower.size(), 2u);
    EXPECT_EQ(s.z, 1.0);
  }
  const std::vector<double> q = {0.3, 0.5, 0.7};
  for (const auto& s : relation_instances(RelationId::Kummer_Derived, q, -0.25)) {
    EXPECT_EQ(s.upper.size(), 2u);
    EXPECT_EQ(s.z, -0.25);
  }
}
