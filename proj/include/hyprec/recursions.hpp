#pragma once

#include <cstddef>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hyprec/family.hpp"
#include "hyprec/rational.hpp"
#include "hyprec/series.hpp"

namespace hyprec {

/// Closed-form value of a family at its base index (k = 0, or k = 1 for
/// Kummer and Dixon). Denominator gammas go through reciprocal_gamma.
double base_value(FamilyId family, std::span<const double> params);

/// Classical theorem value at k = 0 for the two families whose recursion
/// collapses there (Kummer's and Dixon's theorems).
double classical_value(FamilyId family, std::span<const double> params);

struct RecursionTerm {
  double coefficient;
  FamilyPoint child;
};

/// The linear combination expressing G at `point` through its children.
/// Throws CoefficientPoleError when a coefficient denominator vanishes and
/// DomainError when `point` is a base index.
std::vector<RecursionTerm> recursion_step(const FamilyPoint& point);
std::vector<RecursionTerm> recursion_step(FamilyId family, int k, std::span<const double> params);

/// Insert-once concurrent map from lattice points to resolved values, kept
/// in extended precision.
class MemoTable {
 public:
  [[nodiscard]] std::optional<long double> find(const FamilyPoint& point) const;
  /// Stores value unless the point is already present; returns the stored value.
  long double insert(const FamilyPoint& point, long double value);
  [[nodiscard]] std::size_t size() const;
  /// Number of distinct (family, base, shift) keys ignoring k.
  [[nodiscard]] std::size_t distinct_shifts() const;
  void clear();

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<FamilyPoint, long double, FamilyPointHash> values_;
};

/// Resolves G_k by repeated recursion steps down to the base cases.
double recurse(const FamilyPoint& point, MemoTable& memo);
double recurse(FamilyId family, int k, std::span<const double> params, MemoTable& memo);
double recurse(FamilyId family, int k, std::span<const double> params);

/// The hypergeometric series defining G_k.
HypSpec defining_spec(FamilyId family, int k, std::span<const double> params);

/// G_k evaluated from its defining series (Pfaff-transformed for Kummer's
/// z = -1 instances, exact rational summation for terminating families).
EvalResult direct_value(FamilyId family, int k, std::span<const double> params, const SummationPolicy& policy = {});

// Exact rational path, offered for Srivastava and PfaffSaalschutz.
bool supports_exact(FamilyId family);
Rational base_value_exact(FamilyId family, std::span<const Rational> params);
Rational recurse_exact(FamilyId family, int k, std::span<const Rational> params);
RationalHypSpec defining_spec_exact(FamilyId family, int k, std::span<const Rational> params);
Rational direct_value_exact(FamilyId family, int k, std::span<const Rational> params);

/// A quantity that must stay away from zero (Zero) or from the poles of
/// Gamma at 0, -1, -2, ... (GammaPole).
enum class SingularityKind { Zero, GammaPole };

struct Singularity {
  double value;
  SingularityKind kind;
  std::string_view what;
};

bool within_margin(const Singularity& s, double margin);

/// Coefficient denominators at a recursion node, or the base-formula
/// singularities when the point sits at its base index.
std::vector<Singularity> node_singularities(const FamilyPoint& point);

struct ScanFinding {
  FamilyPoint point;
  Singularity singularity;
};

/// Walks every lattice point reached when resolving G_k and reports the first
/// coefficient denominator or gamma argument within `margin` of a singularity.
std::optional<ScanFinding> scan_recursion_tree(FamilyId family, int k, std::span<const double> params, double margin,
                                               std::size_t* points_visited = nullptr);

}  // namespace hyprec
