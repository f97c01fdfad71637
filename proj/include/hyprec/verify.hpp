#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hyprec/contiguous.hpp"
#include "hyprec/family.hpp"
#include "hyprec/rational.hpp"
#include "hyprec/series.hpp"

namespace hyprec {

/// SplitMix64 (Steele, Lea, Flood). Seed 1234567 yields
/// 6457827717110365317, 3203168211198807973, 9817491932198370423, ...
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer on [lo, hi].
  int uniform_int(int lo, int hi);

 private:
  std::uint64_t state_;
};

/// Independent stream for one (target, draw) pair so results do not depend on
/// evaluation order or thread count.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view target, int draw);

struct Interval {
  double lo = 0.1;
  double hi = 3.0;
};

struct SamplerConfig {
  std::uint64_t seed = 42;
  int draws_per_family = 50;
  Interval box{};
  double pole_margin = 0.05;
  int k_max = 8;
  double s_min = 1.25;
  int max_attempts = 200;
};

/// Throws InvalidArgumentError unless draws >= 0, k_max >= 1, pole_margin > 0,
/// s_min > 1 and the box is a nonempty interval.
void validate(const SamplerConfig& config);

struct CheckOptions {
  double tol_abs = 1e-8;
  double tol_rel = 1e-8;
  double pole_margin = 0.05;
  double s_min = 1.25;
  SummationPolicy policy{};
};

enum class CheckStatus { Pass, Fail, Skipped };

enum class SkipReason {
  None,
  CoefficientPole,
  PoleProximity,
  OraclePrecondition,
  DegenerateBase,
  NoConvergence,
  CollapsedIndex,
  Overflow,
  Domain,
};

std::string_view to_string(CheckStatus s);
std::string_view to_string(SkipReason r);

struct FaceDiff {
  std::string pair;  // e.g. "recursion-oracle"
  double abs_diff = 0.0;
  double magnitude = 0.0;  // max(|x|, |y|)
  double tolerance = 0.0;
  bool relaxed = false;  // oracle tail estimate above 1e-9, absolute floor raised to 5e-8
};

struct CheckOutcome {
  std::string target;
  int k = 0;
  int draw = -1;
  std::vector<std::string> param_names;
  std::vector<double> params;
  std::optional<double> recursion;
  std::optional<double> oracle;
  std::optional<double> oracle_error;
  std::optional<double> closed_form;
  // Exact faces, as canonical "p/q" strings.
  std::optional<std::string> recursion_exact;
  std::optional<std::string> oracle_exact;
  std::optional<std::string> closed_form_exact;
  std::vector<FaceDiff> diffs;
  CheckStatus status = CheckStatus::Skipped;
  SkipReason reason = SkipReason::None;
  std::string detail;

  [[nodiscard]] double worst_abs_diff() const;
  [[nodiscard]] double worst_rel_diff() const;
};

/// Recursion, series oracle and closed form (where one exists) at one point,
/// compared pairwise. Never throws on domain failures.
CheckOutcome check_point(FamilyId family, int k, std::span<const double> params, const CheckOptions& options = {});

/// Exact recursion, exact oracle and (Pfaff-Saalschutz) exact closed form.
CheckOutcome check_point_exact(FamilyId family, int k, std::span<const Rational> params);

/// Both sides of the Choi gamma identity.
CheckOutcome check_choi(double a, double b, int k, const CheckOptions& options = {});

/// Residual of a contiguous relation against max(|LHS|, |RHS|).
CheckOutcome check_relation(RelationId id, std::span<const double> params, std::optional<double> z,
                            const CheckOptions& options = {});

struct Target {
  enum class Kind { Family, ChoiIdentity, Relation };
  Kind kind = Kind::Family;
  FamilyId family = FamilyId::Gauss2nd;
  RelationId relation = RelationId::Lebedev_9_2_13;
  std::string name;
};

/// All ten families, choi-identity, and the eight cataloged relations.
std::vector<Target> all_targets();
/// Comma-separated names; "all", "families" and "relations" expand to groups.
/// Throws InvalidArgumentError on an unknown name.
std::vector<Target> parse_targets(std::string_view list);

/// k values swept for a family: base..k_max, or -k_max..0 for Srivastava.
std::vector<int> sweep_k_values(FamilyId family, int k_max);

struct Draw {
  std::vector<double> params;
  std::optional<double> z;
  int attempts = 0;
  SkipReason failure = SkipReason::None;
  std::string detail;
};

/// Uniform draw from the box with the convergence lifts that keep every
/// 3F2-at-1 instance at s >= s_min, redrawn until the full recursion tree and
/// closed form clear the pole margin for every swept k.
Draw sample_family(FamilyId family, SplitMix64& rng, const SamplerConfig& config);
Draw sample_choi(SplitMix64& rng, const SamplerConfig& config);
Draw sample_relation(RelationId id, SplitMix64& rng, const SamplerConfig& config);

struct TargetSummary {
  int pass = 0;
  int fail = 0;
  int skipped = 0;
  std::map<std::string, int> skip_reasons;
  int relaxed = 0;
  double worst_abs_diff = 0.0;
  double worst_rel_diff = 0.0;
  [[nodiscard]] int total() const { return pass + fail + skipped; }
};

struct VerificationReport {
  SamplerConfig config;
  CheckOptions options;
  std::vector<std::string> targets;
  std::map<std::string, TargetSummary> summaries;
  std::vector<CheckOutcome> failures;  // sorted by (target, draw, k)
  double elapsed_seconds = 0.0;
  int jobs = 1;

  [[nodiscard]] TargetSummary totals() const;
};

VerificationReport sweep(const SamplerConfig& config, const std::vector<Target>& targets,
                         const CheckOptions& options = {}, int jobs = 1);

nlohmann::json to_json(const CheckOutcome& outcome);
/// Full report; the "timing" member is the only part that varies between runs.
nlohmann::json to_json(const VerificationReport& report);
/// The report without its "timing" member.
nlohmann::json comparable_body(const nlohmann::json& report);

}  // namespace hyprec
