#include "hyprec/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "hyprec/closedforms.hpp"
#include "hyprec/error.hpp"
#include "hyprec/recursions.hpp"
#include "hyprec/specialfun.hpp"

namespace hyprec {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int SplitMix64::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next() % span);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view target, int draw) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char ch : target) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  SplitMix64 mix(seed ^ h);
  SplitMix64 second(mix.next() + static_cast<std::uint64_t>(draw));
  return second.next();
}

void validate(const SamplerConfig& c) {
  if (c.draws_per_family < 0) throw InvalidArgumentError("draws must be nonnegative");
  if (c.k_max < 1) throw InvalidArgumentError("k_max must be at least 1");
  if (!(c.pole_margin > 0.0)) throw InvalidArgumentError("pole_margin must be positive");
  if (!(c.s_min > 1.0)) throw InvalidArgumentError("s_min must exceed 1");
  if (!(c.box.lo < c.box.hi) || !std::isfinite(c.box.lo) || !std::isfinite(c.box.hi))
    throw InvalidArgumentError("parameter box must be a nonempty finite interval");
  if (c.max_attempts < 1) throw InvalidArgumentError("max_attempts must be positive");
}

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "unknown";
}

std::string_view to_string(SkipReason r) {
  switch (r) {
    case SkipReason::None: return "none";
    case SkipReason::CoefficientPole: return "coefficient_pole";
    case SkipReason::PoleProximity: return "pole_proximity";
    case SkipReason::OraclePrecondition: return "oracle_precondition";
    case SkipReason::DegenerateBase: return "degenerate_base";
    case SkipReason::NoConvergence: return "no_convergence";
    case SkipReason::CollapsedIndex: return "collapsed_index";
    case SkipReason::Overflow: return "overflow";
    case SkipReason::Domain: return "domain";
  }
  return "unknown";
}

double CheckOutcome::worst_abs_diff() const {
  double w = 0.0;
  for (const auto& d : diffs) w = std::max(w, d.abs_diff);
  return w;
}

double CheckOutcome::worst_rel_diff() const {
  double w = 0.0;
  for (const auto& d : diffs) w = std::max(w, d.magnitude > 0 ? d.abs_diff / d.magnitude : d.abs_diff);
  return w;
}

namespace {

constexpr double kRelaxedOracleError = 1e-9;
constexpr double kRelaxedAbsTolerance = 5e-8;

SkipReason reason_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::CoefficientPole: return SkipReason::CoefficientPole;
    case ErrorKind::Pole: return SkipReason::PoleProximity;
    case ErrorKind::DegenerateBase: return SkipReason::DegenerateBase;
    case ErrorKind::NoConvergence: return SkipReason::NoConvergence;
    case ErrorKind::CollapsedIndex: return SkipReason::CollapsedIndex;
    case ErrorKind::Overflow: return SkipReason::Overflow;
    default: return SkipReason::Domain;
  }
}

SkipReason reason_for(const Singularity& s, bool at_recursive_node) {
  if (s.kind == SingularityKind::Zero && at_recursive_node) return SkipReason::CoefficientPole;
  return SkipReason::PoleProximity;
}

void skip(CheckOutcome& out, SkipReason reason, std::string detail) {
  if (out.reason == SkipReason::None) {
    out.reason = reason;
    out.detail = std::move(detail);
  }
}

void compare(CheckOutcome& out, std::string pair, double x, double y, const CheckOptions& opt, bool oracle_side) {
  FaceDiff d;
  d.pair = std::move(pair);
  d.abs_diff = std::fabs(x - y);
  double floor = opt.tol_abs;
  if (oracle_side && out.oracle_error && *out.oracle_error > kRelaxedOracleError) {
    floor = std::max(floor, kRelaxedAbsTolerance);
    d.relaxed = true;
  }
  d.magnitude = std::max(std::fabs(x), std::fabs(y));
  d.tolerance = std::max(floor, opt.tol_rel * d.magnitude);
  out.diffs.push_back(d);
}

void settle(CheckOutcome& out) {
  if (out.diffs.empty()) {
    out.status = CheckStatus::Skipped;
    if (out.reason == SkipReason::None) out.reason = SkipReason::Domain;
    return;
  }
  const bool failed = std::any_of(out.diffs.begin(), out.diffs.end(), [](const FaceDiff& d) {
    return !(d.abs_diff <= d.tolerance);
  });
  out.status = failed ? CheckStatus::Fail : CheckStatus::Pass;
  out.reason = SkipReason::None;
  if (!failed) out.detail.clear();
}

// Smallest parameter excess over the 3F2-at-1 instance(s) of a defining spec.
std::optional<double> unit_excess(const HypSpec& spec) {
  if (spec.z != 1.0 || spec.upper.size() != spec.lower.size() + 1 || termination_index(spec)) return std::nullopt;
  double s = 0.0;
  for (double b : spec.lower) s += b;
  for (double a : spec.upper) s -= a;
  return s;
}

std::vector<std::string> names_of(FamilyId f) {
  const auto& info = family_info(f);
  return {info.param_names.begin(), info.param_names.end()};
}

// First obstacle at (family, k, params) within the margin, if any.
std::optional<std::pair<SkipReason, std::string>> screen(FamilyId family, int k, std::span<const double> params,
                                                         double margin, double s_min) {
  if (auto f = scan_recursion_tree(family, k, params, margin)) {
    const bool recursive_node = f->point.k != family_info(family).base_k &&
                                !((family == FamilyId::Kummer || family == FamilyId::Dixon) && f->point.k == 0);
    return std::pair{reason_for(f->singularity, recursive_node),
                     std::string(f->singularity.what) + " near singular at " + f->point.to_string()};
  }
  for (const auto& s : closed_form_singularities(family, k, params)) {
    if (within_margin(s, margin)) return std::pair{SkipReason::PoleProximity, "closed form: " + std::string(s.what)};
  }
  const HypSpec spec = defining_spec(family, k, params);
  for (double b : spec.lower) {
    if (near_nonpositive_integer(b, margin) && !termination_index(spec))
      return std::pair{SkipReason::OraclePrecondition, std::string("lower parameter near a pole")};
  }
  if (auto s = unit_excess(spec); s && *s < s_min)
    return std::pair{SkipReason::OraclePrecondition, "parameter excess " + std::to_string(*s) + " below s_min"};
  return std::nullopt;
}

}  // namespace

CheckOutcome check_point(FamilyId family, int k, std::span<const double> params, const CheckOptions& opt) {
  CheckOutcome out;
  out.target = std::string(family_info(family).name);
  out.k = k;
  out.param_names = names_of(family);
  out.params.assign(params.begin(), params.end());
  try {
    if (auto obstacle = screen(family, k, params, opt.pole_margin, opt.s_min)) {
      if (obstacle->first != SkipReason::OraclePrecondition) {
        skip(out, obstacle->first, obstacle->second);
        out.status = CheckStatus::Skipped;
        return out;
      }
      skip(out, obstacle->first, obstacle->second);
    }
  } catch (const Error& e) {
    skip(out, reason_for(e), e.what());
    out.status = CheckStatus::Skipped;
    return out;
  }

  try {
    out.recursion = recurse(family, k, params);
  } catch (const Error& e) {
    skip(out, reason_for(e), e.what());
  }
  if (out.reason != SkipReason::OraclePrecondition) {
    try {
      const auto r = direct_value(family, k, params, opt.policy);
      out.oracle = r.value;
      out.oracle_error = r.abs_error_estimate;
    } catch (const Error& e) {
      skip(out, e.kind() == ErrorKind::Domain ? SkipReason::OraclePrecondition : reason_for(e), e.what());
    }
  }
  if (closed_form_for(family, k)) {
    try {
      out.closed_form = closed_value(family, k, params);
    } catch (const Error& e) {
      skip(out, reason_for(e), e.what());
    }
  }

  if (out.recursion && out.oracle) compare(out, "recursion-oracle", *out.recursion, *out.oracle, opt, true);
  if (out.recursion && out.closed_form)
    compare(out, "recursion-closed_form", *out.recursion, *out.closed_form, opt, false);
  if (out.oracle && out.closed_form) compare(out, "oracle-closed_form", *out.oracle, *out.closed_form, opt, true);
  settle(out);
  return out;
}

CheckOutcome check_point_exact(FamilyId family, int k, std::span<const Rational> params) {
  CheckOutcome out;
  out.target = std::string(family_info(family).name);
  out.k = k;
  out.param_names = names_of(family);
  for (const auto& p : params) out.params.push_back(to_double(p));
  try {
    const Rational rec = recurse_exact(family, k, params);
    const Rational orc = direct_value_exact(family, k, params);
    out.recursion_exact = to_string(rec);
    out.oracle_exact = to_string(orc);
    out.recursion = to_double(rec);
    out.oracle = to_double(orc);
    out.oracle_error = 0.0;
    bool equal = rec == orc;
    out.diffs.push_back({"recursion-oracle", std::fabs(to_double(Rational(rec - orc))), 0.0, 0.0, false});
    if (family == FamilyId::PfaffSaalschutz) {
      const Rational cf =
          pfaff_closed(static_cast<int>(params[0].get_num().get_si()), params[1], params[2], params[3], k);
      out.closed_form_exact = to_string(cf);
      out.closed_form = to_double(cf);
      out.diffs.push_back({"recursion-closed_form", std::fabs(to_double(Rational(rec - cf))), 0.0, 0.0, false});
      out.diffs.push_back({"oracle-closed_form", std::fabs(to_double(Rational(orc - cf))), 0.0, 0.0, false});
      equal = equal && rec == cf;
    }
    out.status = equal ? CheckStatus::Pass : CheckStatus::Fail;
  } catch (const Error& e) {
    out.status = CheckStatus::Skipped;
    out.reason = reason_for(e);
    out.detail = e.what();
  }
  return out;
}

CheckOutcome check_choi(double a, double b, int k, const CheckOptions& opt) {
  CheckOutcome out;
  out.target = "choi-identity";
  out.k = k;
  out.param_names = {"a", "b"};
  out.params = {a, b};
  try {
    const auto s = choi_identity_sides(a, b, k);
    out.recursion = s.lhs;
    out.closed_form = s.rhs;
    compare(out, "lhs-rhs", s.lhs, s.rhs, opt, false);
  } catch (const Error& e) {
    skip(out, reason_for(e), e.what());
  }
  settle(out);
  return out;
}

CheckOutcome check_relation(RelationId id, std::span<const double> params, std::optional<double> z,
                            const CheckOptions& opt) {
  CheckOutcome out;
  const auto& info = relation_info(id);
  out.target = std::string(info.name);
  out.param_names = {"alpha", "beta", "gamma"};
  if (info.p == 3) {
    out.param_names.push_back("delta");
    out.param_names.push_back("epsilon");
  }
  out.params.assign(params.begin(), params.end());
  if (z && info.p == 2) {
    out.param_names.push_back("z");
    out.params.push_back(*z);
  }
  try {
    for (const auto& spec : relation_instances(id, params, z)) {
      if (auto s = unit_excess(spec); s && *s < opt.s_min) {
        skip(out, SkipReason::OraclePrecondition, "parameter excess below s_min");
        out.status = CheckStatus::Skipped;
        return out;
      }
    }
    const auto r = relation_residual(id, params, z, opt.policy);
    out.recursion = r.lhs;
    out.oracle = r.rhs;
    out.oracle_error = r.oracle_error;
    compare(out, "lhs-rhs", r.lhs, r.rhs, opt, true);
  } catch (const Error& e) {
    skip(out, e.kind() == ErrorKind::Domain ? SkipReason::OraclePrecondition : reason_for(e), e.what());
  }
  settle(out);
  return out;
}

std::vector<Target> all_targets() {
  std::vector<Target> out;
  for (FamilyId f : all_families()) out.push_back({Target::Kind::Family, f, RelationId::Lebedev_9_2_13,
                                                   std::string(family_info(f).name)});
  out.push_back({Target::Kind::ChoiIdentity, FamilyId::Gauss2nd, RelationId::Lebedev_9_2_13, "choi-identity"});
  for (const auto& r : list_relations())
    out.push_back({Target::Kind::Relation, FamilyId::Gauss2nd, r.id, std::string(r.name)});
  return out;
}

std::vector<Target> parse_targets(std::string_view list) {
  const auto everything = all_targets();
  std::vector<Target> out;
  auto add = [&](const Target& t) {
    if (std::none_of(out.begin(), out.end(), [&](const Target& o) { return o.name == t.name; })) out.push_back(t);
  };
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto end = std::min(list.find(',', start), list.size());
    const std::string_view item = list.substr(start, end - start);
    start = end + 1;
    if (item.empty()) continue;
    if (item == "all") {
      for (const auto& t : everything) add(t);
    } else if (item == "families") {
      for (const auto& t : everything)
        if (t.kind == Target::Kind::Family) add(t);
    } else if (item == "relations") {
      for (const auto& t : everything)
        if (t.kind == Target::Kind::Relation) add(t);
    } else if (auto f = parse_family(item)) {
      add(everything[static_cast<std::size_t>(*f)]);
    } else if (auto r = parse_relation(item); r && relation_info(*r).cataloged) {
      add({Target::Kind::Relation, FamilyId::Gauss2nd, *r, std::string(relation_info(*r).name)});
    } else if (item == "choi-identity" || item == "ChoiGammaIdentity") {
      add(everything[kFamilyCount]);
    } else {
      throw InvalidArgumentError("unknown verification target '" + std::string(item) + "'");
    }
    if (end == list.size()) break;
  }
  if (out.empty()) throw InvalidArgumentError("no verification targets given");
  return out;
}

std::vector<int> sweep_k_values(FamilyId family, int k_max) {
  std::vector<int> ks;
  if (family == FamilyId::Srivastava) {
    for (int k = -k_max; k <= 0; ++k) ks.push_back(k);
  } else {
    for (int k = family_info(family).base_k; k <= k_max; ++k) ks.push_back(k);
  }
  return ks;
}

namespace {

// Raw draw with the lifts that keep every 3F2-at-1 instance up to k_max at
// parameter excess >= s_min. lo is the box's lower edge.
std::vector<double> raw_family_draw(FamilyId f, SplitMix64& rng, const SamplerConfig& c) {
  auto u = [&] { return rng.uniform(c.box.lo, c.box.hi); };
  const double lift = c.s_min - c.box.lo;
  const double K = c.k_max;
  switch (f) {
    case FamilyId::Gauss2nd: {
      const double a = u(), b = u();
      return {a, b, static_cast<double>(rng.uniform_int(0, 1))};
    }
    case FamilyId::Gauss2ndDiag: return {u()};
    case FamilyId::Srivastava: {
      const double n = rng.uniform_int(1, 8);
      return {n, u()};
    }
    case FamilyId::Kummer: {
      const double a = u(), b = u();
      return {a, b};
    }
    case FamilyId::Miller: {
      const double a = u(), b = u(), cc = u(), d0 = u();
      return {a, b, cc, d0 + a + b + K + lift};
    }
    case FamilyId::PfaffSaalschutz: {
      const double n = rng.uniform_int(1, 6);
      const double a = u(), b = u(), cc = u();
      return {n, a, b, cc};
    }
    case FamilyId::Dixon: {
      const double a0 = u(), b = u(), cc = u();
      return {a0 + 2 * b + 2 * cc - 2 + 2 * K + lift, b, cc};
    }
    case FamilyId::WatsonLavoie: {
      const double a = u(), b = u(), c0 = u();
      return {a, b, c0 + (a + b - 1) / 2 + lift};
    }
    case FamilyId::WatsonShift: {
      const double a = u(), b = u(), c0 = u();
      return {a, b, c0 + (a + b - 1) / 2 + K + lift};
    }
    case FamilyId::Bailey: {
      const double a = u(), b = u(), c0 = u();
      return {a, b, (c0 + a + 2 * b + lift) / 2};
    }
  }
  return {};
}

}  // namespace

Draw sample_family(FamilyId family, SplitMix64& rng, const SamplerConfig& c) {
  Draw d;
  const auto ks = sweep_k_values(family, c.k_max);
  while (d.attempts < c.max_attempts) {
    ++d.attempts;
    d.params = raw_family_draw(family, rng, c);
    std::optional<std::pair<SkipReason, std::string>> obstacle;
    for (int k : ks) {
      try {
        obstacle = screen(family, k, d.params, c.pole_margin, c.s_min);
      } catch (const Error& e) {
        obstacle = std::pair{reason_for(e), std::string(e.what())};
      }
      if (obstacle) break;
    }
    if (!obstacle) {
      d.failure = SkipReason::None;
      d.detail.clear();
      return d;
    }
    d.failure = obstacle->first;
    d.detail = obstacle->second;
  }
  return d;
}

Draw sample_choi(SplitMix64& rng, const SamplerConfig& c) {
  Draw d;
  d.attempts = 1;
  d.params = {rng.uniform(c.box.lo, c.box.hi), rng.uniform(c.box.lo, c.box.hi)};
  return d;
}

Draw sample_relation(RelationId id, SplitMix64& rng, const SamplerConfig& c) {
  Draw d;
  d.attempts = 1;
  const auto arity = relation_arity(id);
  for (std::size_t i = 0; i < arity; ++i) d.params.push_back(rng.uniform(c.box.lo, c.box.hi));
  if (relation_info(id).p == 2) {
    d.z = rng.uniform(-0.5, 0.5);
    return d;
  }
  // Raise the lower parameters delta and epsilon until every instance has
  // parameter excess at least s_min, with a small cushion against rounding.
  const double target = c.s_min + 1e-6;
  for (int round = 0; round < 8; ++round) {
    double min_excess = std::numeric_limits<double>::infinity();
    for (const auto& spec : relation_instances(id, d.params)) min_excess = std::min(min_excess, *unit_excess(spec));
    if (min_excess >= target) break;
    d.params[3] += target - min_excess;
    d.params[4] += target - min_excess;
  }
  return d;
}

TargetSummary VerificationReport::totals() const {
  TargetSummary t;
  for (const auto& [name, s] : summaries) {
    t.pass += s.pass;
    t.fail += s.fail;
    t.skipped += s.skipped;
    t.relaxed += s.relaxed;
    for (const auto& [r, n] : s.skip_reasons) t.skip_reasons[r] += n;
    t.worst_abs_diff = std::max(t.worst_abs_diff, s.worst_abs_diff);
    t.worst_rel_diff = std::max(t.worst_rel_diff, s.worst_rel_diff);
  }
  return t;
}

namespace {

std::vector<CheckOutcome> run_unit(const Target& target, int draw, const SamplerConfig& c, const CheckOptions& opt) {
  SplitMix64 rng(derive_seed(c.seed, target.name, draw));
  std::vector<CheckOutcome> out;
  auto tag = [&](CheckOutcome o) {
    o.draw = draw;
    out.push_back(std::move(o));
  };
  switch (target.kind) {
    case Target::Kind::Family: {
      const auto ks = sweep_k_values(target.family, c.k_max);
      const Draw d = sample_family(target.family, rng, c);
      for (int k : ks) {
        if (d.failure != SkipReason::None) {
          CheckOutcome o;
          o.target = target.name;
          o.k = k;
          o.param_names = names_of(target.family);
          o.params = d.params;
          o.status = CheckStatus::Skipped;
          o.reason = d.failure;
          o.detail = "no clean draw in " + std::to_string(d.attempts) + " attempts: " + d.detail;
          tag(std::move(o));
        } else {
          tag(check_point(target.family, k, d.params, opt));
        }
      }
      break;
    }
    case Target::Kind::ChoiIdentity: {
      const Draw d = sample_choi(rng, c);
      for (int k = 1; k <= c.k_max; ++k) tag(check_choi(d.params[0], d.params[1], k, opt));
      break;
    }
    case Target::Kind::Relation: {
      const Draw d = sample_relation(target.relation, rng, c);
      tag(check_relation(target.relation, d.params, d.z, opt));
      break;
    }
  }
  return out;
}

bool canonical_less(const CheckOutcome& x, const CheckOutcome& y) {
  return std::tie(x.target, x.draw, x.k) < std::tie(y.target, y.draw, y.k);
}

}  // namespace

VerificationReport sweep(const SamplerConfig& config, const std::vector<Target>& targets, const CheckOptions& options,
                         int jobs) {
  validate(config);
  const auto started = std::chrono::steady_clock::now();
  VerificationReport report;
  report.config = config;
  report.options = options;
  report.jobs = std::max(1, jobs);
  for (const auto& t : targets) {
    report.targets.push_back(t.name);
    report.summaries[t.name];
  }

  const std::size_t draws = static_cast<std::size_t>(config.draws_per_family);
  const std::size_t units = targets.size() * draws;
  std::vector<std::vector<CheckOutcome>> results(units);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t u = cursor++; u < units; u = cursor++) {
      const auto& target = targets[u / draws];
      const int draw = static_cast<int>(u % draws);
      results[u] = run_unit(target, draw, config, options);
    }
  };
  const int threads = static_cast<int>(std::min<std::size_t>(report.jobs, std::max<std::size_t>(units, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  for (auto& unit : results) {
    for (auto& o : unit) {
      auto& s = report.summaries[o.target];
      switch (o.status) {
        case CheckStatus::Pass: ++s.pass; break;
        case CheckStatus::Fail: ++s.fail; break;
        case CheckStatus::Skipped:
          ++s.skipped;
          ++s.skip_reasons[std::string(to_string(o.reason))];
          spdlog::debug("skip {} k={} draw={}: {}", o.target, o.k, o.draw, o.detail);
          break;
      }
      s.relaxed += static_cast<int>(std::count_if(o.diffs.begin(), o.diffs.end(), [](const FaceDiff& d) { return d.relaxed; }));
      s.worst_abs_diff = std::max(s.worst_abs_diff, o.worst_abs_diff());
      s.worst_rel_diff = std::max(s.worst_rel_diff, o.worst_rel_diff());
      if (o.status == CheckStatus::Fail) report.failures.push_back(std::move(o));
    }
  }
  std::sort(report.failures.begin(), report.failures.end(), canonical_less);
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  spdlog::info("verification finished: {} checks in {:.2f}s", report.totals().total(), report.elapsed_seconds);
  return report;
}

}  // namespace hyprec
