#include <cmath>

#include "hyprec/verify.hpp"

namespace hyprec {
namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

json summary_json(const TargetSummary& s) {
  json j;
  j["pass"] = s.pass;
  j["fail"] = s.fail;
  j["skipped"] = s.skipped;
  j["total"] = s.total();
  j["skip_reasons"] = json::object();
  for (const auto& [reason, n] : s.skip_reasons) j["skip_reasons"][reason] = n;
  j["relaxed_comparisons"] = s.relaxed;
  j["worst_abs_diff"] = s.worst_abs_diff;
  j["worst_rel_diff"] = s.worst_rel_diff;
  return j;
}

}  // namespace

json to_json(const CheckOutcome& o) {
  json j;
  j["target"] = o.target;
  j["k"] = o.k;
  if (o.draw >= 0) j["draw"] = o.draw;
  j["params"] = json::object();
  for (std::size_t i = 0; i < o.params.size() && i < o.param_names.size(); ++i) j["params"][o.param_names[i]] = o.params[i];
  j["recursion"] = optional_number(o.recursion);
  j["oracle"] = optional_number(o.oracle);
  j["oracle_error"] = optional_number(o.oracle_error);
  j["closed_form"] = optional_number(o.closed_form);
  if (o.recursion_exact) j["recursion_exact"] = *o.recursion_exact;
  if (o.oracle_exact) j["oracle_exact"] = *o.oracle_exact;
  if (o.closed_form_exact) j["closed_form_exact"] = *o.closed_form_exact;
  j["diffs"] = json::array();
  for (const auto& d : o.diffs) {
    j["diffs"].push_back(
        {{"pair", d.pair}, {"abs_diff", d.abs_diff}, {"tolerance", d.tolerance}, {"relaxed", d.relaxed}});
  }
  j["status"] = std::string(to_string(o.status));
  j["reason"] = o.status == CheckStatus::Skipped ? json(std::string(to_string(o.reason))) : json(nullptr);
  j["detail"] = o.detail;
  return j;
}

json to_json(const VerificationReport& r) {
  json j;
  j["report_version"] = 1;
  j["generator"] = {{"name", "splitmix64"}, {"seed", r.config.seed}};
  j["config"] = {
      {"draws_per_family", r.config.draws_per_family},
      {"parameter_box", {r.config.box.lo, r.config.box.hi}},
      {"pole_margin", r.config.pole_margin},
      {"k_max", r.config.k_max},
      {"s_min", r.config.s_min},
      {"max_attempts", r.config.max_attempts},
      {"tol_abs", r.options.tol_abs},
      {"tol_rel", r.options.tol_rel},
      {"targets", r.targets},
  };
  j["targets"] = json::object();
  for (const auto& [name, s] : r.summaries) j["targets"][name] = summary_json(s);
  j["totals"] = summary_json(r.totals());
  j["failures"] = json::array();
  for (const auto& f : r.failures) j["failures"].push_back(to_json(f));
  j["timing"] = {{"elapsed_seconds", r.elapsed_seconds}, {"jobs", r.jobs}};
  return j;
}

json comparable_body(const json& report) {
  json body = report;
  body.erase("timing");
  return body;
}

}  // namespace hyprec
