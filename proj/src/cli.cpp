#include "hyprec/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hyprec/closedforms.hpp"
#include "hyprec/contiguous.hpp"
#include "hyprec/error.hpp"
#include "hyprec/rational.hpp"
#include "hyprec/recursions.hpp"
#include "hyprec/verify.hpp"

namespace hyprec {
namespace {

using nlohmann::json;

// Raised for malformed flags discovered after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kParamFlags[] = {"a", "b", "c", "d", "n", "j"};

// Shortest round-trip decimal form of a double.
std::string number(double v) { return json(v).dump(); }

std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

double parse_real(const std::string& text) {
  if (text.find('/') != std::string::npos) {
    try {
      return to_double(parse_rational(text));
    } catch (const Error&) {
      throw UsageError("malformed number: " + text);
    }
  }
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v))
    throw UsageError("malformed number: " + text);
  return v;
}

int parse_int(const std::string& text) {
  const double v = parse_real(text);
  if (v != std::floor(v) || std::fabs(v) > 1e9) throw UsageError("expected an integer: " + text);
  return static_cast<int>(v);
}

FamilyId family_or_usage(const std::string& name) {
  if (auto f = parse_family(name)) return *f;
  throw UsageError("unknown family '" + name + "'");
}

// Collects the family's parameters from the per-name flags, rejecting
// missing ones and flags the family does not take.
std::vector<std::string> family_args(FamilyId family, const std::map<std::string, std::string>& given) {
  const auto& info = family_info(family);
  std::vector<std::string> out;
  for (auto name : info.param_names) {
    auto it = given.find(std::string(name));
    if (it == given.end()) throw UsageError(std::string(info.name) + " needs --" + std::string(name));
    out.push_back(it->second);
  }
  for (const auto& [name, value] : given) {
    if (std::find(info.param_names.begin(), info.param_names.end(), name) == info.param_names.end())
      throw UsageError(std::string(info.name) + " takes no parameter --" + name);
  }
  return out;
}

void add_param_flags(CLI::App* cmd, std::map<std::string, std::string>& given, const std::string& what) {
  for (const char* name : kParamFlags) {
    cmd->add_option_function<std::string>(
        std::string("--") + name, [&given, name](const std::string& v) { given[name] = v; },
        std::string("parameter ") + name + " (" + what + ")");
  }
}

json error_json(const Error& e) {
  json j = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  if (e.point()) j["point"] = e.point()->to_string();
  return json{{"error", j}};
}

json usage_json(const std::string& message) {
  return json{{"error", {{"kind", "usage"}, {"message", message}}}};
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string family;
  std::optional<int> k;
  std::map<std::string, std::string> params;
  std::string mode = "recursion";
  bool exact = false;
  std::string format = "pretty";
};

struct Face {
  std::string name;
  json value;
  std::optional<double> numeric;
};

void print_faces(const EvalArgs& args, FamilyId family, int k, const std::vector<std::string>& raw,
                 const std::vector<Face>& faces, const std::optional<double>& oracle_error, std::ostream& out) {
  json diffs = json::object();
  for (std::size_t i = 0; i < faces.size(); ++i)
    for (std::size_t j = i + 1; j < faces.size(); ++j)
      if (faces[i].numeric && faces[j].numeric)
        diffs[faces[i].name + "-" + faces[j].name] = std::fabs(*faces[i].numeric - *faces[j].numeric);

  if (args.format == "pretty") {
    if (faces.size() == 1) {
      out << (faces[0].value.is_string() ? faces[0].value.get<std::string>() : faces[0].value.dump()) << "\n";
      return;
    }
    for (const auto& f : faces)
      out << std::left << std::setw(26) << f.name
          << (f.value.is_string() ? f.value.get<std::string>() : f.value.dump()) << "\n";
    if (oracle_error) out << std::left << std::setw(26) << "series error estimate" << number(*oracle_error) << "\n";
    for (const auto& [pair, d] : diffs.items()) out << std::left << std::setw(26) << ("|" + pair + "|") << d.dump() << "\n";
    return;
  }
  const auto& info = family_info(family);
  json params = json::object();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (args.exact)
      params[std::string(info.param_names[i])] = to_string(parse_rational(raw[i]));
    else
      params[std::string(info.param_names[i])] = parse_real(raw[i]);
  }
  json values = json::object();
  for (const auto& f : faces) values[f.name] = f.value;
  json j = {{"family", std::string(info.name)}, {"k", k},          {"params", params},
            {"mode", args.mode},                {"exact", args.exact}, {"values", values}};
  if (oracle_error) j["series_error_estimate"] = *oracle_error;
  if (faces.size() > 1) j["diffs"] = diffs;
  out << (args.format == "json" ? j.dump(2) : j.dump()) << "\n";
}

int cmd_eval(const EvalArgs& args, std::ostream& out) {
  const FamilyId family = family_or_usage(args.family);
  const int k = args.k.value_or(family_info(family).base_k);
  const auto raw = family_args(family, args.params);
  const bool want_rec = args.mode == "recursion" || args.mode == "all";
  const bool want_series = args.mode == "series" || args.mode == "all";
  const bool want_closed = args.mode == "closedform" || args.mode == "all";
  const bool has_closed = closed_form_for(family, k).has_value();
  if (args.mode == "closedform" && !has_closed && !(args.exact && family == FamilyId::PfaffSaalschutz))
    throw DomainError("no closed form for " + std::string(family_info(family).name) + " at k = " + std::to_string(k));

  std::vector<Face> faces;
  std::optional<double> oracle_error;
  if (args.exact) {
    if (!supports_exact(family))
      throw DomainError("the exact path covers srivastava and pfaff-saalschutz only");
    std::vector<Rational> p;
    for (const auto& s : raw) {
      try {
        p.push_back(parse_rational(s));
      } catch (const Error&) {
        throw UsageError("malformed rational literal: " + s);
      }
    }
    auto face = [&](const char* name, const Rational& q) { faces.push_back({name, to_string(q), to_double(q)}); };
    if (want_rec) face("recursion", recurse_exact(family, k, p));
    if (want_series) face("series", direct_value_exact(family, k, p));
    if (want_closed && family == FamilyId::PfaffSaalschutz)
      face("closedform", pfaff_closed(static_cast<int>(p[0].get_num().get_si()), p[1], p[2], p[3], k));
  } else {
    std::vector<double> p;
    for (const auto& s : raw) p.push_back(parse_real(s));
    if (want_rec) {
      const double v = recurse(family, k, p);
      faces.push_back({"recursion", v, v});
    }
    if (want_series) {
      const auto r = direct_value(family, k, p);
      faces.push_back({"series", r.value, r.value});
      oracle_error = r.abs_error_estimate;
    }
    if (want_closed && has_closed) {
      const double v = closed_value(family, k, p);
      faces.push_back({"closedform", v, v});
    }
  }
  print_faces(args, family, k, raw, faces, oracle_error, out);
  return kExitOk;
}

// ---------------------------------------------------------------- table

struct TableArgs {
  std::string family;
  std::string k = "";
  std::map<std::string, std::string> params;
  std::string format = "csv";
  double pole_margin = 0.05;
};

std::pair<int, int> parse_k_range(const std::string& text) {
  if (auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = parse_int(text.substr(0, dots)), hi = parse_int(text.substr(dots + 2));
    if (hi < lo) throw UsageError("empty k range: " + text);
    return {lo, hi};
  }
  const int k = parse_int(text);
  return {k, k};
}

// "start:stop:count" grid, or a single value.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() == 1) return {parse_real(parts[0])};
  if (parts.size() != 3) throw UsageError("grid must be start:stop:count, got " + text);
  const double lo = parse_real(parts[0]), hi = parse_real(parts[1]);
  const int count = parse_int(parts[2]);
  if (count < 0) throw UsageError("grid count must be nonnegative: " + text);
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

struct TableRow {
  std::string family;
  int k;
  std::vector<std::string> names;
  std::vector<double> params;
  std::optional<double> recursion, oracle, closed_form, oracle_error, abs_diff;
  std::string status, reason;

  [[nodiscard]] std::string params_text() const {
    std::string s;
    for (std::size_t i = 0; i < params.size(); ++i) s += (i ? ";" : "") + names[i] + "=" + number(params[i]);
    return s;
  }

  [[nodiscard]] json to_json() const {
    json p = json::object();
    for (std::size_t i = 0; i < params.size(); ++i) p[names[i]] = params[i];
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    return {{"family", family},
            {"k", k},
            {"params", p},
            {"recursion", opt(recursion)},
            {"oracle", opt(oracle)},
            {"closed_form", opt(closed_form)},
            {"oracle_error", opt(oracle_error)},
            {"abs_diff", opt(abs_diff)},
            {"status", status},
            {"reason", reason}};
  }
};

constexpr const char* kTableHeader = "family,k,params,recursion,oracle,closed_form,oracle_error,abs_diff,status,reason";

TableRow table_row(FamilyId family, int k, const std::vector<double>& p, const CheckOptions& opt) {
  const auto& info = family_info(family);
  TableRow row;
  row.family = std::string(info.name);
  row.k = k;
  row.names.assign(info.param_names.begin(), info.param_names.end());
  row.params = p;
  if ((family == FamilyId::Kummer || family == FamilyId::Dixon) && k == 0) {
    // The recursion collapses here; the classical theorem is reported as the
    // closed form and the row is not a recursion check.
    row.status = std::string(to_string(CheckStatus::Skipped));
    row.reason = std::string(to_string(SkipReason::CollapsedIndex));
    try {
      row.closed_form = classical_value(family, p);
    } catch (const Error&) {
    }
    return row;
  }
  const CheckOutcome o = check_point(family, k, p, opt);
  row.recursion = o.recursion;
  row.oracle = o.oracle;
  row.closed_form = o.closed_form;
  row.oracle_error = o.oracle_error;
  if (!o.diffs.empty()) row.abs_diff = o.worst_abs_diff();
  row.status = std::string(to_string(o.status));
  row.reason = o.reason == SkipReason::None ? std::string() : std::string(to_string(o.reason));
  return row;
}

int cmd_table(const TableArgs& args, std::ostream& out) {
  const FamilyId family = family_or_usage(args.family);
  const auto& info = family_info(family);
  const auto [k_lo, k_hi] = parse_k_range(args.k.empty() ? std::to_string(info.base_k) : args.k);
  const auto raw = family_args(family, args.params);
  std::vector<std::vector<double>> axes;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    axes.push_back(parse_grid(raw[i]));
    if (info.integer_param[i])
      for (double v : axes.back())
        if (v != std::floor(v)) throw UsageError("--" + std::string(info.param_names[i]) + " takes integers");
  }
  if (args.format != "csv" && args.format != "json" && args.format != "jsonl" && args.format != "pretty")
    throw UsageError("unknown format " + args.format);

  CheckOptions opt;
  opt.pole_margin = args.pole_margin;
  std::vector<TableRow> rows;
  const bool empty = std::any_of(axes.begin(), axes.end(), [](const auto& a) { return a.empty(); });
  for (int k = k_lo; !empty && k <= k_hi; ++k) {
    std::vector<std::size_t> idx(axes.size(), 0);
    for (;;) {
      std::vector<double> p;
      for (std::size_t i = 0; i < axes.size(); ++i) p.push_back(axes[i][idx[i]]);
      rows.push_back(table_row(family, k, p, opt));
      std::size_t d = axes.size();
      while (d > 0 && ++idx[d - 1] == axes[d - 1].size()) idx[--d] = 0;
      if (d == 0) break;
    }
  }
  spdlog::debug("table: {} rows", rows.size());

  if (args.format == "csv") {
    out << kTableHeader << "\r\n";
    for (const auto& r : rows) {
      out << csv_field(r.family) << ',' << r.k << ',' << csv_field(r.params_text()) << ','
          << optional_number(r.recursion) << ',' << optional_number(r.oracle) << ','
          << optional_number(r.closed_form) << ',' << optional_number(r.oracle_error) << ','
          << optional_number(r.abs_diff) << ',' << r.status << ',' << r.reason << "\r\n";
    }
  } else if (args.format == "json") {
    json j = json::array();
    for (const auto& r : rows) j.push_back(r.to_json());
    out << json{{"family", std::string(info.name)}, {"rows", j}}.dump(2) << "\n";
  } else if (args.format == "jsonl") {
    for (const auto& r : rows) out << r.to_json().dump() << "\n";
  } else {
    for (const auto& r : rows) {
      out << std::left << std::setw(4) << r.k << std::setw(40) << r.params_text() << std::setw(24)
          << (r.recursion ? number(*r.recursion) : "-") << std::setw(24) << (r.oracle ? number(*r.oracle) : "-")
          << r.status << (r.reason.empty() ? "" : " (" + r.reason + ")") << "\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  SamplerConfig config;
  CheckOptions options;
  std::string families = "all";
  std::string box;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string format = "json";
};

Interval parse_box(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("box must be lo:hi, got " + text);
  return {parse_real(text.substr(0, colon)), parse_real(text.substr(colon + 1))};
}

int cmd_verify(VerifyArgs args, std::ostream& out) {
  if (!args.box.empty()) args.config.box = parse_box(args.box);
  if (args.jobs < 1) throw UsageError("--jobs must be at least 1");
  if (!(args.options.tol_abs >= 0) || !(args.options.tol_rel >= 0)) throw UsageError("tolerances must be nonnegative");
  if (args.format != "json" && args.format != "jsonl" && args.format != "pretty")
    throw UsageError("verify supports json, jsonl and pretty output");
  try {
    validate(args.config);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  std::vector<Target> targets;
  try {
    targets = parse_targets(args.families);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  args.options.pole_margin = args.config.pole_margin;
  args.options.s_min = args.config.s_min;
  spdlog::info("verify: seed {} draws {} targets {} jobs {}", args.config.seed, args.config.draws_per_family,
               targets.size(), args.jobs);
  const VerificationReport report = sweep(args.config, targets, args.options, args.jobs);
  const json j = to_json(report);
  if (args.format == "json") {
    out << j.dump(2) << "\n";
  } else if (args.format == "jsonl") {
    for (const auto& f : j["failures"]) out << f.dump() << "\n";
    out << json{{"totals", j["totals"]}}.dump() << "\n";
  } else {
    for (const auto& [name, s] : report.summaries) {
      out << std::left << std::setw(24) << name << " pass " << std::setw(6) << s.pass << " fail " << std::setw(4)
          << s.fail << " skipped " << std::setw(5) << s.skipped << " worst rel " << number(s.worst_rel_diff) << "\n";
    }
    const auto t = report.totals();
    out << "total " << t.total() << ": " << t.pass << " pass, " << t.fail << " fail, " << t.skipped << " skipped\n";
    for (const auto& f : report.failures) out << "FAIL " << to_json(f).dump() << "\n";
  }
  return report.totals().fail == 0 ? kExitOk : kExitDomain;
}

// ---------------------------------------------------------------- relations

int cmd_relations(const std::string& format, bool all, bool closed_forms, std::ostream& out) {
  if (format != "json" && format != "pretty") throw UsageError("relations supports json and pretty output");
  json list = json::array();
  if (closed_forms) {
    for (auto id : all_closed_forms()) {
      const auto& info = closed_form_info(id);
      list.push_back({{"name", std::string(info.name)},
                      {"arity", info.arity},
                      {"k_min", info.k_min},
                      {"family", info.family ? json(std::string(family_info(*info.family).name)) : json(nullptr)}});
    }
  } else {
    auto relations = list_relations();
    if (all) {
      const auto extra = list_intermediate_relations();
      relations.insert(relations.end(), extra.begin(), extra.end());
    }
    for (const auto& r : relations) {
      list.push_back({{"name", std::string(r.name)},
                      {"statement", std::string(r.statement)},
                      {"anchor", std::string(r.anchor)},
                      {"order", r.p == 2 ? "2F1" : "3F2"},
                      {"cataloged", r.cataloged}});
    }
  }
  if (format == "json") {
    out << list.dump(2) << "\n";
    return kExitOk;
  }
  for (const auto& e : list) {
    out << e["name"].get<std::string>() << "\n";
    for (const auto& [key, v] : e.items()) {
      if (key == "name") continue;
      out << "    " << std::left << std::setw(10) << key << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- logging

// Routes the default spdlog logger to `err` for the duration of one run.
class LogScope {
 public:
  explicit LogScope(std::ostream& err) : previous_(spdlog::default_logger()) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
    auto logger = std::make_shared<spdlog::logger>("hyprec", sink);
    logger->set_pattern("[%l] %v");
    std::string level = "warn";
    if (const char* env = std::getenv("HYPREC_LOG")) level = env;
    const auto parsed = spdlog::level::from_str(level);
    const bool known = level == "error" || level == "warn" || level == "info" || level == "debug";
    logger->set_level(known ? parsed : spdlog::level::warn);
    spdlog::set_default_logger(logger);
    if (!known) spdlog::warn("ignoring HYPREC_LOG={}; expected error, warn, info or debug", level);
  }
  ~LogScope() { spdlog::set_default_logger(previous_); }
  LogScope(const LogScope&) = delete;
  LogScope& operator=(const LogScope&) = delete;

 private:
  std::shared_ptr<spdlog::logger> previous_;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  LogScope log_scope(err);
  CLI::App app{"Recursive hypergeometric summation formulas: evaluate, tabulate and verify."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  const std::string family_help =
      "family: gauss2nd, gauss2nd-diag, srivastava, kummer, miller, pfaff (pfaff-saalschutz), dixon, "
      "watson-lavoie, watson-shift, bailey";

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate G_k at one parameter point");
  eval->add_option("--family", eval_args.family, family_help)->required();
  eval->add_option_function<int>("--k", [&](int k) { eval_args.k = k; }, "index k (default: the base index)");
  add_param_flags(eval, eval_args.params, "decimal, or p/q");
  eval->add_option("--mode", eval_args.mode, "recursion, series, closedform or all")
      ->check(CLI::IsMember({"recursion", "series", "closedform", "all"}));
  eval->add_flag("--exact", eval_args.exact, "exact rational evaluation (srivastava, pfaff)");
  eval->add_option("--format", eval_args.format, "pretty, json or jsonl")
      ->check(CLI::IsMember({"pretty", "json", "jsonl", "csv"}));

  TableArgs table_args;
  auto* table = app.add_subcommand("table", "Tabulate G_k over a k range and a parameter grid");
  table->add_option("--family", table_args.family, family_help)->required();
  table->add_option("--k", table_args.k, "k or lo..hi (default: the base index)");
  add_param_flags(table, table_args.params, "value or start:stop:count");
  table->add_option("--format", table_args.format, "csv, json, jsonl or pretty");
  table->add_option("--pole-margin", table_args.pole_margin, "distance from poles below which a row is skipped")
      ->check(CLI::NonNegativeNumber);

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Seeded randomized cross-check of recursions, series and closed forms");
  verify->add_option("--seed", verify_args.config.seed, "RNG seed");
  verify->add_option("--draws", verify_args.config.draws_per_family, "draws per target");
  verify->add_option("--families", verify_args.families,
                     "comma list of families, choi-identity, relation names, 'families', 'relations' or 'all'");
  verify->add_option("--k-max", verify_args.config.k_max, "largest |k| swept");
  verify->add_option("--pole-margin", verify_args.config.pole_margin, "minimum distance from poles");
  verify->add_option("--s-min", verify_args.config.s_min, "minimum parameter excess of unit-argument series");
  verify->add_option("--box", verify_args.box, "parameter box lo:hi");
  verify->add_option("--max-attempts", verify_args.config.max_attempts, "redraws per draw");
  verify->add_option("--jobs", verify_args.jobs, "worker threads");
  verify->add_option("--tol-abs", verify_args.options.tol_abs, "absolute tolerance");
  verify->add_option("--tol-rel", verify_args.options.tol_rel, "relative tolerance");
  verify->add_option("--format", verify_args.format, "json, jsonl or pretty");

  std::string rel_format = "json";
  bool rel_all = false, rel_closed = false;
  auto* relations = app.add_subcommand("relations", "List the contiguous-relation catalog");
  relations->add_option("--format", rel_format, "json or pretty");
  relations->add_flag("--all", rel_all, "include the intermediate relations");
  relations->add_flag("--closed-forms", rel_closed, "list the closed forms instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  try {
    if (eval->parsed()) {
      if (eval_args.format == "csv") throw UsageError("csv applies only to table output");
      return cmd_eval(eval_args, out);
    }
    if (table->parsed()) return cmd_table(table_args, out);
    if (verify->parsed()) return cmd_verify(verify_args, out);
    if (relations->parsed()) return cmd_relations(rel_format, rel_all, rel_closed, out);
  } catch (const UsageError& e) {
    err << usage_json(e.what()).dump() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << error_json(e).dump() << "\n";
    return e.kind() == ErrorKind::InvalidArgument ? kExitUsage : kExitDomain;
  } catch (const std::exception& e) {
    err << json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace hyprec
