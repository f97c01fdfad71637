// Acceptance gate: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyprec/cli.hpp"
#include "hyprec/closedforms.hpp"
#include "hyprec/contiguous.hpp"
#include "hyprec/error.hpp"
#include "hyprec/recursions.hpp"
#include "hyprec/series.hpp"
#include "hyprec/verify.hpp"

using namespace hyprec;
using nlohmann::json;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

bool within(double x, double y, double abs_tol, double rel_tol) {
  return std::fabs(x - y) <= std::max(abs_tol, rel_tol * std::max(std::fabs(x), std::fabs(y)));
}

std::string describe(const CheckOutcome& o) {
  std::ostringstream os;
  os << o.target << " k=" << o.k << " draw=" << o.draw << " params=";
  for (double p : o.params) os << p << " ";
  return os.str();
}

// The seeded draws the sweep uses, re-checked here against the strict bound
// max(1e-8, 1e-8 |value|) on every pair of faces that was evaluated.
struct FamilyRun {
  int total = 0;
  int skipped = 0;
  int three_way = 0;
};

FamilyRun run_family(FamilyId f, Verdict& v, bool require_closed) {
  SamplerConfig config;
  FamilyRun run;
  const std::string name(family_info(f).name);
  for (int draw = 0; draw < config.draws_per_family; ++draw) {
    SplitMix64 rng(derive_seed(config.seed, name, draw));
    const Draw d = sample_family(f, rng, config);
    for (int k : sweep_k_values(f, config.k_max)) {
      ++run.total;
      if (d.failure != SkipReason::None) {
        ++run.skipped;
        continue;
      }
      CheckOutcome o = check_point(f, k, d.params);
      o.draw = draw;
      if (o.status == CheckStatus::Skipped && !o.recursion) {
        ++run.skipped;
        continue;
      }
      v.require(o.status != CheckStatus::Fail, "fail: " + describe(o));
      if (o.recursion && o.oracle)
        v.require(within(*o.recursion, *o.oracle, 1e-8, 1e-8), "recursion vs series: " + describe(o));
      else
        ++run.skipped;
      if (o.recursion && o.closed_form)
        v.require(within(*o.recursion, *o.closed_form, 1e-8, 1e-8), "recursion vs closed form: " + describe(o));
      if (o.oracle && o.closed_form)
        v.require(within(*o.oracle, *o.closed_form, 1e-8, 1e-8), "series vs closed form: " + describe(o));
      if (require_closed && closed_form_for(f, k)) v.require(o.closed_form.has_value(), "no closed form: " + describe(o));
      if (o.recursion && o.oracle && o.closed_form) ++run.three_way;
    }
  }
  v.require(run.skipped * 5 < run.total,
            name + " skip rate " + std::to_string(run.skipped) + "/" + std::to_string(run.total));
  return run;
}

Verdict criterion1() {
  Verdict v;
  SplitMix64 rng(101);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform(0.6, 3), b = rng.uniform(0.1, 3), c = rng.uniform(0.1, 3), d = rng.uniform(0.1, 3);
    const std::vector<double> s0 = {0, a}, s1 = {1, a};
    v.require(within(base_value(FamilyId::Srivastava, s0), 1.0, 0, 1e-12), "srivastava n=0");
    v.require(within(base_value(FamilyId::Srivastava, s1), -1 / (2 * a - 1), 0, 1e-12), "srivastava n=1");
    const std::vector<double> w = {0, b, c};
    v.require(within(base_value(FamilyId::WatsonLavoie, w), 1.0, 0, 1e-12), "watson-lavoie a=0");
    v.require(within(base_value(FamilyId::WatsonShift, w), 1.0, 0, 1e-12), "watson-shift a=0");
    const std::vector<double> m = {a, 0, c, d};
    v.require(within(base_value(FamilyId::Miller, m), 1.0, 0, 1e-12), "miller b=0");
    const std::vector<double> bl = {0, b, c};
    v.require(within(base_value(FamilyId::Bailey, bl), 1.0, 0, 1e-12), "bailey a=0");
  }
  return v;
}

Verdict criterion2() {
  Verdict v;
  SplitMix64 rng(202);
  for (int i = 0; i < 20; ++i) {
    const double a = rng.uniform(0.1, 3);
    const double p = std::pow(2.0, a);
    const std::vector<double> x = {a};
    const double printed[] = {p, p * (2 - 1 / (a + 1)), p * (4 - 2 / (a + 1) - 2 / (a + 2)),
                              p * (8 - 3 / (a + 1) - 6 / (a + 2) - 3 / (a + 3))};
    for (int k = 1; k <= 4; ++k)
      v.require(within(recurse(FamilyId::Gauss2ndDiag, k, x), printed[k - 1], 0, 1e-10),
                "G_" + std::to_string(k) + " at a=" + std::to_string(a));
  }
  return v;
}

Verdict criterion3() {
  Verdict v;
  for (FamilyId f : all_families()) run_family(f, v, false);
  return v;
}

Verdict criterion4() {
  Verdict v;
  for (FamilyId f : {FamilyId::Gauss2ndDiag, FamilyId::Kummer, FamilyId::Miller, FamilyId::PfaffSaalschutz,
                     FamilyId::Bailey}) {
    const auto run = run_family(f, v, true);
    v.require(run.three_way * 5 > run.total * 4, std::string(family_info(f).name) + " too few three-way checks");
  }
  SplitMix64 rng(404);
  int exact = 0;
  for (int attempt = 0; attempt < 500 && exact < 50; ++attempt) {
    const int n = rng.uniform_int(0, 6), k = rng.uniform_int(0, 5);
    std::vector<Rational> p = {Rational(n)};
    for (int i = 0; i < 3; ++i) {
      Rational q(rng.uniform_int(1, 40), rng.uniform_int(1, 12));
      q.canonicalize();
      p.push_back(q);
    }
    try {
      const Rational closed = pfaff_closed(n, p[1], p[2], p[3], k);
      const Rational series = direct_value_exact(FamilyId::PfaffSaalschutz, k, p);
      const Rational rec = recurse_exact(FamilyId::PfaffSaalschutz, k, p);
      v.require(closed - series == 0 && closed - rec == 0, "exact pfaff residual nonzero");
      ++exact;
    } catch (const Error&) {
      // A lattice point on a pole; draw again.
    }
  }
  v.require(exact == 50, "only " + std::to_string(exact) + " exact pfaff draws");
  return v;
}

Verdict criterion5() {
  Verdict v;
  SamplerConfig config;
  config.draws_per_family = 500;
  config.k_max = 10;
  for (int draw = 0; draw < config.draws_per_family; ++draw) {
    SplitMix64 rng(derive_seed(config.seed, "choi-identity", draw));
    const Draw d = sample_choi(rng, config);
    for (int k = 1; k <= 10; ++k) {
      const auto s = choi_identity_sides(d.params[0], d.params[1], k);
      v.require(within(s.lhs, s.rhs, 0, 1e-9), "choi residual at draw " + std::to_string(draw) + " k=" + std::to_string(k));
    }
  }
  return v;
}

Verdict criterion6() {
  Verdict v;
  SamplerConfig config;
  config.draws_per_family = 100;
  for (const auto& info : list_relations()) {
    const std::string name(info.name);
    for (int draw = 0; draw < config.draws_per_family; ++draw) {
      SplitMix64 rng(derive_seed(config.seed, name, draw));
      const Draw d = sample_relation(info.id, rng, config);
      const auto r = relation_residual(info.id, d.params, d.z);
      v.require(within(r.lhs, r.rhs, 0, 1e-8), name + " draw " + std::to_string(draw));
    }
    // A terminating instantiation: alpha a negative integer, everything else rational.
    SplitMix64 rng(606);
    int exact = 0;
    for (int attempt = 0; attempt < 50 && exact < 10; ++attempt) {
      std::vector<Rational> p;
      for (std::size_t i = 0; i < relation_arity(info.id); ++i) {
        Rational q(rng.uniform_int(1, 40), rng.uniform_int(1, 9));
        q.canonicalize();
        p.push_back(q);
      }
      p[static_cast<std::size_t>(rng.uniform_int(0, info.p == 2 ? 1 : 2))] = Rational(-rng.uniform_int(3, 6));
      std::optional<Rational> z;
      if (info.p == 2) z = Rational(rng.uniform_int(-9, 9), rng.uniform_int(1, 9));
      try {
        v.require(relation_residual_exact(info.id, p, z) == 0, name + " exact residual nonzero");
        ++exact;
      } catch (const DomainError&) {
        // Not every instance terminates for this choice.
      }
    }
    v.require(exact > 0, name + " found no terminating instantiation");
  }
  return v;
}

Verdict criterion7() {
  Verdict v;
  SplitMix64 rng(707);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform(0.1, 3), b = rng.uniform(0.1, 3);
    const double d = a + b + rng.uniform(0.1, 3);
    // With c = d the Miller base is 2F1(a, b; d | 1), Gauss's summation.
    const double gauss = std::tgamma(d) * std::tgamma(d - a - b) / (std::tgamma(d - a) * std::tgamma(d - b));
    const std::vector<double> p = {a, b, d, d};
    v.require(within(base_value(FamilyId::Miller, p), gauss, 0, 1e-10), "miller c=d at draw " + std::to_string(i));
  }
  return v;
}

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hyprec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Verdict criterion8() {
  Verdict v;
  const auto a = cli({"verify", "--seed", "42"});
  const auto b = cli({"verify", "--seed", "42"});
  v.require(a.code == 0 && b.code == 0, "verify --seed 42 did not exit 0");
  const std::string ba = comparable_body(json::parse(a.out)).dump();
  const std::string bb = comparable_body(json::parse(b.out)).dump();
  v.require(ba == bb, "comparable report bodies differ");
  return v;
}

Verdict criterion9() {
  Verdict v;
  auto round_trips = [](const std::string& text) {
    try {
      return json::parse(text).dump(2) + "\n" == text;
    } catch (const json::exception&) {
      return false;
    }
  };
  struct Case {
    std::vector<std::string> args;
    int code;
    bool json_out;
  };
  const std::vector<Case> cases = {
      {{"eval", "--family", "gauss2nd-diag", "--k", "1", "--a", "0.3", "--mode", "all", "--format", "json"}, 0, true},
      {{"eval", "--family", "pfaff", "--k", "0", "--n", "1", "--a", "1/2", "--b", "1/2", "--c", "1/4", "--exact"}, 0, false},
      {{"eval", "--family", "nosuch", "--k", "1"}, 1, false},
      {{"eval", "--family", "gauss2nd-diag", "--k", "2", "--a", "-1"}, 2, false},
      {{"table", "--family", "gauss2nd-diag", "--k", "1..4", "--a", "1:1:1"}, 0, false},
      {{"table", "--family", "gauss2nd-diag", "--k", "1..4", "--a", "1:1:0"}, 0, false},
      {{"table", "--family", "dixon", "--k", "0..2", "--a", "9.5", "--b", "1.2", "--c", "0.7", "--format", "json"}, 0, true},
      {{"table", "--family", "gauss2nd-diag", "--k", "1..x", "--a", "1"}, 1, false},
      {{"verify", "--seed", "42", "--draws", "50", "--families", "all"}, 0, true},
      {{"verify", "--families", "choi-identity", "--draws", "500", "--k-max", "10"}, 0, true},
      {{"verify", "--draws", "-1"}, 1, false},
      {{"relations", "--format", "json"}, 0, true},
      {{"relations", "--format", "pretty"}, 0, false},
      {{"bogus"}, 1, false},
  };
  for (const auto& c : cases) {
    const auto r = cli(c.args);
    std::string cmd;
    for (const auto& a : c.args) cmd += a + " ";
    v.require(r.code == c.code, cmd + "exited " + std::to_string(r.code));
    if (c.json_out) v.require(round_trips(r.out), cmd + "output does not round-trip");
    if (r.code == 2) v.require(json::accept(r.err), cmd + "error stream is not JSON");
  }
  const auto rel = cli({"relations", "--format", "json"});
  v.require(json::parse(rel.out).size() == 8, "relations count");
  const auto exact = cli({"eval", "--family", "pfaff", "--k", "0", "--n", "1", "--a", "1/2", "--b", "1/2", "--c", "1/4", "--exact"});
  v.require(exact.out == "-1/3\n", "exact eval printed " + exact.out);
  const auto table = cli({"table", "--family", "gauss2nd-diag", "--k", "1..4", "--a", "1:1:0"});
  v.require(table.out == "family,k,params,recursion,oracle,closed_form,oracle_error,abs_diff,status,reason\r\n",
            "empty grid is not header-only");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"base-case reductions", criterion1},
      {"printed Gauss2ndDiag iterates", criterion2},
      {"recursion matches definition for every family", criterion3},
      {"closed forms match recursion and definition", criterion4},
      {"Choi gamma identity", criterion5},
      {"contiguous-relation residuals", criterion6},
      {"Miller base reduces to Gauss summation", criterion7},
      {"deterministic verify reports", criterion8},
      {"CLI exit codes and JSON round trip", criterion9},
  };
  bool all_ok = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    all_ok = all_ok && v.ok;
    std::cout << (v.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first;
    if (!v.ok) std::cout << " (" << v.detail << ")";
    std::cout << std::endl;
  }
  return all_ok ? 0 : 1;
}
