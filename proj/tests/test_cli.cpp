#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyprec/cli.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hyprec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = hyprec::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

void expect_round_trip(const std::string& text) {
  const json j = json::parse(text);
  const std::string again = j.dump(2) + "\n";
  EXPECT_EQ(again, text);
}

}  // namespace

TEST(Eval, AllModesAgree) {
  const auto r = run({"eval", "--family", "gauss2nd-diag", "--k", "1", "--a", "0.3", "--mode", "all", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  const double expected = std::pow(2.0, 0.3);
  for (const char* face : {"recursion", "series", "closedform"})
    EXPECT_NEAR(j["values"][face].get<double>(), expected, 1e-10) << face;
  EXPECT_TRUE(j.contains("diffs"));
  expect_round_trip(r.out);
}

TEST(Eval, PrettyAll) {
  const auto r = run({"eval", "--family", "gauss2nd-diag", "--k", "1", "--a", "0.3", "--mode", "all"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1.23114441334"), std::string::npos);
  EXPECT_NE(r.out.find("closedform"), std::string::npos);
}

TEST(Eval, ExactRational) {
  const auto r = run({"eval", "--family", "pfaff", "--k", "0", "--n", "1", "--a", "1/2", "--b", "1/2", "--c", "1/4", "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "-1/3\n");
  const auto all = run({"eval", "--family", "pfaff", "--k", "2", "--n", "3", "--a", "1/2", "--b", "1/3", "--c", "5/4",
                        "--exact", "--mode", "all", "--format", "json"});
  ASSERT_EQ(all.code, 0) << all.err;
  const json j = json::parse(all.out);
  EXPECT_EQ(j["values"]["recursion"], j["values"]["series"]);
  EXPECT_EQ(j["values"]["recursion"], j["values"]["closedform"]);
}

TEST(Eval, RationalLiteralsWithoutExact) {
  const auto r = run({"eval", "--family", "gauss2nd-diag", "--k", "2", "--a", "1/1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(std::stod(r.out), 3.0, 1e-13);
}

TEST(Eval, UsageErrors) {
  EXPECT_EQ(run({"eval", "--family", "nosuch", "--k", "1"}).code, 1);
  EXPECT_EQ(run({"eval", "--family", "kummer", "--k", "1", "--a", "1"}).code, 1);
  EXPECT_EQ(run({"eval", "--family", "kummer", "--k", "1", "--a", "1", "--b", "2", "--c", "3"}).code, 1);
  EXPECT_EQ(run({"eval", "--family", "kummer", "--k", "1", "--a", "x", "--b", "2"}).code, 1);
  EXPECT_EQ(run({"eval", "--family", "kummer", "--a", "1", "--b", "0.5", "--mode", "bogus"}).code, 1);
  EXPECT_EQ(run({"eval", "--family", "kummer", "--a", "1", "--b", "0.5", "--format", "csv"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
}

TEST(Eval, DomainErrorsEmitJson) {
  // Inadmissible k, a pole, and a divergent series each exit 2 with an error object.
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"eval", "--family", "srivastava", "--k", "2", "--n", "2", "--a", "3"},
           {"eval", "--family", "gauss2nd-diag", "--k", "2", "--a", "-1"},
           {"eval", "--family", "miller", "--k", "3", "--a", "0.4", "--b", "0.6", "--c", "1.1", "--d", "3.2", "--mode", "series"},
           {"eval", "--family", "dixon", "--k", "2", "--a", "9.5", "--b", "1.2", "--c", "0.7", "--mode", "closedform"},
       }) {
    const auto r = run(args);
    EXPECT_EQ(r.code, 2) << args[2];
    const json e = json::parse(r.err);
    EXPECT_TRUE(e["error"].contains("kind"));
    EXPECT_TRUE(e["error"].contains("message"));
  }
}

TEST(Table, Gauss2ndDiagAtOne) {
  const auto r = run({"table", "--family", "gauss2nd-diag", "--k", "1..4", "--a", "1:1:1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "family,k,params,recursion,oracle,closed_form,oracle_error,abs_diff,status,reason");
  const double expected[] = {2.0, 3.0, 14.0 / 3, 7.5};
  for (int i = 0; i < 4; ++i) {
    std::vector<std::string> cells;
    std::stringstream ss(rows[i + 1]);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    ASSERT_GE(cells.size(), 9u);
    EXPECT_EQ(cells[1], std::to_string(i + 1));
    EXPECT_NEAR(std::stod(cells[3]), expected[i], 1e-12);
    EXPECT_EQ(cells[8], "pass");
  }
}

TEST(Table, EmptyGridIsHeaderOnly) {
  const auto r = run({"table", "--family", "gauss2nd-diag", "--k", "1..4", "--a", "1:2:0"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).size(), 1u);
}

TEST(Table, CollapsedIndexRow) {
  const auto r = run({"table", "--family", "dixon", "--k", "0..2", "--a", "9.5", "--b", "1.2", "--c", "0.7"});
  ASSERT_EQ(r.code, 0);
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NE(rows[1].find("skipped,collapsed_index"), std::string::npos);
  EXPECT_NE(rows[2].find(",pass,"), std::string::npos);
}

TEST(Table, GridProductAndFormats) {
  const auto r = run({"table", "--family", "watson-lavoie", "--k", "0..1", "--a", "0.5:1.5:3", "--b", "0.7", "--c",
                      "1.5:2.5:2", "--format", "jsonl"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  EXPECT_EQ(rows.size(), 2u * 3u * 2u);
  // Small-excess corners may skip on the oracle precondition; none may fail.
  int passed = 0;
  for (const auto& row : rows) {
    const json j = json::parse(row);
    EXPECT_NE(j["status"], "fail");
    if (j["status"] == "pass") ++passed;
    else EXPECT_EQ(j["reason"], "oracle_precondition");
  }
  EXPECT_GE(passed, 8);
  const auto j = run({"table", "--family", "watson-lavoie", "--k", "0", "--a", "0.5", "--b", "0.7", "--c", "1.5",
                      "--format", "json"});
  ASSERT_EQ(j.code, 0);
  expect_round_trip(j.out);
  EXPECT_EQ(run({"table", "--family", "watson-lavoie", "--a", "0.5", "--b", "0.7", "--c", "1:2"}).code, 1);
  EXPECT_EQ(run({"table", "--family", "srivastava", "--k", "-1", "--n", "1.5", "--a", "2"}).code, 1);
}

TEST(Verify, ExitCodes) {
  EXPECT_EQ(run({"verify", "--draws", "-1"}).code, 1);
  EXPECT_EQ(run({"verify", "--box", "3:1"}).code, 1);
  EXPECT_EQ(run({"verify", "--families", "nosuch"}).code, 1);
  EXPECT_EQ(run({"verify", "--jobs", "0"}).code, 1);
  const auto r = run({"verify", "--seed", "42", "--draws", "3", "--families", "all"});
  EXPECT_EQ(r.code, 0) << r.out;
  expect_round_trip(r.out);
}

TEST(Verify, DeterministicBody) {
  const std::vector<std::string> args = {"verify", "--seed", "7", "--draws", "4", "--jobs", "2"};
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0);
  json ja = json::parse(a.out), jb = json::parse(b.out);
  ja.erase("timing");
  jb.erase("timing");
  EXPECT_EQ(ja.dump(), jb.dump());
}

TEST(Verify, ChoiIdentityDeepSweep) {
  const auto r = run({"verify", "--families", "choi-identity", "--draws", "500", "--k-max", "10", "--format", "jsonl"});
  EXPECT_EQ(r.code, 0);
  const json last = json::parse(lines(r.out).back());
  EXPECT_EQ(last["totals"]["pass"], 5000);
}

TEST(Relations, JsonAndPretty) {
  const auto r = run({"relations", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), 8u);
  for (const auto& e : j) {
    EXPECT_TRUE(e.contains("name"));
    EXPECT_TRUE(e.contains("anchor"));
    EXPECT_TRUE(e.contains("statement"));
  }
  expect_round_trip(r.out);
  const auto p = run({"relations", "--format", "pretty"});
  ASSERT_EQ(p.code, 0);
  EXPECT_NE(p.out.find("Andrews_3_7_14"), std::string::npos);
  EXPECT_EQ(json::parse(run({"relations", "--all"}).out).size(), 14u);
  EXPECT_EQ(json::parse(run({"relations", "--closed-forms"}).out).size(), 6u);
  EXPECT_EQ(run({"relations", "--format", "csv"}).code, 1);
}

TEST(Help, ExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("eval"), std::string::npos);
  EXPECT_EQ(run({"eval", "--help"}).code, 0);
}
