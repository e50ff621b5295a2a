// Copyright 2026 The ptmverify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ptmverify/conditions.hpp"

#include "gtest/gtest.h"

#include "ptmverify/fixtures.hpp"

using namespace ptm;

namespace {

using Cell = std::function<Rational(const std::string& x, const std::string& y, const std::string& a,
                                    const std::string& b, const std::string& l)>;

const Alphabets kBinary{{"0", "1"}, {"0", "1"}, {"0", "1"}, {"0", "1"}};

OnticModel binary(const Labels& lambda, const Cell& cell) { return OnticModel::tabulate(kBinary, lambda, cell); }

// Plugs a witness back into p(b|lambda,a,x,y) = p(b|lambda,y) on the uniformly weighted joint.
void expect_mediation_witness_violates(const OnticModel& m, const Witness& w) {
  const ProbTable joint = lift(m.joint());
  auto get = [&](const std::string& name) {
    for (const auto& [k, v] : w.at) {
      if (k == name) return v;
    }
    ADD_FAILURE() << "witness lacks " << name;
    return std::string();
  };
  const Assignment full = {{"lambda", get("lambda")}, {"a", get("a")}, {"x", get("x")}, {"y", get("y")}};
  const Assignment narrow = {{"lambda", get("lambda")}, {"y", get("y")}};
  auto with_b = [&](Assignment at) {
    at.emplace_back("b", get("b"));
    return at;
  };
  const Rational lhs = mass(joint, with_b(full)) / mass(joint, full);
  const Rational rhs = mass(joint, with_b(narrow)) / mass(joint, narrow);
  EXPECT_EQ(lhs, w.lhs);
  EXPECT_EQ(rhs, w.rhs);
  EXPECT_NE(lhs, rhs);
}

}  // namespace

TEST(check_acyclic, figure_graphs) {
  EXPECT_TRUE(check_acyclic(fixtures::figure_graph(1)).acyclic);
  EXPECT_TRUE(check_acyclic(fixtures::figure_graph(2)).acyclic);
  EXPECT_TRUE(has_directed_path(fixtures::figure_graph(1), "x", "b"));
  EXPECT_FALSE(has_directed_path(fixtures::figure_graph(1), "y", "a"));
}

TEST(check_acyclic, added_back_edge_reports_cycle) {
  const auto v = check_acyclic(fixtures::figure_graph(1).with_edge("M", "P"));
  ASSERT_FALSE(v.acyclic);
  EXPECT_EQ(v.cycle, (std::vector<std::string>{"P", "T", "M", "P"}));
}

TEST(causal_graph, rejects_bad_edges) {
  EXPECT_THROW(CausalGraph({"a"}, {{"a", "b"}}), StructuralError);
  EXPECT_THROW(CausalGraph({"a", "b"}, {{"a", "b"}, {"a", "b"}}), StructuralError);
  EXPECT_THROW(CausalGraph({"a"}, {}, {"z"}), StructuralError);
}

TEST(conditions, fixture_passes_all_five) {
  const ConditionReport report = check_conditions(fixtures::counterexample_model());
  ASSERT_EQ(report.verdicts.size(), 5U);
  EXPECT_TRUE(report.all_passed());
  for (Condition c : kAllConditions) EXPECT_TRUE(report[c].passed) << display_name(c);
}

TEST(conditions, names_round_trip) {
  for (Condition c : kAllConditions) EXPECT_EQ(condition_from_key(key_name(c)), c);
  EXPECT_EQ(display_name(Condition::kLambdaMediation), "LambdaMediation");
  EXPECT_FALSE(condition_from_key("bogus").has_value());
}

TEST(check_free_choice, missing_row_fails) {
  const OnticModel m = fixtures::counterexample_model();
  ProbTable t = m.joint();
  for (std::size_t flat = 0; flat < t.cell_count(); ++flat) {
    const auto at = t.assignment_of(t.unflatten(flat));
    if (at[0].second == "30" && at[1].second == "-30") t = t.with_entry(at, Rational(0));
  }
  const Verdict v = check_free_choice(OnticModel(m.alphabets(), m.lambda_space(), t));
  ASSERT_FALSE(v.passed);
  ASSERT_FALSE(v.witnesses.empty());
  EXPECT_EQ(v.witnesses[0].at, (Assignment{{"x", "30"}, {"y", "-30"}}));
}

TEST(check_free_choice, singleton_settings_pass) {
  const Alphabets al{{"0"}, {"0"}, {"u"}, {"u"}};
  const auto m = OnticModel::tabulate(al, {"l"}, [](auto&&...) { return Rational(1); });
  EXPECT_TRUE(check_free_choice(m).passed);
}

TEST(check_realism, failures) {
  const auto empty = binary({}, [](auto&&...) { return Rational(0); });
  EXPECT_FALSE(check_realism(empty).passed);
  const auto deficient = binary({"l"}, [](const std::string& x, const std::string& y, const std::string& a,
                                          const std::string& b, const std::string&) {
    if (x == "1" && y == "0") return a == "0" && b == "0" ? Rational(9, 10) : Rational(0);
    return a == "0" && b == "0" ? Rational(1) : Rational(0);
  });
  const Verdict v = check_realism(deficient);
  ASSERT_FALSE(v.passed);
  ASSERT_FALSE(v.witnesses.empty());
  EXPECT_EQ(v.witnesses[0].at, (Assignment{{"x", "1"}, {"y", "0"}}));
  EXPECT_TRUE(check_realism(fixtures::counterexample_model()).passed);
}

TEST(check_lambda_mediation, b_depending_on_x_fails_with_witness) {
  const auto m = binary({"l"}, [](const std::string& x, const std::string&, const std::string& a,
                                  const std::string& b, const std::string&) {
    return a == "0" && b == x ? Rational(1) : Rational(0);
  });
  const Verdict v = check_lambda_mediation(m);
  ASSERT_FALSE(v.passed);
  ASSERT_FALSE(v.witnesses.empty());
  expect_mediation_witness_violates(m, v.witnesses[0]);
}

TEST(check_lambda_mediation, deterministic_b_of_lambda_y_passes) {
  const auto m = binary({"l0", "l1"}, [](const std::string&, const std::string& y, const std::string& a,
                                         const std::string& b, const std::string& l) {
    const std::string bit = (l == "l1") != (y == "1") ? "1" : "0";
    return a == "0" && b == bit ? Rational(1, 2) : Rational(0);
  });
  EXPECT_TRUE(check_lambda_mediation(m).passed);
}

TEST(check_no_retrocausality, lambda_shifting_with_y_fails) {
  const auto m = binary({"l0", "l1"}, [](const std::string&, const std::string& y, const std::string& a,
                                         const std::string& b, const std::string& l) {
    return a == "0" && b == "0" && l == "l" + y ? Rational(1) : Rational(0);
  });
  const Verdict v = check_no_retrocausality(m);
  ASSERT_FALSE(v.passed);
  ASSERT_FALSE(v.witnesses.empty());
  EXPECT_NE(v.witnesses[0].lhs, v.witnesses[0].rhs);
}

TEST(check_no_retrocausality, a_copying_y_fails_clause_one) {
  const auto m = binary({"l"}, [](const std::string&, const std::string& y, const std::string& a,
                                  const std::string& b, const std::string&) {
    return a == y && b == "0" ? Rational(1) : Rational(0);
  });
  const Verdict v = check_no_retrocausality(m);
  ASSERT_FALSE(v.passed);
  EXPECT_NE(v.reason.find("(i)"), std::string::npos) << v.reason;
  EXPECT_TRUE(check_no_retrocausality(fixtures::counterexample_model()).passed);
}

TEST(check_bell_locality, examples) {
  for (unsigned code = 0; code < 16; ++code) {
    EXPECT_TRUE(check_bell_locality(fixtures::deterministic_local_strategy(code)).passed) << code;
  }
  EXPECT_TRUE(check_bell_locality(fixtures::counterexample_model()).passed);

  const OperationalModel s = fixtures::singlet_stats();
  const auto trivial = OnticModel::tabulate(
      s.alphabets(), {"*"},
      [&](const std::string& x, const std::string& y, const std::string& a, const std::string& b,
          const std::string&) { return s.p(a, b, x, y); });
  const Verdict v = check_bell_locality(trivial);
  ASSERT_FALSE(v.passed);
  ASSERT_FALSE(v.witnesses.empty());
  EXPECT_NE(v.witnesses[0].lhs, v.witnesses[0].rhs);
}

TEST(conditions, invalid_model_fails_with_witnesses) {
  const auto bad = binary({"l"}, [](auto&&...) { return Rational(1, 3); });
  const ConditionReport report = check_conditions(bad);
  EXPECT_FALSE(report.all_passed());
  for (const auto& cv : report.verdicts) {
    if (!cv.verdict.passed) EXPECT_FALSE(cv.verdict.witnesses.empty()) << display_name(cv.condition);
  }
}
