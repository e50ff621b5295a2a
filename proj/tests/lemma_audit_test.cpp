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

#include "ptmverify/lemma_audit.hpp"

#include <random>

#include "gtest/gtest.h"

#include "ptmverify/fixtures.hpp"
#include "support.hpp"

using namespace ptm;

namespace {

// lambda records y; outcomes are fixed.
OnticModel lambda_copies_y() {
  const Alphabets al{{"0", "1"}, {"0", "1"}, {"u", "d"}, {"u", "d"}};
  return OnticModel::tabulate(al, {"l0", "l1"}, [](const std::string&, const std::string& y, const std::string& a,
                                                   const std::string& b, const std::string& l) {
    return a == "u" && b == "d" && l == "l" + y ? Rational(1) : Rational(0);
  });
}

// lambda is independent of (a, x, y); b reads lambda and y, a reads x.
OnticModel settings_independent_lambda() {
  const Alphabets al{{"0", "1"}, {"0", "1"}, {"u", "d"}, {"u", "d"}};
  return OnticModel::tabulate(al, {"l0", "l1", "l2"}, [](const std::string& x, const std::string& y,
                                                         const std::string& a, const std::string& b,
                                                         const std::string& l) {
    const Rational pl = l == "l0" ? Rational(1, 2) : Rational(1, 4);
    const Rational pa = x == "0" ? (a == "u" ? Rational(1, 3) : Rational(2, 3)) : Rational(1, 2);
    const bool up = (l == "l1") != (y == "1");
    const Rational pb = l == "l2" ? Rational(1, 2) : Rational((b == "u") == up ? 1 : 0);
    return pl * pa * pb;
  });
}

// lambda = (k, s) with p(k|x) random and s a fair coin; s flips b, so b stays
// uniform for every k and the model cannot signal. k ignores x when `flat`.
OnticModel x_dependent_model(std::mt19937_64& rng, bool flat) {
  const Alphabets al{{"x0", "x1"}, {"y0", "y1"}, {"u", "d"}, {"u", "d"}};
  const Labels lambda = {"k0s0", "k0s1", "k1s0", "k1s1"};
  const auto rho0 = testkit::random_distribution(rng, 2);
  const auto rho1 = flat ? rho0 : testkit::random_distribution(rng, 2);
  std::vector<std::vector<Rational>> pa, pb;
  for (int i = 0; i < 8; ++i) pa.push_back(testkit::random_distribution(rng, 2));
  for (int i = 0; i < 4; ++i) pb.push_back(testkit::random_distribution(rng, 2));
  return OnticModel::tabulate(al, lambda, [&](const std::string& x, const std::string& y, const std::string& a,
                                              const std::string& b, const std::string& l) {
    const std::size_t k = l[1] == '1', flip = l[3] == '1';
    const std::size_t xi = x == "x1", yi = y == "y1";
    const std::size_t bi = (b == "d") != flip;
    return (xi ? rho1 : rho0)[k] * Rational(1, 2) * pa[xi * 4 + k * 2 + flip][a == "d"] * pb[yi * 2 + k][bi];
  });
}

std::string verdicts(const AuditReport& r) {
  std::string s;
  for (const auto& step : r.steps) s += step.id + "=" + to_string(step.verdict) + " ";
  return s;
}

}  // namespace

TEST(audit_lemma, fixture_step_verdicts) {
  const AuditReport r = audit_lemma(fixtures::counterexample_reverse());
  ASSERT_EQ(r.steps.size(), 9U);
  const std::string order = "abcdefghi";
  for (std::size_t i = 0; i < r.steps.size(); ++i) EXPECT_EQ(r.steps[i].id, std::string(1, order[i]));
  for (const char* id : {"a", "b", "c", "d", "h", "i"}) EXPECT_EQ(r.step(id).verdict, StepVerdict::kHolds) << id;
  // (e) and (f) agree on every valid pair, so (e) is the first inference to fail here.
  for (const char* id : {"e", "f", "g"}) EXPECT_EQ(r.step(id).verdict, StepVerdict::kFails) << id;
  EXPECT_EQ(r.first_failure, "e");
  EXPECT_EQ(r.first_failing_inference, "e");
  EXPECT_EQ(r.step("g").name, "Eq16");
  EXPECT_EQ(r.step("e").side, Side::kReverse);
  EXPECT_FALSE(r.step("a").inference);
  EXPECT_TRUE(r.step("g").inference);
  EXPECT_THROW(r.step("z"), StructuralError);
}

TEST(audit_lemma, eq16_witness_shows_x_dependence) {
  const AuditReport r = audit_lemma(fixtures::counterexample_reverse());
  const AuditStep& g = r.step("g");
  ASSERT_TRUE(g.witness.has_value());
  EXPECT_NE(g.witness->lhs, g.witness->rhs);
  // The lambda marginal at x=0 puts 1/2 on (0,up) and nothing on x=30 states.
  const OnticModel m = fixtures::counterexample_model();
  Rational at_x0(0), at_x30(0);
  for (const std::string a : {"up", "down"}) {
    for (const std::string b : {"up", "down"}) {
      at_x0 += m.p(a, b, "(0,up)", "0", "0");
      at_x30 += m.p(a, b, "(0,up)", "30", "0");
    }
  }
  EXPECT_EQ(at_x0, Rational(1, 2));
  EXPECT_EQ(at_x30, Rational(0));
  EXPECT_NE(r.summary.find("(e)"), std::string::npos) << r.summary;
}

TEST(audit_lemma, point_mass_lambda_holds_everywhere) {
  for (unsigned code : {0U, 5U, 15U}) {
    const AuditReport r = audit_lemma(canonical_ontological_reverse(fixtures::deterministic_local_strategy(code)));
    EXPECT_FALSE(r.first_failure.has_value()) << verdicts(r);
    for (const auto& s : r.steps) EXPECT_NE(s.verdict, StepVerdict::kFails) << s.id;
    EXPECT_EQ(r.summary, "every step of the chain holds on this pair");
  }
}

TEST(audit_lemma, retrocausal_pair_fails_at_d) {
  const AuditReport r = audit_lemma(canonical_ontological_reverse(lambda_copies_y()));
  EXPECT_EQ(r.first_failing_inference, "d") << verdicts(r);
  EXPECT_EQ(r.step("d").verdict, StepVerdict::kFails);
  // Summing the decomposition over (a, b) forces (d), so the premise breaks first.
  EXPECT_EQ(r.first_failure, "a");
  EXPECT_NE(r.summary.find("premise (a) already fails"), std::string::npos) << r.summary;
}

TEST(audit_lemma, rejects_non_pairs) {
  const ReversePair good = fixtures::counterexample_reverse();
  const ReversePair wrong{good.original, good.reverse, Bijection::identity(good.original.lambda_space())};
  EXPECT_THROW(audit_lemma(wrong), StructuralError);
}

TEST(explain_conflation, fixture) {
  const ConflationFinding f = explain_conflation(fixtures::counterexample_reverse());
  EXPECT_EQ(f.original_independence, StepVerdict::kHolds);
  EXPECT_EQ(f.reverse_independence, StepVerdict::kFails);
  EXPECT_EQ(f.conflated_claim, StepVerdict::kFails);
  EXPECT_TRUE(f.distinguishing);
  EXPECT_EQ(f.lines.size(), 4U);
}

TEST(explain_conflation, retrocausal_pair_is_not_distinguishing) {
  const ConflationFinding f = explain_conflation(canonical_ontological_reverse(lambda_copies_y()));
  EXPECT_EQ(f.original_independence, StepVerdict::kFails);
  EXPECT_FALSE(f.distinguishing);
}

TEST(mediation_consequence_check, fixture_loses_all_correlation) {
  const OnticModel m = fixtures::counterexample_model();
  const auto uniform = mediation_consequence_check(m);
  const auto skewed = mediation_consequence_check(
      m, settings_distribution(m.alphabets(), {Rational(1, 3), Rational(2, 3)}, {Rational(3, 4), Rational(1, 4)}));
  for (const auto* c : {&uniform, &skewed}) {
    ASSERT_TRUE(c->summary.has_value());
    for (const auto& cell : c->summary->cells()) EXPECT_EQ(cell.p_agree, Rational(1, 2)) << cell.x << "," << cell.y;
    EXPECT_TRUE(c->b_independent_of_preparation);
    EXPECT_TRUE(c->no_forward_signalling);
    EXPECT_EQ(c->inequalities.size(), 2U);
    EXPECT_FALSE(c->any_violation);
    EXPECT_TRUE(validate(c->recomputed).ok());
  }
  // Uniform settings give each ontic state weight 1/4.
  for (const auto& [l, w] : uniform.lambda_marginal) EXPECT_EQ(w, Rational(1, 4)) << l;
}

TEST(mediation_consequence_check, independent_lambda_is_a_no_op) {
  const OnticModel m = settings_independent_lambda();
  EXPECT_EQ(mediation_consequence_check(m).recomputed, to_operational(m));
}

TEST(mediation_consequence_check, rejects_bad_settings) {
  const OnticModel m = fixtures::counterexample_model();
  EXPECT_THROW(settings_distribution(m.alphabets(), {Rational(1)}, {Rational(1, 2), Rational(1, 2)}),
               StructuralError);
  EXPECT_THROW(mediation_consequence_check(
                   m, settings_distribution(m.alphabets(), {Rational(0), Rational(1)}, {Rational(1, 2), Rational(1, 2)})),
               StructuralError);
}

TEST(lemma_audit_property, reverse_and_conflated_steps_agree) {
  std::mt19937_64 rng(16);
  int failing = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const OnticModel m = x_dependent_model(rng, trial % 3 == 0);
    const AuditReport r = audit_lemma(canonical_ontological_reverse(m));
    ASSERT_EQ(r.step("e").verdict, r.step("f").verdict) << "trial " << trial << ": " << verdicts(r);
    failing += r.step("f").verdict == StepVerdict::kFails;
  }
  EXPECT_GT(failing, 0);
  EXPECT_LT(failing, 60);
}

TEST(lemma_audit_property, premises_hold_on_mediated_models) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const OnticModel m = testkit::random_local_model(rng, 2, 2, 2, 2, 1 + trial % 4);
    const AuditReport r = audit_lemma(canonical_ontological_reverse(m));
    for (const char* id : {"a", "b", "c", "d", "h", "i"}) {
      ASSERT_NE(r.step(id).verdict, StepVerdict::kFails) << "trial " << trial << " step " << id;
    }
  }
}

TEST(lemma_audit_property, recomputed_model_never_signals_forward) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 60; ++trial) {
    const OnticModel m = testkit::random_local_model(rng, 2, 2, 2, 2, 3);
    const auto c = mediation_consequence_check(m);
    ASSERT_TRUE(c.no_forward_signalling);
    ASSERT_TRUE(c.b_independent_of_preparation);
    ASSERT_FALSE(c.any_violation);
  }
}
