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

#include "ptmverify/timereverse.hpp"

#include <random>

#include "gtest/gtest.h"

#include "ptmverify/fixtures.hpp"
#include "support.hpp"

using namespace ptm;

namespace {

// a xor b = x and y over binary alphabets; symmetric under exchanging the roles.
OperationalModel pr_box() {
  const Alphabets al{{"0", "1"}, {"0", "1"}, {"0", "1"}, {"0", "1"}};
  return OperationalModel::tabulate(al, [](const std::string& x, const std::string& y, const std::string& a,
                                           const std::string& b) {
    const bool both = x == "1" && y == "1";
    return ((a != b) == both) ? Rational(1, 2) : Rational(0);
  });
}

OnticModel b_copies_x() {
  const Alphabets al{{"0", "1"}, {"0"}, {"-"}, {"0", "1"}};
  return OnticModel::tabulate(al, {"l"}, [](const std::string& x, const std::string&, const std::string&,
                                            const std::string& b, const std::string&) {
    return b == x ? Rational(1) : Rational(0);
  });
}

}  // namespace

TEST(operational_reverse, fixture_transcription) {
  const OperationalModel op = to_operational(fixtures::counterexample_model());
  const OperationalModel rev = operational_reverse(op);
  EXPECT_EQ(rev.alphabets(), op.alphabets().swapped());
  // P'(b=down, a=up | y=0, x=0): the reverse prepares with y and outputs b.
  EXPECT_EQ(rev.p("down", "up", "0", "0"), Rational(1, 2));
  EXPECT_TRUE(validate(rev).ok());
  EXPECT_TRUE(is_operational_reverse(op, rev).passed);
}

TEST(operational_reverse, signalling_is_rejected) {
  EXPECT_THROW(operational_reverse(to_operational(b_copies_x())), SignallingRequired);
}

TEST(is_operational_reverse, altered_entry_fails_with_witness) {
  const OperationalModel op = to_operational(fixtures::counterexample_model());
  const OperationalModel rev = operational_reverse(op);
  const Assignment cell = {{"x", "0"}, {"y", "0"}, {"a", "up"}, {"b", "down"}};
  const OperationalModel bad(rev.alphabets(), rev.joint().with_entry(cell, Rational(1, 3)));
  const Verdict v = is_operational_reverse(op, bad);
  ASSERT_FALSE(v.passed);
  ASSERT_FALSE(v.witnesses.empty());
  EXPECT_NE(v.witnesses[0].lhs, v.witnesses[0].rhs);
  EXPECT_THROW(is_operational_reverse(op, op), StructuralError);
}

TEST(is_operational_reverse, symmetric_model_is_its_own_reverse) {
  EXPECT_TRUE(is_operational_reverse(pr_box(), pr_box()).passed);
}

TEST(find_ontological_reverse, fixture_pair_has_exactly_the_relabelling) {
  const ReversePair pair = fixtures::counterexample_reverse();
  const auto found = find_ontological_reverse(pair.original, pair.reverse);
  ASSERT_EQ(found.size(), 1U);
  EXPECT_EQ(found[0], pair.f);
  EXPECT_EQ(found[0]("(30,down)"), "(-30,down)");
  EXPECT_EQ(found[0]("(0,up)"), "(0,up)");
  EXPECT_TRUE(check_reverse_pair(pair).passed);
}

TEST(find_ontological_reverse, broken_candidate_has_no_solution) {
  const ReversePair pair = fixtures::counterexample_reverse();
  const OnticModel& rv = pair.reverse;
  // Exchange the reverse's rows for its two preparation settings (y labels).
  const OnticModel candidate = OnticModel::tabulate(
      rv.alphabets(), rv.lambda_space(),
      [&](const std::string& y, const std::string& x, const std::string& b, const std::string& a,
          const std::string& mu) { return rv.p(b, a, mu, y == "0" ? "-30" : "0", x); });
  EXPECT_TRUE(find_ontological_reverse(pair.original, candidate).empty());
}

TEST(find_ontological_reverse, single_state_and_limits) {
  const OnticModel one = fixtures::deterministic_local_strategy(6);
  const ReversePair canon = canonical_ontological_reverse(one);
  const auto found = find_ontological_reverse(one, canon.reverse);
  ASSERT_EQ(found.size(), 1U);
  EXPECT_TRUE(found[0].is_identity());

  EXPECT_THROW(find_ontological_reverse(fixtures::counterexample_model(), canon.reverse), StructuralError);

  std::mt19937_64 rng(1);
  const OnticModel big = testkit::random_local_model(rng, 1, 1, 1, 1, 9);
  EXPECT_THROW(find_ontological_reverse(big, canonical_ontological_reverse(big).reverse), LimitExceeded);
}

TEST(find_ontological_reverse, all_solutions_in_lexicographic_order) {
  // Three interchangeable ontic states: every permutation is a solution.
  const Alphabets al{{"0"}, {"0"}, {"u", "d"}, {"u", "d"}};
  const OnticModel m = OnticModel::tabulate(
      al, {"l0", "l1", "l2"}, [](const std::string&, const std::string&, const std::string& a,
                                 const std::string& b, const std::string&) {
        return a == "u" && b == "d" ? Rational(1, 3) : Rational(0);
      });
  const ReversePair canon = canonical_ontological_reverse(m);
  const auto found = find_ontological_reverse(m, canon.reverse);
  ASSERT_EQ(found.size(), 6U);
  std::vector<std::vector<std::string>> images;
  for (const auto& f : found) {
    ASSERT_TRUE(check_reverse_pair({m, canon.reverse, f}).passed);
    images.push_back({f("l0"), f("l1"), f("l2")});
  }
  EXPECT_TRUE(std::is_sorted(images.begin(), images.end()));
  EXPECT_TRUE(found.front().is_identity());
}

TEST(canonical_ontological_reverse, fixture) {
  const OnticModel m = fixtures::counterexample_model();
  const ReversePair pair = canonical_ontological_reverse(m);
  EXPECT_TRUE(pair.f.is_identity());
  EXPECT_EQ(pair.reverse.lambda_space(), m.lambda_space());
  EXPECT_TRUE(validate(pair.reverse).ok());
  EXPECT_TRUE(check_reverse_pair(pair).passed);
  const auto found = find_ontological_reverse(m, pair.reverse);
  EXPECT_NE(std::find(found.begin(), found.end(), Bijection::identity(m.lambda_space())), found.end());
  EXPECT_EQ(canonical_ontological_reverse(pair.reverse).reverse, m);
  EXPECT_THROW(canonical_ontological_reverse(b_copies_x()), SignallingRequired);
}

TEST(check_time_symmetry, examples) {
  EXPECT_TRUE(check_time_symmetry(fixtures::counterexample_model()).passed);
  const Verdict v = check_time_symmetry(b_copies_x());
  EXPECT_FALSE(v.passed);
  EXPECT_EQ(v.reason, "no-signalling-violated");
  EXPECT_FALSE(v.witnesses.empty());
}

TEST(bijection, rejects_non_bijections) {
  EXPECT_THROW(Bijection({{"a", "x"}, {"b", "x"}}, {"a", "b"}, {"x", "y"}), StructuralError);
  EXPECT_THROW(Bijection({{"a", "x"}}, {"a", "b"}, {"x", "y"}), StructuralError);
  EXPECT_THROW(Bijection({{"a", "x"}}, {"a"}, {"x", "y"}), StructuralError);
}

TEST(timereverse_property, operational_involution) {
  std::mt19937_64 rng(100);
  for (int trial = 0; trial < 100; ++trial) {
    const OperationalModel m = testkit::random_no_signalling(rng);
    ASSERT_TRUE(check_no_signalling(m).no_signalling());
    const OperationalModel rev = operational_reverse(m);
    ASSERT_TRUE(is_operational_reverse(m, rev).passed);
    ASSERT_EQ(operational_reverse(rev), m) << "trial " << trial;
  }
}

TEST(timereverse_property, canonical_reverse_projects_to_operational_reverse) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const OnticModel m = testkit::random_local_model(rng, 1 + trial % 3, 1 + trial % 2, 2, 1 + trial % 3, 3);
    const ReversePair pair = canonical_ontological_reverse(m);
    ASSERT_EQ(to_operational(pair.reverse), operational_reverse(to_operational(m)));
    ASSERT_TRUE(check_time_symmetry(m).passed);
  }
}
