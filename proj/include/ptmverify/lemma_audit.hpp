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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ptmverify/inequalities.hpp"
#include "ptmverify/timereverse.hpp"
#include "ptmverify/verdict.hpp"

namespace ptm {

enum class StepVerdict { kHolds, kFails, kVacuous };
enum class Side { kOriginal, kReverse };

std::string to_string(StepVerdict v);
std::string to_string(Side s);

/// One claimed equality of the proof chain, evaluated cell by cell.
struct AuditStep {
  std::string id;         // "a" .. "i"
  std::string name;       // e.g. "Eq19-decomposition"
  std::string statement;  // the equality, in the toolkit's notation
  Side side = Side::kOriginal;
  /// Premise decompositions (a)-(c) versus the conclusions drawn from them.
  bool inference = false;
  StepVerdict verdict = StepVerdict::kHolds;
  std::optional<Witness> witness;
  std::size_t cells_checked = 0;
  std::size_t cells_vacuous = 0;
};

struct AuditReport {
  std::vector<AuditStep> steps;  // fixed proof order (a) .. (i)
  std::optional<std::string> first_failure;            // step id
  std::optional<std::string> first_failing_inference;  // step id among (d) .. (i)
  std::string summary;

  /// Throws StructuralError for an unknown id.
  const AuditStep& step(const std::string& id) const;
};

/// Evaluates every step of the proof chain on the pair. Conditionals that do
/// not mention y are computed with both settings weighted uniformly. Throws
/// StructuralError if the pair violates its defining equality.
AuditReport audit_lemma(const ReversePair& pair);

struct ConflationFinding {
  StepVerdict original_independence;  // lambda indep. of y given x, original model (d)
  StepVerdict reverse_independence;   // f(lambda) indep. of x given y, reverse model (e)
  StepVerdict conflated_claim;        // lambda indep. of x given y, original model (f)
  /// False once the original-side premise already fails.
  bool distinguishing = true;
  std::vector<std::string> lines;
};

ConflationFinding explain_conflation(const ReversePair& pair);
ConflationFinding explain_conflation(const AuditReport& report);

struct MediationConsequence {
  OperationalModel recomputed;
  /// lambda-marginal used in place of p(lambda|a,x).
  std::vector<std::pair<std::string, Rational>> lambda_marginal;
  bool b_independent_of_preparation = false;  // b indep. of (a, x) given y
  bool no_forward_signalling = false;
  std::optional<CorrelationSummary> summary;  // binary outcomes only
  std::vector<InequalityResult> inequalities;  // 2x2 binary models only
  bool any_violation = false;
};

/// Rebuilds P(a,b|x,y) = p(a|x) sum over lambda of p(lambda) p(b|lambda,y), i.e.
/// the decomposition with p(lambda|a,x) replaced by the x-independent marginal.
/// `settings` is an unconditioned table over (x, y) with full support.
MediationConsequence mediation_consequence_check(const OnticModel& model);
MediationConsequence mediation_consequence_check(const OnticModel& model, const ProbTable& settings);

/// Product settings distribution from per-wing weights (label order of the alphabets).
ProbTable settings_distribution(const Alphabets& alphabets, const std::vector<Rational>& x_weights,
                                const std::vector<Rational>& y_weights);

}  // namespace ptm
