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
#include <utility>
#include <vector>

#include "ptmverify/ptm_model.hpp"

namespace ptm {

/// Pairs each a-label with the b-label counted as "agreeing" with it.
using AgreeMap = std::vector<std::pair<std::string, std::string>>;
using SettingPair = std::pair<std::string, std::string>;  // (x, y)

/// Pairs equal labels. Throws StructuralError if an a-label has no equal b-label.
AgreeMap same_label_pairing(const Alphabets& alphabets);

struct CorrelationCell {
  std::string x;
  std::string y;
  Rational p_agree;
  Rational p_disagree;
  Rational correlator;  // p_agree - p_disagree
};

class CorrelationSummary {
 public:
  CorrelationSummary(Labels prep_settings, Labels meas_settings, std::vector<CorrelationCell> cells)
      : x_(std::move(prep_settings)), y_(std::move(meas_settings)), cells_(std::move(cells)) {}

  const Labels& prep_settings() const { return x_; }
  const Labels& meas_settings() const { return y_; }
  const std::vector<CorrelationCell>& cells() const { return cells_; }
  /// Throws StructuralError for a setting pair not in the summary.
  const CorrelationCell& at(const std::string& x, const std::string& y) const;

 private:
  Labels x_;
  Labels y_;
  std::vector<CorrelationCell> cells_;
};

/// Throws UnsupportedShape unless both outcome alphabets have exactly two labels.
CorrelationSummary correlation_summary(const OperationalModel& model, const AgreeMap& agree);
CorrelationSummary correlation_summary(const OperationalModel& model);

struct InequalityTerm {
  std::string label;
  Rational value;
};

struct InequalityResult {
  std::string name;  // "wigner" or "chsh"
  Rational lhs;
  Rational rhs;
  std::string comparison;  // the inequality that must hold classically
  bool violated = false;
  std::vector<InequalityTerm> terms;
  /// Wigner only: whether p_agree = 0 at every setting pair with equal labels.
  std::optional<bool> anticorrelated_at_equal_settings;
};

/// p_agree(t1) + p_agree(t2) >= p_agree(t3); violated iff it fails strictly.
InequalityResult wigner_check(const CorrelationSummary& summary, const SettingPair& t1, const SettingPair& t2,
                              const SettingPair& t3);

/// S = max over the position of the minus sign of |E00 + E01 + E10 + E11|
/// with one term negated; violated iff S > 2.
InequalityResult chsh(const CorrelationSummary& summary, const std::string& x0, const std::string& x1,
                      const std::string& y0, const std::string& y1);

/// sum of coefficient * p_agree(x, y), plus a constant.
struct LinearObjective {
  std::vector<std::pair<SettingPair, Rational>> agree_coefficients;
  Rational constant;
};

Rational evaluate(const LinearObjective& objective, const CorrelationSummary& summary);

enum class StrategyFilter {
  kNone,
  /// Only strategies with opposite outcomes whenever x and y carry the same label.
  kPerfectAnticorrelation,
};

/// Strategy count above which the oracle refuses to enumerate.
inline constexpr std::size_t kMaxOracleStrategies = std::size_t{1} << 20;

/// Exact maximum of `objective` over every deterministic local strategy
/// (X -> {0,1}) x (Y -> {0,1}), agreement meaning equal bits.
Rational local_bound_oracle(const Labels& prep_settings, const Labels& meas_settings,
                            const LinearObjective& objective, StrategyFilter filter = StrategyFilter::kNone);

/// +-(E00 + E01 + E10 + E11) with the term at `minus_position` (0..3) negated,
/// written over agreement probabilities (E = 2 p_agree - 1).
LinearObjective chsh_objective(const std::string& x0, const std::string& x1, const std::string& y0,
                               const std::string& y1, int minus_position, int sign);

/// Largest classical S over the eight CHSH sign arrangements.
Rational chsh_local_bound(const Labels& prep_settings, const Labels& meas_settings, const std::string& x0,
                          const std::string& x1, const std::string& y0, const std::string& y1);

/// p_agree(t3) - p_agree(t1) - p_agree(t2): positive exactly when the Wigner form is violated.
LinearObjective wigner_violation_objective(const SettingPair& t1, const SettingPair& t2, const SettingPair& t3);

}  // namespace ptm
