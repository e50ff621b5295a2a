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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptmverify/ptm_model.hpp"
#include "ptmverify/verdict.hpp"

namespace ptm {

/// Directed graph of possible causal influences.
class CausalGraph {
 public:
  using Edge = std::pair<std::string, std::string>;

  /// Throws StructuralError on dangling or duplicate edges, or unknown input nodes.
  CausalGraph(Labels nodes, std::vector<Edge> edges, Labels input_nodes = {});

  const Labels& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Labels& input_nodes() const { return inputs_; }
  CausalGraph with_edge(const std::string& from, const std::string& to) const;

 private:
  Labels nodes_;
  std::vector<Edge> edges_;
  Labels inputs_;
};

struct AcyclicVerdict {
  bool acyclic = true;
  /// On failure, a closed walk such as {P, T, M, P}.
  std::vector<std::string> cycle;
};

AcyclicVerdict check_acyclic(const CausalGraph& graph);
bool has_directed_path(const CausalGraph& graph, const std::string& from, const std::string& to);

enum class Condition { kFreeChoice, kRealism, kLambdaMediation, kNoRetrocausality, kTimeSymmetry };

inline constexpr Condition kAllConditions[] = {Condition::kFreeChoice, Condition::kRealism,
                                               Condition::kLambdaMediation, Condition::kNoRetrocausality,
                                               Condition::kTimeSymmetry};

/// "FreeChoice", "Realism", ...
std::string display_name(Condition c);
/// "free_choice", "realism", ...
std::string key_name(Condition c);
std::optional<Condition> condition_from_key(const std::string& key);

struct ConditionVerdict {
  Condition condition;
  Verdict verdict;
};

struct ConditionReport {
  std::vector<ConditionVerdict> verdicts;

  const Verdict& operator[](Condition c) const;
  bool all_passed() const;
};

Verdict check_free_choice(const OnticModel& model);
Verdict check_realism(const OnticModel& model);
/// b independent of (a, x) given (lambda, y).
Verdict check_lambda_mediation(const OnticModel& model);
/// (i) a independent of y given x, and (ii) lambda independent of y given (a, x).
Verdict check_no_retrocausality(const OnticModel& model);
/// p(a,b|x,y,lambda) = p(a|x,lambda) p(b|y,lambda) wherever p(lambda|x,y) > 0.
Verdict check_bell_locality(const OnticModel& model);

/// All five conditions; TimeSymmetry is delegated to check_time_symmetry.
ConditionReport check_conditions(const OnticModel& model);

}  // namespace ptm
