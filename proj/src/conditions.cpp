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

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "ptmverify/timereverse.hpp"

namespace ptm {

std::string describe(const Witness& w) {
  std::string s = to_string(w.at) + ": " + w.lhs_label + " = " + w.lhs.str() + " vs " + w.rhs_label + " = " +
                  w.rhs.str();
  if (!w.note.empty()) s += " (" + w.note + ")";
  return s;
}

CausalGraph::CausalGraph(Labels nodes, std::vector<Edge> edges, Labels input_nodes)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), inputs_(std::move(input_nodes)) {
  std::set<std::string> known(nodes_.begin(), nodes_.end());
  if (known.size() != nodes_.size()) throw StructuralError("duplicate node in causal graph");
  std::set<Edge> seen;
  for (const auto& e : edges_) {
    if (!known.count(e.first) || !known.count(e.second)) {
      throw StructuralError("edge " + e.first + "->" + e.second + " references an unknown node");
    }
    if (!seen.insert(e).second) throw StructuralError("duplicate edge " + e.first + "->" + e.second);
  }
  for (const auto& n : inputs_) {
    if (!known.count(n)) throw StructuralError("unknown input node '" + n + "'");
  }
}

CausalGraph CausalGraph::with_edge(const std::string& from, const std::string& to) const {
  auto edges = edges_;
  edges.emplace_back(from, to);
  return CausalGraph(nodes_, std::move(edges), inputs_);
}

namespace {

std::map<std::string, std::vector<std::string>> successors(const CausalGraph& g) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& n : g.nodes()) out[n];
  for (const auto& [from, to] : g.edges()) out[from].push_back(to);
  return out;
}

}  // namespace

AcyclicVerdict check_acyclic(const CausalGraph& graph) {
  enum class Mark { kNew, kOpen, kDone };
  const auto succ = successors(graph);
  std::map<std::string, Mark> mark;
  for (const auto& n : graph.nodes()) mark[n] = Mark::kNew;
  std::vector<std::string> stack;
  AcyclicVerdict verdict;

  std::function<bool(const std::string&)> visit = [&](const std::string& n) {
    mark[n] = Mark::kOpen;
    stack.push_back(n);
    for (const auto& next : succ.at(n)) {
      if (mark[next] == Mark::kOpen) {
        auto start = std::find(stack.begin(), stack.end(), next);
        verdict.cycle.assign(start, stack.end());
        verdict.cycle.push_back(next);
        return true;
      }
      if (mark[next] == Mark::kNew && visit(next)) return true;
    }
    stack.pop_back();
    mark[n] = Mark::kDone;
    return false;
  };

  for (const auto& n : graph.nodes()) {
    if (mark[n] == Mark::kNew && visit(n)) {
      verdict.acyclic = false;
      return verdict;
    }
  }
  return verdict;
}

bool has_directed_path(const CausalGraph& graph, const std::string& from, const std::string& to) {
  const auto succ = successors(graph);
  if (!succ.count(from) || !succ.count(to)) throw StructuralError("unknown node in path query");
  std::set<std::string> seen;
  std::vector<std::string> frontier = {from};
  while (!frontier.empty()) {
    std::string n = frontier.back();
    frontier.pop_back();
    for (const auto& next : succ.at(n)) {
      if (next == to) return true;
      if (seen.insert(next).second) frontier.push_back(next);
    }
  }
  return false;
}

std::string display_name(Condition c) {
  switch (c) {
    case Condition::kFreeChoice: return "FreeChoice";
    case Condition::kRealism: return "Realism";
    case Condition::kLambdaMediation: return "LambdaMediation";
    case Condition::kNoRetrocausality: return "NoRetrocausality";
    case Condition::kTimeSymmetry: return "TimeSymmetry";
  }
  return "?";
}

std::string key_name(Condition c) {
  switch (c) {
    case Condition::kFreeChoice: return "free_choice";
    case Condition::kRealism: return "realism";
    case Condition::kLambdaMediation: return "lambda_mediation";
    case Condition::kNoRetrocausality: return "no_retrocausality";
    case Condition::kTimeSymmetry: return "time_symmetry";
  }
  return "?";
}

std::optional<Condition> condition_from_key(const std::string& key) {
  for (Condition c : kAllConditions) {
    if (key_name(c) == key) return c;
  }
  return std::nullopt;
}

const Verdict& ConditionReport::operator[](Condition c) const {
  for (const auto& cv : verdicts) {
    if (cv.condition == c) return cv.verdict;
  }
  throw StructuralError("condition not in report: " + display_name(c));
}

bool ConditionReport::all_passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const ConditionVerdict& cv) { return cv.verdict.passed; });
}

namespace {

Witness row_witness(const Assignment& row, const Rational& sum) {
  return {row, "sum over (a,b,lambda)", sum, "required", Rational(1), ""};
}

Verdict invalid_model(const OnticModel& model) {
  const auto report = validate(model);
  std::vector<Witness> witnesses;
  for (const auto& issue : report.issues) {
    if (issue.kind == ValidationIssue::Kind::kRowNotNormalized) {
      witnesses.push_back(row_witness(issue.row, issue.sum));
    } else if (issue.kind == ValidationIssue::Kind::kEmptyOnticSpace) {
      witnesses.push_back({{}, "|Lambda|", Rational(0), "minimum", Rational(1), issue.message});
    } else if (issue.kind == ValidationIssue::Kind::kEmptyAlphabet) {
      witnesses.push_back({{}, "alphabet size", Rational(0), "minimum", Rational(1), issue.message});
    } else {
      witnesses.push_back({{}, "minimum entry", Rational(-1), "required", Rational(0), issue.message});
    }
  }
  return Verdict::fail("model is not valid: " + report.issues.front().message, std::move(witnesses));
}

// Turns "left dependent on right given C" into p(left|C,right) vs p(left|C).
Witness conditional_witness(const IndependenceWitness& w, const std::string& lhs_label,
                            const std::string& rhs_label) {
  Assignment at = w.given;
  at.insert(at.end(), w.right.begin(), w.right.end());
  at.insert(at.end(), w.left.begin(), w.left.end());
  return {at, lhs_label, w.p_joint / w.p_right, rhs_label, w.p_left, "settings weighted uniformly"};
}

}  // namespace

Verdict check_free_choice(const OnticModel& model) {
  const auto& al = model.alphabets();
  if (al.prep_settings.empty() || al.meas_settings.empty()) {
    return Verdict::fail("setting alphabet is empty", {{{}, "settings", Rational(0), "minimum", Rational(1), ""}});
  }
  std::vector<Witness> witnesses;
  for (const auto& d : model.joint().normalization_defects()) witnesses.push_back(row_witness(d.conditioners, d.sum));
  if (!witnesses.empty()) {
    return Verdict::fail("some setting pair has no normalized distribution", std::move(witnesses));
  }
  return Verdict::pass("every (x, y) in X x Y has a normalized distribution; no settings correlation is stored");
}

Verdict check_realism(const OnticModel& model) {
  if (!validate(model).ok()) return invalid_model(model);
  return Verdict::pass("finite nonempty Lambda and a proper distribution over (a, b, lambda) for every (x, y)");
}

Verdict check_lambda_mediation(const OnticModel& model) {
  if (!validate(model).ok()) return invalid_model(model);
  auto v = check_independence(model.joint(), {kMeasOutput}, {kPrepOutput, kPrepSetting}, {kOntic, kMeasSetting});
  if (v.independent) return Verdict::pass("p(b|lambda,a,x,y) = p(b|lambda,y)");
  return Verdict::fail("b depends on (a, x) beyond (lambda, y)",
                       {conditional_witness(*v.witness, "p(b|lambda,a,x,y)", "p(b|lambda,y)")});
}

Verdict check_no_retrocausality(const OnticModel& model) {
  if (!validate(model).ok()) return invalid_model(model);
  std::vector<Witness> witnesses;
  auto a_vs_y = check_independence(model.joint(), {kPrepOutput}, {kMeasSetting}, {kPrepSetting});
  if (!a_vs_y.independent) witnesses.push_back(conditional_witness(*a_vs_y.witness, "p(a|x,y)", "p(a|x)"));
  auto l_vs_y = check_independence(model.joint(), {kOntic}, {kMeasSetting}, {kPrepOutput, kPrepSetting});
  if (!l_vs_y.independent) {
    witnesses.push_back(conditional_witness(*l_vs_y.witness, "p(lambda|a,x,y)", "p(lambda|a,x)"));
  }
  if (witnesses.empty()) return Verdict::pass("a and lambda are independent of the later input y given their past");
  std::string reason = !a_vs_y.independent ? "(i) a depends on y given x" : "";
  if (!l_vs_y.independent) reason += std::string(reason.empty() ? "" : "; ") + "(ii) lambda depends on y given (a, x)";
  return Verdict::fail(reason, std::move(witnesses));
}

Verdict check_bell_locality(const OnticModel& model) {
  if (!validate(model).ok()) return invalid_model(model);
  const ProbTable& table = model.joint();
  const ProbTable joint = lift(table);
  const ProbTable p_lambda = marginalize(table, {kOntic});
  const auto& al = model.alphabets();
  for (const auto& x : al.prep_settings) {
    for (const auto& y : al.meas_settings) {
      for (const auto& l : model.lambda_space()) {
        const Rational pl = p_lambda.at({{kPrepSetting, x}, {kMeasSetting, y}, {kOntic, l}});
        if (pl.is_zero()) continue;
        const Rational p_xl = mass(joint, {{kPrepSetting, x}, {kOntic, l}});
        const Rational p_yl = mass(joint, {{kMeasSetting, y}, {kOntic, l}});
        for (const auto& a : al.prep_outputs) {
          const Rational pa = mass(joint, {{kPrepSetting, x}, {kOntic, l}, {kPrepOutput, a}}) / p_xl;
          for (const auto& b : al.meas_outputs) {
            const Rational pb = mass(joint, {{kMeasSetting, y}, {kOntic, l}, {kMeasOutput, b}}) / p_yl;
            const Rational pab = model.p(a, b, l, x, y) / pl;
            if (pab != pa * pb) {
              return Verdict::fail(
                  "joint outcome distribution does not factorize given lambda",
                  {{{{kPrepSetting, x}, {kMeasSetting, y}, {kOntic, l}, {kPrepOutput, a}, {kMeasOutput, b}},
                    "p(a,b|x,y,lambda)",
                    pab,
                    "p(a|x,lambda)p(b|y,lambda)",
                    pa * pb,
                    "settings weighted uniformly"}});
            }
          }
        }
      }
    }
  }
  return Verdict::pass("p(a,b|x,y,lambda) = p(a|x,lambda) p(b|y,lambda) wherever p(lambda|x,y) > 0");
}

ConditionReport check_conditions(const OnticModel& model) {
  ConditionReport report;
  report.verdicts.push_back({Condition::kFreeChoice, check_free_choice(model)});
  report.verdicts.push_back({Condition::kRealism, check_realism(model)});
  report.verdicts.push_back({Condition::kLambdaMediation, check_lambda_mediation(model)});
  report.verdicts.push_back({Condition::kNoRetrocausality, check_no_retrocausality(model)});
  report.verdicts.push_back({Condition::kTimeSymmetry, check_time_symmetry(model)});
  return report;
}

}  // namespace ptm
