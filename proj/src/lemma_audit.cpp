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

#include <algorithm>
#include <map>

namespace ptm {

std::string to_string(StepVerdict v) {
  switch (v) {
    case StepVerdict::kHolds: return "holds";
    case StepVerdict::kFails: return "fails";
    case StepVerdict::kVacuous: return "vacuous";
  }
  return "?";
}

std::string to_string(Side s) { return s == Side::kOriginal ? "original" : "reverse"; }

const AuditStep& AuditReport::step(const std::string& id) const {
  for (const auto& s : steps) {
    if (s.id == id) return s;
  }
  throw StructuralError("no audit step '" + id + "'");
}

namespace {

// Collects per-cell outcomes; keeps the first failure as the step's witness.
class StepBuilder {
 public:
  StepBuilder(std::string id, std::string name, std::string statement, Side side, bool inference) {
    step_.id = std::move(id);
    step_.name = std::move(name);
    step_.statement = std::move(statement);
    step_.side = side;
    step_.inference = inference;
  }

  void vacuous() { ++step_.cells_vacuous; }

  void compare(const Assignment& at, const std::string& lhs_label, const Rational& lhs,
               const std::string& rhs_label, const Rational& rhs, const std::string& note = {}) {
    ++step_.cells_checked;
    if (lhs == rhs || step_.witness) return;
    step_.witness = Witness{at, lhs_label, lhs, rhs_label, rhs, note};
  }

  AuditStep finish() {
    if (step_.witness) {
      step_.verdict = StepVerdict::kFails;
    } else if (step_.cells_checked == 0) {
      step_.verdict = StepVerdict::kVacuous;
    } else {
      step_.verdict = StepVerdict::kHolds;
    }
    return std::move(step_);
  }

 private:
  AuditStep step_;
};

// Probability queries on one ontic model: table-level conditionals at fixed
// settings, and y- or x-free conditionals from the uniformly lifted joint.
class Queries {
 public:
  explicit Queries(const OnticModel& model) : model_(model), joint_(lift(model.joint())) {}

  const OnticModel& model() const { return model_; }

  // sum of p(a,b,lambda|x,y) over the variables not named, at fixed (x, y)
  Rational table(const Assignment& at) const { return mass(model_.joint(), at); }
  // unconditioned joint under uniform settings
  Rational lifted(const Assignment& at) const { return mass(joint_, at); }
  std::optional<Rational> lifted_conditional(const Assignment& event, const Assignment& given) const {
    const Rational den = lifted(given);
    if (den.is_zero()) return std::nullopt;
    Assignment both = given;
    both.insert(both.end(), event.begin(), event.end());
    return lifted(both) / den;
  }

 private:
  const OnticModel& model_;
  ProbTable joint_;
};

using S = std::pair<std::string, std::string>;

AuditStep eq19(const Queries& q) {
  StepBuilder step("a", "Eq19-decomposition", "p(a,b,lambda|x,y) = p(b|lambda,x,a,y) p(lambda|a,x) p(a|x)",
                   Side::kOriginal, false);
  const auto& m = q.model();
  const auto& al = m.alphabets();
  for (const auto& x : al.prep_settings) {
    for (const auto& y : al.meas_settings) {
      for (const auto& a : al.prep_outputs) {
        for (const auto& l : m.lambda_space()) {
          const auto p_a = q.lifted_conditional({{"a", a}}, {{"x", x}});
          const auto p_l = q.lifted_conditional({{"lambda", l}}, {{"a", a}, {"x", x}});
          const Rational p_al_xy = q.table({{"x", x}, {"y", y}, {"a", a}, {"lambda", l}});
          if (!p_a || !p_l) {
            for (std::size_t i = 0; i < al.meas_outputs.size(); ++i) step.vacuous();
            continue;
          }
          const Rational prefix = *p_l * *p_a;
          if (p_al_xy.is_zero()) {
            // p(b|lambda,x,a,y) is undefined; summing over b leaves 0 = p(lambda|a,x) p(a|x).
            if (prefix.is_zero()) {
              for (std::size_t i = 0; i < al.meas_outputs.size(); ++i) step.vacuous();
            } else {
              step.compare({{"x", x}, {"y", y}, {"a", a}, {"lambda", l}}, "p(a,lambda|x,y)", p_al_xy,
                           "p(lambda|a,x) p(a|x)", prefix);
            }
            continue;
          }
          for (const auto& b : al.meas_outputs) {
            const Rational lhs = m.p(a, b, l, x, y);
            const Rational p_b = lhs / p_al_xy;
            step.compare({{"x", x}, {"y", y}, {"a", a}, {"b", b}, {"lambda", l}}, "p(a,b,lambda|x,y)", lhs,
                         "p(b|lambda,x,a,y) p(lambda|a,x) p(a|x)", p_b * prefix);
          }
        }
      }
    }
  }
  return step.finish();
}

AuditStep eq20(const Queries& q) {
  StepBuilder step("b", "Eq20-bayes", "p(lambda|a,x) = p(a|lambda,x) p(lambda|x) / p(a|x)", Side::kOriginal, false);
  const auto& m = q.model();
  const auto& al = m.alphabets();
  for (const auto& x : al.prep_settings) {
    for (const auto& a : al.prep_outputs) {
      for (const auto& l : m.lambda_space()) {
        const auto lhs = q.lifted_conditional({{"lambda", l}}, {{"a", a}, {"x", x}});
        const auto p_a_lx = q.lifted_conditional({{"a", a}}, {{"lambda", l}, {"x", x}});
        const auto p_l_x = q.lifted_conditional({{"lambda", l}}, {{"x", x}});
        const auto p_a_x = q.lifted_conditional({{"a", a}}, {{"x", x}});
        if (!lhs || !p_a_lx || !p_l_x || !p_a_x || p_a_x->is_zero()) {
          step.vacuous();
          continue;
        }
        step.compare({{"x", x}, {"a", a}, {"lambda", l}}, "p(lambda|a,x)", *lhs, "p(a|lambda,x) p(lambda|x) / p(a|x)",
                     *p_a_lx * *p_l_x / *p_a_x);
      }
    }
  }
  return step.finish();
}

AuditStep eq21(const Queries& q) {
  StepBuilder step("c", "Eq21-substitution", "p(a,b,lambda|x,y) = p(b|lambda,x,a,y) p(a|lambda,x) p(lambda|x)",
                   Side::kOriginal, false);
  const auto& m = q.model();
  const auto& al = m.alphabets();
  for (const auto& x : al.prep_settings) {
    for (const auto& y : al.meas_settings) {
      for (const auto& a : al.prep_outputs) {
        for (const auto& l : m.lambda_space()) {
          const auto p_l = q.lifted_conditional({{"lambda", l}}, {{"x", x}});
          const auto p_a = q.lifted_conditional({{"a", a}}, {{"lambda", l}, {"x", x}});
          const Rational p_al_xy = q.table({{"x", x}, {"y", y}, {"a", a}, {"lambda", l}});
          if (!p_l || !p_a) {
            for (std::size_t i = 0; i < al.meas_outputs.size(); ++i) step.vacuous();
            continue;
          }
          const Rational prefix = *p_a * *p_l;
          if (p_al_xy.is_zero()) {
            if (prefix.is_zero()) {
              for (std::size_t i = 0; i < al.meas_outputs.size(); ++i) step.vacuous();
            } else {
              step.compare({{"x", x}, {"y", y}, {"a", a}, {"lambda", l}}, "p(a,lambda|x,y)", p_al_xy,
                           "p(a|lambda,x) p(lambda|x)", prefix);
            }
            continue;
          }
          for (const auto& b : al.meas_outputs) {
            const Rational lhs = m.p(a, b, l, x, y);
            step.compare({{"x", x}, {"y", y}, {"a", a}, {"b", b}, {"lambda", l}}, "p(a,b,lambda|x,y)", lhs,
                         "p(b|lambda,x,a,y) p(a|lambda,x) p(lambda|x)", lhs / p_al_xy * prefix);
          }
        }
      }
    }
  }
  return step.finish();
}

// Checks that p(lambda|x,y) does not change as the settings in `varying`
// change while the remaining settings stay fixed. `names` gives the letter
// used in the report for the model's (x, y) variables.
AuditStep contrast(StepBuilder step, const OnticModel& m, const std::vector<std::string>& varying,
                   const std::map<std::string, std::string>& names, const std::string& ontic_name) {
  const ProbTable p_lambda = marginalize(m.joint(), {kOntic});
  const auto& al = m.alphabets();
  auto varies = [&](const std::string& v) {
    return std::find(varying.begin(), varying.end(), v) != varying.end();
  };
  auto label = [&](const std::string& v, const std::string& value) { return names.at(v) + "=" + value; };

  for (const auto& l : m.lambda_space()) {
    std::map<Assignment, std::pair<std::string, Rational>> reference;  // fixed part -> first value
    for (const auto& x : al.prep_settings) {
      for (const auto& y : al.meas_settings) {
        Assignment fixed;
        fixed.emplace_back(ontic_name, l);
        std::string varied;
        for (const auto& [v, value] : {S{kPrepSetting, x}, S{kMeasSetting, y}}) {
          if (varies(v)) {
            varied += (varied.empty() ? "" : ",") + label(v, value);
          } else {
            fixed.emplace_back(names.at(v), value);
          }
        }
        const Rational p = p_lambda.at({{kPrepSetting, x}, {kMeasSetting, y}, {kOntic, l}});
        auto [it, inserted] = reference.try_emplace(fixed, varied, p);
        if (inserted) {
          step.compare(fixed, "p at " + varied, p, "p at " + varied, p);
        } else {
          step.compare(fixed, "p at " + it->second.first, it->second.second, "p at " + varied, p);
        }
      }
    }
  }
  return step.finish();
}

AuditStep eq17(const Queries& q) {
  StepBuilder step("h", "Eq17", "p(b|lambda,x,y) = p(b|lambda,y)", Side::kOriginal, true);
  const auto& m = q.model();
  const auto& al = m.alphabets();
  for (const auto& x : al.prep_settings) {
    for (const auto& y : al.meas_settings) {
      for (const auto& l : m.lambda_space()) {
        const Rational pl = q.table({{"x", x}, {"y", y}, {"lambda", l}});
        for (const auto& b : al.meas_outputs) {
          if (pl.is_zero()) {
            step.vacuous();
            continue;
          }
          const Rational lhs = q.table({{"x", x}, {"y", y}, {"lambda", l}, {"b", b}}) / pl;
          const auto rhs = q.lifted_conditional({{"b", b}}, {{"lambda", l}, {"y", y}});
          step.compare({{"x", x}, {"y", y}, {"lambda", l}, {"b", b}}, "p(b|lambda,x,y)", lhs, "p(b|lambda,y)", *rhs);
        }
      }
    }
  }
  return step.finish();
}

AuditStep eq18(const Queries& q) {
  StepBuilder step("i", "Eq18", "p(a|lambda,x,y) = p(a|lambda,x)", Side::kOriginal, true);
  const auto& m = q.model();
  const auto& al = m.alphabets();
  for (const auto& x : al.prep_settings) {
    for (const auto& y : al.meas_settings) {
      for (const auto& l : m.lambda_space()) {
        const Rational pl = q.table({{"x", x}, {"y", y}, {"lambda", l}});
        for (const auto& a : al.prep_outputs) {
          if (pl.is_zero()) {
            step.vacuous();
            continue;
          }
          const Rational lhs = q.table({{"x", x}, {"y", y}, {"lambda", l}, {"a", a}}) / pl;
          const auto rhs = q.lifted_conditional({{"a", a}}, {{"lambda", l}, {"x", x}});
          step.compare({{"x", x}, {"y", y}, {"lambda", l}, {"a", a}}, "p(a|lambda,x,y)", lhs, "p(a|lambda,x)", *rhs);
        }
      }
    }
  }
  return step.finish();
}

}  // namespace

AuditReport audit_lemma(const ReversePair& pair) {
  if (!validate(pair.original).ok() || !validate(pair.reverse).ok()) {
    throw StructuralError("audit requires valid original and reverse models");
  }
  if (Verdict v = check_reverse_pair(pair); !v.passed) {
    throw StructuralError("pair is not an ontological time reverse: " +
                          (v.witnesses.empty() ? v.reason : describe(v.witnesses.front())));
  }

  const Queries original(pair.original);
  const std::map<std::string, std::string> plain = {{kPrepSetting, "x"}, {kMeasSetting, "y"}};
  // The reverse model's preparation input carries the original's y labels.
  const std::map<std::string, std::string> swapped = {{kPrepSetting, "y"}, {kMeasSetting, "x"}};

  AuditReport report;
  report.steps.push_back(eq19(original));
  report.steps.push_back(eq20(original));
  report.steps.push_back(eq21(original));
  report.steps.push_back(contrast(StepBuilder("d", "no-retro-marginal", "p(lambda|x,y) = p(lambda|x)",
                                              Side::kOriginal, true),
                                  pair.original, {kMeasSetting}, plain, "lambda"));
  report.steps.push_back(contrast(StepBuilder("e", "Eq22-reverse", "reverse: p'(mu|y,x) = p'(mu|y), mu = f(lambda)",
                                              Side::kReverse, true),
                                  pair.reverse, {kMeasSetting}, swapped, "mu"));
  report.steps.push_back(contrast(StepBuilder("f", "conflated-claim", "p(lambda|x,y) = p(lambda|y)",
                                              Side::kOriginal, true),
                                  pair.original, {kPrepSetting}, plain, "lambda"));
  report.steps.push_back(contrast(StepBuilder("g", "Eq16", "p(lambda|x,y) = p(lambda)", Side::kOriginal, true),
                                  pair.original, {kPrepSetting, kMeasSetting}, plain, "lambda"));
  report.steps.push_back(eq17(original));
  report.steps.push_back(eq18(original));

  for (const auto& s : report.steps) {
    if (s.verdict != StepVerdict::kFails) continue;
    if (!report.first_failure) report.first_failure = s.id;
    if (s.inference && !report.first_failing_inference) report.first_failing_inference = s.id;
  }
  if (!report.first_failure) {
    report.summary = "every step of the chain holds on this pair";
  } else {
    const bool inference_fails = report.first_failing_inference.has_value();
    const auto& s = report.step(inference_fails ? *report.first_failing_inference : *report.first_failure);
    report.summary = std::string(inference_fails ? "first failing inference: (" : "failing premise: (") + s.id +
                     ") " + s.name + " [" + s.statement + "] on the " + to_string(s.side) + " model; " +
                     describe(*s.witness);
    if (inference_fails && report.first_failure != report.first_failing_inference) {
      report.summary += "; premise (" + *report.first_failure + ") already fails";
    }
  }
  return report;
}

ConflationFinding explain_conflation(const AuditReport& report) {
  ConflationFinding f;
  f.original_independence = report.step("d").verdict;
  f.reverse_independence = report.step("e").verdict;
  f.conflated_claim = report.step("f").verdict;
  f.distinguishing = f.original_independence != StepVerdict::kFails;
  f.lines.push_back("original model, lambda independent of y given x: " + to_string(f.original_independence));
  f.lines.push_back("reverse model, f(lambda) independent of x given y: " + to_string(f.reverse_independence));
  f.lines.push_back("original model, lambda independent of x given y: " + to_string(f.conflated_claim));
  if (!f.distinguishing) {
    f.lines.push_back("the original model already violates the premise, so the audit no longer distinguishes "
                      "the legitimate independence from the conflated one");
  } else if (f.conflated_claim == StepVerdict::kFails) {
    f.lines.push_back("reading the reverse-model statement as a statement about lambda in the original model "
                      "is not licensed: the original-model claim fails");
  }
  return f;
}

ConflationFinding explain_conflation(const ReversePair& pair) { return explain_conflation(audit_lemma(pair)); }

ProbTable settings_distribution(const Alphabets& alphabets, const std::vector<Rational>& x_weights,
                                const std::vector<Rational>& y_weights) {
  if (x_weights.size() != alphabets.prep_settings.size() || y_weights.size() != alphabets.meas_settings.size()) {
    throw StructuralError("settings weights must match the setting alphabets");
  }
  std::vector<Variable> vars = {{kPrepSetting, alphabets.prep_settings}, {kMeasSetting, alphabets.meas_settings}};
  ProbTable t = ProbTable::tabulate(vars, {}, [&](const ProbTable::Index& i) { return x_weights[i[0]] * y_weights[i[1]]; });
  if (!t.is_normalized() || t.has_negative_entry()) throw StructuralError("settings weights must be a distribution");
  return t;
}

MediationConsequence mediation_consequence_check(const OnticModel& model) {
  return mediation_consequence_check(model, uniform_weights(model.joint()));
}

MediationConsequence mediation_consequence_check(const OnticModel& model, const ProbTable& settings) {
  if (auto report = validate(model); !report.ok()) {
    throw ValidationError("invalid ontic model: " + report.issues.front().message);
  }
  for (std::size_t i = 0; i < settings.cell_count(); ++i) {
    if (settings.cell(i).sign() <= 0) throw StructuralError("settings distribution must have full support");
  }
  const ProbTable joint = lift(model.joint(), settings);
  const auto& al = model.alphabets();

  MediationConsequence out{OperationalModel::tabulate(al, [](auto&&...) { return Rational(0); }), {}, false, false,
                           std::nullopt, {}, false};
  std::map<std::string, Rational> p_lambda;
  for (const auto& l : model.lambda_space()) {
    p_lambda[l] = mass(joint, {{kOntic, l}});
    out.lambda_marginal.emplace_back(l, p_lambda[l]);
  }
  // p(b|lambda,y) where defined, else p(b|lambda); either depends on (lambda, y) only.
  auto p_b = [&](const std::string& b, const std::string& l, const std::string& y) {
    const Rational den = mass(joint, {{kOntic, l}, {kMeasSetting, y}});
    if (!den.is_zero()) return mass(joint, {{kOntic, l}, {kMeasSetting, y}, {kMeasOutput, b}}) / den;
    return mass(joint, {{kOntic, l}, {kMeasOutput, b}}) / p_lambda.at(l);
  };
  out.recomputed = OperationalModel::tabulate(
      al, [&](const std::string& x, const std::string& y, const std::string& a, const std::string& b) {
        const Rational p_a = mass(joint, {{kPrepSetting, x}, {kPrepOutput, a}}) / mass(joint, {{kPrepSetting, x}});
        Rational sum(0);
        for (const auto& l : model.lambda_space()) {
          if (p_lambda.at(l).is_zero()) continue;
          sum += p_lambda.at(l) * p_b(b, l, y);
        }
        return p_a * sum;
      });

  out.b_independent_of_preparation =
      check_independence(out.recomputed.joint(), {kMeasOutput}, {kPrepOutput, kPrepSetting}, {kMeasSetting})
          .independent;
  out.no_forward_signalling = check_no_signalling(out.recomputed).no_forward_signalling;
  if (al.prep_outputs.size() == 2 && al.meas_outputs.size() == 2) {
    AgreeMap agree;
    try {
      agree = same_label_pairing(al);
    } catch (const StructuralError&) {
      agree = {{al.prep_outputs[0], al.meas_outputs[0]}, {al.prep_outputs[1], al.meas_outputs[1]}};
    }
    out.summary = correlation_summary(out.recomputed, agree);
    if (al.prep_settings.size() == 2 && al.meas_settings.size() == 2) {
      const auto& X = al.prep_settings;
      const auto& Y = al.meas_settings;
      out.inequalities.push_back(wigner_check(*out.summary, {X[0], Y[1]}, {X[1], Y[0]}, {X[1], Y[1]}));
      out.inequalities.push_back(chsh(*out.summary, X[0], X[1], Y[0], Y[1]));
    }
  }
  for (const auto& r : out.inequalities) out.any_violation = out.any_violation || r.violated;
  return out;
}

}  // namespace ptm
