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

#include "ptmverify/ptm_model.hpp"

namespace ptm {

std::vector<Variable> operational_variables(const Alphabets& al) {
  return {{kPrepSetting, al.prep_settings},
          {kMeasSetting, al.meas_settings},
          {kPrepOutput, al.prep_outputs},
          {kMeasOutput, al.meas_outputs}};
}

std::vector<Variable> ontic_variables(const Alphabets& al, const Labels& lambda_space) {
  auto vars = operational_variables(al);
  vars.push_back({kOntic, lambda_space});
  return vars;
}

namespace {

const std::vector<std::string> kSettings = {kPrepSetting, kMeasSetting};

void require_shape(const ProbTable& joint, const std::vector<Variable>& expected) {
  if (joint.variables() != expected) throw StructuralError("model table does not match its alphabets");
  if (joint.conditioning() != kSettings) throw StructuralError("model table must be conditioned on (x, y)");
}

}  // namespace

OperationalModel::OperationalModel(Alphabets alphabets, ProbTable joint)
    : alphabets_(std::move(alphabets)), joint_(std::move(joint)) {
  require_shape(joint_, operational_variables(alphabets_));
}

OperationalModel OperationalModel::tabulate(Alphabets alphabets, const CellFn& cell) {
  auto vars = operational_variables(alphabets);
  ProbTable joint = ProbTable::tabulate(vars, kSettings, [&](const ProbTable::Index& i) {
    return cell(vars[0].labels[i[0]], vars[1].labels[i[1]], vars[2].labels[i[2]], vars[3].labels[i[3]]);
  });
  return OperationalModel(std::move(alphabets), std::move(joint));
}

Rational OperationalModel::p(const std::string& a, const std::string& b, const std::string& x,
                             const std::string& y) const {
  return joint_.at({{kPrepSetting, x}, {kMeasSetting, y}, {kPrepOutput, a}, {kMeasOutput, b}});
}

OnticModel::OnticModel(Alphabets alphabets, Labels lambda_space, ProbTable joint)
    : alphabets_(std::move(alphabets)), lambda_space_(std::move(lambda_space)), joint_(std::move(joint)) {
  require_shape(joint_, ontic_variables(alphabets_, lambda_space_));
}

OnticModel OnticModel::tabulate(Alphabets alphabets, Labels lambda_space, const CellFn& cell) {
  auto vars = ontic_variables(alphabets, lambda_space);
  ProbTable joint = ProbTable::tabulate(vars, kSettings, [&](const ProbTable::Index& i) {
    return cell(vars[0].labels[i[0]], vars[1].labels[i[1]], vars[2].labels[i[2]], vars[3].labels[i[3]],
                vars[4].labels[i[4]]);
  });
  return OnticModel(std::move(alphabets), std::move(lambda_space), std::move(joint));
}

Rational OnticModel::p(const std::string& a, const std::string& b, const std::string& lambda,
                       const std::string& x, const std::string& y) const {
  return joint_.at({{kPrepSetting, x}, {kMeasSetting, y}, {kPrepOutput, a}, {kMeasOutput, b}, {kOntic, lambda}});
}

TransformationChannel::TransformationChannel(Labels input_space, Labels output_space, ProbTable kernel)
    : input_(std::move(input_space)), output_(std::move(output_space)), kernel_(std::move(kernel)) {
  const std::vector<Variable> expected = {{"lambda_out", output_}, {"lambda_in", input_}};
  if (kernel_.variables() != expected || kernel_.conditioning() != std::vector<std::string>{"lambda_in"}) {
    throw StructuralError("channel kernel must be a table p(lambda_out|lambda_in)");
  }
}

TransformationChannel TransformationChannel::identity(const Labels& space) {
  return from_function(space, space, [](const std::string& in, const std::string& out) {
    return Rational(in == out ? 1 : 0);
  });
}

TransformationChannel TransformationChannel::from_function(
    Labels input_space, Labels output_space,
    const std::function<Rational(const std::string& in, const std::string& out)>& kernel) {
  std::vector<Variable> vars = {{"lambda_out", output_space}, {"lambda_in", input_space}};
  ProbTable table = ProbTable::tabulate(vars, {"lambda_in"}, [&](const ProbTable::Index& i) {
    return kernel(vars[1].labels[i[1]], vars[0].labels[i[0]]);
  });
  return TransformationChannel(std::move(input_space), std::move(output_space), std::move(table));
}

Rational TransformationChannel::p(const std::string& out, const std::string& in) const {
  return kernel_.at({{"lambda_out", out}, {"lambda_in", in}});
}

namespace {

void check_alphabets(const Alphabets& al, std::vector<ValidationIssue>& issues) {
  const std::pair<const Labels*, const char*> named[] = {{&al.prep_settings, "preparation settings"},
                                                         {&al.meas_settings, "measurement settings"},
                                                         {&al.prep_outputs, "preparation outputs"},
                                                         {&al.meas_outputs, "measurement outputs"}};
  for (const auto& [labels, name] : named) {
    if (labels->empty()) {
      issues.push_back({ValidationIssue::Kind::kEmptyAlphabet, std::string("empty alphabet: ") + name, {}, {}});
    }
  }
}

void check_table(const ProbTable& joint, std::vector<ValidationIssue>& issues) {
  if (joint.has_negative_entry()) {
    issues.push_back({ValidationIssue::Kind::kNegativeEntry, "table has a negative entry", {}, {}});
  }
  for (const auto& defect : joint.normalization_defects()) {
    issues.push_back({ValidationIssue::Kind::kRowNotNormalized,
                      "row " + to_string(defect.conditioners) + " sums to " + defect.sum.str(), defect.conditioners,
                      defect.sum});
  }
}

}  // namespace

ValidationReport validate(const OnticModel& model) {
  ValidationReport report;
  check_alphabets(model.alphabets(), report.issues);
  if (model.lambda_space().empty()) {
    report.issues.push_back({ValidationIssue::Kind::kEmptyOnticSpace, "empty ontic space", {}, {}});
  }
  check_table(model.joint(), report.issues);
  return report;
}

ValidationReport validate(const OperationalModel& model) {
  ValidationReport report;
  check_alphabets(model.alphabets(), report.issues);
  check_table(model.joint(), report.issues);
  return report;
}

OperationalModel to_operational(const OnticModel& model) {
  if (auto report = validate(model); !report.ok()) {
    throw ValidationError("invalid ontic model: " + report.issues.front().message);
  }
  ProbTable joint = marginalize(model.joint(), {kPrepOutput, kMeasOutput});
  return OperationalModel(model.alphabets(), std::move(joint));
}

OnticModel compose_transformation(const OnticModel& prep_stage, const TransformationChannel& channel) {
  if (channel.input_space() != prep_stage.lambda_space()) {
    throw StructuralError("channel input space does not match the model's ontic space");
  }
  const auto& in_space = prep_stage.lambda_space();
  return OnticModel::tabulate(prep_stage.alphabets(), channel.output_space(),
                              [&](const std::string& x, const std::string& y, const std::string& a,
                                  const std::string& b, const std::string& out) {
                                Rational sum(0);
                                for (const auto& in : in_space) sum += channel.p(out, in) * prep_stage.p(a, b, in, x, y);
                                return sum;
                              });
}

SignallingVerdict check_no_signalling(const OperationalModel& model) {
  const auto& al = model.alphabets();
  SignallingVerdict verdict;
  auto p_b = [&](const std::string& b, const std::string& x, const std::string& y) {
    Rational s(0);
    for (const auto& a : al.prep_outputs) s += model.p(a, b, x, y);
    return s;
  };
  auto p_a = [&](const std::string& a, const std::string& x, const std::string& y) {
    Rational s(0);
    for (const auto& b : al.meas_outputs) s += model.p(a, b, x, y);
    return s;
  };
  for (const auto& y : al.meas_settings) {
    for (const auto& b : al.meas_outputs) {
      for (std::size_t i = 1; i < al.prep_settings.size() && verdict.no_forward_signalling; ++i) {
        const auto& x0 = al.prep_settings.front();
        const auto& xi = al.prep_settings[i];
        Rational p0 = p_b(b, x0, y), pi = p_b(b, xi, y);
        if (p0 != pi) {
          verdict.no_forward_signalling = false;
          verdict.forward_witness = SignallingWitness{y, b, x0, xi, p0, pi};
        }
      }
    }
  }
  for (const auto& x : al.prep_settings) {
    for (const auto& a : al.prep_outputs) {
      for (std::size_t i = 1; i < al.meas_settings.size() && verdict.no_retro_signalling; ++i) {
        const auto& y0 = al.meas_settings.front();
        const auto& yi = al.meas_settings[i];
        Rational p0 = p_a(a, x, y0), pi = p_a(a, x, yi);
        if (p0 != pi) {
          verdict.no_retro_signalling = false;
          verdict.retro_witness = SignallingWitness{x, a, y0, yi, p0, pi};
        }
      }
    }
  }
  return verdict;
}

std::size_t sample_index(const std::vector<Rational>& weights, RunSource& source) {
  const std::uint64_t draw = source.next();
  Rational cumulative(0);
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i].is_zero()) continue;
    last_positive = i;
    cumulative += weights[i];
    if (draw < scaled_threshold(cumulative)) return i;
  }
  return last_positive;
}

namespace {

struct SettingSlice {
  std::size_t x_index;
  std::size_t y_index;
};

SettingSlice locate(const OnticModel& model, const std::string& x, const std::string& y) {
  const auto& joint = model.joint();
  return {joint.variable(kPrepSetting).label_index(x), joint.variable(kMeasSetting).label_index(y)};
}

RunRecord record_for(const OnticModel& model, const std::string& x, const std::string& y, std::size_t offset,
                     const RunSource& source) {
  const auto& al = model.alphabets();
  const std::size_t nl = model.lambda_space().size();
  const std::size_t nb = al.meas_outputs.size();
  RunRecord r;
  r.x = x;
  r.y = y;
  r.lambda = model.lambda_space()[offset % nl];
  r.b = al.meas_outputs[(offset / nl) % nb];
  r.a = al.prep_outputs[offset / (nl * nb)];
  r.seed = source.seed();
  r.index = source.draws() - 1;
  return r;
}

std::vector<Rational> slice_weights(const OnticModel& model, const SettingSlice& s) {
  const auto& joint = model.joint();
  const std::size_t per_setting = model.alphabets().prep_outputs.size() * model.alphabets().meas_outputs.size() *
                                  model.lambda_space().size();
  const std::size_t base = joint.flatten({s.x_index, s.y_index, 0, 0, 0});
  std::vector<Rational> w;
  w.reserve(per_setting);
  for (std::size_t k = 0; k < per_setting; ++k) w.push_back(joint.cell(base + k));
  return w;
}

}  // namespace

RunRecord sample_run(const OnticModel& model, const std::string& x, const std::string& y, RunSource& source) {
  const auto slice = locate(model, x, y);
  const std::size_t offset = sample_index(slice_weights(model, slice), source);
  return record_for(model, x, y, offset, source);
}

RunSampler::RunSampler(const OnticModel& model) : model_(model) {
  const auto& al = model_.alphabets();
  thresholds_.resize(al.prep_settings.size());
  last_positive_.resize(al.prep_settings.size());
  for (std::size_t xi = 0; xi < al.prep_settings.size(); ++xi) {
    for (std::size_t yi = 0; yi < al.meas_settings.size(); ++yi) {
      std::vector<std::uint64_t> t;
      std::size_t last = 0;
      Rational cumulative(0);
      const auto weights = slice_weights(model_, {xi, yi});
      for (std::size_t k = 0; k < weights.size(); ++k) {
        cumulative += weights[k];
        if (!weights[k].is_zero()) last = k;
        // zero-weight cells get threshold 0 so they are never chosen
        t.push_back(weights[k].is_zero() ? 0 : scaled_threshold(cumulative));
      }
      thresholds_[xi].push_back(std::move(t));
      last_positive_[xi].push_back(last);
    }
  }
}

RunRecord RunSampler::sample(const std::string& x, const std::string& y, RunSource& source) const {
  const auto slice = locate(model_, x, y);
  const auto& t = thresholds_[slice.x_index][slice.y_index];
  const std::uint64_t draw = source.next();
  std::size_t chosen = last_positive_[slice.x_index][slice.y_index];
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (draw < t[k]) {
      chosen = k;
      break;
    }
  }
  return record_for(model_, x, y, chosen, source);
}

}  // namespace ptm
