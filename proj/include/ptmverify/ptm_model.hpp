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

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ptmverify/prob_table.hpp"

namespace ptm {

// Variable names used by every model table.
inline const std::string kPrepSetting = "x";
inline const std::string kMeasSetting = "y";
inline const std::string kPrepOutput = "a";
inline const std::string kMeasOutput = "b";
inline const std::string kOntic = "lambda";

using Labels = std::vector<std::string>;

struct Alphabets {
  Labels prep_settings;  // X
  Labels meas_settings;  // Y
  Labels prep_outputs;   // A
  Labels meas_outputs;   // B

  /// Alphabets of the experiment with preparation and measurement roles exchanged.
  Alphabets swapped() const { return {meas_settings, prep_settings, meas_outputs, prep_outputs}; }
  friend bool operator==(const Alphabets&, const Alphabets&) = default;
};

/// P(a,b|x,y) over finite alphabets. The joint is a table over (x,y,a,b)
/// conditioned on (x,y).
class OperationalModel {
 public:
  using CellFn = std::function<Rational(const std::string& x, const std::string& y, const std::string& a,
                                        const std::string& b)>;

  /// Throws StructuralError if the table's variables do not match the alphabets.
  OperationalModel(Alphabets alphabets, ProbTable joint);
  static OperationalModel tabulate(Alphabets alphabets, const CellFn& cell);

  const Alphabets& alphabets() const { return alphabets_; }
  const ProbTable& joint() const { return joint_; }
  Rational p(const std::string& a, const std::string& b, const std::string& x, const std::string& y) const;

  friend bool operator==(const OperationalModel&, const OperationalModel&) = default;

 private:
  Alphabets alphabets_;
  ProbTable joint_;
};

/// p(a,b,lambda|x,y): an operational model extended with a finite ontic space.
class OnticModel {
 public:
  using CellFn = std::function<Rational(const std::string& x, const std::string& y, const std::string& a,
                                        const std::string& b, const std::string& lambda)>;

  OnticModel(Alphabets alphabets, Labels lambda_space, ProbTable joint);
  static OnticModel tabulate(Alphabets alphabets, Labels lambda_space, const CellFn& cell);

  const Alphabets& alphabets() const { return alphabets_; }
  const Labels& lambda_space() const { return lambda_space_; }
  const ProbTable& joint() const { return joint_; }
  Rational p(const std::string& a, const std::string& b, const std::string& lambda, const std::string& x,
             const std::string& y) const;

  friend bool operator==(const OnticModel&, const OnticModel&) = default;

 private:
  Alphabets alphabets_;
  Labels lambda_space_;
  ProbTable joint_;
};

std::vector<Variable> operational_variables(const Alphabets& alphabets);
std::vector<Variable> ontic_variables(const Alphabets& alphabets, const Labels& lambda_space);

/// Stochastic map p(lambda_out|lambda_in) standing in for the transformation stage.
class TransformationChannel {
 public:
  TransformationChannel(Labels input_space, Labels output_space, ProbTable kernel);
  static TransformationChannel identity(const Labels& space);
  static TransformationChannel from_function(
      Labels input_space, Labels output_space,
      const std::function<Rational(const std::string& in, const std::string& out)>& kernel);

  const Labels& input_space() const { return input_; }
  const Labels& output_space() const { return output_; }
  const ProbTable& kernel() const { return kernel_; }
  Rational p(const std::string& out, const std::string& in) const;
  bool rows_normalized() const { return kernel_.is_normalized(); }

 private:
  Labels input_;
  Labels output_;
  ProbTable kernel_;
};

struct ValidationIssue {
  enum class Kind { kEmptyAlphabet, kEmptyOnticSpace, kNegativeEntry, kRowNotNormalized };
  Kind kind;
  std::string message;
  Assignment row;  // (x, y) for row defects
  Rational sum;    // row sum for kRowNotNormalized
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

ValidationReport validate(const OnticModel& model);
ValidationReport validate(const OperationalModel& model);

/// Sums out lambda. Throws ValidationError on an invalid model.
OperationalModel to_operational(const OnticModel& model);

/// p(a,b,l_out|x,y) = sum over l_in of p(l_out|l_in) p(a,b,l_in|x,y).
OnticModel compose_transformation(const OnticModel& prep_stage, const TransformationChannel& channel);

struct SignallingWitness {
  std::string fixed_setting;  // y for forward, x for retro
  std::string outcome;        // b for forward, a for retro
  std::string setting_1;
  std::string setting_2;
  Rational p_1;
  Rational p_2;
};

struct SignallingVerdict {
  bool no_forward_signalling = true;  // p(b|x,y) independent of x
  bool no_retro_signalling = true;    // p(a|x,y) independent of y
  std::optional<SignallingWitness> forward_witness;
  std::optional<SignallingWitness> retro_witness;
  bool no_signalling() const { return no_forward_signalling && no_retro_signalling; }
};

SignallingVerdict check_no_signalling(const OperationalModel& model);

struct RunRecord {
  std::string x, y, a, b, lambda;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Seeded source of 64-bit uniform draws; one per thread of control.
class RunSource {
 public:
  explicit RunSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}
  std::uint64_t next() {
    ++count_;
    return engine_();
  }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return count_; }

 private:
  std::uint64_t seed_;
  std::uint64_t count_ = 0;
  std::mt19937_64 engine_;
};

/// Picks index i with probability weights[i] (which must sum to 1) by comparing
/// one 64-bit draw against the exact cumulative thresholds.
std::size_t sample_index(const std::vector<Rational>& weights, RunSource& source);

/// Draws (a,b,lambda) from p(a,b,lambda|x,y). Throws StructuralError on unknown labels.
RunRecord sample_run(const OnticModel& model, const std::string& x, const std::string& y, RunSource& source);

/// Reusable sampler caching per-setting thresholds for long runs.
class RunSampler {
 public:
  explicit RunSampler(const OnticModel& model);
  RunRecord sample(const std::string& x, const std::string& y, RunSource& source) const;

 private:
  OnticModel model_;
  // thresholds_[x][y] -> cumulative thresholds over (a,b,lambda) cells
  std::vector<std::vector<std::vector<std::uint64_t>>> thresholds_;
  std::vector<std::vector<std::size_t>> last_positive_;
};

}  // namespace ptm
