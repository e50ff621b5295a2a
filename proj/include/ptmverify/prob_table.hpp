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
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ptmverify/errors.hpp"
#include "ptmverify/rational.hpp"

namespace ptm {

/// A named finite variable with opaque string labels.
struct Variable {
  std::string name;
  std::vector<std::string> labels;

  std::size_t label_index(const std::string& label) const;  // throws StructuralError
  friend bool operator==(const Variable&, const Variable&) = default;
};

using VariableSet = std::set<std::string>;

/// Dense table of exact probabilities over the product space of its variables.
///
/// Some variables may be designated conditioners: the table then stores one
/// distribution over the remaining variables per conditioner assignment.
/// Cells are laid out row-major in variable order (last variable fastest).
/// Tables are values; every "modifying" operation returns a new table.
class ProbTable {
 public:
  using Index = std::vector<std::size_t>;
  enum class Density { kDense, kSparse };

  ProbTable() = default;
  /// All-zero table. Throws StructuralError on duplicate or unknown names.
  ProbTable(std::vector<Variable> variables, const std::vector<std::string>& conditioning);

  template <class F>
  static ProbTable tabulate(std::vector<Variable> variables, const std::vector<std::string>& conditioning,
                            F&& cell_value) {
    ProbTable t(std::move(variables), conditioning);
    for (std::size_t flat = 0; flat < t.cells_.size(); ++flat) t.cells_[flat] = cell_value(t.unflatten(flat));
    return t;
  }

  /// Dense tables must list every cell; sparse tables treat missing cells as 0.
  /// Duplicate assignments are a StructuralError in either mode.
  static ProbTable from_entries(std::vector<Variable> variables, const std::vector<std::string>& conditioning,
                                const std::vector<std::pair<Assignment, Rational>>& entries,
                                Density density = Density::kDense);

  const std::vector<Variable>& variables() const { return vars_; }
  bool has_variable(const std::string& name) const;
  std::size_t position(const std::string& name) const;
  const Variable& variable(const std::string& name) const { return vars_[position(name)]; }
  bool is_conditioning(const std::string& name) const { return conditioning_[position(name)]; }
  std::vector<std::string> conditioning() const;
  std::vector<std::string> free_variables() const;

  std::size_t cell_count() const { return cells_.size(); }
  const Rational& cell(std::size_t flat) const { return cells_[flat]; }
  const Rational& operator[](const Index& index) const { return cells_[flatten(index)]; }
  std::size_t flatten(const Index& index) const;
  Index unflatten(std::size_t flat) const;

  /// Full assignment (any order) to index; throws StructuralError on unknown or missing names.
  Index index_of(const Assignment& full) const;
  Assignment assignment_of(const Index& index) const;
  const Rational& at(const Assignment& full) const { return (*this)[index_of(full)]; }

  ProbTable with_entry(const Assignment& full, Rational value) const;

  struct Defect {
    Assignment conditioners;
    Rational sum;
  };
  /// One defect per conditioner assignment whose free cells do not sum to exactly 1.
  std::vector<Defect> normalization_defects() const;
  bool is_normalized() const { return normalization_defects().empty(); }
  bool has_negative_entry() const;

  friend bool operator==(const ProbTable&, const ProbTable&) = default;

 private:
  std::vector<Variable> vars_;
  std::vector<bool> conditioning_;
  std::vector<std::size_t> strides_;
  std::vector<Rational> cells_;
};

/// Sums out every free variable not in `keep`. Conditioners are retained.
ProbTable marginalize(const ProbTable& table, const VariableSet& keep);

/// Fixes the labels in `on`. Conditioners named in `on` are sliced away;
/// free variables named in `on` are conditioned on and the rest renormalized.
/// Throws ZeroConditioning if the event has probability zero for some
/// remaining conditioner assignment.
ProbTable condition(const ProbTable& table, const Assignment& on);

/// p(l|a,x) = p(a|l,x) p(l|x) / p(a|x). The result's conditioners are the
/// likelihood's free variables plus the prior's conditioners.
ProbTable bayes_invert(const ProbTable& likelihood, const ProbTable& prior, const ProbTable& evidence);

/// Uniform distribution over the conditioners of `table` (a table without conditioners).
ProbTable uniform_weights(const ProbTable& table);

/// Joint distribution w(c) * table(v|c) with no conditioners. `weights` is a
/// normalized table over exactly the conditioners of `table`.
ProbTable lift(const ProbTable& table, const ProbTable& weights);
ProbTable lift(const ProbTable& table);

/// Sum of the cells matching a partial assignment.
Rational mass(const ProbTable& table, const Assignment& partial);

struct IndependenceWitness {
  Assignment given;
  Assignment left;
  Assignment right;
  Rational p_joint;  // p(left, right | given)
  Rational p_left;   // p(left | given)
  Rational p_right;  // p(right | given)
};

struct IndependenceVerdict {
  bool independent = true;
  std::optional<IndependenceWitness> witness;
};

/// Exact test of A independent of B given C. Conditioners of `table` are
/// given the `weights` distribution (uniform when omitted) before testing;
/// the verdict does not depend on the weights as long as they have full
/// support. Conditioning events of probability zero are skipped.
IndependenceVerdict check_independence(const ProbTable& table, const VariableSet& a, const VariableSet& b,
                                       const VariableSet& given);
IndependenceVerdict check_independence(const ProbTable& table, const VariableSet& a, const VariableSet& b,
                                       const VariableSet& given, const ProbTable& weights);

}  // namespace ptm
