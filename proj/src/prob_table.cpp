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

#include "ptmverify/prob_table.hpp"

#include <algorithm>
#include <map>

namespace ptm {

std::string to_string(const Assignment& assignment) {
  std::string out = "{";
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (i) out += ", ";
    out += assignment[i].first + "=" + assignment[i].second;
  }
  return out + "}";
}

std::size_t Variable::label_index(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw StructuralError("label '" + label + "' not in alphabet of '" + name + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

ProbTable::ProbTable(std::vector<Variable> variables, const std::vector<std::string>& conditioning)
    : vars_(std::move(variables)), conditioning_(vars_.size(), false), strides_(vars_.size(), 1) {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (vars_[i].name == vars_[j].name) throw StructuralError("duplicate variable '" + vars_[i].name + "'");
    }
    std::set<std::string> seen(vars_[i].labels.begin(), vars_[i].labels.end());
    if (seen.size() != vars_[i].labels.size()) {
      throw StructuralError("duplicate label in alphabet of '" + vars_[i].name + "'");
    }
  }
  for (const auto& name : conditioning) conditioning_[position(name)] = true;
  std::size_t count = 1;
  for (std::size_t i = vars_.size(); i-- > 0;) {
    strides_[i] = count;
    count *= vars_[i].labels.size();
  }
  cells_.assign(count, Rational(0));
}

ProbTable ProbTable::from_entries(std::vector<Variable> variables, const std::vector<std::string>& conditioning,
                                  const std::vector<std::pair<Assignment, Rational>>& entries, Density density) {
  ProbTable t(std::move(variables), conditioning);
  std::vector<bool> filled(t.cells_.size(), false);
  for (const auto& [assignment, value] : entries) {
    const std::size_t flat = t.flatten(t.index_of(assignment));
    if (filled[flat]) throw StructuralError("duplicate entry " + to_string(assignment));
    filled[flat] = true;
    t.cells_[flat] = value;
  }
  if (density == Density::kDense) {
    for (std::size_t flat = 0; flat < filled.size(); ++flat) {
      if (!filled[flat]) throw StructuralError("missing entry " + to_string(t.assignment_of(t.unflatten(flat))));
    }
  }
  return t;
}

bool ProbTable::has_variable(const std::string& name) const {
  return std::any_of(vars_.begin(), vars_.end(), [&](const Variable& v) { return v.name == name; });
}

std::size_t ProbTable::position(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return i;
  }
  throw StructuralError("unknown variable '" + name + "'");
}

std::vector<std::string> ProbTable::conditioning() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (conditioning_[i]) out.push_back(vars_[i].name);
  }
  return out;
}

std::vector<std::string> ProbTable::free_variables() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (!conditioning_[i]) out.push_back(vars_[i].name);
  }
  return out;
}

std::size_t ProbTable::flatten(const Index& index) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < index.size(); ++i) flat += index[i] * strides_[i];
  return flat;
}

ProbTable::Index ProbTable::unflatten(std::size_t flat) const {
  Index index(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    index[i] = flat / strides_[i];
    flat %= strides_[i];
  }
  return index;
}

ProbTable::Index ProbTable::index_of(const Assignment& full) const {
  Index index(vars_.size(), 0);
  std::vector<bool> seen(vars_.size(), false);
  for (const auto& [name, label] : full) {
    const std::size_t p = position(name);
    if (seen[p]) throw StructuralError("variable '" + name + "' assigned twice");
    seen[p] = true;
    index[p] = vars_[p].label_index(label);
  }
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (!seen[i]) throw StructuralError("assignment " + to_string(full) + " misses '" + vars_[i].name + "'");
  }
  return index;
}

Assignment ProbTable::assignment_of(const Index& index) const {
  Assignment out;
  out.reserve(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) out.emplace_back(vars_[i].name, vars_[i].labels[index[i]]);
  return out;
}

ProbTable ProbTable::with_entry(const Assignment& full, Rational value) const {
  ProbTable copy = *this;
  copy.cells_[flatten(index_of(full))] = std::move(value);
  return copy;
}

std::vector<ProbTable::Defect> ProbTable::normalization_defects() const {
  // Group cells by the conditioner part of their index.
  std::map<Index, Rational> sums;
  std::vector<Index> order;
  for (std::size_t flat = 0; flat < cells_.size(); ++flat) {
    Index key = unflatten(flat);
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (!conditioning_[i]) key[i] = 0;
    }
    auto [it, inserted] = sums.try_emplace(key, Rational(0));
    if (inserted) order.push_back(key);
    it->second += cells_[flat];
  }
  // An empty free space still owes a distribution to every conditioner row.
  if (cells_.empty()) {
    std::vector<Variable> cond_vars;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (conditioning_[i]) cond_vars.push_back(vars_[i]);
    }
    ProbTable rows(cond_vars, {});
    std::vector<Defect> out;
    for (std::size_t flat = 0; flat < rows.cell_count(); ++flat) {
      out.push_back({rows.assignment_of(rows.unflatten(flat)), Rational(0)});
    }
    return out;
  }
  std::vector<Defect> out;
  for (const auto& key : order) {
    const Rational& sum = sums.at(key);
    if (sum == Rational(1)) continue;
    Assignment conditioners;
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (conditioning_[i]) conditioners.emplace_back(vars_[i].name, vars_[i].labels[key[i]]);
    }
    out.push_back({std::move(conditioners), sum});
  }
  return out;
}

bool ProbTable::has_negative_entry() const {
  return std::any_of(cells_.begin(), cells_.end(), [](const Rational& r) { return r.sign() < 0; });
}

namespace {

// Maps an index of `from` to the positions of `to`'s variables inside `from`.
std::vector<std::size_t> positions_in(const ProbTable& from, const ProbTable& to) {
  std::vector<std::size_t> out;
  for (const auto& v : to.variables()) out.push_back(from.position(v.name));
  return out;
}

ProbTable::Index project(const ProbTable::Index& index, const std::vector<std::size_t>& positions) {
  ProbTable::Index out(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) out[i] = index[positions[i]];
  return out;
}

void require_same_alphabet(const Variable& a, const Variable& b) {
  if (a.labels != b.labels) throw StructuralError("alphabets of '" + a.name + "' differ between tables");
}

}  // namespace

ProbTable marginalize(const ProbTable& table, const VariableSet& keep) {
  for (const auto& name : keep) {
    if (table.is_conditioning(name)) {
      throw StructuralError("cannot keep conditioner '" + name + "' as a free variable");
    }
  }
  std::vector<Variable> vars;
  std::vector<std::string> cond;
  for (const auto& v : table.variables()) {
    const bool is_cond = table.is_conditioning(v.name);
    if (is_cond || keep.count(v.name)) vars.push_back(v);
    if (is_cond) cond.push_back(v.name);
  }
  ProbTable proto(vars, cond);
  const auto positions = positions_in(table, proto);
  std::vector<Rational> acc(proto.cell_count(), Rational(0));
  for (std::size_t flat = 0; flat < table.cell_count(); ++flat) {
    acc[proto.flatten(project(table.unflatten(flat), positions))] += table.cell(flat);
  }
  return ProbTable::tabulate(vars, cond, [&](const ProbTable::Index& idx) { return acc[proto.flatten(idx)]; });
}

ProbTable condition(const ProbTable& table, const Assignment& on) {
  std::vector<std::optional<std::size_t>> fixed(table.variables().size());
  for (const auto& [name, label] : on) {
    const std::size_t p = table.position(name);
    if (fixed[p]) throw StructuralError("variable '" + name + "' assigned twice");
    fixed[p] = table.variables()[p].label_index(label);
  }
  if (on.empty()) return table;

  std::vector<Variable> vars;
  std::vector<std::string> cond;
  for (std::size_t i = 0; i < table.variables().size(); ++i) {
    if (fixed[i]) continue;
    vars.push_back(table.variables()[i]);
    if (table.is_conditioning(vars.back().name)) cond.push_back(vars.back().name);
  }
  ProbTable result_shape(vars, cond);
  const auto positions = positions_in(table, result_shape);

  // Conditioner part of the result, used to group normalizers.
  std::vector<Variable> cond_vars;
  for (const auto& v : vars) {
    if (table.is_conditioning(v.name)) cond_vars.push_back(v);
  }
  ProbTable rows(cond_vars, {});
  const auto row_positions = positions_in(table, rows);

  auto matches = [&](const ProbTable::Index& idx) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (fixed[i] && idx[i] != *fixed[i]) return false;
    }
    return true;
  };

  std::vector<Rational> norm(rows.cell_count(), Rational(0));
  std::vector<Rational> values(result_shape.cell_count(), Rational(0));
  for (std::size_t flat = 0; flat < table.cell_count(); ++flat) {
    const auto idx = table.unflatten(flat);
    if (!matches(idx)) continue;
    norm[rows.flatten(project(idx, row_positions))] += table.cell(flat);
    values[result_shape.flatten(project(idx, positions))] = table.cell(flat);
  }

  // Only free variables in `on` require renormalization.
  bool conditions_free = false;
  for (const auto& [name, label] : on) conditions_free = conditions_free || !table.is_conditioning(name);
  if (!conditions_free) {
    return ProbTable::tabulate(vars, cond, [&](const ProbTable::Index& idx) { return values[result_shape.flatten(idx)]; });
  }
  for (std::size_t r = 0; r < norm.size(); ++r) {
    if (norm[r].is_zero()) {
      Assignment event = on;
      for (const auto& kv : rows.assignment_of(rows.unflatten(r))) event.push_back(kv);
      throw ZeroConditioning(event);
    }
  }
  const auto row_in_result = positions_in(result_shape, rows);
  return ProbTable::tabulate(vars, cond, [&](const ProbTable::Index& idx) {
    return values[result_shape.flatten(idx)] / norm[rows.flatten(project(idx, row_in_result))];
  });
}

ProbTable bayes_invert(const ProbTable& likelihood, const ProbTable& prior, const ProbTable& evidence) {
  const auto settings = prior.conditioning();
  const auto hidden = prior.free_variables();
  const auto outcome = evidence.free_variables();
  const auto evidence_cond = evidence.conditioning();
  if (VariableSet(settings.begin(), settings.end()) != VariableSet(evidence_cond.begin(), evidence_cond.end())) {
    throw StructuralError("prior and evidence must share conditioners");
  }
  const auto lik_free = likelihood.free_variables();
  const auto lik_cond = likelihood.conditioning();
  if (VariableSet(lik_free.begin(), lik_free.end()) != VariableSet(outcome.begin(), outcome.end())) {
    throw StructuralError("likelihood free variables must equal evidence free variables");
  }
  VariableSet expected_cond(settings.begin(), settings.end());
  expected_cond.insert(hidden.begin(), hidden.end());
  if (VariableSet(lik_cond.begin(), lik_cond.end()) != expected_cond) {
    throw StructuralError("likelihood must be conditioned on the prior's variables");
  }
  for (const auto& v : prior.variables()) require_same_alphabet(v, likelihood.variable(v.name));
  for (const auto& v : evidence.variables()) require_same_alphabet(v, likelihood.variable(v.name));

  std::vector<std::string> cond = outcome;
  cond.insert(cond.end(), settings.begin(), settings.end());
  ProbTable shape(likelihood.variables(), cond);
  const auto prior_pos = positions_in(likelihood, prior);
  const auto evidence_pos = positions_in(likelihood, evidence);
  for (std::size_t flat = 0; flat < likelihood.cell_count(); ++flat) {
    const auto idx = likelihood.unflatten(flat);
    const auto eidx = project(idx, evidence_pos);
    if (evidence[eidx].is_zero()) throw ZeroConditioning(evidence.assignment_of(eidx));
  }
  return ProbTable::tabulate(likelihood.variables(), cond, [&](const ProbTable::Index& idx) {
    return likelihood[idx] * prior[project(idx, prior_pos)] / evidence[project(idx, evidence_pos)];
  });
}

ProbTable uniform_weights(const ProbTable& table) {
  std::vector<Variable> vars;
  for (const auto& name : table.conditioning()) vars.push_back(table.variable(name));
  ProbTable shape(vars, {});
  const Rational each = Rational(1) / Rational(static_cast<long>(shape.cell_count()));
  return ProbTable::tabulate(vars, {}, [&](const ProbTable::Index&) { return each; });
}

ProbTable lift(const ProbTable& table, const ProbTable& weights) {
  const auto cond = table.conditioning();
  if (!weights.conditioning().empty() || weights.variables().size() != cond.size()) {
    throw StructuralError("weights must be an unconditioned table over the conditioners");
  }
  for (const auto& name : cond) require_same_alphabet(table.variable(name), weights.variable(name));
  const auto pos = positions_in(table, weights);
  return ProbTable::tabulate(table.variables(), {}, [&](const ProbTable::Index& idx) {
    return table[idx] * weights[project(idx, pos)];
  });
}

ProbTable lift(const ProbTable& table) { return lift(table, uniform_weights(table)); }

Rational mass(const ProbTable& table, const Assignment& partial) {
  std::vector<std::optional<std::size_t>> fixed(table.variables().size());
  for (const auto& [name, label] : partial) {
    const std::size_t p = table.position(name);
    fixed[p] = table.variables()[p].label_index(label);
  }
  Rational sum(0);
  for (std::size_t flat = 0; flat < table.cell_count(); ++flat) {
    const auto idx = table.unflatten(flat);
    bool ok = true;
    for (std::size_t i = 0; i < idx.size() && ok; ++i) ok = !fixed[i] || idx[i] == *fixed[i];
    if (ok) sum += table.cell(flat);
  }
  return sum;
}

namespace {

Assignment restrict_to(const Assignment& full, const VariableSet& names) {
  Assignment out;
  for (const auto& kv : full) {
    if (names.count(kv.first)) out.push_back(kv);
  }
  return out;
}

}  // namespace

IndependenceVerdict check_independence(const ProbTable& table, const VariableSet& a, const VariableSet& b,
                                       const VariableSet& given) {
  return check_independence(table, a, b, given, uniform_weights(table));
}

IndependenceVerdict check_independence(const ProbTable& table, const VariableSet& a, const VariableSet& b,
                                       const VariableSet& given, const ProbTable& weights) {
  for (const auto* set : {&a, &b, &given}) {
    for (const auto& name : *set) table.position(name);
  }
  auto overlaps = [](const VariableSet& s, const VariableSet& t) {
    return std::any_of(s.begin(), s.end(), [&](const std::string& n) { return t.count(n) > 0; });
  };
  if (overlaps(a, b) || overlaps(a, given) || overlaps(b, given)) {
    throw StructuralError("independence test requires disjoint variable sets");
  }

  const ProbTable joint = lift(table, weights);
  VariableSet abc = a;
  abc.insert(b.begin(), b.end());
  abc.insert(given.begin(), given.end());
  VariableSet ac = a, bc = b;
  ac.insert(given.begin(), given.end());
  bc.insert(given.begin(), given.end());

  const ProbTable m_abc = marginalize(joint, abc);
  const ProbTable m_ac = marginalize(joint, ac);
  const ProbTable m_bc = marginalize(joint, bc);
  const ProbTable m_c = marginalize(joint, given);
  const auto pos_ac = positions_in(m_abc, m_ac);
  const auto pos_bc = positions_in(m_abc, m_bc);
  const auto pos_c = positions_in(m_abc, m_c);

  IndependenceVerdict verdict;
  for (std::size_t flat = 0; flat < m_abc.cell_count(); ++flat) {
    const auto idx = m_abc.unflatten(flat);
    const Rational& pc = m_c[project(idx, pos_c)];
    if (pc.is_zero()) continue;
    const Rational& pabc = m_abc.cell(flat);
    const Rational& pac = m_ac[project(idx, pos_ac)];
    const Rational& pbc = m_bc[project(idx, pos_bc)];
    if (pabc * pc == pac * pbc) continue;
    const Assignment full = m_abc.assignment_of(idx);
    verdict.independent = false;
    verdict.witness = IndependenceWitness{restrict_to(full, given), restrict_to(full, a), restrict_to(full, b),
                                          pabc / pc, pac / pc, pbc / pc};
    return verdict;
  }
  return verdict;
}

}  // namespace ptm
