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

#include "ptmverify/inequalities.hpp"

#include <algorithm>

namespace ptm {

AgreeMap same_label_pairing(const Alphabets& alphabets) {
  AgreeMap out;
  for (const auto& a : alphabets.prep_outputs) {
    const auto& bs = alphabets.meas_outputs;
    if (std::find(bs.begin(), bs.end(), a) == bs.end()) {
      throw StructuralError("no measurement outcome labelled '" + a + "' to pair with");
    }
    out.emplace_back(a, a);
  }
  return out;
}

const CorrelationCell& CorrelationSummary::at(const std::string& x, const std::string& y) const {
  for (const auto& c : cells_) {
    if (c.x == x && c.y == y) return c;
  }
  throw StructuralError("setting pair (" + x + ", " + y + ") not in correlation summary");
}

namespace {

void require_binary(const Alphabets& al) {
  if (al.prep_outputs.size() != 2 || al.meas_outputs.size() != 2) {
    throw UnsupportedShape("correlation summary needs binary outcomes on both sides");
  }
}

}  // namespace

CorrelationSummary correlation_summary(const OperationalModel& model, const AgreeMap& agree) {
  const auto& al = model.alphabets();
  require_binary(al);
  if (agree.size() != 2) throw StructuralError("agreement map must pair both a-labels");
  for (const auto& [a, b] : agree) {
    if (std::find(al.prep_outputs.begin(), al.prep_outputs.end(), a) == al.prep_outputs.end() ||
        std::find(al.meas_outputs.begin(), al.meas_outputs.end(), b) == al.meas_outputs.end()) {
      throw StructuralError("agreement map pairs unknown labels " + a + "/" + b);
    }
  }
  if (agree[0].first == agree[1].first || agree[0].second == agree[1].second) {
    throw StructuralError("agreement map must be one-to-one");
  }
  std::vector<CorrelationCell> cells;
  for (const auto& x : al.prep_settings) {
    for (const auto& y : al.meas_settings) {
      Rational agreeing(0);
      Rational total(0);
      for (const auto& a : al.prep_outputs) {
        for (const auto& b : al.meas_outputs) {
          const Rational p = model.p(a, b, x, y);
          total += p;
          const bool same = std::find(agree.begin(), agree.end(), std::make_pair(a, b)) != agree.end();
          if (same) agreeing += p;
        }
      }
      const Rational disagreeing = total - agreeing;
      cells.push_back({x, y, agreeing, disagreeing, agreeing - disagreeing});
    }
  }
  return CorrelationSummary(al.prep_settings, al.meas_settings, std::move(cells));
}

CorrelationSummary correlation_summary(const OperationalModel& model) {
  require_binary(model.alphabets());
  return correlation_summary(model, same_label_pairing(model.alphabets()));
}

namespace {

std::string pair_label(const SettingPair& p) { return "(" + p.first + "," + p.second + ")"; }

}  // namespace

InequalityResult wigner_check(const CorrelationSummary& summary, const SettingPair& t1, const SettingPair& t2,
                              const SettingPair& t3) {
  const Rational p1 = summary.at(t1.first, t1.second).p_agree;
  const Rational p2 = summary.at(t2.first, t2.second).p_agree;
  const Rational p3 = summary.at(t3.first, t3.second).p_agree;
  InequalityResult r;
  r.name = "wigner";
  r.lhs = p1 + p2;
  r.rhs = p3;
  r.comparison = "p_agree" + pair_label(t1) + " + p_agree" + pair_label(t2) + " >= p_agree" + pair_label(t3);
  r.violated = r.lhs < r.rhs;
  r.terms = {{"p_agree" + pair_label(t1), p1}, {"p_agree" + pair_label(t2), p2}, {"p_agree" + pair_label(t3), p3}};
  bool anticorrelated = true;
  for (const auto& c : summary.cells()) {
    if (c.x == c.y && !c.p_agree.is_zero()) anticorrelated = false;
  }
  r.anticorrelated_at_equal_settings = anticorrelated;
  return r;
}

InequalityResult chsh(const CorrelationSummary& summary, const std::string& x0, const std::string& x1,
                      const std::string& y0, const std::string& y1) {
  const SettingPair pairs[4] = {{x0, y0}, {x0, y1}, {x1, y0}, {x1, y1}};
  Rational e[4];
  for (int i = 0; i < 4; ++i) e[i] = summary.at(pairs[i].first, pairs[i].second).correlator;
  Rational best(0);
  for (int minus = 0; minus < 4; ++minus) {
    Rational s(0);
    for (int i = 0; i < 4; ++i) s += i == minus ? -e[i] : e[i];
    best = std::max(best, abs(s));
  }
  InequalityResult r;
  r.name = "chsh";
  r.lhs = best;
  r.rhs = Rational(2);
  r.comparison = "S <= 2";
  r.violated = r.lhs > r.rhs;
  for (int i = 0; i < 4; ++i) r.terms.push_back({"E" + pair_label(pairs[i]), e[i]});
  return r;
}

Rational evaluate(const LinearObjective& objective, const CorrelationSummary& summary) {
  Rational v = objective.constant;
  for (const auto& [pair, coeff] : objective.agree_coefficients) {
    v += coeff * summary.at(pair.first, pair.second).p_agree;
  }
  return v;
}

Rational local_bound_oracle(const Labels& prep_settings, const Labels& meas_settings,
                            const LinearObjective& objective, StrategyFilter filter) {
  const std::size_t bits = prep_settings.size() + meas_settings.size();
  if (bits >= 64 || (std::size_t{1} << bits) > kMaxOracleStrategies) {
    throw LimitExceeded("local strategy enumeration capped at 2^20 strategies");
  }
  auto index_of = [](const Labels& labels, const std::string& l) {
    auto it = std::find(labels.begin(), labels.end(), l);
    if (it == labels.end()) throw StructuralError("objective refers to unknown setting '" + l + "'");
    return static_cast<std::size_t>(it - labels.begin());
  };
  struct Term {
    std::size_t xi, yi;
    Rational coeff;
  };
  std::vector<Term> terms;
  for (const auto& [pair, coeff] : objective.agree_coefficients) {
    terms.push_back({index_of(prep_settings, pair.first), index_of(meas_settings, pair.second), coeff});
  }
  std::vector<std::pair<std::size_t, std::size_t>> equal_labels;
  for (std::size_t i = 0; i < prep_settings.size(); ++i) {
    for (std::size_t j = 0; j < meas_settings.size(); ++j) {
      if (prep_settings[i] == meas_settings[j]) equal_labels.emplace_back(i, j);
    }
  }

  const std::size_t nx = prep_settings.size();
  std::optional<Rational> best;
  for (std::size_t strategy = 0; strategy < (std::size_t{1} << bits); ++strategy) {
    auto out_a = [&](std::size_t xi) { return (strategy >> xi) & 1U; };
    auto out_b = [&](std::size_t yi) { return (strategy >> (nx + yi)) & 1U; };
    if (filter == StrategyFilter::kPerfectAnticorrelation) {
      bool ok = std::all_of(equal_labels.begin(), equal_labels.end(),
                            [&](const auto& ij) { return out_a(ij.first) != out_b(ij.second); });
      if (!ok) continue;
    }
    Rational value = objective.constant;
    for (const auto& t : terms) {
      if (out_a(t.xi) == out_b(t.yi)) value += t.coeff;
    }
    if (!best || value > *best) best = value;
  }
  if (!best) throw StructuralError("no deterministic strategy satisfies the filter");
  return *best;
}

LinearObjective chsh_objective(const std::string& x0, const std::string& x1, const std::string& y0,
                               const std::string& y1, int minus_position, int sign) {
  const SettingPair pairs[4] = {{x0, y0}, {x0, y1}, {x1, y0}, {x1, y1}};
  LinearObjective obj;
  obj.constant = Rational(0);
  for (int i = 0; i < 4; ++i) {
    const long s = (i == minus_position ? -1 : 1) * (sign < 0 ? -1 : 1);
    // s * E = s * (2 p_agree - 1)
    obj.agree_coefficients.emplace_back(pairs[i], Rational(2 * s));
    obj.constant -= Rational(s);
  }
  return obj;
}

Rational chsh_local_bound(const Labels& prep_settings, const Labels& meas_settings, const std::string& x0,
                          const std::string& x1, const std::string& y0, const std::string& y1) {
  Rational best(0);
  for (int minus = 0; minus < 4; ++minus) {
    for (int sign : {1, -1}) {
      best = std::max(best, local_bound_oracle(prep_settings, meas_settings,
                                               chsh_objective(x0, x1, y0, y1, minus, sign)));
    }
  }
  return best;
}

LinearObjective wigner_violation_objective(const SettingPair& t1, const SettingPair& t2, const SettingPair& t3) {
  return {{{t3, Rational(1)}, {t1, Rational(-1)}, {t2, Rational(-1)}}, Rational(0)};
}

}  // namespace ptm
