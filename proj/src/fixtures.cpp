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

#include "ptmverify/fixtures.hpp"

#include <algorithm>
#include <map>

namespace ptm::fixtures {

namespace {

const Alphabets kAlphabets = {{"0", "30"}, {"0", "-30"}, {"up", "down"}, {"up", "down"}};

std::string ontic_label(const std::string& setting, const std::string& outcome) {
  return "(" + setting + "," + outcome + ")";
}

// p(b = up | y, lambda)
Rational measurement_up(const std::string& y, const std::string& lambda) {
  static const std::map<std::pair<std::string, std::string>, Rational> table = {
      {{"0", "(0,up)"}, Rational(0)},         {{"0", "(0,down)"}, Rational(1)},
      {{"0", "(30,up)"}, Rational(1, 4)},     {{"0", "(30,down)"}, Rational(3, 4)},
      {{"-30", "(0,up)"}, Rational(1, 4)},    {{"-30", "(0,down)"}, Rational(3, 4)},
      {{"-30", "(30,up)"}, Rational(3, 4)},   {{"-30", "(30,down)"}, Rational(1, 4)},
  };
  return table.at({y, lambda});
}

}  // namespace

OnticModel counterexample_model() {
  const Labels lambda = {"(0,up)", "(0,down)", "(30,up)", "(30,down)"};
  return OnticModel::tabulate(kAlphabets, lambda,
                              [](const std::string& x, const std::string& y, const std::string& a,
                                 const std::string& b, const std::string& l) {
                                if (l != ontic_label(x, a)) return Rational(0);
                                const Rational up = measurement_up(y, l);
                                return Rational(1, 2) * (b == "up" ? up : Rational(1) - up);
                              });
}

ReversePair counterexample_reverse() {
  OnticModel original = counterexample_model();
  const Labels reverse_space = {"(0,up)", "(0,down)", "(-30,up)", "(-30,down)"};
  Bijection f({{"(0,up)", "(0,up)"}, {"(0,down)", "(0,down)"}, {"(30,up)", "(-30,up)"}, {"(30,down)", "(-30,down)"}},
              original.lambda_space(), reverse_space);
  // Transcribe p'(b,a,f(lambda)|y,x) := p(a,b,lambda|x,y).
  std::map<std::string, std::string> inverse;
  for (const auto& [from, to] : f.pairs()) inverse[to] = from;
  OnticModel reverse = OnticModel::tabulate(
      kAlphabets.swapped(), reverse_space,
      [&](const std::string& y, const std::string& x, const std::string& b, const std::string& a,
          const std::string& mu) { return original.p(a, b, inverse.at(mu), x, y); });
  return {std::move(original), std::move(reverse), std::move(f)};
}

OperationalModel singlet_stats() {
  const std::map<std::pair<std::string, std::string>, Rational> disagree = {
      {{"0", "0"}, Rational(1)},
      {{"30", "0"}, Rational(3, 4)},
      {{"0", "-30"}, Rational(3, 4)},
      {{"30", "-30"}, Rational(1, 4)},
  };
  return OperationalModel::tabulate(
      kAlphabets, [&](const std::string& x, const std::string& y, const std::string& a, const std::string& b) {
        const Rational d = disagree.at({x, y});
        return a == b ? (Rational(1) - d) / Rational(2) : d / Rational(2);
      });
}

OnticModel deterministic_local(const Alphabets& alphabets, const Labels& lambda_space, const LocalResponse& fa,
                               const LocalResponse& fb, const std::vector<Rational>& rho) {
  if (rho.size() != lambda_space.size()) throw StructuralError("rho must assign a weight to every ontic state");
  Rational total(0);
  for (const auto& r : rho) {
    if (r.sign() < 0) throw StructuralError("rho has a negative weight");
    total += r;
  }
  if (total != Rational(1)) throw StructuralError("rho sums to " + total.str());
  auto check = [](const Labels& alphabet, const std::string& value, const char* what) {
    if (std::find(alphabet.begin(), alphabet.end(), value) == alphabet.end()) {
      throw StructuralError(std::string(what) + " response '" + value + "' is outside its alphabet");
    }
  };
  for (std::size_t i = 0; i < lambda_space.size(); ++i) {
    for (const auto& x : alphabets.prep_settings) check(alphabets.prep_outputs, fa(x, lambda_space[i]), "fa");
    for (const auto& y : alphabets.meas_settings) check(alphabets.meas_outputs, fb(y, lambda_space[i]), "fb");
  }
  std::map<std::string, Rational> weight;
  for (std::size_t i = 0; i < lambda_space.size(); ++i) weight[lambda_space[i]] = rho[i];
  return OnticModel::tabulate(alphabets, lambda_space,
                              [&](const std::string& x, const std::string& y, const std::string& a,
                                  const std::string& b, const std::string& l) {
                                if (fa(x, l) != a || fb(y, l) != b) return Rational(0);
                                return weight.at(l);
                              });
}

OnticModel deterministic_local_strategy(unsigned code) {
  if (code > 15) throw StructuralError("strategy code must be in 0..15");
  auto bit = [code](unsigned i) { return ((code >> i) & 1U) ? std::string("down") : std::string("up"); };
  return deterministic_local(
      kAlphabets, {"*"}, [&](const std::string& x, const std::string&) { return bit(x == "0" ? 0 : 1); },
      [&](const std::string& y, const std::string&) { return bit(y == "0" ? 2 : 3); }, {Rational(1)});
}

CausalGraph figure_graph(int which) {
  if (which == 1) {
    return CausalGraph({"x", "P", "a", "T", "M", "y", "b"},
                       {{"x", "P"}, {"P", "a"}, {"P", "T"}, {"T", "M"}, {"y", "M"}, {"M", "b"}}, {"x", "y"});
  }
  if (which == 2) {
    return CausalGraph({"P", "M1", "M2", "x", "y", "a", "b"},
                       {{"P", "M1"}, {"P", "M2"}, {"x", "M1"}, {"M1", "a"}, {"y", "M2"}, {"M2", "b"}}, {"x", "y"});
  }
  throw StructuralError("figure must be 1 or 2");
}

std::vector<std::string> fixture_ids() {
  return {"counterexample", "counterexample-reverse", "singlet-stats", "deterministic-local", "figure1-graph", "figure2-graph"};
}

}  // namespace ptm::fixtures
