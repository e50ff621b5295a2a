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

#include <random>
#include <string>
#include <vector>

#include "ptmverify/prob_table.hpp"
#include "ptmverify/ptm_model.hpp"

namespace ptm::testkit {

inline Labels numbered(const std::string& prefix, std::size_t n) {
  Labels out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

/// Random distribution with small integer weights. With `full_support` every
/// weight is at least 1.
inline std::vector<Rational> random_distribution(std::mt19937_64& rng, std::size_t n, bool full_support = false) {
  std::uniform_int_distribution<long> w(full_support ? 1 : 0, 4);
  std::vector<long> weights(n);
  long total = 0;
  while (total == 0) {
    total = 0;
    for (auto& v : weights) total += (v = w(rng));
  }
  std::vector<Rational> out;
  for (long v : weights) out.emplace_back(v, total);
  return out;
}

/// Random table with 2..4 variables of 1..3 labels each, some of them conditioners.
inline ProbTable random_table(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(2, 4), labels(1, 3), coin(0, 3);
  const int n = count(rng);
  std::vector<Variable> vars;
  std::vector<std::string> cond;
  for (int i = 0; i < n; ++i) {
    const std::string name = std::string(1, static_cast<char>('p' + i));
    vars.push_back({name, numbered(name, static_cast<std::size_t>(labels(rng)))});
    if (i > 0 && coin(rng) == 0) cond.push_back(name);
  }
  ProbTable shape(vars, cond);
  std::vector<Variable> cond_vars, free_vars;
  for (const auto& v : vars) (shape.is_conditioning(v.name) ? cond_vars : free_vars).push_back(v);
  ProbTable rows(cond_vars, {});
  ProbTable block(free_vars, {});
  std::vector<std::vector<Rational>> dists;
  const bool product = coin(rng) == 0;
  for (std::size_t r = 0; r < rows.cell_count(); ++r) {
    if (product) {
      // Product of independent per-variable marginals within each row.
      std::vector<std::vector<Rational>> parts;
      for (const auto& v : free_vars) parts.push_back(random_distribution(rng, v.labels.size()));
      std::vector<Rational> d(block.cell_count());
      for (std::size_t c = 0; c < block.cell_count(); ++c) {
        const auto idx = block.unflatten(c);
        Rational p(1);
        for (std::size_t k = 0; k < idx.size(); ++k) p *= parts[k][idx[k]];
        d[c] = p;
      }
      dists.push_back(std::move(d));
    } else {
      dists.push_back(random_distribution(rng, block.cell_count()));
    }
  }
  return ProbTable::tabulate(vars, cond, [&](const ProbTable::Index& idx) {
    ProbTable::Index ridx, bidx;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      (shape.is_conditioning(vars[i].name) ? ridx : bidx).push_back(idx[i]);
    }
    return dists[rows.flatten(ridx)][block.flatten(bidx)];
  });
}

/// p(lambda) p(a|x,lambda) p(b|y,lambda): always no-signalling.
inline OnticModel random_local_model(std::mt19937_64& rng, std::size_t nx, std::size_t ny, std::size_t na,
                                     std::size_t nb, std::size_t nl) {
  const Alphabets al{numbered("x", nx), numbered("y", ny), numbered("a", na), numbered("b", nb)};
  const Labels lambda = numbered("l", nl);
  const auto rho = random_distribution(rng, nl);
  std::vector<std::vector<std::vector<Rational>>> pa(nx), pb(ny);
  for (auto& row : pa) {
    for (std::size_t l = 0; l < nl; ++l) row.push_back(random_distribution(rng, na));
  }
  for (auto& row : pb) {
    for (std::size_t l = 0; l < nl; ++l) row.push_back(random_distribution(rng, nb));
  }
  auto at = [](const Labels& labels, const std::string& s) {
    return static_cast<std::size_t>(std::find(labels.begin(), labels.end(), s) - labels.begin());
  };
  return OnticModel::tabulate(al, lambda,
                              [&](const std::string& x, const std::string& y, const std::string& a,
                                  const std::string& b, const std::string& l) {
                                const std::size_t li = at(lambda, l);
                                return rho[li] * pa[at(al.prep_settings, x)][li][at(al.prep_outputs, a)] *
                                       pb[at(al.meas_settings, y)][li][at(al.meas_outputs, b)];
                              });
}

/// Random no-signalling operational model: a local model, for binary 2x2
/// shapes mixed with a PR box.
inline OperationalModel random_no_signalling(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size(1, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  if (coin(rng) == 0) {
    return to_operational(random_local_model(rng, size(rng), size(rng), size(rng), size(rng), size(rng)));
  }
  const OperationalModel local = to_operational(random_local_model(rng, 2, 2, 2, 2, 2));
  const auto w = random_distribution(rng, 2);
  const auto& al = local.alphabets();
  return OperationalModel::tabulate(al, [&](const std::string& x, const std::string& y, const std::string& a,
                                            const std::string& b) {
    const bool both = x == "x1" && y == "y1";
    const Rational pr = ((a.back() == b.back()) != both) ? Rational(1, 2) : Rational(0);
    return w[0] * local.p(a, b, x, y) + w[1] * pr;
  });
}

}  // namespace ptm::testkit
