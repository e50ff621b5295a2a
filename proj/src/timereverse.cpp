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

#include "ptmverify/timereverse.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace ptm {

Bijection::Bijection(std::vector<Pair> pairs, const Labels& domain, const Labels& codomain) {
  if (domain.size() != codomain.size() || pairs.size() != domain.size()) {
    throw StructuralError("bijection requires equally sized spaces and one image per element");
  }
  std::set<std::string> images;
  for (const auto& from : domain) {
    auto it = std::find_if(pairs.begin(), pairs.end(), [&](const Pair& p) { return p.first == from; });
    if (it == pairs.end()) throw StructuralError("bijection has no image for '" + from + "'");
    if (std::find(codomain.begin(), codomain.end(), it->second) == codomain.end()) {
      throw StructuralError("image '" + it->second + "' is outside the codomain");
    }
    if (!images.insert(it->second).second) throw StructuralError("map is not injective at '" + it->second + "'");
    pairs_.push_back(*it);
  }
}

Bijection Bijection::identity(const Labels& space) {
  std::vector<Pair> pairs;
  for (const auto& l : space) pairs.emplace_back(l, l);
  return Bijection(std::move(pairs), space, space);
}

const std::string& Bijection::operator()(const std::string& from) const {
  for (const auto& p : pairs_) {
    if (p.first == from) return p.second;
  }
  throw StructuralError("'" + from + "' is not in the bijection's domain");
}

bool Bijection::is_identity() const {
  return std::all_of(pairs_.begin(), pairs_.end(), [](const Pair& p) { return p.first == p.second; });
}

std::string Bijection::str() const {
  std::string s;
  for (const auto& [from, to] : pairs_) s += (s.empty() ? "" : ", ") + from + " -> " + to;
  return "{" + s + "}";
}

namespace {

void require_no_signalling(const OperationalModel& model) {
  const auto v = check_no_signalling(model);
  if (!v.no_forward_signalling) {
    throw SignallingRequired("model signals forward (p(b|x,y) depends on x); no time reverse is guaranteed");
  }
  if (!v.no_retro_signalling) {
    throw SignallingRequired("model signals backward (p(a|x,y) depends on y); no time reverse is guaranteed");
  }
}

}  // namespace

OperationalModel operational_reverse(const OperationalModel& model) {
  require_no_signalling(model);
  return OperationalModel::tabulate(model.alphabets().swapped(),
                                    [&](const std::string& y, const std::string& x, const std::string& b,
                                        const std::string& a) { return model.p(a, b, x, y); });
}

Verdict is_operational_reverse(const OperationalModel& m1, const OperationalModel& m2) {
  if (m2.alphabets() != m1.alphabets().swapped()) {
    throw StructuralError("candidate alphabets are not the original's with roles swapped");
  }
  const auto& al = m1.alphabets();
  for (const auto& x : al.prep_settings) {
    for (const auto& y : al.meas_settings) {
      for (const auto& a : al.prep_outputs) {
        for (const auto& b : al.meas_outputs) {
          const Rational forward = m1.p(a, b, x, y);
          const Rational backward = m2.p(b, a, y, x);
          if (forward != backward) {
            return Verdict::fail("statistics differ under role exchange",
                                 {{{{"x", x}, {"y", y}, {"a", a}, {"b", b}},
                                   "P'(b,a|y,x)",
                                   backward,
                                   "P(a,b|x,y)",
                                   forward,
                                   ""}});
          }
        }
      }
    }
  }
  return Verdict::pass("P'(b,a|y,x) = P(a,b|x,y) for every assignment");
}

Verdict check_reverse_pair(const ReversePair& pair) {
  const auto& orig = pair.original;
  const auto& rev = pair.reverse;
  if (rev.alphabets() != orig.alphabets().swapped()) {
    return Verdict::fail("reverse alphabets are not the original's with roles swapped", {});
  }
  const auto& al = orig.alphabets();
  for (const auto& x : al.prep_settings) {
    for (const auto& y : al.meas_settings) {
      for (const auto& a : al.prep_outputs) {
        for (const auto& b : al.meas_outputs) {
          for (const auto& l : orig.lambda_space()) {
            const Rational forward = orig.p(a, b, l, x, y);
            const Rational backward = rev.p(b, a, pair.f(l), y, x);
            if (forward != backward) {
              return Verdict::fail("defining equality of the ontological time reverse fails",
                                   {{{{"x", x}, {"y", y}, {"a", a}, {"b", b}, {"lambda", l}},
                                     "P'(b,a,f(lambda)|y,x)",
                                     backward,
                                     "P(a,b,lambda|x,y)",
                                     forward,
                                     "f(lambda) = " + pair.f(l)}});
            }
          }
        }
      }
    }
  }
  return Verdict::pass("P'(b,a,f(lambda)|y,x) = P(a,b,lambda|x,y) for every assignment");
}

std::vector<Bijection> find_ontological_reverse(const OnticModel& original, const OnticModel& candidate) {
  const Labels& domain = original.lambda_space();
  const Labels& codomain = candidate.lambda_space();
  if (domain.size() != codomain.size()) throw StructuralError("ontic spaces differ in size");
  if (candidate.alphabets() != original.alphabets().swapped()) {
    throw StructuralError("candidate alphabets are not the original's with roles swapped");
  }
  if (domain.size() > kMaxBijectionSearch) {
    throw LimitExceeded("bijection search is capped at |Lambda| <= " + std::to_string(kMaxBijectionSearch) +
                        " (got " + std::to_string(domain.size()) + ")");
  }

  // The defining equality splits per lambda, so f works iff every
  // lambda -> f(lambda) column pair matches.
  const auto& al = original.alphabets();
  const std::size_t n = domain.size();
  std::vector<std::vector<bool>> compatible(n, std::vector<bool>(n, true));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      bool ok = true;
      for (const auto& x : al.prep_settings) {
        for (const auto& y : al.meas_settings) {
          for (const auto& a : al.prep_outputs) {
            for (const auto& b : al.meas_outputs) {
              ok = ok && original.p(a, b, domain[i], x, y) == candidate.p(b, a, codomain[j], y, x);
            }
          }
        }
      }
      compatible[i][j] = ok;
    }
  }

  // Lexicographic enumeration of permutations of codomain indices.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Bijection> found;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = compatible[i][perm[i]];
    if (!ok) continue;
    std::vector<Bijection::Pair> pairs;
    for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(domain[i], codomain[perm[i]]);
    found.emplace_back(std::move(pairs), domain, codomain);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return found;
}

ReversePair canonical_ontological_reverse(const OnticModel& original) {
  if (auto report = validate(original); !report.ok()) {
    throw ValidationError("invalid ontic model: " + report.issues.front().message);
  }
  require_no_signalling(to_operational(original));
  OnticModel reverse = OnticModel::tabulate(
      original.alphabets().swapped(), original.lambda_space(),
      [&](const std::string& y, const std::string& x, const std::string& b, const std::string& a,
          const std::string& l) { return original.p(a, b, l, x, y); });
  return {original, std::move(reverse), Bijection::identity(original.lambda_space())};
}

Verdict check_time_symmetry(const OnticModel& model) {
  const auto report = validate(model);
  if (!report.ok()) {
    return Verdict::fail("model is not valid: " + report.issues.front().message,
                         {{{}, "validation issues", Rational(static_cast<long>(report.issues.size())), "allowed",
                           Rational(0), report.issues.front().message}});
  }
  const auto signalling = check_no_signalling(to_operational(model));
  if (!signalling.no_signalling()) {
    const bool forward = !signalling.no_forward_signalling;
    const auto& w = forward ? *signalling.forward_witness : *signalling.retro_witness;
    const std::string fixed = forward ? "y" : "x";
    const std::string outcome = forward ? "b" : "a";
    const std::string varied = forward ? "x" : "y";
    return Verdict::fail("no-signalling-violated",
                         {{{{fixed, w.fixed_setting}, {outcome, w.outcome}},
                           "p(" + outcome + "|" + varied + "=" + w.setting_1 + ")",
                           w.p_1,
                           "p(" + outcome + "|" + varied + "=" + w.setting_2 + ")",
                           w.p_2,
                           "the reverse's preparation output would depend on its future input"}});
  }
  const ReversePair pair = canonical_ontological_reverse(model);
  Verdict check = check_reverse_pair(pair);
  if (!check.passed) return check;
  return Verdict::pass("canonical reverse with f = identity satisfies the defining equality");
}

}  // namespace ptm
