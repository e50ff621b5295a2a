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
#include <string>
#include <utility>
#include <vector>

#include "ptmverify/ptm_model.hpp"
#include "ptmverify/verdict.hpp"

namespace ptm {

/// One-to-one map between two ontic spaces of equal size.
class Bijection {
 public:
  using Pair = std::pair<std::string, std::string>;

  /// Throws StructuralError unless `pairs` is a bijection from `domain` onto `codomain`.
  Bijection(std::vector<Pair> pairs, const Labels& domain, const Labels& codomain);
  static Bijection identity(const Labels& space);

  const std::string& operator()(const std::string& from) const;
  const std::vector<Pair>& pairs() const { return pairs_; }
  bool is_identity() const;
  std::string str() const;

  friend bool operator==(const Bijection&, const Bijection&) = default;

 private:
  std::vector<Pair> pairs_;  // in domain order
};

/// An ontic model, a candidate time reverse, and the map between their ontic spaces.
struct ReversePair {
  OnticModel original;
  OnticModel reverse;
  Bijection f;
};

/// Largest |Lambda| accepted by the exhaustive bijection search (8! candidates).
inline constexpr std::size_t kMaxBijectionSearch = 8;

/// P'(b,a|y,x) := P(a,b|x,y). Throws SignallingRequired outside the no-signalling sector.
OperationalModel operational_reverse(const OperationalModel& model);

/// Throws StructuralError unless m2's alphabets are m1's with roles swapped.
Verdict is_operational_reverse(const OperationalModel& m1, const OperationalModel& m2);

/// Checks P'(b,a,f(lambda)|y,x) = P(a,b,lambda|x,y) for every assignment.
Verdict check_reverse_pair(const ReversePair& pair);

/// Every bijection f making `candidate` an ontological time reverse of
/// `original`, in lexicographic order of the images of Lambda's labels.
std::vector<Bijection> find_ontological_reverse(const OnticModel& original, const OnticModel& candidate);

/// Reverse with Lambda' = Lambda, p'(b,a,lambda|y,x) := p(a,b,lambda|x,y) and f the identity.
ReversePair canonical_ontological_reverse(const OnticModel& original);

/// Passes iff an ontological time reverse exists; decided by the canonical
/// construction, which succeeds exactly in the no-signalling sector.
Verdict check_time_symmetry(const OnticModel& model);

}  // namespace ptm
