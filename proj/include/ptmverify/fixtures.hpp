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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptmverify/conditions.hpp"
#include "ptmverify/ptm_model.hpp"
#include "ptmverify/timereverse.hpp"

namespace ptm::fixtures {

/// The timelike counterexample: X = {0, 30}, Y = {0, -30}, A = B = {up, down},
/// lambda = (x, a) and p(b|y, lambda) from the measurement table.
OnticModel counterexample_model();

/// The counterexample with its relabelled reverse (30 <-> -30 in lambda) and that map.
ReversePair counterexample_reverse();

/// Binary-outcome 2x2 operational table with disagreement 1, 3/4, 3/4, 1/4 at
/// (0,0), (30,0), (0,-30), (30,-30) and uniform single-wing marginals.
OperationalModel singlet_stats();

using LocalResponse = std::function<std::string(const std::string& setting, const std::string& lambda)>;

/// p(a,b,lambda|x,y) = rho(lambda) [a = fa(x,lambda)] [b = fb(y,lambda)].
/// Throws StructuralError if a response is outside its alphabet or rho is not normalized.
OnticModel deterministic_local(const Alphabets& alphabets, const Labels& lambda_space, const LocalResponse& fa,
                               const LocalResponse& fb, const std::vector<Rational>& rho);

/// Deterministic strategy over the counterexample's 2x2 settings with a single
/// ontic state. Bit i of `code` (0..15) is the response to the i-th setting
/// in the order x=0, x=30, y=0, y=-30; set bits answer "down".
OnticModel deterministic_local_strategy(unsigned code);

/// 1: prepare-transform-measure; 2: Bell test. Throws StructuralError otherwise.
CausalGraph figure_graph(int which);

/// "counterexample", "counterexample-reverse", "singlet-stats", "deterministic-local[:code]",
/// "figure1-graph", "figure2-graph".
std::vector<std::string> fixture_ids();

}  // namespace ptm::fixtures
