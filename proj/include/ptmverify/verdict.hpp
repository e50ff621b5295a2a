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

#include <string>
#include <vector>

#include "ptmverify/errors.hpp"
#include "ptmverify/rational.hpp"

namespace ptm {

/// Two quantities that a checked equality claims are equal, evaluated at `at`.
/// A witness is only ever produced with lhs != rhs.
struct Witness {
  Assignment at;
  std::string lhs_label;
  Rational lhs;
  std::string rhs_label;
  Rational rhs;
  std::string note;
};

std::string describe(const Witness& w);

struct Verdict {
  bool passed = true;
  std::string reason;
  std::vector<Witness> witnesses;

  static Verdict pass(std::string reason = {}) { return {true, std::move(reason), {}}; }
  static Verdict fail(std::string reason, std::vector<Witness> witnesses) {
    return {false, std::move(reason), std::move(witnesses)};
  }
};

}  // namespace ptm
