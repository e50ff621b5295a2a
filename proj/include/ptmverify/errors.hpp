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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ptm {

/// Ordered (variable name, label) pairs.
using Assignment = std::vector<std::pair<std::string, std::string>>;

std::string to_string(const Assignment& assignment);

/// Malformed input: unknown variables, mismatched alphabets, overlapping sets.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conditioning on an event of probability zero.
class ZeroConditioning : public std::runtime_error {
 public:
  explicit ZeroConditioning(Assignment event)
      : std::runtime_error("conditioning on zero-probability event " + to_string(event)),
        event_(std::move(event)) {}
  const Assignment& event() const { return event_; }

 private:
  Assignment event_;
};

/// A model failed validation where a valid model was required.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A time-reverse construction was requested outside the no-signalling sector.
class SignallingRequired : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inequality evaluation on a model that is not binary-outcome.
class UnsupportedShape : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exhaustive enumeration would exceed its hard cap.
class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ptm
