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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptmverify/model_io.hpp"
#include "ptmverify/timereverse.hpp"

namespace ptm::cli {

enum class Format { kText, kJson };

/// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailed = 1,  // evaluation completed but a required claim did not hold
  kExitInput = 2,
  kExitSignalling = 3,
  kExitUnsupportedShape = 4,
};

/// Structured command result. `data` is the machine-readable payload; the
/// headings and rows drive the aligned text rendering.
class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void heading(std::string title);
  void row(std::string key, std::string value);
  void text(std::string line);

  const std::string& command() const { return command_; }
  nlohmann::json data = nlohmann::json::object();

  /// JSON output has sorted keys and is byte-for-byte deterministic.
  std::string render(Format format, int exit_code) const;

 private:
  struct Line {
    enum class Kind { kHeading, kRow, kText } kind;
    std::string key;
    std::string value;
  };
  std::string command_;
  std::vector<Line> lines_;
};

struct Outcome {
  int exit_code = kExitOk;
  Report report;
  /// Printed verbatim instead of the report (export to stdout).
  std::optional<std::string> raw_output;
};

/// Exact value with a six-digit decimal rendering.
nlohmann::json rational_json(const Rational& r);
std::string rational_text(const Rational& r);

Outcome cmd_check(const std::filesystem::path& model_path, const std::vector<std::string>& required);

Outcome cmd_reverse(const std::filesystem::path& model_path, bool ontological,
                    const std::optional<std::filesystem::path>& out);

Outcome cmd_audit(const std::filesystem::path& model_path);

struct BellOptions {
  std::string inequality = "chsh";  // "wigner" or "chsh"
  /// Wigner setting pairs "x:y,x:y,x:y"; empty selects
  /// (x0,y1), (x1,y0), (x1,y1) from the label order.
  std::string triple;
  /// CHSH settings "x0,x1,y0,y1"; empty selects the first two of each.
  std::string settings;
  /// Agreement pairing "a:b,a:b"; empty pairs equal labels.
  std::string agree;
};
Outcome cmd_bell(const std::filesystem::path& model_path, const BellOptions& options);

struct SampleOptions {
  std::int64_t count = 0;
  std::uint64_t seed = 1;
  /// "uniform" or a path to {"x": {label: weight}, "y": {label: weight}}.
  std::string settings_dist = "uniform";
  std::string agree;
};
Outcome cmd_sample(const std::filesystem::path& model_path, const SampleOptions& options);

struct DemoOptions {
  /// Where fixture files are written and re-read; a fresh temporary
  /// directory when unset.
  std::optional<std::filesystem::path> work_dir;
  /// Read counterexample.json and counterexample-reverse.json from this directory instead
  /// of exporting them.
  std::optional<std::filesystem::path> fixtures_dir;
};
Outcome cmd_demo(const DemoOptions& options);

/// Fixture ids as listed by fixtures::fixture_ids(); "deterministic-local"
/// takes an optional ":code" suffix (0..15).
Outcome cmd_export(const std::string& fixture_id, const std::optional<std::filesystem::path>& out);

/// Full command-line entry point. Reads PTMVERIFY_FORMAT for the default format.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ptm::cli
