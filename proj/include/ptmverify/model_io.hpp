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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "ptmverify/ptm_model.hpp"

namespace ptm::io {

/// Malformed model file. `where()` is "line L, column C" for syntax errors
/// and a JSON pointer such as "/entries/3/p" for schema errors.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

using AnyModel = std::variant<OperationalModel, OnticModel>;

/// Parses the model file format. Missing entries are read as probability 0;
/// normalization is left to validate().
AnyModel parse_model(std::string_view text);
AnyModel load_model(const std::filesystem::path& path);

nlohmann::json to_json(const OperationalModel& model);
nlohmann::json to_json(const OnticModel& model);
nlohmann::json to_json(const AnyModel& model);

/// Stable text: sorted keys, two-space indent, trailing newline.
std::string serialize(const AnyModel& model);
void save_model(const AnyModel& model, const std::filesystem::path& path);

}  // namespace ptm::io
