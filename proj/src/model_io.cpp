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

#include "ptmverify/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace ptm::io {

using nlohmann::json;

namespace {

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

Labels read_labels(const json& doc, const std::string& key) {
  const std::string where = "/" + key;
  if (!doc.contains(key)) throw ParseError(where, "missing key");
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw ParseError(where, "expected an array of labels");
  Labels out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) throw ParseError(where + "/" + std::to_string(i), "label must be a string");
    out.push_back(arr[i].get<std::string>());
    if (!seen.insert(out.back()).second) throw ParseError(where + "/" + std::to_string(i), "duplicate label");
  }
  return out;
}

std::string read_label(const json& entry, const std::string& key, const Labels& alphabet, const std::string& where) {
  if (!entry.contains(key)) throw ParseError(where + "/" + key, "missing key");
  const json& v = entry.at(key);
  if (!v.is_string()) throw ParseError(where + "/" + key, "label must be a string");
  std::string label = v.get<std::string>();
  if (std::find(alphabet.begin(), alphabet.end(), label) == alphabet.end()) {
    throw ParseError(where + "/" + key, "label '" + label + "' is not in the alphabet");
  }
  return label;
}

Rational read_probability(const json& entry, const std::string& where) {
  if (!entry.contains("p")) throw ParseError(where + "/p", "missing key");
  const json& v = entry.at("p");
  if (!v.is_string()) throw ParseError(where + "/p", "probability must be a string such as \"1/2\" or \"0.25\"");
  try {
    Rational r = Rational::parse(v.get<std::string>());
    if (!r.is_probability()) throw ParseError(where + "/p", "probability outside [0, 1]");
    return r;
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + "/p", e.what());
  }
}

}  // namespace

AnyModel parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(line_column(text, e.byte), "invalid JSON");
  }
  if (!doc.is_object()) throw ParseError("/", "model file must be a JSON object");
  if (!doc.contains("kind") || !doc.at("kind").is_string()) throw ParseError("/kind", "missing or non-string kind");
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind != "operational" && kind != "ontic") {
    throw ParseError("/kind", "kind must be \"operational\" or \"ontic\"");
  }
  const bool ontic = kind == "ontic";
  Alphabets al{read_labels(doc, "prep_settings"), read_labels(doc, "meas_settings"), read_labels(doc, "prep_outputs"),
               read_labels(doc, "meas_outputs")};
  Labels lambda;
  if (ontic) {
    lambda = read_labels(doc, "lambda");
  } else if (doc.contains("lambda")) {
    throw ParseError("/lambda", "operational models carry no ontic space");
  }

  if (!doc.contains("entries") || !doc.at("entries").is_array()) {
    throw ParseError("/entries", "missing or non-array entries");
  }
  std::vector<std::pair<Assignment, Rational>> entries;
  const json& list = doc.at("entries");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "/entries/" + std::to_string(i);
    const json& e = list[i];
    if (!e.is_object()) throw ParseError(where, "entry must be an object");
    Assignment at = {{kPrepSetting, read_label(e, "x", al.prep_settings, where)},
                     {kMeasSetting, read_label(e, "y", al.meas_settings, where)},
                     {kPrepOutput, read_label(e, "a", al.prep_outputs, where)},
                     {kMeasOutput, read_label(e, "b", al.meas_outputs, where)}};
    if (ontic) {
      at.emplace_back(kOntic, read_label(e, "lambda", lambda, where));
    } else if (e.contains("lambda")) {
      throw ParseError(where + "/lambda", "operational entries carry no lambda");
    }
    entries.emplace_back(std::move(at), read_probability(e, where));
  }

  try {
    if (ontic) {
      ProbTable t = ProbTable::from_entries(ontic_variables(al, lambda), {kPrepSetting, kMeasSetting}, entries,
                                            ProbTable::Density::kSparse);
      return OnticModel(al, lambda, std::move(t));
    }
    ProbTable t = ProbTable::from_entries(operational_variables(al), {kPrepSetting, kMeasSetting}, entries,
                                          ProbTable::Density::kSparse);
    return OperationalModel(al, std::move(t));
  } catch (const StructuralError& e) {
    throw ParseError("/entries", e.what());
  }
}

AnyModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

namespace {

json alphabet_json(const Alphabets& al, const char* kind) {
  return {{"kind", kind},
          {"prep_settings", al.prep_settings},
          {"meas_settings", al.meas_settings},
          {"prep_outputs", al.prep_outputs},
          {"meas_outputs", al.meas_outputs}};
}

}  // namespace

json to_json(const OperationalModel& model) {
  json doc = alphabet_json(model.alphabets(), "operational");
  json entries = json::array();
  const auto& t = model.joint();
  for (std::size_t flat = 0; flat < t.cell_count(); ++flat) {
    json e;
    for (const auto& [name, label] : t.assignment_of(t.unflatten(flat))) e[name] = label;
    e["p"] = t.cell(flat).str();
    entries.push_back(std::move(e));
  }
  doc["entries"] = std::move(entries);
  return doc;
}

json to_json(const OnticModel& model) {
  json doc = alphabet_json(model.alphabets(), "ontic");
  doc["lambda"] = model.lambda_space();
  json entries = json::array();
  const auto& t = model.joint();
  for (std::size_t flat = 0; flat < t.cell_count(); ++flat) {
    json e;
    for (const auto& [name, label] : t.assignment_of(t.unflatten(flat))) e[name] = label;
    e["p"] = t.cell(flat).str();
    entries.push_back(std::move(e));
  }
  doc["entries"] = std::move(entries);
  return doc;
}

json to_json(const AnyModel& model) {
  return std::visit([](const auto& m) { return to_json(m); }, model);
}

std::string serialize(const AnyModel& model) { return to_json(model).dump(2) + "\n"; }

void save_model(const AnyModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize(model);
}

}  // namespace ptm::io
