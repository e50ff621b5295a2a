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

#include "ptmverify/cli.hpp"

#include <stdlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "ptmverify/conditions.hpp"
#include "ptmverify/fixtures.hpp"
#include "ptmverify/inequalities.hpp"
#include "ptmverify/lemma_audit.hpp"

namespace ptm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
  }
  if (out.empty() || std::any_of(out.begin(), out.end(), [](const auto& s) { return s.empty(); })) {
    throw InputError("malformed list '" + text + "'");
  }
  return out;
}

std::pair<std::string, std::string> split_pair(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw InputError("expected 'left:right', got '" + text + "'");
  return {parts[0], parts[1]};
}

OnticModel require_ontic(const io::AnyModel& model, const std::string& command) {
  if (const auto* m = std::get_if<OnticModel>(&model)) return *m;
  throw InputError(command + " needs an ontic model file (kind \"ontic\")");
}

OperationalModel project(const io::AnyModel& model) {
  if (const auto* m = std::get_if<OperationalModel>(&model)) return *m;
  return to_operational(std::get<OnticModel>(model));
}

std::string kind_of(const io::AnyModel& model) {
  return std::holds_alternative<OnticModel>(model) ? "ontic" : "operational";
}

AgreeMap agree_map(const Alphabets& al, const std::string& spec) {
  if (spec.empty()) return same_label_pairing(al);
  AgreeMap out;
  for (const auto& item : split(spec, ',')) out.push_back(split_pair(item));
  return out;
}

json assignment_json(const Assignment& at) {
  json out = json::object();
  for (const auto& [name, label] : at) out[name] = label;
  return out;
}

json witness_json(const Witness& w) {
  return {{"at", assignment_json(w.at)},
          {"lhs", {{"label", w.lhs_label}, {"value", rational_json(w.lhs)}}},
          {"rhs", {{"label", w.rhs_label}, {"value", rational_json(w.rhs)}}},
          {"note", w.note}};
}

json verdict_json(const Verdict& v) {
  json witnesses = json::array();
  for (const auto& w : v.witnesses) witnesses.push_back(witness_json(w));
  return {{"passed", v.passed}, {"reason", v.reason}, {"witnesses", witnesses}};
}

std::string verdict_text(const Verdict& v) {
  std::string s = v.passed ? "PASS" : "FAIL";
  if (!v.passed) {
    if (!v.reason.empty()) s += "  " + v.reason;
    if (!v.witnesses.empty()) s += "; witness " + describe(v.witnesses.front());
  }
  return s;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

json signalling_json(const SignallingVerdict& v) {
  auto w = [](const std::optional<SignallingWitness>& sw) -> json {
    if (!sw) return nullptr;
    return {{"fixed_setting", sw->fixed_setting}, {"outcome", sw->outcome}, {"setting_1", sw->setting_1},
            {"setting_2", sw->setting_2}, {"p_1", rational_json(sw->p_1)}, {"p_2", rational_json(sw->p_2)}};
  };
  return {{"no_forward_signalling", v.no_forward_signalling},
          {"no_retro_signalling", v.no_retro_signalling},
          {"forward_witness", w(v.forward_witness)},
          {"retro_witness", w(v.retro_witness)}};
}

void signalling_rows(Report& r, const SignallingVerdict& v) {
  auto describe_sw = [](const SignallingWitness& w, const char* varying) {
    return "p(" + w.outcome + ") = " + w.p_1.str() + " at " + varying + "=" + w.setting_1 + " vs " + w.p_2.str() +
           " at " + varying + "=" + w.setting_2;
  };
  r.row("forward (b vs x)",
        v.no_forward_signalling ? "holds" : "SIGNALLING  " + describe_sw(*v.forward_witness, "x"));
  r.row("retro (a vs y)", v.no_retro_signalling ? "holds" : "SIGNALLING  " + describe_sw(*v.retro_witness, "y"));
}

json bijection_json(const Bijection& f) {
  json out = json::object();
  for (const auto& [from, to] : f.pairs()) out[from] = to;
  return out;
}

json step_json(const AuditStep& s) {
  return {{"id", s.id},
          {"name", s.name},
          {"statement", s.statement},
          {"side", to_string(s.side)},
          {"inference", s.inference},
          {"verdict", to_string(s.verdict)},
          {"witness", s.witness ? witness_json(*s.witness) : json(nullptr)},
          {"cells_checked", s.cells_checked},
          {"cells_vacuous", s.cells_vacuous}};
}

void audit_section(Report& r, json& data, const AuditReport& audit, const ConflationFinding& conflation) {
  r.heading("audit steps");
  json steps = json::array();
  for (const auto& s : audit.steps) {
    std::string value = upper(to_string(s.verdict)) + "  " + s.statement;
    if (s.verdict == StepVerdict::kFails && s.witness) value += "  (witness " + describe(*s.witness) + ")";
    r.row("(" + s.id + ") " + s.name, value);
    steps.push_back(step_json(s));
  }
  r.heading("audit summary");
  r.row("first failure", audit.first_failure.value_or("none"));
  r.row("first failing inference", audit.first_failing_inference.value_or("none"));
  r.text(audit.summary);
  r.heading("conflation");
  for (const auto& line : conflation.lines) r.text(line);

  data["steps"] = steps;
  data["first_failure"] = audit.first_failure ? json(*audit.first_failure) : json(nullptr);
  data["first_failing_inference"] =
      audit.first_failing_inference ? json(*audit.first_failing_inference) : json(nullptr);
  data["summary"] = audit.summary;
  data["conflation"] = {{"original_independence", to_string(conflation.original_independence)},
                        {"reverse_independence", to_string(conflation.reverse_independence)},
                        {"conflated_claim", to_string(conflation.conflated_claim)},
                        {"distinguishing", conflation.distinguishing},
                        {"lines", conflation.lines}};
}

json summary_json(const CorrelationSummary& s) {
  json cells = json::array();
  for (const auto& c : s.cells()) {
    cells.push_back({{"x", c.x},
                     {"y", c.y},
                     {"p_agree", rational_json(c.p_agree)},
                     {"p_disagree", rational_json(c.p_disagree)},
                     {"correlator", rational_json(c.correlator)}});
  }
  return cells;
}

void summary_rows(Report& r, const CorrelationSummary& s) {
  r.heading("correlations");
  for (const auto& c : s.cells()) {
    r.row("(" + c.x + "," + c.y + ")", "p_agree " + rational_text(c.p_agree) + "  p_disagree " +
                                           rational_text(c.p_disagree) + "  E " + rational_text(c.correlator));
  }
}

json inequality_json(const InequalityResult& res) {
  json terms = json::array();
  for (const auto& t : res.terms) terms.push_back({{"label", t.label}, {"value", rational_json(t.value)}});
  json out = {{"name", res.name},
              {"lhs", rational_json(res.lhs)},
              {"rhs", rational_json(res.rhs)},
              {"comparison", res.comparison},
              {"violated", res.violated},
              {"terms", terms}};
  out["anticorrelated_at_equal_settings"] =
      res.anticorrelated_at_equal_settings ? json(*res.anticorrelated_at_equal_settings) : json(nullptr);
  return out;
}

void inequality_rows(Report& r, const InequalityResult& res) {
  r.heading(res.name);
  for (const auto& t : res.terms) r.row(t.label, rational_text(t.value));
  r.row("lhs", rational_text(res.lhs));
  r.row("rhs", rational_text(res.rhs));
  r.row("classical form", res.comparison);
  if (res.anticorrelated_at_equal_settings) {
    r.row("anticorrelated at equal settings", *res.anticorrelated_at_equal_settings ? "yes" : "no");
  }
  r.row("result", res.violated ? "VIOLATED" : "not violated");
}

std::array<SettingPair, 3> default_triple(const Alphabets& al) {
  const auto& X = al.prep_settings;
  const auto& Y = al.meas_settings;
  if (X.size() < 2 || Y.size() < 2) throw InputError("the default Wigner triple needs two settings per side");
  return {SettingPair{X[0], Y[1]}, SettingPair{X[1], Y[0]}, SettingPair{X[1], Y[1]}};
}

std::array<SettingPair, 3> parse_triple(const Alphabets& al, const std::string& spec) {
  if (spec.empty()) return default_triple(al);
  const auto items = split(spec, ',');
  if (items.size() != 3) throw InputError("--triple needs three x:y pairs");
  return {split_pair(items[0]), split_pair(items[1]), split_pair(items[2])};
}

std::array<std::string, 4> parse_chsh_settings(const Alphabets& al, const std::string& spec) {
  if (spec.empty()) {
    if (al.prep_settings.size() < 2 || al.meas_settings.size() < 2) {
      throw InputError("CHSH needs two settings per side");
    }
    return {al.prep_settings[0], al.prep_settings[1], al.meas_settings[0], al.meas_settings[1]};
  }
  const auto items = split(spec, ',');
  if (items.size() != 4) throw InputError("--settings needs x0,x1,y0,y1");
  return {items[0], items[1], items[2], items[3]};
}

struct BellRun {
  CorrelationSummary summary;
  InequalityResult result;
  Rational classical_bound;
  std::string bound_meaning;
};

BellRun run_bell(const OperationalModel& op, const std::string& inequality, const BellOptions& options) {
  const auto& al = op.alphabets();
  if (al.prep_outputs.size() != 2 || al.meas_outputs.size() != 2) {
    throw UnsupportedShape("Bell inequalities need binary outcomes on both sides");
  }
  CorrelationSummary summary = correlation_summary(op, agree_map(al, options.agree));
  if (inequality == "wigner") {
    const auto t = parse_triple(al, options.triple);
    InequalityResult res = wigner_check(summary, t[0], t[1], t[2]);
    Rational bound = local_bound_oracle(al.prep_settings, al.meas_settings,
                                        wigner_violation_objective(t[0], t[1], t[2]),
                                        StrategyFilter::kPerfectAnticorrelation);
    return {std::move(summary), std::move(res), bound,
            "classical max of rhs - lhs over anticorrelated deterministic strategies"};
  }
  if (inequality == "chsh") {
    const auto s = parse_chsh_settings(al, options.settings);
    InequalityResult res = chsh(summary, s[0], s[1], s[2], s[3]);
    Rational bound = chsh_local_bound(al.prep_settings, al.meas_settings, s[0], s[1], s[2], s[3]);
    return {std::move(summary), std::move(res), bound, "classical max of S over deterministic strategies"};
  }
  throw InputError("unknown inequality '" + inequality + "' (expected wigner or chsh)");
}

fs::path make_temp_dir() {
  std::string pattern = (fs::temp_directory_path() / "ptmverify-demo-XXXXXX").string();
  if (::mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("cannot create a temporary directory");
  return pattern;
}

std::vector<Rational> settings_weights(const json& doc, const std::string& key, const Labels& labels) {
  if (!doc.contains(key) || !doc.at(key).is_object()) {
    throw io::ParseError("/" + key, "expected an object mapping labels to weights");
  }
  const json& obj = doc.at(key);
  std::vector<Rational> out;
  Rational total(0);
  for (const auto& label : labels) {
    const std::string where = "/" + key + "/" + label;
    if (!obj.contains(label)) throw io::ParseError(where, "missing weight");
    if (!obj.at(label).is_string()) throw io::ParseError(where, "weight must be a string");
    try {
      out.push_back(Rational::parse(obj.at(label).get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw io::ParseError(where, e.what());
    }
    if (out.back().sign() < 0) throw io::ParseError(where, "negative weight");
    total += out.back();
  }
  if (obj.size() != labels.size()) throw io::ParseError("/" + key, "weight for an unknown label");
  if (total != Rational(1)) throw io::ParseError("/" + key, "weights sum to " + total.str());
  return out;
}

}  // namespace

json rational_json(const Rational& r) { return {{"exact", r.str()}, {"decimal", r.decimal(6)}}; }

std::string rational_text(const Rational& r) {
  const std::string exact = r.str();
  const std::string dec = r.decimal(6);
  return exact == dec ? exact : exact + " (" + dec + ")";
}

void Report::heading(std::string title) { lines_.push_back({Line::Kind::kHeading, std::move(title), {}}); }
void Report::row(std::string key, std::string value) {
  lines_.push_back({Line::Kind::kRow, std::move(key), std::move(value)});
}
void Report::text(std::string line) { lines_.push_back({Line::Kind::kText, {}, std::move(line)}); }

std::string Report::render(Format format, int exit_code) const {
  if (format == Format::kJson) {
    json doc = {{"command", command_}, {"exit_code", exit_code}, {"result", data}};
    return doc.dump(2) + "\n";
  }
  std::string out = "== " + command_ + " ==\n";
  std::size_t i = 0;
  while (i < lines_.size()) {
    std::size_t end = i;
    if (lines_[i].kind == Line::Kind::kHeading) {
      out += "\n-- " + lines_[i].key + " --\n";
      end = ++i;
    }
    while (end < lines_.size() && lines_[end].kind != Line::Kind::kHeading) ++end;
    std::size_t width = 0;
    for (std::size_t k = i; k < end; ++k) {
      if (lines_[k].kind == Line::Kind::kRow) width = std::max(width, lines_[k].key.size());
    }
    for (; i < end; ++i) {
      if (lines_[i].kind == Line::Kind::kRow) {
        out += lines_[i].key + std::string(width - lines_[i].key.size() + 2, ' ') + lines_[i].value + "\n";
      } else {
        out += lines_[i].value + "\n";
      }
    }
  }
  out += "\nexit code " + std::to_string(exit_code) + "\n";
  return out;
}

Outcome cmd_check(const fs::path& model_path, const std::vector<std::string>& required) {
  std::vector<Condition> wanted;
  for (const auto& name : required) {
    auto c = condition_from_key(name);
    if (!c) throw InputError("unknown condition '" + name + "'");
    wanted.push_back(*c);
  }
  const io::AnyModel model = io::load_model(model_path);
  Outcome out{kExitOk, Report("check"), std::nullopt};
  Report& r = out.report;
  r.data["file"] = model_path.string();
  r.data["kind"] = kind_of(model);
  r.row("file", model_path.string());
  r.row("kind", kind_of(model));

  const ValidationReport validation = std::visit([](const auto& m) { return validate(m); }, model);
  json issues = json::array();
  for (const auto& issue : validation.issues) issues.push_back(issue.message);
  r.data["validation"] = {{"ok", validation.ok()}, {"issues", issues}};
  r.row("validation", validation.ok() ? "ok" : std::to_string(validation.issues.size()) + " issue(s)");
  for (const auto& issue : validation.issues) r.text("  " + issue.message);

  if (const auto* ontic = std::get_if<OnticModel>(&model)) {
    const ConditionReport conditions = check_conditions(*ontic);
    r.heading("conditions");
    json cj = json::object();
    for (const auto& cv : conditions.verdicts) {
      r.row(display_name(cv.condition), verdict_text(cv.verdict));
      cj[key_name(cv.condition)] = verdict_json(cv.verdict);
    }
    r.data["conditions"] = cj;
    r.data["all_conditions_pass"] = conditions.all_passed();
    const Verdict locality = check_bell_locality(*ontic);
    r.heading("extra");
    r.row("BellLocality", verdict_text(locality));
    r.data["bell_locality"] = verdict_json(locality);
    std::vector<std::string> failed;
    for (Condition c : wanted) {
      if (!conditions[c].passed) failed.push_back(key_name(c));
    }
    r.data["required_failed"] = failed;
    if (!failed.empty()) {
      out.exit_code = kExitFailed;
      std::string list;
      for (const auto& f : failed) list += (list.empty() ? "" : ", ") + f;
      r.heading("requirements");
      r.row("failed", list);
    }
  } else {
    if (!wanted.empty()) throw InputError("--require needs an ontic model file");
    r.data["conditions"] = nullptr;
  }

  r.heading("no-signalling");
  if (validation.ok()) {
    const SignallingVerdict sv = check_no_signalling(project(model));
    signalling_rows(r, sv);
    r.data["no_signalling"] = signalling_json(sv);
  } else {
    r.text("skipped: the model does not validate");
    r.data["no_signalling"] = nullptr;
  }
  return out;
}

Outcome cmd_reverse(const fs::path& model_path, bool ontological, const std::optional<fs::path>& out_path) {
  const io::AnyModel model = io::load_model(model_path);
  Outcome out{kExitOk, Report("reverse"), std::nullopt};
  Report& r = out.report;
  r.row("file", model_path.string());
  r.data["file"] = model_path.string();
  std::optional<io::AnyModel> reversed;
  Verdict check;
  if (ontological) {
    const OnticModel original = require_ontic(model, "reverse --ontological");
    const ReversePair pair = canonical_ontological_reverse(original);
    check = check_reverse_pair(pair);
    r.row("construction", "canonical (same ontic space)");
    r.row("f", pair.f.str());
    r.row("f is identity", pair.f.is_identity() ? "yes" : "no");
    r.data["f"] = bijection_json(pair.f);
    r.data["f_is_identity"] = pair.f.is_identity();
    reversed = pair.reverse;
  } else {
    const OperationalModel op = project(model);
    const OperationalModel rev = operational_reverse(op);
    check = is_operational_reverse(op, rev);
    r.row("construction", "operational (roles swapped)");
    reversed = rev;
  }
  r.row("verification", verdict_text(check));
  r.data["verification"] = verdict_json(check);
  r.data["ontological"] = ontological;
  if (!check.passed) out.exit_code = kExitFailed;
  if (out_path) {
    io::save_model(*reversed, *out_path);
    r.row("written to", out_path->string());
    r.data["out"] = out_path->string();
  } else {
    r.heading("reverse model");
    const std::string text = io::serialize(*reversed);
    r.text(text.substr(0, text.size() - 1));
    r.data["reverse"] = io::to_json(*reversed);
  }
  return out;
}

Outcome cmd_audit(const fs::path& model_path) {
  const OnticModel model = require_ontic(io::load_model(model_path), "audit");
  Outcome out{kExitOk, Report("audit"), std::nullopt};
  Report& r = out.report;
  r.row("file", model_path.string());
  r.row("reverse", "canonical, f = identity");
  r.data["file"] = model_path.string();
  const ReversePair pair = canonical_ontological_reverse(model);
  const AuditReport audit = audit_lemma(pair);
  audit_section(r, r.data, audit, explain_conflation(audit));
  return out;
}

Outcome cmd_bell(const fs::path& model_path, const BellOptions& options) {
  const io::AnyModel model = io::load_model(model_path);
  const OperationalModel op = project(model);
  Outcome out{kExitOk, Report("bell"), std::nullopt};
  Report& r = out.report;
  r.row("file", model_path.string());
  r.row("kind", kind_of(model));
  r.data["file"] = model_path.string();
  const BellRun run = run_bell(op, options.inequality, options);
  summary_rows(r, run.summary);
  inequality_rows(r, run.result);
  r.row("classical bound", rational_text(run.classical_bound) + "  (" + run.bound_meaning + ")");
  r.data["correlations"] = summary_json(run.summary);
  r.data["inequality"] = inequality_json(run.result);
  r.data["classical_bound"] = rational_json(run.classical_bound);
  return out;
}

Outcome cmd_sample(const fs::path& model_path, const SampleOptions& options) {
  if (options.count <= 0) throw InputError("-n must be positive");
  const OnticModel model = require_ontic(io::load_model(model_path), "sample");
  if (auto v = validate(model); !v.ok()) throw ValidationError("invalid ontic model: " + v.issues.front().message);
  const Alphabets& al = model.alphabets();
  const AgreeMap agree = agree_map(al, options.agree);

  std::vector<Rational> xw, yw;
  if (options.settings_dist == "uniform") {
    xw.assign(al.prep_settings.size(), Rational(1, static_cast<long>(al.prep_settings.size())));
    yw.assign(al.meas_settings.size(), Rational(1, static_cast<long>(al.meas_settings.size())));
  } else {
    std::ifstream in(options.settings_dist);
    if (!in) throw InputError("cannot open settings distribution '" + options.settings_dist + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    json doc;
    try {
      doc = json::parse(buf.str());
    } catch (const json::parse_error& e) {
      throw io::ParseError("byte " + std::to_string(e.byte), "invalid JSON in settings distribution");
    }
    xw = settings_weights(doc, "x", al.prep_settings);
    yw = settings_weights(doc, "y", al.meas_settings);
  }

  const OperationalModel op = to_operational(model);
  const std::size_t nx = al.prep_settings.size(), ny = al.meas_settings.size();
  std::vector<std::int64_t> runs(nx * ny, 0), disagree(nx * ny, 0);
  RunSource source(options.seed);
  const RunSampler sampler(model);
  for (std::int64_t i = 0; i < options.count; ++i) {
    const std::size_t xi = sample_index(xw, source);
    const std::size_t yi = sample_index(yw, source);
    const RunRecord rec = sampler.sample(al.prep_settings[xi], al.meas_settings[yi], source);
    const bool agrees = std::find(agree.begin(), agree.end(), std::make_pair(rec.a, rec.b)) != agree.end();
    ++runs[xi * ny + yi];
    if (!agrees) ++disagree[xi * ny + yi];
  }

  Outcome out{kExitOk, Report("sample"), std::nullopt};
  Report& r = out.report;
  r.row("file", model_path.string());
  r.row("runs", std::to_string(options.count));
  r.row("seed", std::to_string(options.seed));
  r.row("settings", options.settings_dist);
  r.data["file"] = model_path.string();
  r.data["runs"] = options.count;
  r.data["seed"] = options.seed;
  r.data["settings_dist"] = options.settings_dist;
  r.heading("disagreement");
  json cells = json::array();
  bool all_within = true;
  for (std::size_t xi = 0; xi < nx; ++xi) {
    for (std::size_t yi = 0; yi < ny; ++yi) {
      const std::string& x = al.prep_settings[xi];
      const std::string& y = al.meas_settings[yi];
      Rational expected(1);
      for (const auto& [a, b] : agree) expected -= op.p(a, b, x, y);
      const std::int64_t n = runs[xi * ny + yi];
      const std::int64_t d = disagree[xi * ny + yi];
      const double p = expected.to_double();
      json cell = {{"x", x}, {"y", y}, {"runs", n}, {"disagree", d}, {"expected", rational_json(expected)}};
      std::string line = "runs " + std::to_string(n);
      bool within = true;
      if (n == 0) {
        cell["empirical"] = nullptr;
        cell["sigma"] = nullptr;
        line += "  empirical n/a";
      } else {
        const double emp = static_cast<double>(d) / static_cast<double>(n);
        const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
        within = sigma == 0.0 ? Rational(static_cast<long>(d), static_cast<long>(n)) == expected
                              : std::abs(emp - p) <= 3.0 * sigma;
        cell["empirical"] = fixed(emp);
        cell["sigma"] = fixed(sigma);
        line += "  empirical " + fixed(emp) + "  expected " + rational_text(expected) + "  sigma " + fixed(sigma);
      }
      cell["within_3sigma"] = within;
      line += within ? "  within 3 sigma" : "  OUTSIDE 3 sigma";
      all_within = all_within && within;
      r.row("(" + x + "," + y + ")", line);
      cells.push_back(std::move(cell));
    }
  }
  r.row("all cells within 3 sigma", all_within ? "yes" : "no");
  r.data["cells"] = cells;
  r.data["all_within_3sigma"] = all_within;
  return out;
}

Outcome cmd_demo(const DemoOptions& options) {
  Outcome out{kExitOk, Report("demo"), std::nullopt};
  Report& r = out.report;
  json& data = r.data;

  fs::path dir;
  bool cleanup = false;
  if (options.fixtures_dir) {
    dir = *options.fixtures_dir;
    r.row("fixtures", "read from the given directory");
  } else {
    if (options.work_dir) {
      dir = *options.work_dir;
      fs::create_directories(dir);
    } else {
      dir = make_temp_dir();
      cleanup = true;
    }
    io::save_model(fixtures::counterexample_model(), dir / "counterexample.json");
    io::save_model(fixtures::counterexample_reverse().reverse, dir / "counterexample-reverse.json");
    io::save_model(fixtures::singlet_stats(), dir / "singlet-stats.json");
    r.row("fixtures", "exported and re-read");
  }

  const io::AnyModel loaded_original = io::load_model(dir / "counterexample.json");
  const io::AnyModel loaded_reverse = io::load_model(dir / "counterexample-reverse.json");
  const io::AnyModel loaded_singlet = io::load_model(dir / "singlet-stats.json");
  if (cleanup) fs::remove_all(dir);
  const OnticModel original = require_ontic(loaded_original, "demo");
  const OnticModel reverse = require_ontic(loaded_reverse, "demo");
  const OperationalModel singlet = project(loaded_singlet);

  bool round_trip = io::parse_model(io::serialize(loaded_original)) == loaded_original &&
                    io::parse_model(io::serialize(loaded_reverse)) == loaded_reverse &&
                    io::parse_model(io::serialize(loaded_singlet)) == loaded_singlet;
  if (!options.fixtures_dir) {
    round_trip = round_trip && original == fixtures::counterexample_model() &&
                 reverse == fixtures::counterexample_reverse().reverse && singlet == fixtures::singlet_stats();
  }
  r.row("round trip exact", round_trip ? "yes" : "NO");
  data["round_trip"] = round_trip;

  // check
  const ConditionReport conditions = check_conditions(original);
  r.heading("check");
  json cj = json::object();
  for (const auto& cv : conditions.verdicts) {
    r.row(display_name(cv.condition), verdict_text(cv.verdict));
    cj[key_name(cv.condition)] = verdict_json(cv.verdict);
  }
  data["check"] = {{"conditions", cj}, {"all_pass", conditions.all_passed()}};
  const bool five_pass = conditions.all_passed();

  const bool valid = validate(original).ok();
  const OperationalModel op = valid ? to_operational(original) : singlet;
  const SignallingVerdict sv = check_no_signalling(op);
  signalling_rows(r, sv);
  data["check"]["no_signalling"] = signalling_json(sv);
  const bool matches_singlet = valid && op == singlet;
  r.row("statistics equal singlet table", matches_singlet ? "yes" : "no");
  data["check"]["matches_singlet_stats"] = matches_singlet;

  // reverse
  r.heading("reverse");
  json rj = json::object();
  if (valid && sv.no_signalling()) {
    const OperationalModel op_rev = operational_reverse(op);
    const bool involution = operational_reverse(op_rev) == op;
    r.row("operational reverse", verdict_text(is_operational_reverse(op, op_rev)));
    r.row("reverse of reverse", involution ? "equals original" : "DIFFERS");
    const ReversePair canonical = canonical_ontological_reverse(original);
    const Verdict canonical_check = check_reverse_pair(canonical);
    r.row("canonical ontological reverse", verdict_text(canonical_check) + "  f = " + canonical.f.str());
    rj["involution"] = involution;
    rj["canonical"] = {{"verification", verdict_json(canonical_check)}, {"f", bijection_json(canonical.f)}};
  } else {
    r.text("skipped: the model is invalid or signalling");
  }
  std::vector<Bijection> found;
  if (original.lambda_space().size() == reverse.lambda_space().size()) {
    found = find_ontological_reverse(original, reverse);
  }
  json fj = json::array();
  for (const auto& f : found) fj.push_back(bijection_json(f));
  r.row("bijections matching the relabelled reverse", std::to_string(found.size()));
  for (const auto& f : found) r.text("  f = " + f.str());
  rj["relabelled_matches"] = fj;
  data["reverse"] = rj;

  // bell
  bool wigner_violated = false, chsh_violated = false;
  json bj = json::object();
  if (valid) {
    for (const std::string name : {"wigner", "chsh"}) {
      const BellRun run = run_bell(op, name, BellOptions{});
      inequality_rows(r, run.result);
      r.row("classical bound", rational_text(run.classical_bound) + "  (" + run.bound_meaning + ")");
      bj[name] = inequality_json(run.result);
      bj[name]["classical_bound"] = rational_json(run.classical_bound);
      (name == "wigner" ? wigner_violated : chsh_violated) = run.result.violated;
    }
    bj["correlations"] = summary_json(correlation_summary(op));
  }
  data["bell"] = bj;
  const bool violated = wigner_violated && chsh_violated;

  // audit
  bool eq16_fails = false;
  json aj = json::object();
  if (!found.empty()) {
    const ReversePair pair{original, reverse, found.front()};
    const AuditReport audit = audit_lemma(pair);
    audit_section(r, aj, audit, explain_conflation(audit));
    eq16_fails = audit.step("g").verdict == StepVerdict::kFails;
  } else {
    r.heading("audit");
    r.text("skipped: no bijection relates the fixture files");
  }
  data["audit"] = aj;

  // mediation consequence under two settings weightings
  if (valid) {
    r.heading("mediation consequence");
    json mj = json::array();
    const std::vector<std::pair<std::string, ProbTable>> weightings = {
        {"uniform", settings_distribution(original.alphabets(), {Rational(1, 2), Rational(1, 2)},
                                          {Rational(1, 2), Rational(1, 2)})},
        {"x 1/3,2/3; y 3/4,1/4", settings_distribution(original.alphabets(), {Rational(1, 3), Rational(2, 3)},
                                                       {Rational(3, 4), Rational(1, 4)})}};
    for (const auto& [label, weights] : weightings) {
      if (original.alphabets().prep_settings.size() != 2 || original.alphabets().meas_settings.size() != 2) break;
      const MediationConsequence mc = mediation_consequence_check(original, weights);
      std::string agree;
      if (mc.summary) {
        for (const auto& c : mc.summary->cells()) agree += (agree.empty() ? "" : ", ") + c.p_agree.str();
      }
      r.row(label, "p_agree " + agree + (mc.any_violation ? "  VIOLATION" : "  no violation"));
      mj.push_back({{"settings", label}, {"any_violation", mc.any_violation}});
    }
    data["mediation_consequence"] = mj;
  }

  r.heading("summary");
  r.row("five conditions", five_pass ? "PASS" : "FAIL");
  r.row("inequalities", violated ? "VIOLATED" : "NOT VIOLATED");
  r.row("Eq16", eq16_fails ? "FAILS" : "HOLDS");
  data["summary"] = {{"five_conditions_pass", five_pass},
                     {"inequalities_violated", violated},
                     {"eq16_fails", eq16_fails},
                     {"round_trip", round_trip}};
  if (!(five_pass && violated && eq16_fails && round_trip)) out.exit_code = kExitFailed;
  return out;
}

Outcome cmd_export(const std::string& fixture_id, const std::optional<fs::path>& out_path) {
  std::string text;
  std::string id = fixture_id;
  std::optional<unsigned> code;
  if (const auto colon = fixture_id.find(':'); colon != std::string::npos) {
    id = fixture_id.substr(0, colon);
    const std::string digits = fixture_id.substr(colon + 1);
    if (id != "deterministic-local" || digits.empty() || digits.size() > 2 ||
        !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      throw InputError("malformed fixture id '" + fixture_id + "'");
    }
    code = static_cast<unsigned>(std::stoul(digits));
    if (*code > 15) throw InputError("deterministic-local code must be in 0..15");
  }
  auto graph_json = [](const CausalGraph& g) {
    json edges = json::array();
    for (const auto& [from, to] : g.edges()) edges.push_back({from, to});
    return json{{"kind", "causal_graph"}, {"nodes", g.nodes()}, {"edges", edges}, {"inputs", g.input_nodes()},
                {"acyclic", check_acyclic(g).acyclic}}
               .dump(2) +
           "\n";
  };
  if (id == "counterexample") {
    text = io::serialize(fixtures::counterexample_model());
  } else if (id == "counterexample-reverse") {
    text = io::serialize(fixtures::counterexample_reverse().reverse);
  } else if (id == "singlet-stats") {
    text = io::serialize(fixtures::singlet_stats());
  } else if (id == "deterministic-local") {
    text = io::serialize(fixtures::deterministic_local_strategy(code.value_or(0)));
  } else if (id == "figure1-graph") {
    text = graph_json(fixtures::figure_graph(1));
  } else if (id == "figure2-graph") {
    text = graph_json(fixtures::figure_graph(2));
  } else {
    throw InputError("unknown fixture '" + fixture_id + "'");
  }
  Outcome out{kExitOk, Report("export"), std::nullopt};
  out.report.data["fixture"] = fixture_id;
  out.report.row("fixture", fixture_id);
  if (out_path) {
    std::ofstream f(*out_path, std::ios::binary);
    if (!f) throw InputError("cannot write " + out_path->string());
    f << text;
    out.report.row("written to", out_path->string());
    out.report.data["out"] = out_path->string();
  } else {
    out.raw_output = text;
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Format format = Format::kText;
  if (const char* env = std::getenv("PTMVERIFY_FORMAT"); env != nullptr && *env != '\0') {
    const std::string v = env;
    if (v == "json") {
      format = Format::kJson;
    } else if (v != "text") {
      err << "error: PTMVERIFY_FORMAT must be text or json, got '" << v << "'\n";
      return kExitInput;
    }
  }

  CLI::App app{"Exact verification toolkit for prepare-transform-measure models"};
  app.name("ptmverify");
  app.require_subcommand(1);
  std::string format_flag;
  app.add_option("--format", format_flag, "Output format (default: $PTMVERIFY_FORMAT or text)")
      ->check(CLI::IsMember({"text", "json"}));

  std::string model_path;
  auto* check = app.add_subcommand("check", "Validate a model and evaluate the five conditions");
  check->add_option("model", model_path, "Model file")->required();
  std::string require;
  check->add_option("--require", require, "Comma-separated conditions that must pass");

  auto* reverse = app.add_subcommand("reverse", "Construct and verify the time reverse");
  reverse->add_option("model", model_path, "Model file")->required();
  bool ontological = false;
  reverse->add_flag("--ontological", ontological, "Canonical ontological reverse (ontic models)");
  std::string reverse_out;
  reverse->add_option("--out", reverse_out, "Write the reverse model here");

  auto* audit = app.add_subcommand("audit", "Audit the proof chain on the canonical reverse pair");
  audit->add_option("model", model_path, "Ontic model file")->required();

  BellOptions bell_opts;
  auto* bell = app.add_subcommand("bell", "Correlation summary and Bell inequality check");
  bell->add_option("model", model_path, "Model file")->required();
  bell->add_option("--inequality", bell_opts.inequality, "wigner or chsh")
      ->check(CLI::IsMember({"wigner", "chsh"}));
  bell->add_option("--triple", bell_opts.triple, "Wigner setting pairs x:y,x:y,x:y");
  bell->add_option("--settings", bell_opts.settings, "CHSH settings x0,x1,y0,y1");
  bell->add_option("--agree", bell_opts.agree, "Agreement pairing a:b,a:b");

  SampleOptions sample_opts;
  auto* sample = app.add_subcommand("sample", "Seeded Monte Carlo runs against exact disagreement rates");
  sample->add_option("model", model_path, "Ontic model file")->required();
  sample->add_option("-n", sample_opts.count, "Number of runs")->required();
  sample->add_option("--seed", sample_opts.seed, "Seed for the 64-bit Mersenne Twister");
  sample->add_option("--settings-dist", sample_opts.settings_dist, "uniform or a settings weights file");
  sample->add_option("--agree", sample_opts.agree, "Agreement pairing a:b,a:b");

  DemoOptions demo_opts;
  std::string work_dir, fixtures_dir;
  auto* demo = app.add_subcommand("demo", "End-to-end run over the serialized fixtures");
  demo->add_option("--work-dir", work_dir, "Directory for the exported fixture files");
  demo->add_option("--fixtures", fixtures_dir, "Read fixture files from this directory instead");

  std::string fixture_id, export_out;
  auto* exp = app.add_subcommand("export", "Write a fixture as a model file");
  exp->add_option("fixture", fixture_id, "Fixture id")->required();
  exp->add_option("--out", export_out, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }
  if (format_flag == "json") format = Format::kJson;
  if (format_flag == "text") format = Format::kText;

  auto fail = [&](int code, const std::string& kind, const std::string& message) {
    if (format == Format::kJson) {
      out << json{{"error", {{"kind", kind}, {"message", message}}}, {"exit_code", code}}.dump(2) << "\n";
    }
    err << "error: " << message << "\n";
    return code;
  };
  auto opt_path = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<fs::path>(s); };

  try {
    Outcome outcome{kExitOk, Report(""), std::nullopt};
    if (check->parsed()) {
      outcome = cmd_check(model_path, require.empty() ? std::vector<std::string>{} : split(require, ','));
    } else if (reverse->parsed()) {
      outcome = cmd_reverse(model_path, ontological, opt_path(reverse_out));
    } else if (audit->parsed()) {
      outcome = cmd_audit(model_path);
    } else if (bell->parsed()) {
      outcome = cmd_bell(model_path, bell_opts);
    } else if (sample->parsed()) {
      outcome = cmd_sample(model_path, sample_opts);
    } else if (demo->parsed()) {
      demo_opts.work_dir = opt_path(work_dir);
      demo_opts.fixtures_dir = opt_path(fixtures_dir);
      outcome = cmd_demo(demo_opts);
    } else {
      outcome = cmd_export(fixture_id, opt_path(export_out));
    }
    if (outcome.raw_output) {
      out << *outcome.raw_output;
    } else {
      out << outcome.report.render(format, outcome.exit_code);
    }
    return outcome.exit_code;
  } catch (const io::ParseError& e) {
    return fail(kExitInput, "parse", e.what());
  } catch (const InputError& e) {
    return fail(kExitInput, "input", e.what());
  } catch (const SignallingRequired& e) {
    return fail(kExitSignalling, "signalling", e.what());
  } catch (const UnsupportedShape& e) {
    return fail(kExitUnsupportedShape, "unsupported_shape", e.what());
  } catch (const ValidationError& e) {
    return fail(kExitInput, "validation", e.what());
  } catch (const ZeroConditioning& e) {
    return fail(kExitInput, "zero_conditioning", e.what());
  } catch (const LimitExceeded& e) {
    return fail(kExitInput, "limit", e.what());
  } catch (const StructuralError& e) {
    return fail(kExitInput, "structure", e.what());
  } catch (const std::exception& e) {
    return fail(kExitInput, "io", e.what());
  }
}

}  // namespace ptm::cli
