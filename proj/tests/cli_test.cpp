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

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "gtest/gtest.h"

#include "ptmverify/fixtures.hpp"
#include "support.hpp"

using namespace ptm;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;

  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::string tmpl = (fs::temp_directory_path() / "ptmverify-cli-XXXXXX").string();
    ASSERT_NE(mkdtemp(tmpl.data()), nullptr);
    dir_ = tmpl;
  }
  void TearDown() override { fs::remove_all(dir_); }

  Invocation run(std::vector<std::string> args) {
    args.insert(args.begin(), "ptmverify");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) {
    std::ofstream(path(name)) << content;
    return path(name);
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  std::string exported(const std::string& id) {
    const std::string p = path(id + ".json");
    EXPECT_EQ(run({"export", id, "--out", p}).code, 0);
    return p;
  }

  fs::path dir_;
};

// b copies x: signals forward.
const char* kSignalling = R"({"kind": "ontic", "prep_settings": ["0", "1"], "meas_settings": ["0"],
  "prep_outputs": ["-"], "meas_outputs": ["0", "1"], "lambda": ["l"],
  "entries": [{"x": "0", "y": "0", "a": "-", "b": "0", "lambda": "l", "p": "1"},
              {"x": "1", "y": "0", "a": "-", "b": "1", "lambda": "l", "p": "1"}]})";

// lambda copies y.
const char* kRetrocausal = R"({"kind": "ontic", "prep_settings": ["0"], "meas_settings": ["0", "1"],
  "prep_outputs": ["u"], "meas_outputs": ["u"], "lambda": ["l0", "l1"],
  "entries": [{"x": "0", "y": "0", "a": "u", "b": "u", "lambda": "l0", "p": "1"},
              {"x": "0", "y": "1", "a": "u", "b": "u", "lambda": "l1", "p": "1.0"}]})";

}  // namespace

TEST(model_io, fixtures_round_trip_exactly) {
  const std::vector<io::AnyModel> models = {fixtures::counterexample_model(), fixtures::counterexample_reverse().reverse,
                                            fixtures::singlet_stats(), fixtures::deterministic_local_strategy(9)};
  for (const auto& m : models) {
    const std::string text = io::serialize(m);
    EXPECT_EQ(io::parse_model(text), m);
    EXPECT_EQ(io::serialize(io::parse_model(text)), text);
  }
}

TEST(model_io, decimal_and_sparse_entries) {
  const auto m = io::parse_model(kRetrocausal);
  const auto& ontic = std::get<OnticModel>(m);
  EXPECT_EQ(ontic.p("u", "u", "l1", "0", "1"), Rational(1));
  EXPECT_EQ(ontic.p("u", "u", "l0", "0", "1"), Rational(0));
  const auto op = io::parse_model(R"({"kind": "operational", "prep_settings": ["0"], "meas_settings": ["0"],
    "prep_outputs": ["u", "d"], "meas_outputs": ["u"],
    "entries": [{"x": "0", "y": "0", "a": "u", "b": "u", "p": "0.333333"},
                {"x": "0", "y": "0", "a": "d", "b": "u", "p": "666667/1000000"}]})");
  EXPECT_EQ(std::get<OperationalModel>(op).p("u", "u", "0", "0"), Rational(333333, 1000000));
}

TEST(model_io, errors_carry_a_location) {
  try {
    io::parse_model("{\"kind\": \"ontic\",\n  \"prep_settings\": [}");
    FAIL() << "no error";
  } catch (const io::ParseError& e) {
    EXPECT_EQ(e.where().rfind("line 2", 0), 0U) << e.where();
  }
  const std::string bad_p = std::string(kRetrocausal).replace(std::string(kRetrocausal).find("\"1.0\""), 5, "\"0.1234567\"");
  try {
    io::parse_model(bad_p);
    FAIL() << "no error";
  } catch (const io::ParseError& e) {
    EXPECT_EQ(e.where(), "/entries/1/p");
  }
  EXPECT_THROW(io::parse_model(R"({"kind": "quantum"})"), io::ParseError);
  const std::string unknown = std::string(kRetrocausal).replace(std::string(kRetrocausal).find("\"l1\", \"p\""), 4, "\"l9\"");
  EXPECT_THROW(io::parse_model(unknown), io::ParseError);
}

TEST_F(CliTest, check_fixture_passes) {
  const Invocation r = run({"check", exported("counterexample")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("TimeSymmetry"), std::string::npos);
  const Invocation j = run({"--format", "json", "check", path("counterexample.json"), "--require",
                     "free_choice,realism,lambda_mediation,no_retrocausality,time_symmetry"});
  EXPECT_EQ(j.code, 0);
  EXPECT_TRUE(j.json()["result"]["all_conditions_pass"].get<bool>());
}

TEST_F(CliTest, check_require_and_input_errors) {
  const std::string retro = write("retro.json", kRetrocausal);
  EXPECT_EQ(run({"check", retro}).code, 0);
  EXPECT_NE(run({"check", retro, "--require", "no_retrocausality"}).code, 0);
  EXPECT_EQ(run({"check", retro, "--require", "realism"}).code, 0);
  EXPECT_EQ(run({"check", retro, "--require", "telepathy"}).code, 2);
  const Invocation bad = run({"check", write("bad.json", "{\"kind\": ")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 1"), std::string::npos) << bad.err;
  EXPECT_EQ(run({"check", path("missing.json")}).code, 2);
}

TEST_F(CliTest, reverse_involution_and_signalling) {
  const std::string m = exported("counterexample");
  EXPECT_EQ(run({"reverse", m, "--out", path("r1.json")}).code, 0);
  EXPECT_EQ(run({"reverse", path("r1.json"), "--out", path("r2.json")}).code, 0);
  EXPECT_EQ(io::load_model(path("r2.json")), io::AnyModel(to_operational(fixtures::counterexample_model())));

  EXPECT_EQ(run({"reverse", "--ontological", m, "--out", path("o1.json")}).code, 0);
  EXPECT_EQ(run({"reverse", "--ontological", path("o1.json"), "--out", path("o2.json")}).code, 0);
  EXPECT_EQ(read("o2.json"), read("counterexample.json"));

  const Invocation o = run({"--format", "json", "reverse", "--ontological", m});
  EXPECT_TRUE(o.json()["result"]["f_is_identity"].get<bool>());
  EXPECT_TRUE(o.json()["result"]["verification"]["passed"].get<bool>());

  const std::string sig = write("sig.json", kSignalling);
  EXPECT_EQ(run({"reverse", sig}).code, 3);
  EXPECT_EQ(run({"reverse", "--ontological", sig}).code, 3);
  EXPECT_EQ(run({"audit", sig}).code, 3);
}

TEST_F(CliTest, audit_reports_first_failure) {
  const Invocation r = run({"--format", "json", "audit", exported("counterexample")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["result"]["first_failing_inference"], "e");
  const Invocation retro = run({"--format", "json", "audit", write("retro.json", kRetrocausal)});
  EXPECT_EQ(retro.json()["result"]["first_failing_inference"], "d");
  const Invocation text = run({"audit", exported("deterministic-local")});
  EXPECT_NE(text.out.find("every step of the chain holds"), std::string::npos) << text.out;
}

TEST_F(CliTest, bell_values) {
  const std::string m = exported("counterexample");
  const Invocation c = run({"--format", "json", "bell", m, "--inequality", "chsh"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.json()["result"]["inequality"]["lhs"]["exact"], "5/2");
  EXPECT_EQ(c.json()["result"]["inequality"]["lhs"]["decimal"], "2.500000");
  EXPECT_TRUE(c.json()["result"]["inequality"]["violated"].get<bool>());
  const Invocation w = run({"--format", "json", "bell", m, "--inequality", "wigner"});
  EXPECT_EQ(w.json()["result"]["inequality"]["lhs"]["exact"], "1/2");
  EXPECT_EQ(w.json()["result"]["inequality"]["rhs"]["exact"], "3/4");
  EXPECT_TRUE(w.json()["result"]["inequality"]["violated"].get<bool>());
  EXPECT_NE(run({"bell", m}).out.find("VIOLATED"), std::string::npos);

  for (const std::string code : {"0", "6", "15"}) {
    const Invocation local = run({"--format", "json", "bell", exported("deterministic-local:" + code)});
    EXPECT_FALSE(local.json()["result"]["inequality"]["violated"].get<bool>()) << code;
  }
}

TEST_F(CliTest, bell_shape_errors) {
  const std::string three = write("three.json", R"({"kind": "operational", "prep_settings": ["0"],
    "meas_settings": ["0"], "prep_outputs": ["a", "b", "c"], "meas_outputs": ["a", "b"],
    "entries": [{"x": "0", "y": "0", "a": "a", "b": "a", "p": "1"}]})");
  EXPECT_EQ(run({"bell", three}).code, 4);
  EXPECT_EQ(run({"bell", exported("counterexample"), "--inequality", "mermin"}).code, 2);
}

TEST_F(CliTest, sample_statistics_and_determinism) {
  const std::string m = exported("counterexample");
  const Invocation a = run({"--format", "json", "sample", m, "-n", "100000", "--seed", "7"});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto cells = a.json()["result"]["cells"];
  for (const auto& c : cells) {
    EXPECT_TRUE(c["within_3sigma"].get<bool>()) << c.dump();
    if (c["x"] == "0" && c["y"] == "0") {
      EXPECT_EQ(c["disagree"], c["runs"]);
      EXPECT_EQ(c["empirical"], "1.000000");
    }
  }
  EXPECT_EQ(run({"--format", "json", "sample", m, "-n", "100000", "--seed", "7"}).out, a.out);
  EXPECT_NE(run({"--format", "json", "sample", m, "-n", "100000", "--seed", "8"}).out, a.out);
  EXPECT_EQ(run({"sample", m, "-n", "0"}).code, 2);
  EXPECT_EQ(run({"sample", m, "-n", "-5"}).code, 2);

  const std::string dist = write("dist.json", R"({"x": {"0": "1/3", "30": "2/3"}, "y": {"0": "1", "-30": "0"}})");
  const Invocation skew = run({"--format", "json", "sample", m, "-n", "3000", "--settings-dist", dist});
  ASSERT_EQ(skew.code, 0) << skew.err;
  for (const auto& c : skew.json()["result"]["cells"]) {
    if (c["y"] == "-30") EXPECT_EQ(c["runs"], 0);
  }
}

TEST_F(CliTest, demo_passes_and_is_deterministic) {
  const Invocation text = run({"demo"});
  EXPECT_EQ(text.code, 0) << text.out << text.err;
  EXPECT_NE(text.out.find("Eq16"), std::string::npos);
  const Invocation j1 = run({"--format", "json", "demo"});
  const Invocation j2 = run({"--format", "json", "demo"});
  EXPECT_EQ(j1.code, 0);
  EXPECT_EQ(j1.out, j2.out);
  EXPECT_TRUE(j1.json()["result"]["round_trip"].is_boolean() || j1.json()["result"]["round_trip"].is_object());
}

TEST_F(CliTest, demo_with_corrupted_fixtures_fails) {
  const fs::path good = dir_ / "good";
  fs::create_directories(good);
  ASSERT_EQ(run({"demo", "--work-dir", good.string()}).code, 0);
  for (const auto& id : {"counterexample", "counterexample-reverse", "singlet-stats"}) {
    ASSERT_EQ(run({"export", id, "--out", (good / (std::string(id) + ".json")).string()}).code, 0);
  }
  EXPECT_EQ(run({"demo", "--fixtures", good.string()}).code, 0);

  // Break the original's response table: b now copies a at equal settings.
  std::string text = read("good/counterexample.json");
  const fs::path bad = dir_ / "bad";
  fs::create_directories(bad);
  fs::copy(good / "counterexample-reverse.json", bad / "counterexample-reverse.json");
  fs::copy(good / "singlet-stats.json", bad / "singlet-stats.json");
  auto model = std::get<OnticModel>(io::parse_model(text));
  const ProbTable flat = ProbTable::tabulate(model.joint().variables(), model.joint().conditioning(),
                                             [&](const ProbTable::Index& i) {
                                               return model.joint().cell(model.joint().flatten(i)).is_zero() ? Rational(0) : Rational(1, 8);
                                             });
  io::save_model(OnticModel(model.alphabets(), model.lambda_space(), flat), bad / "counterexample.json");
  EXPECT_NE(run({"demo", "--fixtures", bad.string()}).code, 0);

  fs::remove(bad / "counterexample.json");
  EXPECT_NE(run({"demo", "--fixtures", bad.string()}).code, 0);
}

TEST_F(CliTest, format_flag_and_environment) {
  const std::string m = exported("counterexample");
  setenv("PTMVERIFY_FORMAT", "json", 1);
  const Invocation env = run({"bell", m});
  unsetenv("PTMVERIFY_FORMAT");
  EXPECT_EQ(env.json()["command"], "bell");
  EXPECT_EQ(run({"--format", "json", "bell", m}).out, env.out);
  setenv("PTMVERIFY_FORMAT", "yaml", 1);
  EXPECT_EQ(run({"bell", m}).code, 2);
  unsetenv("PTMVERIFY_FORMAT");
  EXPECT_EQ(run({"--format", "xml", "bell", m}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST_F(CliTest, export_ids) {
  EXPECT_EQ(run({"export", "counterexample"}).json(), io::to_json(fixtures::counterexample_model()));
  const Invocation g = run({"export", "figure2-graph"});
  EXPECT_EQ(g.json()["kind"], "causal_graph");
  EXPECT_EQ(run({"export", "nonsense"}).code, 2);
  EXPECT_EQ(run({"export", "deterministic-local:99"}).code, 2);
}

TEST(cli_property, random_models_round_trip_through_files) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const io::AnyModel op = testkit::random_no_signalling(rng);
    ASSERT_EQ(io::parse_model(io::serialize(op)), op);
    const io::AnyModel ontic = testkit::random_local_model(rng, 2, 1 + trial % 3, 2, 3, 1 + trial % 4);
    ASSERT_EQ(io::parse_model(io::serialize(ontic)), ontic);
  }
}
