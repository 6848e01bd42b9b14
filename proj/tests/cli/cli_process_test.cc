// Copyright 2026 The ragmark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the ragmark executable end to end in scratch directories.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "fixtures.h"
#include "ragmark/mock_chat_client.h"
#include "ragmark/watermark.h"

namespace ragmark {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Outcome {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

Outcome Ragmark(const fs::path& dir, const std::string& args, const std::string& env = "") {
  const std::string cmd = "cd '" + dir.string() + "' && " + env + " '" RAGMARK_CLI_PATH "' " +
                          args + " > stdout.txt 2> stderr.txt";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = Slurp(dir / "stdout.txt");
  o.err = Slurp(dir / "stderr.txt");
  return o;
}

const std::string kKeyFlag = "--key " + std::string(testing::kTestKeyHex);

// synth -> extract -> tuples -> inject, all with the leaking mock.
void BuildPipeline(const fs::path& dir) {
  ASSERT_EQ(Ragmark(dir, "synth").exit_code, 0);
  ASSERT_EQ(Ragmark(dir, "extract --llm mock:mock_ideal.json").exit_code, 0);
  ASSERT_EQ(Ragmark(dir, "tuples " + kKeyFlag + " --entities entities.json --relations relations.json")
                .exit_code,
            0);
  ASSERT_EQ(Ragmark(dir, "inject --llm mock:mock_ideal.json").exit_code, 0);
}

class CliPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(testing::ScratchDir("cli_pipeline"));
    BuildPipeline(*dir_);
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete dir_;
  }
  static const fs::path& dir() { return *dir_; }
  static json ReadJson(const std::string& name) { return json::parse(Slurp(dir() / name)); }

 private:
  static fs::path* dir_;
};

fs::path* CliPipeline::dir_ = nullptr;

TEST_F(CliPipeline, TuplesCommandWritesFiftyTuples) {
  const auto tuples = ReadJson("tuples.json");
  EXPECT_EQ(tuples.at("tuples").size(), 50u);
  EXPECT_EQ(tuples.at("command"), "tuples");
  EXPECT_EQ(tuples.at("key_fingerprint"), testing::TestKey().Fingerprint());
  EXPECT_EQ(tuples.at("config").at("key_fingerprint"), testing::TestKey().Fingerprint());
  EXPECT_EQ(GraphFromJson(tuples).tuples.size(), 50u);
}

TEST_F(CliPipeline, OwnerKeyNeverWritten) {
  for (const auto& entry : fs::directory_iterator(dir())) {
    EXPECT_EQ(Slurp(entry.path()).find(testing::kTestKeyHex), std::string::npos)
        << entry.path();
  }
  const auto o = Ragmark(dir(), "tuples " + kKeyFlag + " --tuples tuples_again.json");
  EXPECT_EQ(o.exit_code, 0);
  EXPECT_EQ(o.out.find(testing::kTestKeyHex), std::string::npos);
  EXPECT_NE(o.out.find(testing::TestKey().Fingerprint()), std::string::npos);
}

TEST_F(CliPipeline, InjectionPlacesEveryText) {
  const auto report = ReadJson("injection.json");
  EXPECT_EQ(report.at("successes"), 250);
  EXPECT_EQ(report.at("config").at("n_wm"), 5);
  EXPECT_TRUE(fs::exists(dir() / "kb_wm.jsonl"));
}

// The spec-style invocation: the suspect is a bare model that either knows
// the watermark relations (ideal) or refuses them (clean).
TEST_F(CliPipeline, VerifyChatSuspectExitCodes) {
  const auto graph = GraphFromJson(ReadJson("tuples.json"));
  MockBehavior ideal;
  for (const auto& t : graph.tuples) ideal.AddKnowledge(t.entity_a, t.entity_b, t.relation);
  MockBehavior clean = ideal;
  clean.leak_probability = 0;
  Spit(dir() / "ideal.json", MockBehaviorToJson(ideal).dump());
  Spit(dir() / "clean.json", MockBehaviorToJson(clean).dump());

  const auto hit = Ragmark(dir(), "verify --suspect mock:ideal.json --out v_ideal.json");
  EXPECT_EQ(hit.exit_code, 0) << hit.out << hit.err;
  // Tuples may share an entity pair under different relations; a model
  // that holds one relation per pair answers only one of them correctly.
  const auto v = ReadJson("v_ideal.json");
  std::size_t expected = 0;
  for (const auto& q : v.at("per_query")) {
    const auto* t = graph.Find(q.at("tuple_id").get<std::string>());
    ASSERT_NE(t, nullptr);
    expected += *ideal.Knowledge(t->entity_a, t->entity_b) == t->relation;
  }
  EXPECT_GE(expected, 28u);
  EXPECT_EQ(v.at("c_wm"), expected);
  EXPECT_EQ(v.at("verdict"), true);
  EXPECT_EQ(v.at("wirr"), "unavailable");

  const auto miss = Ragmark(dir(), "verify --suspect mock:clean.json --out v_clean.json");
  EXPECT_EQ(miss.exit_code, 3) << miss.out << miss.err;
  const auto w = ReadJson("v_clean.json");
  EXPECT_EQ(w.at("c_wm"), 0);
  EXPECT_EQ(w.at("p_value"), 1.0);
}

TEST_F(CliPipeline, VerifyLocalRagFromConfigFile) {
  Spit(dir() / "run.toml", "suspect_kb = \"kb_wm.jsonl\"\nn = 30\n");
  const auto hit =
      Ragmark(dir(), "--config run.toml verify --suspect mock:mock_ideal.json --out v_rag.json");
  EXPECT_EQ(hit.exit_code, 0) << hit.out << hit.err;
  EXPECT_EQ(ReadJson("v_rag.json").at("wirr"), 1.0);
  EXPECT_NE(hit.out.find("infringement detected"), std::string::npos);

  const auto miss =
      Ragmark(dir(), "--config run.toml verify --suspect mock:mock_clean.json --out v_rag_clean.json");
  EXPECT_EQ(miss.exit_code, 3);

  // Flags override the file.
  const auto few = Ragmark(dir(), "--config run.toml verify --suspect mock:mock_ideal.json --n 5 "
                              "--out v_rag5.json");
  EXPECT_EQ(few.exit_code, 0);
  EXPECT_EQ(ReadJson("v_rag5.json").at("n"), 5);
}

TEST_F(CliPipeline, UsageErrorsExitTwo) {
  EXPECT_EQ(Ragmark(dir(), "").exit_code, 2);
  EXPECT_EQ(Ragmark(dir(), "verify").exit_code, 2);  // no suspect
  EXPECT_EQ(Ragmark(dir(), "verify --suspect mock:missing.json").exit_code, 2);
  EXPECT_EQ(Ragmark(dir(), "verify --suspect mock: --tuples missing.json").exit_code, 2);
  EXPECT_EQ(Ragmark(dir(), "verify --suspect ftp://nowhere").exit_code, 2);
  EXPECT_EQ(Ragmark(dir(), "verify --suspect mock: --no-such-flag 1").exit_code, 2);
  EXPECT_EQ(Ragmark(dir(), "tuples").exit_code, 2);  // no key
  EXPECT_EQ(Ragmark(dir(), "tuples --key zz").exit_code, 2);
  const auto o = Ragmark(dir(), "inject --n-wm 11 --mode sideways");
  EXPECT_EQ(o.exit_code, 2);
  EXPECT_NE(o.err.find("n_wm"), std::string::npos);
  EXPECT_NE(o.err.find("mode"), std::string::npos);
}

TEST_F(CliPipeline, RuntimeErrorsExitOne) {
  Spit(dir() / "broken.json", "{\"tuples\": [");
  const auto o = Ragmark(dir(), "verify --suspect mock: --tuples broken.json");
  EXPECT_EQ(o.exit_code, 1);
  EXPECT_NE(o.err.find("parse"), std::string::npos);
}

TEST_F(CliPipeline, AttackReportsFreshVerification) {
  const auto o = Ragmark(dir(), "attack --attack insert --count 50 --suspect mock:mock_ideal.json "
                            "--out attack_insert.json");
  ASSERT_EQ(o.exit_code, 0) << o.err;
  const auto report = ReadJson("attack_insert.json");
  EXPECT_EQ(report.at("attack").at("inserted"), 50);
  EXPECT_EQ(report.at("verification").at("n"), 30);

  const auto dedup = Ragmark(dir(), "attack --attack dedup --suspect mock:mock_ideal.json "
                                "--out attack_dedup.json");
  ASSERT_EQ(dedup.exit_code, 0);
  EXPECT_EQ(ReadJson("attack_dedup.json").at("verification").at("c_wm"), 30);
  EXPECT_EQ(Ragmark(dir(), "attack --attack melt --suspect mock:").exit_code, 2);
}

TEST_F(CliPipeline, MetricsReportFidelity) {
  const auto o = Ragmark(dir(), "metrics --llm mock:mock_ideal.json");
  ASSERT_EQ(o.exit_code, 0) << o.err;
  const auto m = ReadJson("metrics.json");
  EXPECT_EQ(m.at("questions"), 100);
  EXPECT_GE(m.at("cira").get<double>(), 0.0);
  EXPECT_LE(m.at("cira").get<double>(), 1.0);
}

TEST(CliRerun, ArtifactsAreByteIdentical) {
  const auto a = testing::ScratchDir("cli_rerun_a");
  const auto b = testing::ScratchDir("cli_rerun_b");
  for (const auto& d : {a, b}) {
    BuildPipeline(d);
    ASSERT_EQ(Ragmark(d, "verify --suspect mock:mock_ideal.json --suspect-kb kb_wm.jsonl "
                     "--workers 4 --seed 9")
                  .exit_code,
              0);
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename().string();
    if (name.ends_with(".meta.json")) {
      const auto meta = json::parse(Slurp(entry.path()));
      EXPECT_TRUE(meta.contains("started_at")) << name;
      continue;
    }
    if (name == "stdout.txt" || name == "stderr.txt") continue;
    EXPECT_EQ(Slurp(entry.path()), Slurp(b / name)) << name;
    EXPECT_TRUE(fs::exists(entry.path().string() + ".meta.json")) << name;
    ++compared;
  }
  EXPECT_EQ(compared, 10u);  // kb, questions, 2 mocks, 2 lists, tuples, kb_wm, 2 reports
  fs::remove_all(a);
  fs::remove_all(b);
}

}  // namespace
}  // namespace ragmark
