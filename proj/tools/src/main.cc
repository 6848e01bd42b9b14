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

// ragmark: command-line driver for watermarking a RAG knowledge base and
// checking a suspect system for it.

#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "commands.h"
#include "run_config.h"

namespace {

using ragmark::cli::Verb;

struct VerbInfo {
  Verb verb;
  const char* description;
};

constexpr VerbInfo kVerbs[] = {
    {ragmark::cli::kSynth, "Write a synthetic knowledge base, clean questions and mock scripts"},
    {ragmark::cli::kExtract, "Extract ranked entity and relation lists from a knowledge base"},
    {ragmark::cli::kTuples, "Derive keyed watermark tuples from the entity/relation lists"},
    {ragmark::cli::kInject, "Generate watermark texts and place them in the knowledge base"},
    {ragmark::cli::kVerify, "Query a suspect system and test for the watermark"},
    {ragmark::cli::kAttack, "Attack a watermarked system, then verify it again"},
    {ragmark::cli::kMetrics, "Measure fidelity (CIRA, CDPA) of a watermarked base"},
};

struct BoundFlag {
  const ragmark::cli::FieldSpec* field;
  CLI::Option* option;
};

}  // namespace

int main(int argc, char** argv) {
  namespace cli = ragmark::cli;

  CLI::App app{"ragmark: keyed knowledge-graph watermarks for RAG knowledge bases"};
  app.set_version_flag("--version", "ragmark 0.1.0");
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "TOML run configuration")->check(CLI::ExistingFile);

  std::map<std::string, std::string> raw;
  std::vector<std::pair<CLI::App*, std::vector<BoundFlag>>> subcommands;
  std::map<CLI::App*, Verb> verb_of;
  for (const auto& info : kVerbs) {
    auto* sub = app.add_subcommand(std::string(cli::VerbName(info.verb)), info.description);
    std::vector<BoundFlag> flags;
    for (const auto& f : cli::Fields()) {
      if ((f.verbs & info.verb) == 0) continue;
      auto* opt = sub->add_option("--" + cli::FlagName(f.name), raw[std::string(f.name)],
                                  std::string(f.help));
      flags.push_back({&f, opt});
    }
    subcommands.emplace_back(sub, std::move(flags));
    verb_of[sub] = info.verb;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitUsage;
  }

  try {
    for (const auto& [sub, flags] : subcommands) {
      if (!sub->parsed()) continue;
      cli::RunConfig config;
      if (!config_path.empty()) cli::ApplyToml(config, config_path);
      std::vector<std::string> problems;
      for (const auto& [field, option] : flags) {
        if (option->count() == 0) continue;
        try {
          cli::SetFromString(config, *field, raw[std::string(field->name)]);
        } catch (const cli::ConfigError& e) {
          problems.insert(problems.end(), e.problems().begin(), e.problems().end());
        }
      }
      if (!problems.empty()) throw cli::ConfigError(std::move(problems));
      return cli::RunVerb(verb_of.at(sub), config, std::cout);
    }
  } catch (const cli::UsageError& e) {
    std::cerr << "ragmark: " << e.what() << "\n";
    return cli::kExitUsage;
  } catch (const cli::ConfigError& e) {
    std::cerr << "ragmark: " << e.what() << "\n";
    return cli::kExitUsage;
  } catch (const ragmark::Error& e) {
    std::cerr << "ragmark: " << ragmark::ToString(e.code()) << " error: " << e.what() << "\n";
    return cli::kExitError;
  } catch (const std::exception& e) {
    std::cerr << "ragmark: error: " << e.what() << "\n";
    return cli::kExitError;
  }
  return cli::kExitUsage;
}
