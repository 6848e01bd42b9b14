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

#include "commands.h"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <set>

#include "ragmark/attacks.h"
#include "ragmark/er_extract.h"
#include "ragmark/http_backend.h"
#include "ragmark/injection.h"
#include "ragmark/knowledge_base.h"
#include "ragmark/mock_chat_client.h"
#include "ragmark/rng.h"
#include "ragmark/synthetic.h"
#include "ragmark/verification.h"
#include "ragmark/watermark.h"

namespace ragmark::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using Clock = std::chrono::system_clock;

constexpr std::string_view kToolVersion = "0.1.0";
constexpr std::string_view kMockPrefix = "mock:";
constexpr std::size_t kCleanDetectSample = 2000;
constexpr std::size_t kWatermarkDetectSample = 200;

std::string Rfc3339(Clock::time_point t) {
  const std::time_t secs = Clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * v);
  return buf;
}

std::string Sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

void RequireFile(const std::string& path, std::string_view field) {
  if (path.empty()) {
    throw UsageError("missing required input --" + FlagName(field));
  }
  if (!fs::is_regular_file(path)) {
    throw UsageError("input not found: " + path + " (--" + FlagName(field) + ")");
  }
}

json ReadJson(const std::string& path, std::string_view field) {
  RequireFile(path, field);
  std::ifstream in(path, std::ios::binary);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

KnowledgeBase ReadKb(const std::string& path, std::string_view field) {
  RequireFile(path, field);
  return LoadJsonl(fs::path(path));
}

// Shared state of one invocation: the configuration, one gateway per
// backend descriptor (so the in-flight limit is per backend), and the
// optional exchange log.
class Session {
 public:
  Session(Verb verb, const RunConfig& config)
      : verb_(verb), config_(config), started_(Clock::now()) {
    if (!config_.call_log.empty()) log_ = std::make_shared<CallLog>();
  }

  const RunConfig& config() const { return config_; }

  std::shared_ptr<LlmGateway> Gateway(const std::string& descriptor, std::string_view field) {
    if (auto it = gateways_.find(descriptor); it != gateways_.end()) return it->second;
    std::shared_ptr<ChatClient> client;
    if (descriptor.starts_with(kMockPrefix)) {
      const std::string path = descriptor.substr(kMockPrefix.size());
      MockBehavior behavior;
      if (!path.empty()) {
        RequireFile(path, field);
        behavior = LoadMockBehavior(path);
      }
      client = std::make_shared<MockChatClient>(std::move(behavior));
    } else if (descriptor.starts_with("http://") || descriptor.starts_with("https://")) {
      HttpEndpoint ep;
      ep.url = descriptor;
      ep.model = config_.model;
      ep.api_key = config_.api_key;
      client = std::make_shared<HttpChatClient>(std::move(ep));
    } else {
      throw ConfigError({std::string(field) + ": backend '" + descriptor +
                         "' is neither mock:<path> nor an http(s) URL"});
    }
    auto gw = std::make_shared<LlmGateway>(std::move(client), log_,
                                           static_cast<int>(config_.max_in_flight));
    gateways_.emplace(descriptor, gw);
    return gw;
  }

  Retriever MakeRetriever(std::size_t k) {
    if (!embedder_) {
      std::shared_ptr<const Embedder> inner;
      if (config_.embedder == "hash") {
        inner = std::make_shared<HashEmbedder>(config_.embed_dim);
      } else if (config_.embedder.starts_with("http://") ||
                 config_.embedder.starts_with("https://")) {
        HttpEndpoint ep;
        ep.url = config_.embedder;
        ep.model = config_.model;
        ep.api_key = config_.api_key;
        inner = std::make_shared<HttpEmbedder>(std::move(ep), config_.embed_dim);
      } else {
        throw ConfigError({"embedder: '" + config_.embedder + "' is neither hash nor a URL"});
      }
      embedder_ = std::make_shared<CachingEmbedder>(std::move(inner));
    }
    return Retriever{embedder_, ParseMetric(config_.metric), k};
  }

  // Writes `payload` with the command and configuration echoed in, plus
  // the timestamp sidecar.
  void WriteArtifact(const std::string& path, json payload) {
    payload["command"] = VerbName(verb_);
    payload["config"] = config_.ToJson();
    payload["ragmark_version"] = kToolVersion;
    WriteText(path, payload.dump(2) + "\n");
    artifacts_.push_back(path);
  }

  void WriteKb(const KnowledgeBase& kb, const std::string& path) {
    SaveJsonl(kb, fs::path(path));
    artifacts_.push_back(path);
  }

  void WriteBehavior(const MockBehavior& behavior, const std::string& path) {
    WriteText(path, MockBehaviorToJson(behavior).dump(2) + "\n");
    artifacts_.push_back(path);
  }

  // Sidecars and the exchange log: everything that legitimately varies
  // between reruns.
  void Finish() {
    const auto finished = Clock::now();
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(finished - started_).count();
    for (const auto& path : artifacts_) {
      json meta{{"artifact", fs::path(path).filename().string()},
                {"command", VerbName(verb_)},
                {"started_at", Rfc3339(started_)},
                {"finished_at", Rfc3339(finished)},
                {"elapsed_ms", elapsed},
                {"ragmark_version", kToolVersion}};
      WriteText(path + ".meta.json", meta.dump(2) + "\n");
    }
    if (log_) log_->WriteJsonl(config_.call_log);
  }

  std::size_t ProtocolWarnings() const {
    std::size_t total = 0;
    for (const auto& [_, gw] : gateways_) total += gw->protocol_warnings();
    return total;
  }

 private:
  static void WriteText(const std::string& path, const std::string& text) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
    out << text;
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
  }

  Verb verb_;
  const RunConfig& config_;
  Clock::time_point started_;
  std::shared_ptr<CallLog> log_;
  std::map<std::string, std::shared_ptr<LlmGateway>> gateways_;
  std::shared_ptr<const Embedder> embedder_;
  std::vector<std::string> artifacts_;
};

std::string OutPath(const RunConfig& c, std::string_view fallback) {
  return c.out.empty() ? std::string(fallback) : c.out;
}

WatermarkGraph ReadGraph(const RunConfig& c) {
  return GraphFromJson(ReadJson(c.tuples, "tuples"));
}

VerifyOptions MakeVerifyOptions(const RunConfig& c) {
  VerifyOptions o;
  o.n = c.n;
  o.p0 = c.p0.value_or(DefaultP0());
  o.alpha = c.alpha;
  o.query_template = ParseQueryTemplate(static_cast<int>(c.query_template));
  o.seed = c.seed;
  o.workers = c.workers;
  return o;
}

void PrintVerification(const VerificationReport& r, std::ostream& out) {
  out << "  queries:   " << r.n << " of " << r.n_requested;
  if (r.excluded > 0) out << " (" << r.excluded << " excluded: suspect unreachable)";
  out << "\n  WSN:       " << r.c_wm << "\n  p-value:   " << Sci(r.p_value) << " (p0 "
      << r.p0 << ", alpha " << r.alpha << ")\n  WIRR:      "
      << (r.wirr ? Percent(*r.wirr) : std::string("unavailable")) << "\n  verdict:   "
      << (r.verdict ? "infringement detected" : "not detected") << "\n";
}

int CmdSynth(Session& s, std::ostream& out) {
  const auto& c = s.config();
  SyntheticOptions so;
  so.records = c.records;
  so.questions = c.question_count;
  so.seed = c.seed;
  const auto corpus = MakeSyntheticCorpus(so);

  json questions = json::array();
  for (const auto& q : corpus.questions) {
    questions.push_back({{"question", q.question}, {"record_id", q.record_id}});
  }
  MockBehavior ideal;
  ideal.seed = c.seed;
  ideal.extraction_relations = corpus.relations;
  MockBehavior clean = ideal;
  clean.leak_probability = 0.0;

  const fs::path dir(c.out_dir);
  s.WriteKb(corpus.kb, c.kb);
  s.WriteArtifact(c.questions, {{"questions", std::move(questions)}});
  s.WriteBehavior(ideal, (dir / "mock_ideal.json").string());
  s.WriteBehavior(clean, (dir / "mock_clean.json").string());

  out << "synthetic corpus\n  records:   " << corpus.kb.size() << " -> " << c.kb
      << "\n  questions: " << corpus.questions.size() << " -> " << c.questions
      << "\n  mocks:     " << (dir / "mock_ideal.json").string() << ", "
      << (dir / "mock_clean.json").string() << "\n";
  return kExitOk;
}

int CmdExtract(Session& s, std::ostream& out) {
  const auto& c = s.config();
  const auto kb = ReadKb(c.kb, "kb");
  auto gw = s.Gateway(c.Backend(c.extractor), "extractor");
  const std::size_t count = c.sample == 0 ? kb.size() : c.sample;
  const auto ids = SampleRecords(kb, count, c.seed);
  std::vector<std::string> texts;
  texts.reserve(ids.size());
  for (const auto& id : ids) texts.push_back(kb.Get(id).text());
  const auto parsed = ParseEr(*gw, texts, ids);
  const auto [entities, relations] =
      ReduceByFrequency(parsed.triples, c.entity_count, c.relation_count);

  const auto lists = ListsToJson(entities, relations);
  const json stats{{"records_sampled", ids.size()},
                   {"triples", parsed.triples.size()},
                   {"skipped", parsed.skipped}};
  s.WriteArtifact(c.entities, {{"entities", lists.at("entities")}, {"extraction", stats}});
  s.WriteArtifact(c.relations, {{"relations", lists.at("relations")}, {"extraction", stats}});

  out << "extraction\n  records:   " << ids.size() << " sampled, " << parsed.skipped
      << " unparseable\n  triples:   " << parsed.triples.size() << "\n  entities:  "
      << entities.size() << " -> " << c.entities << "\n  relations: " << relations.size()
      << " -> " << c.relations << "\n";
  return kExitOk;
}

int CmdTuples(Session& s, std::ostream& out) {
  const auto& c = s.config();
  const auto entities = RankedListFromJson(ReadJson(c.entities, "entities").at("entities"));
  const auto relations = RankedListFromJson(ReadJson(c.relations, "relations").at("relations"));
  const auto key = OwnerKey::FromHex(c.key);
  GraphOptions g;
  g.tuple_count = c.tuple_count;
  g.p = c.p;
  const auto graph = BuildGraph(key, entities, relations, g);
  s.WriteArtifact(c.tuples, GraphToJson(graph));

  out << "watermark tuples\n  key:       " << key.Fingerprint() << " (fingerprint)\n"
      << "  tuples:    " << graph.tuples.size() << " -> " << c.tuples << "\n  chain:     "
      << graph.chain.size() << " entities walked\n";
  return kExitOk;
}

int CmdInject(Session& s, std::ostream& out) {
  const auto& c = s.config();
  const auto kb = ReadKb(c.kb, "kb");
  const auto graph = ReadGraph(c);
  InjectionConfig cfg;
  cfg.n_wm = c.n_wm;
  cfg.max_epochs = c.max_epochs;
  cfg.mode = ParseInjectionMode(c.mode);
  cfg.k = c.k;
  cfg.shadow = s.Gateway(c.Backend(c.shadow), "shadow");
  cfg.gen = s.Gateway(c.Backend(c.generator), "generator");
  cfg.disc = s.Gateway(c.Backend(c.discriminator), "discriminator");
  const auto [kb_wm, report] = InjectAll(cfg, s.MakeRetriever(c.k), kb, graph);

  const std::string path = OutPath(c, "injection.json");
  s.WriteKb(kb_wm, c.kb_wm);
  s.WriteArtifact(path, ReportToJson(report));

  const std::size_t planned = graph.tuples.size() * c.n_wm;
  out << "injection (" << c.mode << ")\n  placed:    " << report.successes() << " of "
      << planned << " watermark texts\n  failed:    " << report.failed_tuples().size()
      << " tuples with no placement\n  records:   " << kb.size() << " -> " << kb_wm.size()
      << " (" << c.kb_wm << ")\n  report:    " << path << "\n";
  if (s.ProtocolWarnings() > 0) {
    out << "  warnings:  " << s.ProtocolWarnings() << " indeterminate yes/no replies\n";
  }
  return kExitOk;
}

int CmdVerify(Session& s, std::ostream& out) {
  const auto& c = s.config();
  const auto graph = ReadGraph(c);
  auto suspect_gw = s.Gateway(c.suspect, "suspect");
  auto disc = s.Gateway(c.Backend(c.discriminator), "discriminator");
  std::unique_ptr<SuspectRag> suspect;
  if (!c.suspect_kb.empty()) {
    auto kb = std::make_shared<const KnowledgeBase>(ReadKb(c.suspect_kb, "suspect_kb"));
    LocalRag::Options o;
    o.k = c.k;
    suspect = std::make_unique<LocalRag>(kb, s.MakeRetriever(c.k), suspect_gw, o);
  } else {
    suspect = std::make_unique<ChatSuspect>(suspect_gw);
  }
  const auto report = RunVerification(graph, *suspect, *disc, MakeVerifyOptions(c));
  const std::string path = OutPath(c, "verification.json");
  s.WriteArtifact(path, VerificationToJson(report));

  out << "verification of " << c.suspect << "\n";
  PrintVerification(report, out);
  out << "  report:    " << path << "\n";
  return report.verdict ? kExitOk : kExitNotDetected;
}

// Splits a base into clean and watermark records and draws the seeded
// detection samples from each.
std::pair<std::vector<TextRecord>, std::vector<TextRecord>> DetectionSamples(
    const KnowledgeBase& kb, std::uint64_t seed) {
  std::vector<std::size_t> clean_idx, wm_idx;
  for (std::size_t i = 0; i < kb.size(); ++i) {
    (kb[i].is_watermark() ? wm_idx : clean_idx).push_back(i);
  }
  auto draw = [&](std::vector<std::size_t> idx, std::size_t count, std::uint64_t s) {
    std::vector<TextRecord> out;
    for (auto i : FisherYatesPrefix(std::move(idx), count, s)) out.push_back(kb[i]);
    return out;
  };
  return {draw(std::move(clean_idx), kCleanDetectSample, seed),
          draw(std::move(wm_idx), kWatermarkDetectSample, seed + 1)};
}

KnowledgeBase Without(const KnowledgeBase& kb, const std::set<std::string>& ids) {
  KnowledgeBase out(kb.name());
  for (const auto& r : kb) {
    if (ids.count(r.id()) == 0) out.AddWithId(r.id(), r.text(), r.source_tuples());
  }
  return out;
}

int CmdAttack(Session& s, std::ostream& out) {
  const auto& c = s.config();
  auto base = ReadKb(c.kb_wm, "kb_wm");
  const auto graph = ReadGraph(c);
  auto suspect_gw = s.Gateway(c.suspect, "suspect");
  auto disc = s.Gateway(c.Backend(c.discriminator), "discriminator");
  LocalRag::Options options;
  options.k = c.k;

  AttackOutcome outcome;
  outcome.attack = c.attack;
  if (c.attack == "paraphrase") {
    options.transform = ParaphraseTransform(s.Gateway(c.Backend(c.attacker), "attacker"));
  } else if (c.attack == "remove-unrelated") {
    options.transform = RemoveUnrelatedTransform(s.Gateway(c.Backend(c.attacker), "attacker"));
  } else if (c.attack == "insert") {
    base = InsertKnowledge(base, c.count, c.seed);
    outcome.params["count"] = c.count;
    outcome.inserted = c.count;
  } else if (c.attack == "expand-k") {
    options = ExpandK(options, c.attack_k);
    outcome.params["k"] = c.attack_k;
  } else if (c.attack == "dedup") {
    options.duplicate_filter = true;
    outcome.params["window"] = kDedupWindow;
  } else if (c.attack == "perplexity") {
    const auto [clean, wm] = DetectionSamples(base, c.seed);
    std::vector<std::string> training;
    for (const auto& r : clean) training.push_back(r.text());
    const UnigramPerplexity scorer(training);
    const auto detected = PerplexityDetect(std::cref(scorer), clean, wm);
    base = Without(base, {detected.flagged_ids.begin(), detected.flagged_ids.end()});
    outcome.params = {{"clean_sample", clean.size()},
                      {"watermark_sample", wm.size()},
                      {"f1", detected.f1}};
    outcome.removed = detected.flagged_ids.size();
    if (!detected.note.empty()) outcome.notes.push_back(detected.note);
  } else if (c.attack == "distill") {
    auto extractor = s.Gateway(c.Backend(c.extractor), "extractor");
    std::vector<std::string> texts, ids;
    for (const auto& r : base) {
      texts.push_back(r.text());
      ids.push_back(r.id());
    }
    const auto parsed = ParseEr(*extractor, texts, ids);
    auto distilled = KgDistill(base, parsed.triples, c.rate);
    base = std::move(distilled.kb);
    outcome.params = {{"rate", c.rate}, {"kept_entities", distilled.kept_entities.size()}};
    outcome.removed = distilled.removed;
  } else {
    throw ConfigError({"attack: '" + c.attack + "' is unknown"});
  }

  const std::size_t width = options.k;
  LocalRag suspect(std::make_shared<const KnowledgeBase>(std::move(base)),
                   s.MakeRetriever(width), suspect_gw, std::move(options));
  const auto report = RunVerification(graph, suspect, *disc, MakeVerifyOptions(c));
  const std::string path = OutPath(c, "attack.json");
  s.WriteArtifact(path, {{"attack", AttackOutcomeToJson(outcome)},
                         {"verification", VerificationToJson(report)}});

  out << "attack " << c.attack << "\n";
  if (outcome.inserted > 0) out << "  inserted:  " << outcome.inserted << " records\n";
  if (outcome.removed > 0) out << "  removed:   " << outcome.removed << " records\n";
  if (outcome.params.contains("f1")) {
    out << "  detection: F1 " << Percent(outcome.params["f1"].get<double>()) << "\n";
  }
  PrintVerification(report, out);
  out << "  report:    " << path << "\n";
  return kExitOk;
}

int CmdMetrics(Session& s, std::ostream& out) {
  const auto& c = s.config();
  auto clean_kb = std::make_shared<const KnowledgeBase>(ReadKb(c.kb, "kb"));
  auto wm_kb = std::make_shared<const KnowledgeBase>(ReadKb(c.kb_wm, "kb_wm"));
  const auto questions = ReadJson(c.questions, "questions").at("questions");
  auto answerer = s.Gateway(c.Backend(c.answerer), "answerer");
  auto judge = s.Gateway(c.Backend(c.judge), "judge");
  LocalRag::Options o;
  o.k = c.k;
  const auto retriever = s.MakeRetriever(c.k);
  LocalRag clean(clean_kb, retriever, answerer, o);
  LocalRag wm(wm_kb, retriever, answerer, o);

  std::vector<std::vector<std::string>> clean_ids, wm_ids;
  std::vector<std::string> clean_answers, wm_answers;
  for (const auto& item : questions) {
    const auto q = item.is_string() ? item.get<std::string>()
                                    : item.at("question").get<std::string>();
    clean_ids.push_back(clean.RetrieveIds(q));
    wm_ids.push_back(wm.RetrieveIds(q));
    clean_answers.push_back(clean.Ask(q).answer);
    wm_answers.push_back(wm.Ask(q).answer);
  }
  if (clean_ids.empty()) throw Error(ErrorCode::kValidation, "question set is empty");
  const double cira = Cira(clean_ids, wm_ids);
  const auto cdpa = Cdpa(clean_answers, wm_answers, *judge);

  const std::string path = OutPath(c, "metrics.json");
  s.WriteArtifact(path, {{"questions", clean_ids.size()},
                         {"cira", cira},
                         {"cdpa", cdpa.value},
                         {"cdpa_judged", cdpa.judged},
                         {"cdpa_indeterminate", cdpa.indeterminate}});
  out << "fidelity over " << clean_ids.size() << " clean questions\n  CIRA:      "
      << Percent(cira) << "\n  CDPA:      " << Percent(cdpa.value) << " (" << cdpa.judged
      << " judged, " << cdpa.indeterminate << " indeterminate)\n  report:    " << path << "\n";
  return kExitOk;
}

}  // namespace

int RunVerb(Verb verb, const RunConfig& config, std::ostream& out) {
  Validate(config, verb);
  Session session(verb, config);
  int code = kExitError;
  switch (verb) {
    case kSynth: code = CmdSynth(session, out); break;
    case kExtract: code = CmdExtract(session, out); break;
    case kTuples: code = CmdTuples(session, out); break;
    case kInject: code = CmdInject(session, out); break;
    case kVerify: code = CmdVerify(session, out); break;
    case kAttack: code = CmdAttack(session, out); break;
    case kMetrics: code = CmdMetrics(session, out); break;
    default: throw UsageError("unknown command");
  }
  session.Finish();
  return code;
}

}  // namespace ragmark::cli
