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

#include "ragmark/knowledge_base.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "ragmark/error.h"

namespace ragmark {

using json = nlohmann::json;

TextRecord::TextRecord(std::string id, std::string text,
                       std::vector<std::string> source_tuples)
    : id_(std::move(id)),
      text_(std::move(text)),
      source_tuples_(std::move(source_tuples)),
      content_hash_(Sha256(text_)) {}

bool TextRecord::HasTuple(std::string_view tuple_id) const {
  return std::find(source_tuples_.begin(), source_tuples_.end(), tuple_id) !=
         source_tuples_.end();
}

std::string FormatRecordId(std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "r%07llu", static_cast<unsigned long long>(n));
  return buf;
}

std::string KnowledgeBase::Add(std::string text, std::optional<std::string> provenance) {
  std::string id;
  do {
    id = FormatRecordId(next_id_++);
  } while (index_.contains(id));
  std::vector<std::string> tuples;
  if (provenance) tuples.push_back(std::move(*provenance));
  return AddWithId(std::move(id), std::move(text), std::move(tuples));
}

std::string KnowledgeBase::AddWithId(std::string id, std::string text,
                                     std::vector<std::string> provenance) {
  if (text.empty()) throw Error(ErrorCode::kValidation, "record text must be non-empty");
  if (id.empty()) throw Error(ErrorCode::kValidation, "record id must be non-empty");
  if (index_.contains(id)) throw Error(ErrorCode::kConflict, "duplicate record id " + id);
  BumpCounter(id);
  index_.emplace(id, records_.size());
  records_.emplace_back(id, std::move(text), std::move(provenance));
  return id;
}

void KnowledgeBase::BumpCounter(std::string_view id) {
  if (id.size() < 2 || id[0] != 'r') return;
  std::uint64_t n = 0;
  auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), n);
  if (ec == std::errc() && ptr == id.data() + id.size() && n >= next_id_) {
    next_id_ = n + 1;
  }
}

TextRecord& KnowledgeBase::Mutable(std::string_view id) {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown record id " + std::string(id));
  }
  return records_[it->second];
}

void KnowledgeBase::MutateText(std::string_view id, std::string new_text) {
  if (new_text.empty()) throw Error(ErrorCode::kValidation, "record text must be non-empty");
  auto& rec = Mutable(id);
  rec.text_ = std::move(new_text);
  rec.content_hash_ = Sha256(rec.text_);
}

void KnowledgeBase::StampTuple(std::string_view id, std::string_view tuple_id) {
  auto& rec = Mutable(id);
  if (!rec.HasTuple(tuple_id)) rec.source_tuples_.emplace_back(tuple_id);
}

void KnowledgeBase::SetProvenance(std::string_view id, std::vector<std::string> tuples) {
  Mutable(id).source_tuples_ = std::move(tuples);
}

void KnowledgeBase::Truncate(std::size_t n) {
  while (records_.size() > n) {
    index_.erase(records_.back().id());
    records_.pop_back();
  }
  // Hand out the dropped ids again so a rolled-back insertion leaves no gap.
  next_id_ = 1;
  for (const auto& r : records_) BumpCounter(r.id());
}

const TextRecord* KnowledgeBase::Find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

const TextRecord& KnowledgeBase::Get(std::string_view id) const {
  const auto* rec = Find(id);
  if (rec == nullptr) throw Error(ErrorCode::kNotFound, "unknown record id " + std::string(id));
  return *rec;
}

std::optional<std::size_t> KnowledgeBase::IndexOf(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t KnowledgeBase::watermark_record_count() const {
  return static_cast<std::size_t>(std::count_if(
      records_.begin(), records_.end(), [](const auto& r) { return r.is_watermark(); }));
}

void SaveJsonl(const KnowledgeBase& kb, std::ostream& out) {
  for (const auto& rec : kb) {
    json line = {
        {"id", rec.id()},
        {"text", rec.text()},
        {"is_watermark", rec.is_watermark()},
        {"source_tuple", rec.is_watermark() ? json(rec.source_tuples()) : json(nullptr)},
        {"content_hash", ToHex(rec.content_hash())},
    };
    out << line.dump() << '\n';
  }
}

void SaveJsonl(const KnowledgeBase& kb, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  SaveJsonl(kb, out);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

KnowledgeBase LoadJsonl(std::istream& in, std::string name) {
  KnowledgeBase kb(std::move(name));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, e.what());
    }
    try {
      std::vector<std::string> tuples;
      const auto& st = obj.at("source_tuple");
      if (st.is_string()) {
        tuples.push_back(st.get<std::string>());
      } else if (st.is_array()) {
        tuples = st.get<std::vector<std::string>>();
      } else if (!st.is_null()) {
        throw ParseError(line_no, "source_tuple must be null, a string or an array");
      }
      const bool flag = obj.at("is_watermark").get<bool>();
      if (flag != !tuples.empty()) {
        throw ParseError(line_no, "is_watermark disagrees with source_tuple");
      }
      auto id = obj.at("id").get<std::string>();
      auto text = obj.at("text").get<std::string>();
      kb.AddWithId(id, std::move(text), std::move(tuples));
      if (auto it = obj.find("content_hash"); it != obj.end()) {
        if (it->get<std::string>() != ToHex(kb.Get(id).content_hash())) {
          throw ParseError(line_no, "content_hash does not match text");
        }
      }
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return kb;
}

KnowledgeBase LoadJsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return LoadJsonl(in, path.stem().string());
}

}  // namespace ragmark
