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

#ifndef RAGMARK_KNOWLEDGE_BASE_H_
#define RAGMARK_KNOWLEDGE_BASE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ragmark/digest.h"

namespace ragmark {

/// One knowledge-base chunk. `source_tuples` is non-empty exactly when the
/// record carries watermark text; a concatenation host can carry the texts
/// of several tuples.
class TextRecord {
 public:
  TextRecord(std::string id, std::string text,
             std::vector<std::string> source_tuples = {});

  const std::string& id() const { return id_; }
  const std::string& text() const { return text_; }
  const Digest256& content_hash() const { return content_hash_; }
  const std::vector<std::string>& source_tuples() const { return source_tuples_; }
  bool is_watermark() const { return !source_tuples_.empty(); }
  bool HasTuple(std::string_view tuple_id) const;

  friend bool operator==(const TextRecord&, const TextRecord&) = default;

 private:
  friend class KnowledgeBase;

  std::string id_;
  std::string text_;
  std::vector<std::string> source_tuples_;
  Digest256 content_hash_;
};

/// Ordered record store. Iteration order is insertion order; ids are unique.
/// Not internally synchronized: concurrent readers are fine, writers must be
/// exclusive.
class KnowledgeBase {
 public:
  explicit KnowledgeBase(std::string name = "kb") : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const std::vector<TextRecord>& records() const { return records_; }
  auto begin() const { return records_.begin(); }
  auto end() const { return records_.end(); }
  const TextRecord& operator[](std::size_t i) const { return records_[i]; }

  /// Appends a record with a store-assigned id ("r0000001", ...).
  std::string Add(std::string text, std::optional<std::string> provenance = {});

  /// Appends with a caller-chosen id; throws kConflict if taken.
  std::string AddWithId(std::string id, std::string text,
                        std::vector<std::string> provenance = {});

  void MutateText(std::string_view id, std::string new_text);

  /// Adds `tuple_id` to the record's provenance (no-op if already present).
  void StampTuple(std::string_view id, std::string_view tuple_id);

  /// Replaces the record's provenance wholesale; used for rollback.
  void SetProvenance(std::string_view id, std::vector<std::string> tuples);

  /// Drops trailing records so that size() == n. Rollback primitive for
  /// tentative direct insertions; never removes from the middle.
  void Truncate(std::size_t n);

  const TextRecord* Find(std::string_view id) const;
  const TextRecord& Get(std::string_view id) const;
  std::optional<std::size_t> IndexOf(std::string_view id) const;

  std::size_t watermark_record_count() const;

  friend bool operator==(const KnowledgeBase& a, const KnowledgeBase& b) {
    return a.records_ == b.records_;
  }

 private:
  TextRecord& Mutable(std::string_view id);
  void BumpCounter(std::string_view id);

  std::string name_;
  std::vector<TextRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t next_id_ = 1;
};

std::string FormatRecordId(std::uint64_t n);

// JSONL persistence: one object per line with
// {id, text, is_watermark, source_tuple, content_hash}.
void SaveJsonl(const KnowledgeBase& kb, std::ostream& out);
void SaveJsonl(const KnowledgeBase& kb, const std::filesystem::path& path);
KnowledgeBase LoadJsonl(std::istream& in, std::string name = "kb");
KnowledgeBase LoadJsonl(const std::filesystem::path& path);

}  // namespace ragmark

#endif  // RAGMARK_KNOWLEDGE_BASE_H_
