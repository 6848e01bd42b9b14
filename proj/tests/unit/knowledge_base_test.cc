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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fixtures.h"
#include "oracles.h"

namespace ragmark {
namespace {

using testing::CodeOf;

TEST(KnowledgeBase, FirstInsertGetsFirstId) {
  KnowledgeBase kb;
  const auto id = kb.Add("covid study abstract");
  EXPECT_EQ(id, "r0000001");
  EXPECT_FALSE(kb.Get(id).is_watermark());
}

TEST(KnowledgeBase, SameTextTwiceGivesDistinctIdsEqualHash) {
  KnowledgeBase kb;
  const auto a = kb.Add("same");
  const auto b = kb.Add("same");
  EXPECT_NE(a, b);
  EXPECT_EQ(kb.Get(a).content_hash(), kb.Get(b).content_hash());
}

TEST(KnowledgeBase, ContentHashIsSha256OfText) {
  KnowledgeBase kb;
  const auto id = kb.Add("hash me");
  oracle::Digest expected = oracle::Sha256(oracle::ToBytes("hash me"));
  EXPECT_TRUE(std::equal(expected.begin(), expected.end(), kb.Get(id).content_hash().begin()));
}

TEST(KnowledgeBase, Errors) {
  KnowledgeBase kb;
  EXPECT_EQ(CodeOf([&] { kb.Add(""); }), ErrorCode::kValidation);
  kb.AddWithId("x1", "text");
  EXPECT_EQ(CodeOf([&] { kb.AddWithId("x1", "other"); }), ErrorCode::kConflict);
  EXPECT_EQ(CodeOf([&] { kb.MutateText("nope", "a"); }), ErrorCode::kNotFound);
  EXPECT_EQ(CodeOf([&] { kb.Get("nope"); }), ErrorCode::kNotFound);
}

TEST(KnowledgeBase, MutateTracksContent) {
  KnowledgeBase kb;
  const auto id = kb.Add("A.");
  const auto before = kb.Get(id).content_hash();
  kb.MutateText(id, "A.");
  EXPECT_EQ(kb.Get(id).content_hash(), before);
  kb.MutateText(id, "A. B.");
  EXPECT_NE(kb.Get(id).content_hash(), before);
}

TEST(KnowledgeBase, ProvenanceMarksWatermark) {
  KnowledgeBase kb;
  const auto id = kb.Add("host");
  kb.StampTuple(id, "t1");
  kb.StampTuple(id, "t1");
  kb.StampTuple(id, "t2");
  EXPECT_TRUE(kb.Get(id).is_watermark());
  EXPECT_EQ(kb.Get(id).source_tuples(), (std::vector<std::string>{"t1", "t2"}));
  EXPECT_EQ(kb.watermark_record_count(), 1u);
}

TEST(KnowledgeBase, TruncateRestoresIdCounter) {
  KnowledgeBase kb;
  kb.Add("a");
  kb.Add("b");
  const auto dropped = kb.Add("c");
  kb.Truncate(2);
  EXPECT_EQ(kb.size(), 2u);
  EXPECT_EQ(kb.Find(dropped), nullptr);
  EXPECT_EQ(kb.Add("d"), dropped);
}

TEST(KnowledgeBaseJsonl, RoundTripPreservesOrderAndHashes) {
  KnowledgeBase kb;
  kb.Add("first record");
  kb.AddWithId("custom", "second record", {"t0001"});
  kb.Add("third record");
  std::stringstream buf;
  SaveJsonl(kb, buf);
  const auto back = LoadJsonl(buf);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back, kb);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].id(), kb[i].id());
    EXPECT_EQ(back[i].content_hash(), kb[i].content_hash());
  }
}

TEST(KnowledgeBaseJsonl, TruncatedFileReportsLine) {
  KnowledgeBase kb;
  kb.Add("one");
  kb.Add("two");
  std::stringstream buf;
  SaveJsonl(kb, buf);
  std::string text = buf.str();
  text.resize(text.size() - 10);
  std::stringstream in(text);
  try {
    LoadJsonl(in);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(KnowledgeBaseJsonl, HashMismatchIsParseError) {
  std::stringstream in(
      R"({"id":"r1","text":"a","is_watermark":false,"source_tuple":null,"content_hash":"00"})");
  EXPECT_EQ(CodeOf([&] { LoadJsonl(in); }), ErrorCode::kParse);
}

TEST(KnowledgeBaseJsonl, EmptyFileGivesEmptyBase) {
  std::stringstream in("");
  EXPECT_TRUE(LoadJsonl(in).empty());
}

TEST(KnowledgeBaseJsonl, FileRoundTrip) {
  const auto dir = testing::ScratchDir("kb_file");
  KnowledgeBase kb;
  kb.Add("persisted");
  SaveJsonl(kb, dir / "kb.jsonl");
  EXPECT_EQ(LoadJsonl(dir / "kb.jsonl"), kb);
  EXPECT_EQ(CodeOf([&] { LoadJsonl(dir / "missing.jsonl"); }), ErrorCode::kIo);
}

}  // namespace
}  // namespace ragmark
