// Copyright 2026 The CaseGraph Authors.
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

#ifndef CASEGRAPH_EXTRACTION_H_
#define CASEGRAPH_EXTRACTION_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "casegraph/corpus_model.h"

// Dictionary-based extraction: sentence splitting, longest-match entity
// tagging and cue-driven temporal relation heuristics. Everything here works
// in code-point offsets.

namespace casegraph {

// A word-level token. Hyphens and apostrophes between letters or digits stay
// inside the token ("non-st-elevation"), and so does a '.' between digits
// ("2.5").
struct Token {
  Span span;
  std::u32string lower;
};

std::vector<Token> Tokenize(std::u32string_view text);

class Gazetteer {
 public:
  Gazetteer() = default;

  // Reads "term<TAB>EntityType" lines. Blank lines and lines starting with
  // '#' are skipped. Throws Error(kInvalidArgument) with the line number for
  // lines without a tab or with an empty term.
  static Gazetteer FromTsv(std::string_view tsv);
  static Gazetteer Load(const std::string &path);

  // Later additions of the same normalized term overwrite earlier ones.
  void Add(std::string_view term, EntityType type);

  // Looks up a normalized term ("chest pain").
  const EntityType *Find(const std::string &normalized) const;

  std::size_t size() const { return entries_.size(); }
  std::size_t max_term_tokens() const { return max_term_tokens_; }
  const std::map<std::string, EntityType> &entries() const { return entries_; }

 private:
  std::map<std::string, EntityType> entries_;
  std::size_t max_term_tokens_ = 0;
};

// Splits at '.', '?' or '!' followed by whitespace and an upper-case letter,
// and at blank lines. No split after the abbreviations in
// kSentenceAbbreviations. Returned spans are trimmed of whitespace.
std::vector<Span> SegmentSentences(std::string_view text);
std::vector<Span> SegmentSentences(std::u32string_view text,
                                   std::size_t base_offset = 0);

extern const std::vector<std::string> kSentenceAbbreviations;

// Longest match first, left to right, case-insensitive and aligned to token
// boundaries. Multi-token matches only span whitespace between tokens. Ids
// are T1..Tn in span order; entity text keeps the original surface.
std::vector<Entity> ExtractEntities(std::string_view text,
                                    const Gazetteer &gazetteer);

enum class RelationSource { kCoordination, kCue, kNarrativeOrder };
std::string_view RelationSourceName(RelationSource source);

struct ExtractionOptions {
  // Chain the first entities of successive sentences with BEFORE.
  bool narrative_order = false;
};

struct ExtractionResult {
  std::vector<Entity> entities;
  std::vector<RelationAssertion> relations;
  std::map<std::string, RelationSource> confidence;  // relation id -> source
  std::vector<std::string> dropped;  // descriptions of repaired conflicts
};

// Heuristic temporal relations, highest priority first:
//   coordination  same-type entities in one sentence joined only by ',',
//                 "and", "or" or "with" -> OVERLAP
//   cue           "after X"/"following X" -> AFTER(first entity, X);
//                 "before X"/"prior to X" -> BEFORE(first entity, X);
//                 "then"/"subsequently"/"later" opening a sentence ->
//                 BEFORE(last entity of previous sentence, first entity)
//   narrative     optional, see ExtractionOptions
// The first entity is the sentence's first entity ahead of the cue, or the
// first one after X when the cue opens the clause. A pair already related by a
// higher-priority rule is skipped. If the result is inconsistent, the
// lowest-priority relation taking part in a witness is dropped until the set
// is consistent. Relation ids are R1..Rn.
//
// `doc.sentences` is used when present, otherwise the text is segmented.
ExtractionResult ExtractRelations(const Document &doc,
                                  const std::vector<Entity> &entities,
                                  ExtractionOptions options = {});

struct ParsedQuery {
  QueryGraph graph;
  ExtractionResult extraction;
  std::string residual;  // query text minus entity spans, whitespace collapsed
};

ParsedQuery ParseQuery(std::string_view text, const Gazetteer &gazetteer);

}  // namespace casegraph

#endif  // CASEGRAPH_EXTRACTION_H_
