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

#include "casegraph/extraction.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "casegraph/error.h"
#include "casegraph/temporal_reasoner.h"
#include "casegraph/text.h"

namespace casegraph {

namespace {

bool IsJoiner(char32_t c) { return c == '-' || c == '\'' || c == 0x2019; }

std::string JoinTokens(const std::vector<Token> &tokens, std::size_t begin,
                       std::size_t end) {
  std::u32string key;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) key.push_back(' ');
    key += tokens[i].lower;
  }
  return text::Encode(key);
}

bool OnlySpaceBetween(std::u32string_view text, std::size_t from,
                      std::size_t to) {
  for (std::size_t i = from; i < to; ++i) {
    if (!text::IsSpace(text[i])) return false;
  }
  return true;
}

}  // namespace

std::vector<Token> Tokenize(std::u32string_view text) {
  std::vector<Token> tokens;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    if (!text::IsAlnum(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < n) {
      if (text::IsAlnum(text[j])) {
        ++j;
      } else if (j + 1 < n && text::IsAlnum(text[j + 1]) &&
                 (IsJoiner(text[j]) ||
                  (text[j] == '.' && text::IsDigit(text[j - 1]) &&
                   text::IsDigit(text[j + 1])))) {
        j += 2;
      } else {
        break;
      }
    }
    tokens.push_back({{i, j}, text::ToLower(text.substr(i, j - i))});
    i = j;
  }
  return tokens;
}

void Gazetteer::Add(std::string_view term, EntityType type) {
  std::vector<Token> tokens = Tokenize(text::Decode(term));
  if (tokens.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "gazetteer term \"" + std::string(term) + "\" has no tokens");
  }
  entries_.insert_or_assign(JoinTokens(tokens, 0, tokens.size()),
                            std::move(type));
  max_term_tokens_ = std::max(max_term_tokens_, tokens.size());
}

const EntityType *Gazetteer::Find(const std::string &normalized) const {
  auto it = entries_.find(normalized);
  return it == entries_.end() ? nullptr : &it->second;
}

Gazetteer Gazetteer::FromTsv(std::string_view tsv) {
  Gazetteer g;
  std::istringstream in{std::string(tsv)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::Trim(line).empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorKind::kInvalidArgument,
                  "gazetteer line " + std::to_string(line_no) +
                      ": expected term<TAB>EntityType",
                  {{"line", line_no}});
    }
    std::string term = text::Trim(line.substr(0, tab));
    std::string type = text::Trim(line.substr(tab + 1));
    if (term.empty() || Tokenize(text::Decode(term)).empty()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "gazetteer line " + std::to_string(line_no) + ": empty term",
                  {{"line", line_no}});
    }
    g.Add(term, EntityType::Parse(type));
  }
  return g;
}

Gazetteer Gazetteer::Load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open gazetteer " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromTsv(buffer.str());
}

const std::vector<std::string> kSentenceAbbreviations = {
    "dr.",  "fig.", "figs.", "e.g.", "i.e.", "mg.", "vs.",    "mr.", "mrs.",
    "ms.",  "prof.", "st.",  "no.",  "al.",  "cf.", "approx.", "ca.",
};

namespace {

bool EndsWithAbbreviation(std::u32string_view text, std::size_t period) {
  std::size_t begin = period;
  while (begin > 0 && !text::IsSpace(text[begin - 1])) --begin;
  // Ignore opening brackets and quotes glued to the word.
  while (begin < period && !text::IsAlnum(text[begin])) ++begin;
  std::string word =
      text::Encode(text::ToLower(text.substr(begin, period + 1 - begin)));
  return std::find(kSentenceAbbreviations.begin(),
                   kSentenceAbbreviations.end(),
                   word) != kSentenceAbbreviations.end();
}

void PushTrimmed(std::u32string_view text, std::size_t begin, std::size_t end,
                 std::size_t base, std::vector<Span> *out) {
  while (begin < end && text::IsSpace(text[begin])) ++begin;
  while (end > begin && text::IsSpace(text[end - 1])) --end;
  if (begin < end) out->push_back({base + begin, base + end});
}

}  // namespace

std::vector<Span> SegmentSentences(std::u32string_view text,
                                   std::size_t base_offset) {
  std::vector<Span> spans;
  const std::size_t n = text.size();
  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    char32_t c = text[i];
    if (c == '\n') {
      std::size_t j = i + 1;
      while (j < n && text::IsSpace(text[j]) && text[j] != '\n') ++j;
      if (j < n && text[j] == '\n') {
        PushTrimmed(text, start, i, base_offset, &spans);
        start = j;
        i = j;
      }
      continue;
    }
    if (c != '.' && c != '?' && c != '!') continue;
    std::size_t j = i + 1;
    if (j >= n || !text::IsSpace(text[j])) continue;
    while (j < n && text::IsSpace(text[j])) ++j;
    if (j >= n || !text::IsUpper(text[j])) continue;
    if (c == '.' && EndsWithAbbreviation(text, i)) continue;
    PushTrimmed(text, start, i + 1, base_offset, &spans);
    start = i + 1;
  }
  PushTrimmed(text, start, n, base_offset, &spans);
  return spans;
}

std::vector<Span> SegmentSentences(std::string_view text) {
  return SegmentSentences(text::Decode(text), 0);
}

std::vector<Entity> ExtractEntities(std::string_view input,
                                    const Gazetteer &gazetteer) {
  std::vector<Entity> out;
  if (gazetteer.size() == 0) return out;
  const std::u32string decoded = text::Decode(input);
  const std::vector<Token> tokens = Tokenize(decoded);
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t longest = std::min(gazetteer.max_term_tokens(),
                                   tokens.size() - i);
    bool matched = false;
    for (std::size_t len = longest; len >= 1; --len) {
      // Multi-token terms must not straddle punctuation.
      bool contiguous = true;
      for (std::size_t k = i + 1; k < i + len && contiguous; ++k) {
        contiguous = OnlySpaceBetween(decoded, tokens[k - 1].span.end,
                                      tokens[k].span.start);
      }
      if (!contiguous) continue;
      const EntityType *type = gazetteer.Find(JoinTokens(tokens, i, i + len));
      if (!type) continue;
      Span span{tokens[i].span.start, tokens[i + len - 1].span.end};
      out.push_back({"T" + std::to_string(out.size() + 1), *type, span,
                     text::Encode(std::u32string_view(decoded).substr(
                         span.start, span.length()))});
      i += len;
      matched = true;
      break;
    }
    if (!matched) ++i;
  }
  return out;
}

std::string_view RelationSourceName(RelationSource source) {
  switch (source) {
    case RelationSource::kCoordination: return "Coordination";
    case RelationSource::kCue: return "Cue";
    case RelationSource::kNarrativeOrder: return "NarrativeOrder";
  }
  return "Cue";
}

namespace {

struct Candidate {
  RelationType type;
  std::string source;
  std::string target;
  RelationSource origin;
};

// True when the gap holds at least one connector and nothing but commas,
// whitespace and the words "and", "or", "with".
bool IsCoordinationGap(std::u32string_view gap) {
  bool connector = false;
  std::size_t i = 0;
  while (i < gap.size()) {
    char32_t c = gap[i];
    if (text::IsSpace(c)) {
      ++i;
    } else if (c == ',') {
      connector = true;
      ++i;
    } else if (text::IsAlnum(c)) {
      std::size_t j = i;
      while (j < gap.size() && text::IsAlnum(gap[j])) ++j;
      std::string word = text::Encode(text::ToLower(gap.substr(i, j - i)));
      if (word != "and" && word != "or" && word != "with") return false;
      connector = true;
      i = j;
    } else {
      return false;
    }
  }
  return connector;
}

temporal::TemporalLink NormalizedLink(const Candidate &c) {
  if (c.type == RelationType::kAfter) {
    return {RelationType::kBefore, c.target, c.source};
  }
  if (c.type == RelationType::kOverlap && c.target < c.source) {
    return {RelationType::kOverlap, c.target, c.source};
  }
  return {c.type, c.source, c.target};
}

std::vector<RelationAssertion> ToAssertions(
    const std::vector<Candidate> &candidates) {
  std::vector<RelationAssertion> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Candidate &c = candidates[i];
    out.push_back({"R" + std::to_string(i + 1), c.type, c.source, c.target});
  }
  return out;
}

}  // namespace

ExtractionResult ExtractRelations(const Document &doc,
                                  const std::vector<Entity> &entities,
                                  ExtractionOptions options) {
  ExtractionResult result;
  result.entities = entities;
  if (entities.size() < 2) return result;

  const std::u32string decoded = text::Decode(doc.text);
  const std::vector<Span> sentences =
      doc.sentences.empty() ? SegmentSentences(decoded) : doc.sentences;
  const std::vector<Token> tokens = Tokenize(decoded);

  std::vector<const Entity *> sorted;
  for (const Entity &e : entities) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](const Entity *a, const Entity *b) {
    return a->span < b->span;
  });

  // Entities and tokens per sentence; an entity belongs to the sentence
  // holding its start offset.
  std::vector<std::vector<const Entity *>> by_sentence(sentences.size());
  std::vector<std::vector<const Token *>> sentence_tokens(sentences.size());
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    for (const Entity *e : sorted) {
      if (e->span.start >= sentences[s].start &&
          e->span.start < sentences[s].end) {
        by_sentence[s].push_back(e);
      }
    }
    for (const Token &t : tokens) {
      if (t.span.start >= sentences[s].start && t.span.end <= sentences[s].end)
        sentence_tokens[s].push_back(&t);
    }
  }

  std::vector<Candidate> candidates;
  std::set<std::pair<std::string, std::string>> related;
  auto propose = [&](RelationType type, const Entity *a, const Entity *b,
                     RelationSource origin) {
    if (!a || !b || a->id == b->id) return;
    auto key = std::minmax(a->id, b->id);
    if (!related.emplace(key.first, key.second).second) return;
    candidates.push_back({type, a->id, b->id, origin});
  };

  // Coordination.
  for (const auto &ents : by_sentence) {
    for (std::size_t i = 0; i + 1 < ents.size(); ++i) {
      const Entity *a = ents[i], *b = ents[i + 1];
      if (a->type != b->type || b->span.start < a->span.end) continue;
      std::u32string_view gap = std::u32string_view(decoded).substr(
          a->span.end, b->span.start - a->span.end);
      if (IsCoordinationGap(gap)) {
        propose(RelationType::kOverlap, a, b, RelationSource::kCoordination);
      }
    }
  }

  // Cues.
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const auto &ents = by_sentence[s];
    const auto &toks = sentence_tokens[s];
    for (std::size_t t = 0; t < toks.size(); ++t) {
      const std::u32string &word = toks[t]->lower;
      RelationType type;
      std::size_t cue_end = toks[t]->span.end;
      if (word == U"after" || word == U"following") {
        type = RelationType::kAfter;
      } else if (word == U"before") {
        type = RelationType::kBefore;
      } else if (word == U"prior" && t + 1 < toks.size() &&
                 toks[t + 1]->lower == U"to") {
        type = RelationType::kBefore;
        cue_end = toks[t + 1]->span.end;
      } else {
        continue;
      }
      const std::size_t cue_start = toks[t]->span.start;
      const Entity *object = nullptr;
      for (const Entity *e : ents) {
        if (e->span.start >= cue_end) {
          object = e;
          break;
        }
      }
      if (!object) continue;
      const Entity *head = nullptr;
      for (const Entity *e : ents) {
        if (e->span.end <= cue_start) {
          head = e;
          break;
        }
      }
      if (!head) {
        for (const Entity *e : ents) {
          if (e->span.start >= object->span.end) {
            head = e;
            break;
          }
        }
      }
      propose(type, head, object, RelationSource::kCue);
    }
    if (s > 0 && !toks.empty() && !ents.empty() &&
        !by_sentence[s - 1].empty()) {
      const std::u32string &first = toks.front()->lower;
      if (first == U"then" || first == U"subsequently" || first == U"later") {
        propose(RelationType::kBefore, by_sentence[s - 1].back(), ents.front(),
                RelationSource::kCue);
      }
    }
  }

  if (options.narrative_order) {
    const Entity *previous = nullptr;
    for (const auto &ents : by_sentence) {
      if (ents.empty()) continue;
      if (previous) {
        propose(RelationType::kBefore, previous, ents.front(),
                RelationSource::kNarrativeOrder);
      }
      previous = ents.front();
    }
  }

  // Repair: drop the lowest-priority relation that takes part in a witness
  // until the set is consistent. Candidates are in priority order, so the
  // last implicated candidate is the one to drop.
  while (true) {
    temporal::ConsistencyReport report =
        temporal::CheckConsistency(temporal::Normalize(ToAssertions(candidates)));
    if (report.consistent) break;
    std::set<temporal::TemporalLink> implicated;
    for (const auto &chain : report.witnesses) {
      for (temporal::TemporalLink link : chain) {
        if (link.type == RelationType::kOverlap && link.target < link.source)
          std::swap(link.source, link.target);
        implicated.insert(link);
      }
    }
    std::size_t drop = candidates.size();
    for (std::size_t i = candidates.size(); i-- > 0;) {
      if (implicated.count(NormalizedLink(candidates[i]))) {
        drop = i;
        break;
      }
    }
    if (drop == candidates.size()) {
      throw Error(ErrorKind::kInternal,
                  "relation repair found no implicated relation");
    }
    const Candidate &c = candidates[drop];
    result.dropped.push_back(std::string(RelationTypeName(c.type)) + " " +
                             c.source + " " + c.target);
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(drop));
  }

  result.relations = ToAssertions(candidates);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    result.confidence[result.relations[i].id] = candidates[i].origin;
  }
  return result;
}

ParsedQuery ParseQuery(std::string_view query, const Gazetteer &gazetteer) {
  Document doc;
  doc.text = std::string(query);
  const std::u32string decoded = text::Decode(query);
  doc.sentences = SegmentSentences(decoded);

  ParsedQuery parsed;
  std::vector<Entity> entities = ExtractEntities(query, gazetteer);
  parsed.extraction = ExtractRelations(doc, entities);
  parsed.graph = BuildCaseGraph(doc, parsed.extraction.entities,
                                parsed.extraction.relations);

  std::u32string residual;
  std::size_t pos = 0;
  for (const Entity &e : entities) {
    residual += decoded.substr(pos, e.span.start - pos);
    residual.push_back(' ');
    pos = e.span.end;
  }
  residual += decoded.substr(std::min(pos, decoded.size()));
  std::u32string collapsed;
  bool pending = false;
  for (char32_t c : residual) {
    if (text::IsSpace(c)) {
      pending = !collapsed.empty();
      continue;
    }
    if (pending) collapsed.push_back(' ');
    pending = false;
    collapsed.push_back(c);
  }
  parsed.residual = text::Encode(collapsed);
  return parsed;
}

}  // namespace casegraph
