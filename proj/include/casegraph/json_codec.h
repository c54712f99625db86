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

#ifndef CASEGRAPH_JSON_CODEC_H_
#define CASEGRAPH_JSON_CODEC_H_

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "casegraph/annotation_io.h"
#include "casegraph/corpus_model.h"
#include "casegraph/error.h"
#include "casegraph/index.h"
#include "casegraph/temporal_reasoner.h"
#include "json.hpp"

// JSON shapes shared by the HTTP API and the command-line tool. Readers are
// strict: unknown fields and wrong types raise Error(kSchema) whose detail
// holds the JSON path of the offending value ({"path": "$.nodes[2].label"}).

namespace casegraph {

using Json = nlohmann::json;

// Parses JSON text. Syntax errors raise Error(kInvalidArgument) with the byte
// offset in the detail.
Json ParseJson(std::string_view text);

[[noreturn]] void ThrowSchema(const std::string &path,
                              const std::string &message);

// Strict field access for hand-written readers.
class JsonObject {
 public:
  // Throws unless `value` is an object whose keys are all in `allowed`.
  JsonObject(const Json &value, std::string path,
             std::initializer_list<std::string_view> allowed);

  bool Has(const char *key) const;
  const Json &Get(const char *key) const;  // required
  std::string String(const char *key) const;
  std::string String(const char *key, const std::string &fallback) const;
  std::size_t Index(const char *key) const;  // non-negative integer
  std::size_t Index(const char *key, std::size_t fallback) const;
  bool Bool(const char *key, bool fallback) const;
  const Json &Array(const char *key) const;  // required
  std::string PathOf(const char *key) const;

 private:
  const Json &value_;
  std::string path_;
};

Json ToJson(const CaseGraph &graph);
CaseGraph CaseGraphFromJson(const Json &value, const std::string &path = "$");

// {"id","type","start","end","text"}; type uses the canonical name.
Json ToJson(const Entity &entity);
Entity EntityFromJson(const Json &value, const std::string &path);

// {"id","type","source","target"}; type is upper case.
Json ToJson(const RelationAssertion &relation);
RelationAssertion RelationFromJson(const Json &value, const std::string &path);

// {"entities":[...],"relations":[...],"notes":[{"target","text"}]}
Json ToJson(const AnnotationSet &set);
AnnotationSet AnnotationSetFromJson(const Json &value,
                                    const std::string &path = "$");

// {"docId","title","text","sections":[{"name","start","end"}],
//  "sentences":[{"start","end"}],"sourceMeta":{...}}
Json ToJson(const Document &doc);
Document DocumentFromJson(const Json &value, const std::string &path = "$");

// Closed relations as triples: [["BEFORE",a,b],...,["OVERLAP",a,b],...].
Json ClosureToJson(const temporal::TemporalGraph &graph);
// {"status":"consistent"|"inconsistent","witnesses":[[triple,...],...]}
Json ToJson(const temporal::ConsistencyReport &report);
// {"score","applicable","satisfied"}
Json ToJson(const temporal::SatisfactionScore &score);
// [[["b"]],[["d"]],[["e","f"]]]: layers of components of node ids.
Json TimelineToJson(const temporal::Timeline &timeline);

// {"docId","score","provenance"} plus "matchedNodes" and "matchedEdges" for
// graph results.
Json ToJson(const SearchResult &result);
Json ToJson(const std::vector<SearchResult> &results);
SearchResult SearchResultFromJson(const Json &value, const std::string &path);

// A list of relations, each either {"id"?,"type","source","target"} or a
// triple ["BEFORE","a","b"]. Missing ids become R1..Rn by position.
std::vector<RelationAssertion> RelationListFromJson(
    const Json &value, const std::string &path = "$");

// Line format "BEFORE a b" with '#' comments and blank lines ignored. Throws
// Error(kInvalidArgument) with {"line": n}.
std::vector<RelationAssertion> ParseRelationList(std::string_view text);

// {"error":{"kind","message","detail"}}
Json ErrorToJson(const Error &error);

}  // namespace casegraph

#endif  // CASEGRAPH_JSON_CODEC_H_
