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

#ifndef CASEGRAPH_ANNOTATION_IO_H_
#define CASEGRAPH_ANNOTATION_IO_H_

#include <string>
#include <string_view>
#include <vector>

#include "casegraph/corpus_model.h"

// Standoff annotation files (.txt + .ann pairs) and canonical graph JSON.
//
// Offsets in .ann files count Unicode code points, NOT bytes: "café x" puts
// "x" at offset 5 even though it starts at byte 6.

namespace casegraph {

struct AnnotationNote {
  std::string target;
  std::string text;
  friend bool operator==(const AnnotationNote &,
                         const AnnotationNote &) = default;
};

struct AnnotationSet {
  std::vector<Entity> entities;
  std::vector<RelationAssertion> relations;
  std::vector<AnnotationNote> notes;
  friend bool operator==(const AnnotationSet &, const AnnotationSet &) = default;
};

// Parses an .ann file against its document text.
//
//   T<n>\t<Type> <start> <end>\t<surface>     entity
//   R<n>\t<REL> Arg1:<id> Arg2:<id>           binary relation
//   E<n>\t<Type>:<trigger> [Role:<id>...]     event, flattened to its trigger
//   #<n>\tAnnotatorNotes <id>\t<text>         note
//
// Relations that reference an event id are re-pointed at its trigger entity.
// Attribute, normalization and equivalence lines, event roles and relation
// types outside BEFORE/AFTER/OVERLAP/IDENTICAL/MODIFY are skipped and
// reported in `warnings`.
//
// Throws Error with detail {"line": n} for malformed lines, out-of-bounds
// offsets, surface mismatches and dangling references.
AnnotationSet ParseStandoff(std::string_view text, std::string_view ann,
                            std::vector<std::string> *warnings = nullptr);

// Emits T lines ordered by numeric id, then R lines, then notes. Event
// structure is not reconstructed.
std::string SerializeStandoff(const AnnotationSet &set);

// Canonical CaseGraph JSON:
//   {"docId":str,"nodes":[{"nodeId","label","entityType"}],
//    "edges":[{"source","target","label"}]}
// Unknown fields and relation labels raise Error(kSchema) with a JSON path in
// the detail.
CaseGraph ParseGraphJson(std::string_view json);
std::string SerializeGraphJson(const CaseGraph &graph);

// Graphviz rendering: nodes labeled "label\n[entityType]", temporal edges
// solid and semantic edges dashed, each edge labeled with its relation.
std::string SerializeGraphDot(const CaseGraph &graph);

}  // namespace casegraph

#endif  // CASEGRAPH_ANNOTATION_IO_H_
