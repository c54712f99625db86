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

#include "casegraph/annotation_io.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <tuple>

#include "casegraph/error.h"
#include "casegraph/json_codec.h"
#include "casegraph/text.h"

namespace casegraph {

namespace {

std::vector<std::string_view> SplitTabs(std::string_view line,
                                        std::size_t max_fields) {
  std::vector<std::string_view> out;
  while (out.size() + 1 < max_fields) {
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) break;
    out.push_back(line.substr(0, tab));
    line.remove_prefix(tab + 1);
  }
  out.push_back(line);
  return out;
}

std::vector<std::string_view> SplitSpaces(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool ParseOffset(std::string_view s, std::size_t *out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Orders "T2" before "T10"; ids without a numeric tail sort last by text.
std::tuple<int, std::size_t, std::string> IdKey(const std::string &id) {
  std::size_t n = 0;
  if (id.size() > 1 && ParseOffset(std::string_view(id).substr(1), &n)) {
    return {0, n, id};
  }
  return {1, 0, id};
}

[[noreturn]] void LineError(ErrorKind kind, std::size_t line,
                            const std::string &message, Json extra = nullptr) {
  Json detail = {{"line", line}};
  if (extra.is_object()) detail.update(extra);
  throw Error(kind, "line " + std::to_string(line) + ": " + message, detail);
}

struct PendingLine {
  std::size_t number;
  std::string_view content;
};

}  // namespace

AnnotationSet ParseStandoff(std::string_view text, std::string_view ann,
                            std::vector<std::string> *warnings) {
  auto warn = [&](std::size_t line, const std::string &message) {
    if (warnings) warnings->push_back("line " + std::to_string(line) + ": " + message);
  };

  const std::u32string doc = text::Decode(text);
  AnnotationSet set;
  std::set<std::string> ids;
  std::map<std::string, std::string> event_trigger;
  std::vector<PendingLine> relation_lines, note_lines;
  std::vector<std::pair<std::size_t, std::string_view>> event_lines;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < ann.size()) {
    std::size_t eol = ann.find('\n', pos);
    if (eol == std::string_view::npos) eol = ann.size();
    std::string_view line = ann.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    switch (line.front()) {
      case 'T': {
        std::vector<std::string_view> f = SplitTabs(line, 3);
        if (f.size() != 3) LineError(ErrorKind::kInvalidArgument, line_no,
                                     "expected 3 tab-separated fields");
        std::string id(f[0]);
        std::vector<std::string_view> parts = SplitSpaces(f[1]);
        if (parts.size() != 3) {
          LineError(ErrorKind::kInvalidArgument, line_no,
                    f[1].find(';') != std::string_view::npos
                        ? "discontinuous spans are not supported"
                        : "expected \"<Type> <start> <end>\"");
        }
        Span span;
        if (!ParseOffset(parts[1], &span.start) ||
            !ParseOffset(parts[2], &span.end)) {
          LineError(ErrorKind::kInvalidArgument, line_no, "offsets must be integers");
        }
        if (span.start >= span.end || span.end > doc.size()) {
          LineError(ErrorKind::kInvalidArgument, line_no,
                    "offsets [" + std::to_string(span.start) + ", " +
                        std::to_string(span.end) + ") out of bounds for text of length " +
                        std::to_string(doc.size()));
        }
        std::string covered = text::Encode(
            std::u32string_view(doc).substr(span.start, span.length()));
        if (covered != f[2]) {
          LineError(ErrorKind::kInvalidArgument, line_no,
                    "surface \"" + std::string(f[2]) + "\" does not match text \"" +
                        covered + "\"",
                    {{"surface", std::string(f[2])}, {"text", covered}});
        }
        if (!ids.insert(id).second) {
          LineError(ErrorKind::kInvalidArgument, line_no, "duplicate id " + id);
        }
        set.entities.push_back(
            {id, EntityType::Parse(parts[0]), span, std::move(covered)});
        break;
      }
      case 'E':
        event_lines.emplace_back(line_no, line);
        break;
      case 'R':
        relation_lines.push_back({line_no, line});
        break;
      case '#':
        note_lines.push_back({line_no, line});
        break;
      case 'A':
      case 'M':
      case 'N':
      case '*':
        warn(line_no, "ignored annotation line \"" +
                          std::string(SplitTabs(line, 2)[0]) + "\"");
        break;
      default:
        LineError(ErrorKind::kInvalidArgument, line_no, "unrecognized annotation line");
    }
  }

  // Events collapse onto their trigger entity.
  for (const auto &[number, line] : event_lines) {
    std::vector<std::string_view> f = SplitTabs(line, 2);
    if (f.size() != 2) LineError(ErrorKind::kInvalidArgument, number,
                                 "expected 2 tab-separated fields");
    std::vector<std::string_view> args = SplitSpaces(f[1]);
    std::size_t colon = args.empty() ? std::string_view::npos : args[0].find(':');
    if (colon == std::string_view::npos) {
      LineError(ErrorKind::kInvalidArgument, number, "expected \"<Type>:<trigger>\"");
    }
    std::string id(f[0]);
    std::string trigger(args[0].substr(colon + 1));
    if (!ids.count(trigger)) {
      LineError(ErrorKind::kDanglingReference, number,
                "event " + id + " references undefined trigger " + trigger,
                {{"missing", trigger}});
    }
    if (ids.count(id) || event_trigger.count(id)) {
      LineError(ErrorKind::kInvalidArgument, number, "duplicate id " + id);
    }
    event_trigger[id] = trigger;
    if (args.size() > 1) warn(number, "event " + id + " arguments ignored");
  }

  auto resolve = [&](std::size_t number, std::string_view ref) {
    std::string id(ref);
    if (auto it = event_trigger.find(id); it != event_trigger.end()) return it->second;
    if (!ids.count(id)) {
      LineError(ErrorKind::kDanglingReference, number,
                "reference to undefined id " + id, {{"missing", id}});
    }
    return id;
  };

  std::set<std::string> relation_ids;
  for (const PendingLine &p : relation_lines) {
    std::vector<std::string_view> f = SplitTabs(p.content, 3);
    if (f.size() == 3 && !f[2].empty()) f.pop_back();
    if (f.size() == 3) f.pop_back();
    if (f.size() != 2) LineError(ErrorKind::kInvalidArgument, p.number,
                                 "expected 2 tab-separated fields");
    std::vector<std::string_view> args = SplitSpaces(f[1]);
    if (args.size() != 3 || args[1].substr(0, 5) != "Arg1:" ||
        args[2].substr(0, 5) != "Arg2:") {
      LineError(ErrorKind::kInvalidArgument, p.number,
                "expected \"<REL> Arg1:<id> Arg2:<id>\"");
    }
    std::string id(f[0]);
    std::optional<RelationType> type = ParseRelationType(args[0]);
    if (!type) {
      warn(p.number, "unknown relation type \"" + std::string(args[0]) + "\" skipped");
      continue;
    }
    if (!relation_ids.insert(id).second) {
      LineError(ErrorKind::kInvalidArgument, p.number, "duplicate id " + id);
    }
    RelationAssertion r{id, *type, resolve(p.number, args[1].substr(5)),
                        resolve(p.number, args[2].substr(5))};
    if (r.source == r.target) {
      LineError(ErrorKind::kInvalidArgument, p.number,
                "relation " + id + " links " + r.source + " to itself");
    }
    set.relations.push_back(std::move(r));
  }

  for (const PendingLine &p : note_lines) {
    std::vector<std::string_view> f = SplitTabs(p.content, 3);
    std::vector<std::string_view> head =
        f.size() >= 2 ? SplitSpaces(f[1]) : std::vector<std::string_view>{};
    if (f.size() != 3 || head.size() != 2) {
      LineError(ErrorKind::kInvalidArgument, p.number,
                "expected \"#<n>\\tAnnotatorNotes <id>\\t<text>\"");
    }
    if (head[0] != "AnnotatorNotes") {
      warn(p.number, "note kind \"" + std::string(head[0]) + "\" ignored");
      continue;
    }
    set.notes.push_back({resolve(p.number, head[1]), std::string(f[2])});
  }

  std::stable_sort(set.entities.begin(), set.entities.end(),
                   [](const Entity &a, const Entity &b) { return IdKey(a.id) < IdKey(b.id); });
  std::stable_sort(set.relations.begin(), set.relations.end(),
                   [](const RelationAssertion &a, const RelationAssertion &b) {
                     return IdKey(a.id) < IdKey(b.id);
                   });
  return set;
}

std::string SerializeStandoff(const AnnotationSet &set) {
  std::vector<const Entity *> entities;
  for (const Entity &e : set.entities) entities.push_back(&e);
  std::stable_sort(entities.begin(), entities.end(), [](const Entity *a, const Entity *b) {
    return IdKey(a->id) < IdKey(b->id);
  });
  std::vector<const RelationAssertion *> relations;
  for (const RelationAssertion &r : set.relations) relations.push_back(&r);
  std::stable_sort(relations.begin(), relations.end(),
                   [](const RelationAssertion *a, const RelationAssertion *b) {
                     return IdKey(a->id) < IdKey(b->id);
                   });

  std::string out;
  for (const Entity *e : entities) {
    out += e->id + "\t" + e->type.AnnotationLabel() + " " +
           std::to_string(e->span.start) + " " + std::to_string(e->span.end) +
           "\t" + e->text + "\n";
  }
  for (const RelationAssertion *r : relations) {
    out += r->id + "\t" + std::string(RelationTypeName(r->type)) + " Arg1:" +
           r->source + " Arg2:" + r->target + "\n";
  }
  std::size_t n = 0;
  for (const AnnotationNote &note : set.notes) {
    out += "#" + std::to_string(++n) + "\tAnnotatorNotes " + note.target + "\t" +
           note.text + "\n";
  }
  return out;
}

CaseGraph ParseGraphJson(std::string_view json) {
  return CaseGraphFromJson(ParseJson(json));
}

std::string SerializeGraphJson(const CaseGraph &graph) {
  return ToJson(graph).dump();
}

namespace {

std::string DotQuote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string SerializeGraphDot(const CaseGraph &graph) {
  std::string out = "digraph " + DotQuote(graph.doc_id) + " {\n";
  out += "  rankdir=LR;\n  node [shape=box];\n";
  for (const GraphNode &n : graph.nodes) {
    out += "  " + DotQuote(n.node_id) + " [label=" +
           DotQuote(n.label + "\n[" + n.type.Name() + "]") + "];\n";
  }
  for (const GraphEdge &e : graph.edges) {
    out += "  " + DotQuote(e.source) + " -> " + DotQuote(e.target) + " [label=" +
           DotQuote(RelationTypeName(e.label)) +
           ", style=" + (IsTemporal(e.label) ? "solid" : "dashed") + "];\n";
  }
  return out + "}\n";
}

}  // namespace casegraph
