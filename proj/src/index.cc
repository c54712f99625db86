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

#include "casegraph/index.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <unordered_map>

#include "casegraph/error.h"
#include "casegraph/json_codec.h"

namespace casegraph {

std::string_view ProvenanceName(Provenance p) {
  return p == Provenance::kGraph ? "graph" : "keyword";
}

std::string_view SearchModeName(SearchMode mode) {
  switch (mode) {
    case SearchMode::kHybrid: return "hybrid";
    case SearchMode::kKeyword: return "keyword";
    case SearchMode::kGraph: return "graph";
  }
  return "hybrid";
}

namespace {

void SortAndTruncate(std::vector<SearchResult> *results, std::size_t k) {
  std::sort(results->begin(), results->end(),
            [](const SearchResult &a, const SearchResult &b) {
              if (a.score != b.score) return a.score > b.score;
              return a.doc_id < b.doc_id;
            });
  if (results->size() > k) results->resize(k);
}

}  // namespace

InvertedIndex::InvertedIndex(AnalyzerConfig config)
    : config_(std::move(config)) {
  config_.Validate();
}

InvertedIndex InvertedIndex::FromParts(
    AnalyzerConfig config, std::map<std::string, std::vector<Posting>> postings,
    std::map<std::string, std::size_t> doc_lengths) {
  InvertedIndex index(std::move(config));
  index.postings_ = std::move(postings);
  index.doc_lengths_ = std::move(doc_lengths);
  for (const auto &[token, list] : index.postings_) {
    for (const Posting &p : list) index.doc_tokens_[p.doc_id].push_back(token);
  }
  return index;
}

void InvertedIndex::Add(const std::string &doc_id, std::string_view text) {
  AddTokens(doc_id, Analyze(text, config_));
}

void InvertedIndex::AddTokens(const std::string &doc_id,
                              const std::vector<std::string> &tokens) {
  Remove(doc_id);
  std::map<std::string, std::uint32_t> counts;
  for (const std::string &t : tokens) ++counts[t];
  std::vector<std::string> &distinct = doc_tokens_[doc_id];
  for (const auto &[token, tf] : counts) {
    std::vector<Posting> &list = postings_[token];
    auto pos = std::lower_bound(
        list.begin(), list.end(), doc_id,
        [](const Posting &p, const std::string &id) { return p.doc_id < id; });
    list.insert(pos, Posting{doc_id, tf});
    distinct.push_back(token);
  }
  doc_lengths_[doc_id] = tokens.size();
}

bool InvertedIndex::Remove(const std::string &doc_id) {
  auto it = doc_lengths_.find(doc_id);
  if (it == doc_lengths_.end()) return false;
  doc_lengths_.erase(it);
  auto tokens = doc_tokens_.find(doc_id);
  if (tokens != doc_tokens_.end()) {
    for (const std::string &token : tokens->second) {
      auto list = postings_.find(token);
      if (list == postings_.end()) continue;
      std::erase_if(list->second,
                    [&](const Posting &p) { return p.doc_id == doc_id; });
      if (list->second.empty()) postings_.erase(list);
    }
    doc_tokens_.erase(tokens);
  }
  return true;
}

std::vector<SearchResult> InvertedIndex::Search(std::string_view query,
                                                std::size_t k,
                                                KeywordScoring scoring) const {
  std::vector<std::string> tokens = Analyze(query, config_);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  if (tokens.empty() || k == 0 || doc_lengths_.empty()) return {};

  const double n = static_cast<double>(doc_lengths_.size());
  double avg_length = 0;
  for (const auto &[id, len] : doc_lengths_) avg_length += len;
  avg_length /= n;

  std::unordered_map<std::string, double> scores;
  for (const std::string &token : tokens) {
    auto it = postings_.find(token);
    if (it == postings_.end()) continue;
    const double df = static_cast<double>(it->second.size());
    for (const Posting &p : it->second) {
      const double tf = p.tf;
      const double len = static_cast<double>(doc_lengths_.at(p.doc_id));
      double contribution;
      if (scoring == KeywordScoring::kBm25) {
        constexpr double kK1 = 1.2, kB = 0.75;
        double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        contribution = idf * tf * (kK1 + 1) /
                       (tf + kK1 * (1 - kB + kB * len / avg_length));
      } else {
        double idf = std::log(1.0 + n / (1.0 + df));
        contribution = tf * idf;
      }
      scores[p.doc_id] += contribution;
    }
  }

  std::vector<SearchResult> results;
  for (const auto &[doc_id, raw] : scores) {
    SearchResult r;
    r.doc_id = doc_id;
    r.provenance = Provenance::kKeyword;
    double len = static_cast<double>(doc_lengths_.at(doc_id));
    r.score = scoring == KeywordScoring::kTfIdf
                  ? raw / std::sqrt(std::max(len, 1.0))
                  : raw;
    results.push_back(std::move(r));
  }
  SortAndTruncate(&results, k);
  return results;
}

GraphIndex GraphIndex::FromParts(
    std::map<std::string, CaseGraph> graphs,
    std::map<std::string, temporal::TemporalGraph> closures) {
  GraphIndex index;
  for (auto &[doc_id, graph] : graphs) {
    auto closure = closures.find(doc_id);
    if (closure == closures.end()) index.Add(graph);
    else index.Add(graph, std::move(closure->second));
  }
  return index;
}

temporal::TemporalGraph GraphIndex::CloseGraph(const CaseGraph &graph) {
  std::vector<RelationAssertion> temporal_edges;
  for (const GraphEdge &e : graph.edges) {
    if (IsTemporal(e.label)) {
      temporal_edges.push_back({e.source + "->" + e.target, e.label, e.source,
                                e.target});
    }
  }
  temporal::TemporalGraph normalized = temporal::Normalize(temporal_edges);
  temporal::ConsistencyReport report = temporal::CheckConsistency(normalized);
  if (!report.consistent) {
    throw Error(ErrorKind::kInconsistent,
                "document " + graph.doc_id +
                    " has contradictory temporal relations",
                ToJson(report));
  }
  return temporal::TransitiveClosure(normalized);
}

void GraphIndex::Add(const CaseGraph &graph) { Add(graph, CloseGraph(graph)); }

void GraphIndex::Add(const CaseGraph &graph, temporal::TemporalGraph closure) {
  Remove(graph.doc_id);
  for (const GraphNode &n : graph.nodes) {
    by_label_[NormalizeNodeLabel(n.label)].insert(graph.doc_id);
    by_type_[n.type.Name()].insert(graph.doc_id);
  }
  closures_[graph.doc_id] = std::move(closure);
  graphs_[graph.doc_id] = graph;
}

bool GraphIndex::Remove(const std::string &doc_id) {
  auto it = graphs_.find(doc_id);
  if (it == graphs_.end()) return false;
  auto drop = [&](std::map<std::string, std::set<std::string>> &map,
                  const std::string &key) {
    auto entry = map.find(key);
    if (entry == map.end()) return;
    entry->second.erase(doc_id);
    if (entry->second.empty()) map.erase(entry);
  };
  for (const GraphNode &n : it->second.nodes) {
    drop(by_label_, NormalizeNodeLabel(n.label));
    drop(by_type_, n.type.Name());
  }
  graphs_.erase(it);
  closures_.erase(doc_id);
  return true;
}

std::vector<SearchResult> GraphIndex::Search(const QueryGraph &query,
                                             std::size_t k) const {
  if (query.nodes.empty() || k == 0) return {};

  struct QueryNode {
    bool by_type;
    std::string key;
  };
  std::vector<QueryNode> qnodes;
  std::unordered_map<std::string, std::size_t> qindex;
  for (const GraphNode &n : query.nodes) {
    qindex[n.node_id] = qnodes.size();
    if (n.label == "*") qnodes.push_back({true, n.type.Name()});
    else qnodes.push_back({false, NormalizeNodeLabel(n.label)});
  }

  // Documents holding a match for every query node.
  std::set<std::string> candidates;
  for (std::size_t i = 0; i < qnodes.size(); ++i) {
    const auto &map = qnodes[i].by_type ? by_type_ : by_label_;
    auto it = map.find(qnodes[i].key);
    if (it == map.end()) return {};
    if (i == 0) {
      candidates = it->second;
    } else {
      std::set<std::string> kept;
      std::set_intersection(candidates.begin(), candidates.end(),
                            it->second.begin(), it->second.end(),
                            std::inserter(kept, kept.begin()));
      candidates = std::move(kept);
    }
    if (candidates.empty()) return {};
  }

  const double total =
      static_cast<double>(query.nodes.size() + query.edges.size());
  std::vector<SearchResult> full, partial;
  for (const std::string &doc_id : candidates) {
    const CaseGraph &graph = graphs_.at(doc_id);
    const temporal::TemporalGraph &closure = closures_.at(doc_id);

    std::vector<std::vector<const GraphNode *>> matches(qnodes.size());
    std::set<std::string> matched_nodes;
    for (const GraphNode &n : graph.nodes) {
      std::string label = NormalizeNodeLabel(n.label);
      for (std::size_t i = 0; i < qnodes.size(); ++i) {
        bool hit = qnodes[i].by_type ? n.type.Name() == qnodes[i].key
                                     : label == qnodes[i].key;
        if (hit) {
          matches[i].push_back(&n);
          matched_nodes.insert(n.node_id);
        }
      }
    }

    SearchResult result;
    result.doc_id = doc_id;
    result.provenance = Provenance::kGraph;
    result.matched_nodes.assign(matched_nodes.begin(), matched_nodes.end());
    std::size_t matched_edges = 0;
    for (const GraphEdge &qe : query.edges) {
      auto s = qindex.find(qe.source), t = qindex.find(qe.target);
      if (s == qindex.end() || t == qindex.end()) continue;
      const GraphEdge *hit = nullptr;
      GraphEdge entailed;
      for (const GraphNode *x : matches[s->second]) {
        for (const GraphNode *y : matches[t->second]) {
          if (x->node_id == y->node_id) continue;
          if (IsTemporal(qe.label)) {
            if (closure.Holds(qe.label, x->node_id, y->node_id)) {
              entailed = {x->node_id, y->node_id, qe.label};
              hit = &entailed;
            }
          } else {
            for (const GraphEdge &e : graph.edges) {
              if (e.source == x->node_id && e.target == y->node_id &&
                  e.label == qe.label) {
                hit = &e;
                break;
              }
            }
          }
          if (hit) break;
        }
        if (hit) break;
      }
      if (hit) {
        ++matched_edges;
        result.matched_edges.push_back(*hit);
      }
    }
    result.score =
        static_cast<double>(query.nodes.size() + matched_edges) / total;
    if (matched_edges == query.edges.size()) {
      result.score = 1.0;
      full.push_back(std::move(result));
    } else if (result.score >= kPartialThreshold) {
      partial.push_back(std::move(result));
    }
  }
  SortAndTruncate(&full, k);
  SortAndTruncate(&partial, k);
  for (SearchResult &r : partial) {
    if (full.size() >= k) break;
    full.push_back(std::move(r));
  }
  return full;
}

SearchEngine::SearchEngine(AnalyzerConfig config, KeywordScoring scoring)
    : scoring_(scoring), inverted_(std::move(config)) {}

void SearchEngine::IndexDocument(const Document &doc, const CaseGraph &graph) {
  if (graph.doc_id != doc.doc_id) {
    throw Error(ErrorKind::kInvalidArgument,
                "graph doc id " + graph.doc_id + " does not match document " +
                    doc.doc_id);
  }
  if (std::vector<Violation> v = ValidateGraph(graph); !v.empty()) {
    throw Error(ErrorKind::kSchema,
                "invalid case graph for " + doc.doc_id + ": " + v[0].message);
  }
  // Analysis and closure happen outside the lock.
  std::vector<std::string> tokens;
  {
    std::shared_lock lock(mu_);
    tokens = Analyze(doc.text, inverted_.config());
  }
  temporal::TemporalGraph closure = GraphIndex::CloseGraph(graph);

  std::unique_lock lock(mu_);
  inverted_.AddTokens(doc.doc_id, tokens);
  graphs_.Add(graph, std::move(closure));
}

bool SearchEngine::RemoveDocument(const std::string &doc_id) {
  std::unique_lock lock(mu_);
  bool removed = inverted_.Remove(doc_id);
  removed = graphs_.Remove(doc_id) || removed;
  return removed;
}

bool SearchEngine::Contains(const std::string &doc_id) const {
  std::shared_lock lock(mu_);
  return inverted_.doc_lengths().count(doc_id) > 0;
}

std::size_t SearchEngine::size() const {
  std::shared_lock lock(mu_);
  return inverted_.doc_count();
}

std::vector<SearchResult> SearchEngine::KeywordSearch(std::string_view query,
                                                      std::size_t k) const {
  std::shared_lock lock(mu_);
  return inverted_.Search(query, k, scoring_);
}

std::vector<SearchResult> SearchEngine::GraphSearch(const QueryGraph &query,
                                                    std::size_t k) const {
  std::shared_lock lock(mu_);
  return graphs_.Search(query, k);
}

std::vector<SearchResult> SearchEngine::HybridSearch(
    std::string_view query, const Gazetteer &gazetteer, std::size_t k) const {
  ParsedQuery parsed = ParseQuery(query, gazetteer);
  std::vector<SearchResult> graph_hits, keyword_hits;
  {
    // One read lock so both engines see the same index version.
    std::shared_lock lock(mu_);
    graph_hits = graphs_.Search(parsed.graph, k);
    keyword_hits = inverted_.Search(query, k, scoring_);
  }
  std::set<std::string> seen;
  std::vector<SearchResult> merged;
  for (SearchResult &r : graph_hits) {
    seen.insert(r.doc_id);
    merged.push_back(std::move(r));
  }
  for (SearchResult &r : keyword_hits) {
    if (seen.insert(r.doc_id).second) merged.push_back(std::move(r));
  }
  if (merged.size() > k) merged.resize(k);
  return merged;
}

std::vector<SearchResult> SearchEngine::Search(std::string_view query,
                                               SearchMode mode,
                                               const Gazetteer &gazetteer,
                                               std::size_t k) const {
  switch (mode) {
    case SearchMode::kKeyword: return KeywordSearch(query, k);
    case SearchMode::kGraph: return GraphSearch(ParseQuery(query, gazetteer).graph, k);
    case SearchMode::kHybrid: break;
  }
  return HybridSearch(query, gazetteer, k);
}

InvertedIndex SearchEngine::inverted_index() const {
  std::shared_lock lock(mu_);
  return inverted_;
}

GraphIndex SearchEngine::graph_index() const {
  std::shared_lock lock(mu_);
  return graphs_;
}

void SearchEngine::Restore(InvertedIndex inverted, GraphIndex graphs) {
  std::unique_lock lock(mu_);
  inverted_ = std::move(inverted);
  graphs_ = std::move(graphs);
}

}  // namespace casegraph
