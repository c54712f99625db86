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

#ifndef CASEGRAPH_INDEX_H_
#define CASEGRAPH_INDEX_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "casegraph/analyzer.h"
#include "casegraph/corpus_model.h"
#include "casegraph/extraction.h"
#include "casegraph/temporal_reasoner.h"

namespace casegraph {

enum class Provenance { kGraph, kKeyword };
std::string_view ProvenanceName(Provenance p);  // "graph" / "keyword"

struct SearchResult {
  std::string doc_id;
  // In [0, 1] for graph results; unnormalized for keyword results.
  double score = 0;
  Provenance provenance = Provenance::kKeyword;
  // Graph results only.
  std::vector<std::string> matched_nodes;
  std::vector<GraphEdge> matched_edges;

  friend bool operator==(const SearchResult &, const SearchResult &) = default;
};

enum class KeywordScoring { kTfIdf, kBm25 };

struct Posting {
  std::string doc_id;
  std::uint32_t tf = 0;
  friend bool operator==(const Posting &, const Posting &) = default;
};

// In-process n-gram inverted index. Postings are sorted by doc id.
class InvertedIndex {
 public:
  explicit InvertedIndex(AnalyzerConfig config = AnalyzerConfig::Default());

  // Rebuilds an index from its persisted parts.
  static InvertedIndex FromParts(
      AnalyzerConfig config, std::map<std::string, std::vector<Posting>> postings,
      std::map<std::string, std::size_t> doc_lengths);

  // Replaces any previous content for `doc_id`.
  void Add(const std::string &doc_id, std::string_view text);
  void AddTokens(const std::string &doc_id,
                 const std::vector<std::string> &tokens);
  bool Remove(const std::string &doc_id);

  // Scores every document sharing an analyzed token with the query.
  //   tf-idf: sum over distinct query tokens of tf * ln(1 + N / (1 + df)),
  //           divided by sqrt(document length)
  //   bm25:   k1 = 1.2, b = 0.75
  // Top k by score, ties broken by doc id.
  std::vector<SearchResult> Search(
      std::string_view query, std::size_t k,
      KeywordScoring scoring = KeywordScoring::kTfIdf) const;

  const AnalyzerConfig &config() const { return config_; }
  const std::map<std::string, std::vector<Posting>> &postings() const {
    return postings_;
  }
  const std::map<std::string, std::size_t> &doc_lengths() const {
    return doc_lengths_;
  }
  std::size_t doc_count() const { return doc_lengths_.size(); }

  bool operator==(const InvertedIndex &other) const {
    return postings_ == other.postings_ && doc_lengths_ == other.doc_lengths_;
  }

 private:
  AnalyzerConfig config_;
  std::map<std::string, std::vector<Posting>> postings_;
  std::map<std::string, std::size_t> doc_lengths_;
  // doc id -> distinct tokens, for removal.
  std::map<std::string, std::vector<std::string>> doc_tokens_;
};

// Case graphs with precomputed temporal closures, keyed by document.
class GraphIndex {
 public:
  static GraphIndex FromParts(std::map<std::string, CaseGraph> graphs,
                              std::map<std::string, temporal::TemporalGraph> closures);

  // Closure of the graph's temporal edges. Throws Error(kInconsistent) with
  // the consistency report as detail.
  static temporal::TemporalGraph CloseGraph(const CaseGraph &graph);

  // Replaces any previous graph for graph.doc_id.
  void Add(const CaseGraph &graph);
  void Add(const CaseGraph &graph, temporal::TemporalGraph closure);
  bool Remove(const std::string &doc_id);

  // A document is a candidate when every query node has a node with the same
  // normalized label (or, for label "*", the same entity type). Temporal query
  // edges must be entailed by the stored closure; MODIFY and IDENTICAL edges
  // must be present as asserted. score = (matched nodes + matched edges) /
  // (query nodes + query edges). Full matches come first, then partial
  // matches with score >= kPartialThreshold, each by score then doc id.
  std::vector<SearchResult> Search(const QueryGraph &query,
                                   std::size_t k) const;

  static constexpr double kPartialThreshold = 0.5;

  const std::map<std::string, std::set<std::string>> &by_label() const {
    return by_label_;
  }
  const std::map<std::string, std::set<std::string>> &by_type() const {
    return by_type_;
  }
  const std::map<std::string, CaseGraph> &graphs() const { return graphs_; }
  const std::map<std::string, temporal::TemporalGraph> &closures() const {
    return closures_;
  }

  bool operator==(const GraphIndex &other) const = default;

 private:
  std::map<std::string, std::set<std::string>> by_label_;
  std::map<std::string, std::set<std::string>> by_type_;
  std::map<std::string, temporal::TemporalGraph> closures_;
  std::map<std::string, CaseGraph> graphs_;
};

enum class SearchMode { kHybrid, kKeyword, kGraph };
std::string_view SearchModeName(SearchMode mode);

// Both indexes behind a reader-writer lock. Each document update is applied
// under the write lock after all analysis is done, so readers see either the
// old or the new version of a document.
class SearchEngine {
 public:
  explicit SearchEngine(AnalyzerConfig config = AnalyzerConfig::Default(),
                        KeywordScoring scoring = KeywordScoring::kTfIdf);

  // Throws Error(kInvalidArgument) when graph.doc_id != doc.doc_id and
  // Error(kInconsistent) for contradictory temporal edges.
  void IndexDocument(const Document &doc, const CaseGraph &graph);
  bool RemoveDocument(const std::string &doc_id);
  bool Contains(const std::string &doc_id) const;
  std::size_t size() const;

  std::vector<SearchResult> KeywordSearch(std::string_view query,
                                          std::size_t k) const;
  std::vector<SearchResult> GraphSearch(const QueryGraph &query,
                                        std::size_t k) const;
  // Graph results on top, then keyword results for documents not already
  // listed, truncated to k.
  std::vector<SearchResult> HybridSearch(std::string_view query,
                                         const Gazetteer &gazetteer,
                                         std::size_t k) const;
  std::vector<SearchResult> Search(std::string_view query, SearchMode mode,
                                   const Gazetteer &gazetteer,
                                   std::size_t k) const;

  // Copies taken under the read lock.
  InvertedIndex inverted_index() const;
  GraphIndex graph_index() const;
  // Swaps in restored indexes.
  void Restore(InvertedIndex inverted, GraphIndex graphs);

 private:
  mutable std::shared_mutex mu_;
  KeywordScoring scoring_;
  InvertedIndex inverted_;
  GraphIndex graphs_;
};

}  // namespace casegraph

#endif  // CASEGRAPH_INDEX_H_
