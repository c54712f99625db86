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

#ifndef CASEGRAPH_TEMPORAL_REASONER_H_
#define CASEGRAPH_TEMPORAL_REASONER_H_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "casegraph/corpus_model.h"

namespace casegraph::temporal {

using NodePair = std::pair<std::string, std::string>;

// Normalized temporal relations over a set of events. AFTER never appears:
// After(a, b) is stored as Before(b, a). Overlap pairs are unordered and kept
// with first < second.
struct TemporalGraph {
  std::set<std::string> nodes;
  std::set<NodePair> before;
  std::set<NodePair> overlap;
  // Set when some pair is both ordered and overlapping, or ordered both ways.
  bool marked_inconsistent = false;

  void AddNode(const std::string &id) { nodes.insert(id); }
  void AddBefore(const std::string &a, const std::string &b);
  void AddOverlap(const std::string &a, const std::string &b);

  bool HasBefore(const std::string &a, const std::string &b) const {
    return before.count({a, b}) > 0;
  }
  bool HasOverlap(const std::string &a, const std::string &b) const;

  // Does the graph state `type`(a, b)? AFTER is looked up as BEFORE(b, a).
  bool Holds(RelationType type, const std::string &a,
             const std::string &b) const;

  friend bool operator==(const TemporalGraph &,
                         const TemporalGraph &) = default;
};

// Composition of two temporal relations through a shared event, or nullopt
// when the pair entails nothing (Before then After, After then Before).
// Semantic relation types never compose.
std::optional<RelationType> Compose(RelationType first, RelationType second);

// One oriented step of a witness chain: `type`(source, target), where type is
// BEFORE or OVERLAP.
struct TemporalLink {
  RelationType type = RelationType::kBefore;
  std::string source;
  std::string target;
  friend bool operator==(const TemporalLink &, const TemporalLink &) = default;
  friend auto operator<=>(const TemporalLink &, const TemporalLink &) = default;
};

using WitnessChain = std::vector<TemporalLink>;

struct ConsistencyReport {
  bool consistent = true;
  // Each chain is a cycle of asserted links starting and ending at the same
  // event with at least one BEFORE step; replaying it through Compose yields
  // Before(x, x).
  std::vector<WitnessChain> witnesses;
};

// Folds a chain of links through Compose. Returns nullopt when consecutive
// links do not share an endpoint or a composition is undetermined.
std::optional<TemporalLink> ReplayChain(std::span<const TemporalLink> chain);

// Builds a TemporalGraph from temporal relations. Throws
// Error(kInvalidArgument) naming the first non-temporal relation.
TemporalGraph Normalize(const std::vector<RelationAssertion> &relations);

// Least fixpoint of the composition rules. Overlap components are collapsed
// with union-find and BEFORE is propagated by reachability over the component
// DAG. An inconsistent input still closes; cycles produce reflexive BEFORE
// pairs and the result is marked inconsistent.
TemporalGraph TransitiveClosure(const TemporalGraph &graph);

// At most this many witness chains are reported per contradiction.
inline constexpr std::size_t kMaxWitnessesPerContradiction = 10;

ConsistencyReport CheckConsistency(const TemporalGraph &graph);

struct SatisfactionScore {
  double score = 1.0;
  std::size_t applicable = 0;
  std::size_t satisfied = 0;
};

struct ScoreOptions {
  // When set, a composable pair of relations with no asserted third relation
  // between the outer events counts as a violated dependency.
  bool count_missing_third = false;
};

// Fraction of transitivity dependencies that the asserted relations satisfy.
// Every ordered triple (A, B, C) of distinct events with r1(A, B), r2(B, C)
// and a determined composition is an instance; it is satisfied when the only
// relation asserted between A and C equals the composition. Instances are
// grouped by their unordered event triple, and a group counts as satisfied
// only when all of its instances are. Vacuously 1.
SatisfactionScore ScoreSatisfaction(
    const std::vector<RelationAssertion> &relations, ScoreOptions options = {});

// Overlap components sorted by their node ids, one component per entry.
using Component = std::vector<std::string>;
using Timeline = std::vector<std::vector<Component>>;

// Layer i holds the components whose longest BEFORE path from a source has
// length i. Throws Error(kInconsistent) with the report as detail when the
// graph is inconsistent.
Timeline TopologicalTimeline(const TemporalGraph &graph);

}  // namespace casegraph::temporal

#endif  // CASEGRAPH_TEMPORAL_REASONER_H_
