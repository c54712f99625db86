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

#include "casegraph/temporal_reasoner.h"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <unordered_map>

#include "casegraph/error.h"
#include "casegraph/json_codec.h"

namespace casegraph::temporal {

void TemporalGraph::AddBefore(const std::string &a, const std::string &b) {
  nodes.insert(a);
  nodes.insert(b);
  before.emplace(a, b);
}

void TemporalGraph::AddOverlap(const std::string &a, const std::string &b) {
  nodes.insert(a);
  nodes.insert(b);
  if (a == b) return;
  if (a < b) overlap.emplace(a, b);
  else overlap.emplace(b, a);
}

bool TemporalGraph::HasOverlap(const std::string &a,
                               const std::string &b) const {
  return a < b ? overlap.count({a, b}) > 0 : overlap.count({b, a}) > 0;
}

bool TemporalGraph::Holds(RelationType type, const std::string &a,
                          const std::string &b) const {
  switch (type) {
    case RelationType::kBefore: return HasBefore(a, b);
    case RelationType::kAfter: return HasBefore(b, a);
    case RelationType::kOverlap: return HasOverlap(a, b);
    default: return false;
  }
}

std::optional<RelationType> Compose(RelationType first, RelationType second) {
  using R = RelationType;
  if (!IsTemporal(first) || !IsTemporal(second)) return std::nullopt;
  if (first == R::kOverlap) return second;
  if (second == R::kOverlap || second == first) return first;
  return std::nullopt;  // Before∘After, After∘Before
}

std::optional<TemporalLink> ReplayChain(std::span<const TemporalLink> chain) {
  if (chain.empty()) return std::nullopt;
  TemporalLink acc = chain.front();
  for (const TemporalLink &link : chain.subspan(1)) {
    if (link.source != acc.target) return std::nullopt;
    std::optional<RelationType> composed = Compose(acc.type, link.type);
    if (!composed) return std::nullopt;
    acc.type = *composed;
    acc.target = link.target;
  }
  return acc;
}

TemporalGraph Normalize(const std::vector<RelationAssertion> &relations) {
  TemporalGraph g;
  for (const RelationAssertion &r : relations) {
    switch (r.type) {
      case RelationType::kBefore: g.AddBefore(r.source, r.target); break;
      case RelationType::kAfter: g.AddBefore(r.target, r.source); break;
      case RelationType::kOverlap: g.AddOverlap(r.source, r.target); break;
      default:
        throw Error(ErrorKind::kInvalidArgument,
                    "relation " + r.id + " (" +
                        std::string(RelationTypeName(r.type)) +
                        ") is not temporal",
                    {{"relation", r.id}});
    }
  }
  for (const auto &[a, b] : g.before) {
    if (a == b || g.HasBefore(b, a) || g.HasOverlap(a, b)) {
      g.marked_inconsistent = true;
      break;
    }
  }
  return g;
}

namespace {

// Nodes grouped into overlap components, with BEFORE lifted to a graph over
// components. Components are numbered by their smallest node id.
struct Condensed {
  std::vector<std::string> ids;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> comp;
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::vector<std::size_t>> succ;  // sorted, may contain self
};

Condensed Condense(const TemporalGraph &g) {
  Condensed c;
  c.ids.assign(g.nodes.begin(), g.nodes.end());
  auto add = [&](const std::string &id) {
    if (c.index.emplace(id, c.ids.size()).second) c.ids.push_back(id);
  };
  // Edges may mention ids missing from `nodes` when built by hand.
  for (std::size_t i = 0; i < c.ids.size(); ++i) c.index.emplace(c.ids[i], i);
  for (const auto &[a, b] : g.before) { add(a); add(b); }
  for (const auto &[a, b] : g.overlap) { add(a); add(b); }

  const std::size_t n = c.ids.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto &[a, b] : g.overlap) {
    std::size_t ra = find(c.index.at(a)), rb = find(c.index.at(b));
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return c.ids[x] < c.ids[y]; });
  std::map<std::size_t, std::size_t> root_to_comp;
  c.comp.assign(n, 0);
  for (std::size_t i : order) {
    auto [it, inserted] = root_to_comp.emplace(find(i), c.members.size());
    if (inserted) c.members.emplace_back();
    c.comp[i] = it->second;
    c.members[it->second].push_back(i);
  }

  c.succ.assign(c.members.size(), {});
  for (const auto &[a, b] : g.before) {
    c.succ[c.comp[c.index.at(a)]].push_back(c.comp[c.index.at(b)]);
  }
  for (auto &s : c.succ) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return c;
}

// reach[x][y] is true when component y is reachable from x through at least
// one BEFORE edge.
std::vector<std::vector<char>> Reachability(const Condensed &c) {
  const std::size_t m = c.members.size();
  std::vector<std::vector<char>> reach(m, std::vector<char>(m, 0));
  std::vector<std::size_t> stack;
  for (std::size_t src = 0; src < m; ++src) {
    std::vector<char> &row = reach[src];
    stack.assign(c.succ[src].begin(), c.succ[src].end());
    for (std::size_t s : stack) row[s] = 1;
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t y : c.succ[x]) {
        if (!row[y]) {
          row[y] = 1;
          stack.push_back(y);
        }
      }
    }
  }
  return reach;
}

}  // namespace

TemporalGraph TransitiveClosure(const TemporalGraph &graph) {
  Condensed c = Condense(graph);
  std::vector<std::vector<char>> reach = Reachability(c);

  TemporalGraph out;
  out.nodes.insert(c.ids.begin(), c.ids.end());
  for (const auto &group : c.members) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        out.AddOverlap(c.ids[group[i]], c.ids[group[j]]);
      }
    }
  }
  const std::size_t m = c.members.size();
  for (std::size_t x = 0; x < m; ++x) {
    if (reach[x][x]) out.marked_inconsistent = true;
    for (std::size_t y = 0; y < m; ++y) {
      if (!reach[x][y]) continue;
      for (std::size_t a : c.members[x]) {
        for (std::size_t b : c.members[y]) {
          out.before.emplace(c.ids[a], c.ids[b]);
        }
      }
    }
  }
  return out;
}

namespace {

// Shortest path from `from` to `to` over asserted links, walking BEFORE
// forwards and OVERLAP in either direction.
WitnessChain ShortestPath(const TemporalGraph &g, const Condensed &c,
                          std::size_t from, std::size_t to) {
  const std::size_t n = c.ids.size();
  std::vector<std::vector<std::pair<std::size_t, RelationType>>> adj(n);
  for (const auto &[a, b] : g.before) {
    adj[c.index.at(a)].emplace_back(c.index.at(b), RelationType::kBefore);
  }
  for (const auto &[a, b] : g.overlap) {
    adj[c.index.at(a)].emplace_back(c.index.at(b), RelationType::kOverlap);
    adj[c.index.at(b)].emplace_back(c.index.at(a), RelationType::kOverlap);
  }
  for (auto &edges : adj) std::sort(edges.begin(), edges.end());

  std::vector<std::size_t> prev(n, n);
  std::vector<RelationType> via(n, RelationType::kBefore);
  std::vector<char> seen(n, 0);
  std::deque<std::size_t> queue{from};
  seen[from] = 1;
  while (!queue.empty() && !seen[to]) {
    std::size_t x = queue.front();
    queue.pop_front();
    for (const auto &[y, type] : adj[x]) {
      if (seen[y]) continue;
      seen[y] = 1;
      prev[y] = x;
      via[y] = type;
      queue.push_back(y);
    }
  }
  WitnessChain path;
  if (from == to || !seen[to]) return path;
  for (std::size_t y = to; y != from; y = prev[y]) {
    path.push_back({via[y], c.ids[prev[y]], c.ids[y]});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// Order-insensitive identity of a cycle, so rotations are reported once.
std::vector<TemporalLink> CycleKey(const WitnessChain &chain) {
  std::vector<TemporalLink> key = chain;
  for (TemporalLink &l : key) {
    if (l.type == RelationType::kOverlap && l.target < l.source) {
      std::swap(l.source, l.target);
    }
  }
  std::sort(key.begin(), key.end());
  return key;
}

}  // namespace

ConsistencyReport CheckConsistency(const TemporalGraph &graph) {
  Condensed c = Condense(graph);
  std::vector<std::vector<char>> reach = Reachability(c);
  const std::size_t m = c.members.size();

  // Each cyclic strongly connected set of components is one contradiction,
  // keyed by its smallest component.
  std::vector<std::size_t> group(m, m);
  for (std::size_t x = 0; x < m; ++x) {
    if (!reach[x][x]) continue;
    for (std::size_t y = 0; y < m; ++y) {
      if (reach[x][y] && reach[y][x]) {
        group[x] = y;
        break;
      }
    }
  }

  std::map<std::size_t, std::vector<WitnessChain>> candidates;
  for (const auto &[a, b] : graph.before) {
    std::size_t u = c.index.at(a), v = c.index.at(b);
    std::size_t cu = c.comp[u], cv = c.comp[v];
    if (group[cu] == m) continue;
    if (cu != cv && !reach[cv][cu]) continue;
    WitnessChain chain{{RelationType::kBefore, a, b}};
    WitnessChain back = ShortestPath(graph, c, v, u);
    chain.insert(chain.end(), back.begin(), back.end());
    candidates[group[cu]].push_back(std::move(chain));
  }

  ConsistencyReport report;
  report.consistent = candidates.empty();
  for (auto &[key, chains] : candidates) {
    std::sort(chains.begin(), chains.end(),
              [](const WitnessChain &x, const WitnessChain &y) {
                if (x.size() != y.size()) return x.size() < y.size();
                return x < y;
              });
    std::set<std::vector<TemporalLink>> seen;
    std::size_t kept = 0;
    for (WitnessChain &chain : chains) {
      if (kept == kMaxWitnessesPerContradiction) break;
      if (!seen.insert(CycleKey(chain)).second) continue;
      report.witnesses.push_back(std::move(chain));
      ++kept;
    }
  }
  return report;
}

SatisfactionScore ScoreSatisfaction(
    const std::vector<RelationAssertion> &relations, ScoreOptions options) {
  // Relations seen from both directions: rel[a][b] holds every type t with
  // t(a, b) asserted directly or through symmetry.
  std::map<std::string, std::map<std::string, std::set<RelationType>>> rel;
  for (const RelationAssertion &r : relations) {
    RelationType inverse;
    switch (r.type) {
      case RelationType::kBefore: inverse = RelationType::kAfter; break;
      case RelationType::kAfter: inverse = RelationType::kBefore; break;
      case RelationType::kOverlap: inverse = RelationType::kOverlap; break;
      default:
        throw Error(ErrorKind::kInvalidArgument,
                    "relation " + r.id + " is not temporal",
                    {{"relation", r.id}});
    }
    if (r.source == r.target) continue;
    rel[r.source][r.target].insert(r.type);
    rel[r.target][r.source].insert(inverse);
  }

  // Per unordered triple: true while every instance is satisfied.
  std::map<std::vector<std::string>, bool> groups;
  static const std::set<RelationType> kNone;
  for (const auto &[b, out_of_b] : rel) {
    for (const auto &[a, types_ba] : out_of_b) {
      for (const auto &[c, types_bc] : out_of_b) {
        if (a == c) continue;
        auto row = rel.find(a);
        auto found = row->second.find(c);
        const std::set<RelationType> &third =
            found == row->second.end() ? kNone : found->second;
        if (third.empty() && !options.count_missing_third) continue;
        std::vector<std::string> key{a, b, c};
        std::sort(key.begin(), key.end());
        // types_ba holds t(b, a); the instance needs r1(a, b).
        const std::set<RelationType> &types_ab = rel.at(a).at(b);
        for (RelationType r1 : types_ab) {
          for (RelationType r2 : types_bc) {
            std::optional<RelationType> expected = Compose(r1, r2);
            if (!expected) continue;
            bool ok = third.size() == 1 && *third.begin() == *expected;
            auto [it, inserted] = groups.emplace(key, ok);
            if (!inserted) it->second = it->second && ok;
          }
        }
      }
    }
  }

  SatisfactionScore score;
  score.applicable = groups.size();
  for (const auto &[key, ok] : groups) score.satisfied += ok ? 1 : 0;
  score.score = score.applicable == 0
                    ? 1.0
                    : static_cast<double>(score.satisfied) /
                          static_cast<double>(score.applicable);
  return score;
}

Timeline TopologicalTimeline(const TemporalGraph &graph) {
  ConsistencyReport report = CheckConsistency(graph);
  if (!report.consistent) {
    throw Error(ErrorKind::kInconsistent,
                "temporal graph is inconsistent; no timeline exists",
                ToJson(report));
  }
  Condensed c = Condense(graph);
  const std::size_t m = c.members.size();
  std::vector<std::size_t> indegree(m, 0), layer(m, 0);
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y : c.succ[x]) ++indegree[y];
  }
  std::deque<std::size_t> ready;
  for (std::size_t x = 0; x < m; ++x) {
    if (indegree[x] == 0) ready.push_back(x);
  }
  std::size_t depth = 0;
  while (!ready.empty()) {
    std::size_t x = ready.front();
    ready.pop_front();
    depth = std::max(depth, layer[x] + 1);
    for (std::size_t y : c.succ[x]) {
      layer[y] = std::max(layer[y], layer[x] + 1);
      if (--indegree[y] == 0) ready.push_back(y);
    }
  }

  Timeline timeline(m == 0 ? 0 : depth);
  for (std::size_t x = 0; x < m; ++x) {
    Component names;
    for (std::size_t i : c.members[x]) names.push_back(c.ids[i]);
    std::sort(names.begin(), names.end());
    timeline[layer[x]].push_back(std::move(names));
  }
  for (auto &l : timeline) std::sort(l.begin(), l.end());
  return timeline;
}

}  // namespace casegraph::temporal
