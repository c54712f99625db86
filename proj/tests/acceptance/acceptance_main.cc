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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits non-zero
// when any criterion fails. Thresholds are fixed below and never relaxed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "casegraph/analyzer.h"
#include "casegraph/annotation_io.h"
#include "casegraph/error.h"
#include "casegraph/extraction.h"
#include "casegraph/index.h"
#include "casegraph/ingest.h"
#include "casegraph/service.h"
#include "casegraph/storage.h"
#include "casegraph/temporal_reasoner.h"
#include "casegraph/text.h"
#include "contract.h"
#include "httplib.h"
#include "oracles.h"

namespace cg = casegraph;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned thresholds.
constexpr double kChainBudgetMs = 1.0;
constexpr double kOracleSuiteBudgetS = 5.0;
constexpr double kPersistenceSuiteBudgetS = 30.0;
constexpr double kScoreTolerance = 1e-9;
constexpr int kOracleGraphs = 200;
constexpr int kOracleMaxNodes = 8;
constexpr double kOracleDensity = 0.3;
constexpr int kConsistentGraphs = 100;
constexpr int kFuzzTokens = 10000;
constexpr int kHybridDocs = 20;
constexpr int kHybridQueries = 50;
constexpr int kRoundTrips = 100;
constexpr int kPersistenceDocs = 100;
constexpr int kPersistenceQueries = 25;
constexpr std::size_t kTopK = 10;

struct Outcome {
  bool pass = true;
  std::string detail;
  void Fail(const std::string &why) {
    if (pass) detail = why;
    pass = false;
  }
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

const cg::Gazetteer &Shipped() {
  static const cg::Gazetteer g = cg::Gazetteer::Load(CASEGRAPH_SOURCE_DIR "/data/gazetteer.tsv");
  return g;
}

fs::path TempDir(const std::string &name) {
  fs::path p = fs::temp_directory_path() /
               ("casegraph-acceptance-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

cg::RelationAssertion Rel(cg::RelationType t, std::string a, std::string b) {
  static int n = 0;
  return {"R" + std::to_string(++n), t, std::move(a), std::move(b)};
}

using R = cg::RelationType;

Outcome Criterion1() {
  Outcome o;
  std::vector<cg::RelationAssertion> chain = {Rel(R::kBefore, "b", "d"), Rel(R::kAfter, "e", "d"),
                                             Rel(R::kOverlap, "e", "f")};
  Clock::time_point start = Clock::now();
  cg::temporal::TemporalGraph closure = cg::temporal::TransitiveClosure(cg::temporal::Normalize(chain));
  double ms = Seconds(start) * 1000.0;
  if (!closure.HasBefore("b", "f")) o.Fail("closure lacks BEFORE(b,f)");
  const std::set<cg::temporal::NodePair> expected = {
      {"b", "d"}, {"b", "e"}, {"b", "f"}, {"d", "e"}, {"d", "f"}};
  if (closure.before != expected) o.Fail("closure BEFORE set differs from the derived set");
  if (ms >= kChainBudgetMs) o.Fail("took " + std::to_string(ms) + " ms");
  if (o.pass) o.detail = "BEFORE(b,f) derived in " + std::to_string(ms) + " ms (first call)";
  return o;
}

Outcome Criterion2() {
  Outcome o;
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<int> size(1, kOracleMaxNodes);
  Clock::time_point start = Clock::now();
  int agree = 0, inconsistent = 0;
  for (int i = 0; i < kOracleGraphs; ++i) {
    auto relations = cg::oracle::RandomRelations(rng, size(rng), kOracleDensity);
    cg::temporal::TemporalGraph g = cg::temporal::Normalize(relations);
    cg::temporal::TemporalGraph closure = cg::temporal::TransitiveClosure(g);
    bool consistent = cg::temporal::CheckConsistency(g).consistent;
    cg::oracle::NaiveClosure expected = cg::oracle::NaiveFixpoint(relations);
    if (closure.before == expected.before && closure.overlap == expected.overlap &&
        consistent == expected.consistent) {
      ++agree;
    } else {
      o.Fail("graph " + std::to_string(i) + " disagrees with the oracle");
    }
    inconsistent += !expected.consistent;
  }
  double s = Seconds(start);
  if (s >= kOracleSuiteBudgetS) o.Fail("suite took " + std::to_string(s) + " s");
  if (o.pass) {
    o.detail = std::to_string(agree) + "/" + std::to_string(kOracleGraphs) + " agree (" +
               std::to_string(inconsistent) + " inconsistent) in " + std::to_string(s) + " s";
  }
  return o;
}

bool WitnessesReplay(const std::vector<cg::RelationAssertion> &asserted,
                     const cg::temporal::ConsistencyReport &report) {
  if (report.consistent || report.witnesses.empty()) return false;
  cg::temporal::TemporalGraph g = cg::temporal::Normalize(asserted);
  for (const cg::temporal::WitnessChain &chain : report.witnesses) {
    for (const cg::temporal::TemporalLink &l : chain) {
      bool asserted_link = l.type == R::kBefore ? g.HasBefore(l.source, l.target)
                                                : g.HasOverlap(l.source, l.target);
      if (!asserted_link) return false;
    }
    std::optional<cg::temporal::TemporalLink> folded = cg::temporal::ReplayChain(chain);
    if (!folded || folded->type != R::kBefore || folded->source != folded->target) return false;
  }
  return true;
}

Outcome Criterion3() {
  Outcome o;
  const std::vector<std::pair<std::string, std::vector<cg::RelationAssertion>>> cases = {
      {"2-cycle", {Rel(R::kBefore, "a", "b"), Rel(R::kBefore, "b", "a")}},
      {"3-cycle", {Rel(R::kBefore, "a", "b"), Rel(R::kBefore, "b", "c"), Rel(R::kBefore, "c", "a")}},
      {"before+overlap",
       {Rel(R::kBefore, "a", "b"), Rel(R::kBefore, "b", "c"), Rel(R::kOverlap, "a", "c")}}};
  for (const auto &[name, relations] : cases) {
    if (!WitnessesReplay(relations, cg::temporal::CheckConsistency(cg::temporal::Normalize(relations)))) {
      o.Fail(name + " not detected with a replayable witness");
    }
  }
  std::mt19937_64 rng(99);
  int false_positives = 0;
  for (int i = 0; i < kConsistentGraphs; ++i) {
    auto relations = cg::oracle::RandomConsistentRelations(rng, 8, 0.35);
    if (!cg::oracle::NaiveFixpoint(relations).consistent) {
      o.Fail("generator produced an inconsistent graph");
    }
    false_positives += !cg::temporal::CheckConsistency(cg::temporal::Normalize(relations)).consistent;
  }
  if (false_positives) o.Fail(std::to_string(false_positives) + " false positives");
  if (o.pass) o.detail = "3/3 contradictions witnessed; 0/100 false positives";
  return o;
}

Outcome Criterion4() {
  Outcome o;
  auto check = [&](const char *name, const std::vector<cg::RelationAssertion> &r, double score,
                   std::size_t applicable, std::size_t satisfied) {
    cg::temporal::SatisfactionScore s = cg::temporal::ScoreSatisfaction(r);
    if (s.score != score || s.applicable != applicable || s.satisfied != satisfied) {
      std::ostringstream why;
      why << name << " gave " << s.score << " (" << s.satisfied << "/" << s.applicable << ")";
      o.Fail(why.str());
    }
  };
  check("transitive", {Rel(R::kBefore, "a", "b"), Rel(R::kBefore, "b", "c"), Rel(R::kBefore, "a", "c")},
        1.0, 1, 1);
  check("violated", {Rel(R::kBefore, "a", "b"), Rel(R::kBefore, "b", "c"), Rel(R::kAfter, "a", "c")},
        0.0, 1, 0);
  check("vacuous", {}, 1.0, 0, 0);
  if (o.pass) o.detail = "1.0 (1/1), 0.0 (0/1), 1.0 (0/0)";
  return o;
}

Outcome Criterion5() {
  Outcome o;
  cg::ParsedQuery q = cg::ParseQuery(
      "A patient was admitted to the hospital because of fever and cough.", Shipped());
  std::map<std::string, std::string> got;
  std::map<std::string, std::string> text_of;
  for (const cg::Entity &e : q.extraction.entities) {
    got[e.text] = e.type.Name();
    text_of[e.id] = e.text;
  }
  const std::map<std::string, std::string> expected = {{"hospital", "NonbiologicalLocation"},
                                                       {"fever", "SignSymptom"},
                                                       {"cough", "SignSymptom"}};
  if (got != expected || q.extraction.entities.size() != 3) o.Fail("entity set differs");
  if (q.extraction.relations.size() != 1) {
    o.Fail(std::to_string(q.extraction.relations.size()) + " relations instead of 1");
  } else {
    const cg::RelationAssertion &r = q.extraction.relations[0];
    std::set<std::string> ends = {text_of[r.source], text_of[r.target]};
    if (r.type != R::kOverlap || ends != std::set<std::string>{"fever", "cough"}) {
      o.Fail("relation is not Overlap(fever, cough)");
    }
  }
  if (o.pass) o.detail = "{hospital, fever, cough} + Overlap(fever, cough)";
  return o;
}

Outcome Criterion6() {
  Outcome o;
  const cg::AnalyzerConfig config = cg::AnalyzerConfig::Default();
  const std::vector<std::string> fever = {"fev", "feve", "fever", "eve", "ever", "ver"};
  if (cg::Analyze("Fever", config) != fever) o.Fail("\"Fever\" n-grams differ");

  // Letters only, so every fuzz word is exactly one pre-token.
  std::mt19937_64 rng(424242);
  const std::u32string alphabet = U"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZéüñçøàî";
  std::uniform_int_distribution<std::size_t> letter(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> length(1, 40);
  std::size_t emitted = 0, passthrough = 0;
  std::string corpus;
  std::vector<std::string> all;
  for (int i = 0; i < kFuzzTokens; ++i) {
    std::u32string word;
    int n = length(rng);
    for (int j = 0; j < n; ++j) word.push_back(alphabet[letter(rng)]);
    std::string utf8 = cg::text::Encode(word);
    corpus += utf8 + " ";
    std::vector<std::string> tokens = cg::Analyze(utf8, config);
    all.insert(all.end(), tokens.begin(), tokens.end());
    for (const std::string &t : tokens) {
      std::size_t len = cg::text::Length(t);
      ++emitted;
      if (len > 25) o.Fail("n-gram longer than 25: " + t);
      if (len < 3) {
        // Only a whole token shorter than min_gram may be this short.
        if (tokens.size() != 1) o.Fail("short n-gram \"" + t + "\" from " + utf8);
        ++passthrough;
      }
    }
  }
  if (cg::Analyze(corpus, config) != all) o.Fail("corpus analysis differs from per-token analysis");
  if (o.pass) {
    o.detail = "6 n-grams exact; " + std::to_string(emitted) + " tokens from " +
               std::to_string(kFuzzTokens) + " words, n-grams within [3,25] (" +
               std::to_string(passthrough) + " whole short tokens)";
  }
  return o;
}

// Sentence built from gazetteer terms for synthetic corpora.
std::vector<std::string> Terms() {
  std::vector<std::string> out;
  for (const auto &[term, type] : Shipped().entries()) {
    if (term.find(' ') == std::string::npos) out.push_back(term);
  }
  return out;
}

std::string SyntheticDoc(std::mt19937_64 &rng, const std::vector<std::string> &terms) {
  static const std::vector<std::string> templates = {
      "The patient had {a} and {b}.", "{a} began before {b}.", "Then {c} developed.",
      "{b} resolved after {c}.", "Findings included {a}, {c} and {d}.",
      "A {e} was noted on admission.", "Subsequently {d} occurred."};
  std::uniform_int_distribution<std::size_t> term(0, terms.size() - 1);
  std::uniform_int_distribution<std::size_t> tmpl(0, templates.size() - 1);
  std::uniform_int_distribution<int> count(2, 6);
  std::map<char, std::string> slots;
  for (char c : std::string("abcde")) slots[c] = terms[term(rng)];
  std::string text;
  int n = count(rng);
  for (int i = 0; i < n; ++i) {
    std::string s = templates[tmpl(rng)];
    for (auto &[slot, value] : slots) {
      std::string key = std::string("{") + slot + "}";
      for (std::size_t at; (at = s.find(key)) != std::string::npos;) s.replace(at, key.size(), value);
    }
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    text += s + " ";
  }
  return text;
}

std::string SyntheticQuery(std::mt19937_64 &rng, const std::vector<std::string> &terms) {
  static const std::vector<std::string> templates = {
      "{a} and {b}", "{a} before {b}", "{a} after {b}", "{a}", "{a} with unexplained {b} xyzzy",
      "patient {a}"};
  std::uniform_int_distribution<std::size_t> term(0, terms.size() - 1);
  std::uniform_int_distribution<std::size_t> tmpl(0, templates.size() - 1);
  std::string s = templates[tmpl(rng)];
  for (const char *key : {"{a}", "{b}"}) {
    std::size_t at = s.find(key);
    if (at != std::string::npos) s.replace(at, 3, terms[term(rng)]);
  }
  return s;
}

Outcome Criterion7() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::vector<std::string> terms = Terms();
  // A narrow vocabulary makes graph and keyword hits overlap.
  terms.resize(std::min<std::size_t>(terms.size(), 15));
  cg::SearchEngine engine;
  cg::Pipeline pipeline(Shipped(), &engine);
  for (int i = 0; i < kHybridDocs; ++i) {
    pipeline.IngestText("doc" + std::to_string(i), "", SyntheticDoc(rng, terms));
  }
  int mixed = 0, graph_hits = 0, keyword_hits = 0;
  for (int i = 0; i < kHybridQueries; ++i) {
    std::string q = SyntheticQuery(rng, terms);
    std::vector<cg::SearchResult> r = engine.HybridSearch(q, Shipped(), kHybridDocs);
    std::set<std::string> seen;
    bool keyword_seen = false, has_graph = false, has_keyword = false;
    for (const cg::SearchResult &x : r) {
      if (!seen.insert(x.doc_id).second) o.Fail("duplicate " + x.doc_id + " for \"" + q + "\"");
      if (x.provenance == cg::Provenance::kKeyword) {
        keyword_seen = has_keyword = true;
      } else {
        has_graph = true;
        if (keyword_seen) o.Fail("graph result after keyword result for \"" + q + "\"");
      }
    }
    graph_hits += has_graph;
    keyword_hits += has_keyword;
    mixed += has_graph && has_keyword;
  }
  if (mixed == 0) o.Fail("no query mixed both provenances");
  if (o.pass) {
    o.detail = std::to_string(kHybridQueries) + " queries: " + std::to_string(graph_hits) +
               " with graph hits, " + std::to_string(keyword_hits) + " with keyword hits, " +
               std::to_string(mixed) + " mixed; ordering and dedup hold";
  }
  return o;
}

Outcome Criterion8() {
  Outcome o;
  cg::SearchEngine engine;
  cg::Pipeline pipeline(Shipped(), &engine);
  pipeline.IngestText("forward", "", "Fever occurred before death.");
  pipeline.IngestText("reverse", "", "Death occurred before fever.");
  cg::QueryGraph q = cg::ParseQuery("fever before death", Shipped()).graph;
  if (q.edges.size() != 1 || q.edges[0].label != R::kBefore) o.Fail("query graph is not BEFORE(x,y)");
  std::vector<cg::SearchResult> graph = engine.GraphSearch(q, kTopK);
  std::vector<std::string> full;
  for (const cg::SearchResult &r : graph) {
    if (r.score == 1.0) full.push_back(r.doc_id);
  }
  if (full != std::vector<std::string>{"forward"}) o.Fail("full matches are not exactly {forward}");
  std::vector<cg::SearchResult> kw = engine.KeywordSearch("fever before death", kTopK);
  double delta = kw.size() == 2 ? std::fabs(kw[0].score - kw[1].score) : 1.0;
  if (kw.size() != 2) o.Fail("keyword mode returned " + std::to_string(kw.size()) + " docs");
  if (delta >= kScoreTolerance) o.Fail("keyword scores differ by " + std::to_string(delta));
  if (o.pass) {
    std::ostringstream d;
    d << "graph full match = {forward}; keyword |Δscore| = " << delta;
    o.detail = d.str();
  }
  return o;
}

Outcome Criterion9() {
  Outcome o;
  std::mt19937_64 rng(8675309);
  for (int i = 0; i < kRoundTrips; ++i) {
    cg::oracle::GeneratedAnnotations gen = cg::oracle::RandomAnnotations(rng);
    cg::AnnotationSet once = cg::ParseStandoff(gen.text, cg::SerializeStandoff(gen.set));
    cg::AnnotationSet twice = cg::ParseStandoff(gen.text, cg::SerializeStandoff(once));
    if (once != twice || once != gen.set) o.Fail("round trip " + std::to_string(i) + " diverged");
  }
  const std::string ann = "T1\tSign_symptom 7 14\tdyspnea\n";
  if (cg::SerializeStandoff(cg::ParseStandoff("Pt has dyspnea.", ann)) != ann) {
    o.Fail("dyspnea serialization is not byte-exact");
  }
  if (o.pass) o.detail = "100/100 fixpoints; dyspnea byte-exact";
  return o;
}

Outcome Criterion10() {
  Outcome o;
  Clock::time_point start = Clock::now();
  fs::path root = TempDir("persistence");
  std::mt19937_64 rng(1010);
  const std::vector<std::string> terms = Terms();
  std::vector<std::string> queries;
  {
    cg::Store store(root);
    cg::SearchEngine engine;
    cg::Pipeline pipeline(Shipped(), &engine, &store);
    for (int i = 0; i < kPersistenceDocs; ++i) {
      pipeline.IngestText("doc" + std::to_string(i), "", SyntheticDoc(rng, terms), {.index = false});
    }
    pipeline.RebuildIndex();
    store.SnapshotIndexes(engine.inverted_index(), engine.graph_index());
  }
  for (int i = 0; i < kPersistenceQueries; ++i) queries.push_back(SyntheticQuery(rng, terms));

  cg::Store store(root);
  cg::SearchEngine from_snapshot, rebuilt;
  auto snapshot = store.LatestSnapshot();
  if (!snapshot) {
    o.Fail("no snapshot written");
    return o;
  }
  auto [inverted, graphs] = cg::LoadIndexes(*snapshot);
  from_snapshot.Restore(std::move(inverted), std::move(graphs));
  cg::Pipeline pipeline(Shipped(), &rebuilt, &store);
  pipeline.RebuildIndex();

  int nonempty = 0;
  for (const std::string &q : queries) {
    for (cg::SearchMode mode : {cg::SearchMode::kHybrid, cg::SearchMode::kKeyword, cg::SearchMode::kGraph}) {
      auto a = from_snapshot.Search(q, mode, Shipped(), kTopK);
      auto b = rebuilt.Search(q, mode, Shipped(), kTopK);
      if (a != b) o.Fail("results differ for \"" + q + "\" in " + std::string(cg::SearchModeName(mode)));
      nonempty += mode == cg::SearchMode::kHybrid && !a.empty();
    }
  }
  fs::remove_all(root);
  double s = Seconds(start);
  if (nonempty < kPersistenceQueries / 2) o.Fail("too few queries returned results");
  if (s >= kPersistenceSuiteBudgetS) o.Fail("suite took " + std::to_string(s) + " s");
  if (o.pass) {
    o.detail = std::to_string(kPersistenceQueries) + " queries x 3 modes identical over " +
               std::to_string(kPersistenceDocs) + " docs (" + std::to_string(nonempty) +
               " non-empty) in " + std::to_string(s) + " s";
  }
  return o;
}

Outcome Criterion11() {
  Outcome o;
  fs::path root = TempDir("api");
  cg::Store store(root);
  cg::SearchEngine engine;
  cg::Pipeline pipeline(Shipped(), &engine, &store);
  cg::ServiceOptions options;
  options.fetch.fixture_dir = CASEGRAPH_SOURCE_DIR "/fixtures/articles";
  cg::Service service(&pipeline, options);
  httplib::Server server;
  service.Mount(&server);
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(30, 0);
  auto send = [&](const std::string &method, const std::string &path,
                  const std::optional<std::string> &body) -> std::pair<int, cg::Json> {
    httplib::Result r = method == "GET"      ? client.Get(path)
                        : method == "DELETE" ? client.Delete(path)
                        : method == "POST"   ? client.Post(path, body.value_or(""), "application/json")
                        : method == "PUT"    ? client.Put(path, body.value_or(""), "application/json")
                                             : client.Patch(path, body.value_or(""), "application/json");
    if (!r) return {-1, nullptr};
    cg::Json j = cg::Json::parse(r->body, nullptr, false);
    return {r->status, j};
  };

  cg::contract::Contract contract = cg::contract::Load(CASEGRAPH_SOURCE_DIR "/api/endpoints.json");
  std::map<int, int> statuses;
  if (send("POST", "/api/documents", contract.seed.dump()).first != 201) o.Fail("seeding failed");
  for (const cg::contract::Case &c : contract.cases) {
    auto [status, body] = send(c.method, c.path, c.body);
    ++statuses[status];
    if (status != c.status) {
      o.Fail(c.name + ": expected " + std::to_string(c.status) + ", got " + std::to_string(status));
    }
    if (!c.kind.empty() && (!body.is_object() || !body.contains("error") ||
                            body["error"].value("kind", "") != c.kind)) {
      o.Fail(c.name + ": error kind is not " + c.kind);
    }
  }
  for (int required : {200, 201, 400, 404, 409, 422}) {
    if (!statuses.count(required)) o.Fail("matrix lacks status " + std::to_string(required));
  }

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> length(0, 48);
  int malformed = 0;
  for (const char *path : {"/api/documents", "/api/search", "/api/reason"}) {
    for (int i = 0; i < 40; ++i) {
      std::string body = i % 2 ? "{\"query\": " : "";
      int n = length(rng);
      for (int j = 0; j < n; ++j) body += static_cast<char>(byte(rng));
      int status = send("POST", path, body).first;
      ++malformed;
      if (status >= 500 || status < 0) o.Fail(std::string(path) + " answered " + std::to_string(status));
    }
  }
  int status = send("PUT", "/api/documents/new-1/annotations", std::string("1e999999")).first;
  if (status >= 500) o.Fail("numeric overflow answered " + std::to_string(status));

  server.stop();
  thread.join();
  fs::remove_all(root);
  if (o.pass) {
    o.detail = std::to_string(contract.cases.size()) + " contract cases over HTTP on port " +
               std::to_string(port) + "; " + std::to_string(malformed + 1) +
               " malformed bodies, none 5xx";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
      {"chain inference", Criterion1},
      {"closure oracle equivalence", Criterion2},
      {"consistency witnesses", Criterion3},
      {"satisfaction score", Criterion4},
      {"query extraction", Criterion5},
      {"analyzer n-grams", Criterion6},
      {"hybrid ordering", Criterion7},
      {"temporal discrimination", Criterion8},
      {"standoff round trip", Criterion9},
      {"persistence", Criterion10},
      {"API contract", Criterion11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o.Fail(std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " ("
              << criteria[i].first << "): " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
