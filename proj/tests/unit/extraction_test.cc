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

#include <gtest/gtest.h>

#include "casegraph/temporal_reasoner.h"
#include "casegraph/text.h"

namespace casegraph {
namespace {

const Gazetteer &Shipped() {
  static const Gazetteer g = Gazetteer::Load(CASEGRAPH_SOURCE_DIR "/data/gazetteer.tsv");
  return g;
}

Document Doc(const std::string &text) {
  Document d;
  d.doc_id = "d";
  d.text = text;
  d.sentences = SegmentSentences(text);
  return d;
}

std::string Label(const std::vector<Entity> &entities, const std::string &id) {
  for (const Entity &e : entities) {
    if (e.id == id) return text::ToLower(e.text);
  }
  return "?";
}

TEST(SegmentSentences, SplitsOnTerminalPunctuation) {
  EXPECT_EQ(SegmentSentences("Fever began. Cough followed.").size(), 2u);
}

TEST(SegmentSentences, RespectsAbbreviations) {
  EXPECT_EQ(SegmentSentences("Dr. Smith admitted the patient.").size(), 1u);
}

TEST(SegmentSentences, KeepsDecimals) {
  EXPECT_EQ(SegmentSentences("Dose was 2.5 mg daily. It helped.").size(), 2u);
}

TEST(SegmentSentences, Empty) { EXPECT_TRUE(SegmentSentences("").empty()); }

TEST(SegmentSentences, CoversNonWhitespaceInOrder) {
  std::string t = "  Fever began.  Cough followed!   Then rest?  ";
  std::vector<Span> spans = SegmentSentences(t);
  ASSERT_EQ(spans.size(), 3u);
  for (std::size_t i = 1; i < spans.size(); ++i) EXPECT_LE(spans[i - 1].end, spans[i].start);
  EXPECT_EQ(text::Substr(t, spans[0].start, spans[0].end), "Fever began.");
  EXPECT_EQ(text::Substr(t, spans[2].start, spans[2].end), "Then rest?");
}

TEST(ExtractEntities, LongestMatchWins) {
  Gazetteer g;
  g.Add("pain", EntityType::Kind::kSignSymptom);
  g.Add("chest pain", EntityType::Kind::kSignSymptom);
  std::vector<Entity> e = ExtractEntities("chest pain", g);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].text, "chest pain");
  EXPECT_EQ(e[0].span, (Span{0, 10}));
}

TEST(ExtractEntities, EmptyGazetteer) {
  EXPECT_TRUE(ExtractEntities("fever and cough", Gazetteer{}).empty());
}

TEST(ExtractEntities, TokenBoundariesAndSurfaceText) {
  Gazetteer g;
  g.Add("fever", EntityType::Kind::kSignSymptom);
  std::vector<Entity> e = ExtractEntities("Feverish? No: FEVER, then fevers.", g);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].id, "T1");
  EXPECT_EQ(e[0].text, "FEVER");
}

TEST(ExtractEntities, SpansDisjointSortedAndRoundTrip) {
  std::string t = "Café owner with chest pain, dyspnea and fever was given aspirin in hospital.";
  std::vector<Entity> e = ExtractEntities(t, Shipped());
  ASSERT_FALSE(e.empty());
  for (std::size_t i = 0; i < e.size(); ++i) {
    EXPECT_EQ(e[i].id, "T" + std::to_string(i + 1));
    EXPECT_EQ(text::Substr(t, e[i].span.start, e[i].span.end), e[i].text);
    if (i > 0) EXPECT_LE(e[i - 1].span.end, e[i].span.start);
  }
}

TEST(ParseQuery, AdmissionQuery) {
  ParsedQuery q = ParseQuery(
      "A patient was admitted to the hospital because of fever and cough.", Shipped());
  std::map<std::string, std::string> types;
  for (const Entity &e : q.extraction.entities) types[e.text] = e.type.Name();
  EXPECT_EQ(types, (std::map<std::string, std::string>{{"hospital", "NonbiologicalLocation"},
                                                       {"fever", "SignSymptom"},
                                                       {"cough", "SignSymptom"}}));
  ASSERT_EQ(q.extraction.relations.size(), 1u);
  const RelationAssertion &r = q.extraction.relations[0];
  EXPECT_EQ(r.type, RelationType::kOverlap);
  std::set<std::string> ends = {Label(q.extraction.entities, r.source),
                                Label(q.extraction.entities, r.target)};
  EXPECT_EQ(ends, (std::set<std::string>{"fever", "cough"}));
  EXPECT_EQ(q.extraction.confidence.at(r.id), RelationSource::kCoordination);
  EXPECT_EQ(q.graph.nodes.size(), 3u);
  EXPECT_EQ(q.graph.edges.size(), 1u);
}

TEST(ParseQuery, NoGazetteerHits) {
  ParsedQuery q = ParseQuery("xyzzy plugh", Shipped());
  EXPECT_TRUE(q.graph.nodes.empty());
  EXPECT_TRUE(q.graph.edges.empty());
  EXPECT_EQ(q.residual, "xyzzy plugh");
}

TEST(ParseQuery, BeforeCue) {
  ParsedQuery q = ParseQuery("fever before death", Shipped());
  ASSERT_EQ(q.extraction.relations.size(), 1u);
  const RelationAssertion &r = q.extraction.relations[0];
  EXPECT_EQ(r.type, RelationType::kBefore);
  EXPECT_EQ(Label(q.extraction.entities, r.source), "fever");
  EXPECT_EQ(Label(q.extraction.entities, r.target), "death");
  EXPECT_EQ(q.residual, "before");
}

TEST(ParseQuery, GraphNodesComeFromGazetteer) {
  ParsedQuery q = ParseQuery("Severe chest pain then syncope after exercise in the clinic", Shipped());
  for (const GraphNode &n : q.graph.nodes) {
    EXPECT_NE(Shipped().Find(NormalizeNodeLabel(n.label)), nullptr) << n.label;
  }
}

TEST(ExtractRelations, AfterCue) {
  Document d = Doc("Cough resolved after antibiotics.");
  std::vector<Entity> e = ExtractEntities(d.text, Shipped());
  ASSERT_EQ(e.size(), 2u);
  ExtractionResult r = ExtractRelations(d, e);
  ASSERT_EQ(r.relations.size(), 1u);
  EXPECT_EQ(r.relations[0].type, RelationType::kAfter);
  EXPECT_EQ(Label(e, r.relations[0].source), "cough");
  EXPECT_EQ(Label(e, r.relations[0].target), "antibiotics");
  temporal::TemporalGraph g = temporal::Normalize(r.relations);
  EXPECT_TRUE(g.HasBefore(r.relations[0].target, r.relations[0].source));
}

TEST(ExtractRelations, SingleEntity) {
  Document d = Doc("Fever.");
  EXPECT_TRUE(ExtractRelations(d, ExtractEntities(d.text, Shipped())).relations.empty());
}

TEST(ExtractRelations, SentenceInitialThen) {
  Document d = Doc("Fever developed. Then syncope occurred.");
  std::vector<Entity> e = ExtractEntities(d.text, Shipped());
  ExtractionResult r = ExtractRelations(d, e);
  ASSERT_EQ(r.relations.size(), 1u);
  EXPECT_EQ(r.relations[0].type, RelationType::kBefore);
  EXPECT_EQ(Label(e, r.relations[0].source), "fever");
  EXPECT_EQ(Label(e, r.relations[0].target), "syncope");
  EXPECT_EQ(r.confidence.at(r.relations[0].id), RelationSource::kCue);
}

TEST(ExtractRelations, NarrativeOrderIsOptIn) {
  Document d = Doc("Fever developed. Syncope occurred. Sepsis followed.");
  std::vector<Entity> e = ExtractEntities(d.text, Shipped());
  EXPECT_TRUE(ExtractRelations(d, e).relations.empty());
  ExtractionResult r = ExtractRelations(d, e, {.narrative_order = true});
  EXPECT_EQ(r.relations.size(), 2u);
}

TEST(ExtractRelations, OutputIsAlwaysConsistent) {
  const std::vector<std::string> sentences = {
      "Fever and cough before sepsis.", "Then syncope after fever.",
      "Sepsis before fever.",           "Cough, dyspnea and fever after antibiotics.",
      "Subsequently death.",            "Aspirin prior to syncope."};
  for (std::size_t mask = 1; mask < (1u << sentences.size()); ++mask) {
    std::string text;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (mask & (1u << i)) text += sentences[i] + " ";
    }
    Document d = Doc(text);
    std::vector<Entity> e = ExtractEntities(d.text, Shipped());
    ExtractionResult r = ExtractRelations(d, e, {.narrative_order = true});
    std::vector<RelationAssertion> temporal;
    std::map<std::string, std::string> merged = MergedNodeIds(e, r.relations);
    for (const RelationAssertion &rel : r.relations) {
      if (IsTemporal(rel.type)) {
        temporal.push_back({rel.id, rel.type, merged.at(rel.source), merged.at(rel.target)});
      }
    }
    EXPECT_TRUE(temporal::CheckConsistency(temporal::Normalize(temporal)).consistent) << text;
    EXPECT_EQ(ExtractRelations(d, e, {.narrative_order = true}).relations, r.relations);
  }
}

TEST(Gazetteer, ParsesTsvAndIgnoresComments) {
  Gazetteer g = Gazetteer::FromTsv("# header\nChest  Pain\tSignSymptom\nasa\tMedication\n");
  ASSERT_NE(g.Find("chest pain"), nullptr);
  EXPECT_EQ(g.Find("chest pain")->Name(), "SignSymptom");
  EXPECT_EQ(g.max_term_tokens(), 2u);
  EXPECT_EQ(g.size(), 2u);
}

TEST(Gazetteer, ShippedFileHasStarterTerms) {
  EXPECT_GE(Shipped().size(), 200u);
  EXPECT_EQ(Shipped().Find("patient"), nullptr);
}

}  // namespace
}  // namespace casegraph
