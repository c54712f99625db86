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

#include "casegraph/corpus_model.h"

#include <gtest/gtest.h>

#include <random>

#include "oracles.h"

namespace casegraph {
namespace {

Entity Ent(std::string id, EntityType type, std::size_t start, std::string text) {
  return {std::move(id), type, {start, start + text.size()}, std::move(text)};
}

TEST(EntityType, ParsesAnnotationAndCanonicalNames) {
  EXPECT_EQ(EntityType::Parse("Sign_symptom").kind(), EntityType::Kind::kSignSymptom);
  EXPECT_EQ(EntityType::Parse("SignSymptom").kind(), EntityType::Kind::kSignSymptom);
  EXPECT_EQ(EntityType::Parse("Dosage").kind(), EntityType::Kind::kMedicationDosage);
  EXPECT_EQ(EntityType(EntityType::Kind::kSignSymptom).AnnotationLabel(), "Sign_symptom");
  EntityType other = EntityType::Parse("Lab_value");
  EXPECT_TRUE(other.is_other());
  EXPECT_EQ(other.AnnotationLabel(), "Lab_value");
  EXPECT_TRUE(EntityType::Any().is_any());
}

TEST(RelationType, NamesRoundTrip) {
  for (RelationType t : {RelationType::kBefore, RelationType::kAfter, RelationType::kOverlap,
                         RelationType::kIdentical, RelationType::kModify}) {
    EXPECT_EQ(ParseRelationType(RelationTypeName(t)), t);
  }
  EXPECT_EQ(ParseRelationType("overlap"), RelationType::kOverlap);
  EXPECT_EQ(ParseRelationType("DURING"), std::nullopt);
  EXPECT_TRUE(IsTemporal(RelationType::kAfter));
  EXPECT_FALSE(IsTemporal(RelationType::kModify));
}

TEST(NormalizeNodeLabel, LowercasesAndCollapsesWhitespace) {
  EXPECT_EQ(NormalizeNodeLabel("  Chest \t  PAIN "), "chest pain");
}

TEST(BuildCaseGraph, EmptyInput) {
  Document doc;
  doc.doc_id = "d1";
  CaseGraph g = BuildCaseGraph(doc, {}, {});
  EXPECT_EQ(g.doc_id, "d1");
  EXPECT_TRUE(g.nodes.empty());
  EXPECT_TRUE(g.edges.empty());
}

TEST(BuildCaseGraph, IdenticalMergesAndRepointsEdges) {
  Document doc;
  doc.doc_id = "d1";
  doc.text = "fever fever sepsis";
  std::vector<Entity> e = {Ent("T1", EntityType::Kind::kSignSymptom, 0, "fever"),
                           Ent("T2", EntityType::Kind::kSignSymptom, 6, "fever"),
                           Ent("T3", EntityType::Kind::kDiseaseDisorder, 12, "sepsis")};
  std::vector<RelationAssertion> r = {{"R1", RelationType::kIdentical, "T1", "T2"},
                                      {"R2", RelationType::kBefore, "T2", "T3"}};
  CaseGraph g = BuildCaseGraph(doc, e, r);
  ASSERT_EQ(g.nodes.size(), 2u);
  EXPECT_EQ(g.nodes[0].node_id, "T1");
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(g.edges[0], (GraphEdge{"T1", "T3", RelationType::kBefore}));
  EXPECT_EQ(MergedNodeIds(e, r).at("T2"), "T1");
  EXPECT_TRUE(ValidateGraph(g).empty());
}

TEST(BuildCaseGraph, DeterministicAndValidOnGeneratedInput) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    oracle::GeneratedAnnotations gen = oracle::RandomAnnotations(rng);
    Document doc;
    doc.doc_id = "g";
    doc.text = gen.text;
    CaseGraph a = BuildCaseGraph(doc, gen.set.entities, gen.set.relations);
    CaseGraph b = BuildCaseGraph(doc, gen.set.entities, gen.set.relations);
    EXPECT_EQ(a, b);
    EXPECT_TRUE(ValidateGraph(a).empty());
    std::size_t merges = 0;
    std::map<std::string, std::string> merged = MergedNodeIds(gen.set.entities, gen.set.relations);
    for (const auto &[id, root] : merged) merges += id != root;
    EXPECT_EQ(a.nodes.size(), gen.set.entities.size() - merges);
  }
}

TEST(ValidateGraph, ReportsUnknownNodeAndDuplicates) {
  CaseGraph g;
  g.doc_id = "d";
  g.nodes = {{"T1", "fever", EntityType::Kind::kSignSymptom},
             {"T2", "cough", EntityType::Kind::kSignSymptom}};
  EXPECT_TRUE(ValidateGraph(g).empty());

  g.edges = {{"T1", "T9", RelationType::kBefore}};
  std::vector<Violation> v = ValidateGraph(g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].subject.find("T9") + v[0].message.find("T9"), 2 * std::string::npos);

  g.edges.clear();
  g.nodes.push_back({"T1", "again", EntityType::Kind::kSignSymptom});
  EXPECT_EQ(ValidateGraph(g).size(), 1u);
}

TEST(ValidateAnnotations, FlagsSurfaceMismatchAndBadSpan) {
  Document doc;
  doc.text = "Pt has dyspnea.";
  EXPECT_TRUE(ValidateAnnotations(
                  doc, {Ent("T1", EntityType::Kind::kSignSymptom, 7, "dyspnea")}, {})
                  .empty());
  EXPECT_FALSE(ValidateAnnotations(
                   doc, {Ent("T1", EntityType::Kind::kSignSymptom, 6, "dyspnea")}, {})
                   .empty());
  EXPECT_FALSE(ValidateAnnotations(
                   doc, {Ent("T1", EntityType::Kind::kSignSymptom, 12, "dyspnea")}, {})
                   .empty());
  EXPECT_FALSE(ValidateAnnotations(doc, {Ent("T1", EntityType::Kind::kSignSymptom, 7, "dyspnea")},
                                   {{"R1", RelationType::kBefore, "T1", "T4"}})
                   .empty());
}

}  // namespace
}  // namespace casegraph
