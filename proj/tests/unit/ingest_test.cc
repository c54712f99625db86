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

#include "casegraph/ingest.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <thread>

#include "casegraph/annotation_io.h"
#include "casegraph/error.h"
#include "casegraph/text.h"
#include "httplib.h"

namespace casegraph {
namespace {

namespace fs = std::filesystem;

Json ErrorDetail(const std::function<void()> &f, ErrorKind expected) {
  try {
    f();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), expected) << e.what();
    return e.detail();
  }
  ADD_FAILURE() << "no error raised";
  return nullptr;
}

TEST(ParseXml, ElementsAttributesEntitiesAndCdata) {
  XmlElement root = ParseXml(
      "\xEF\xBB\xBF<?xml version=\"1.0\"?>\n<!DOCTYPE article>\n<!-- c -->\n"
      "<article id='7'><p>a &amp; b &#233;&#x41;<![CDATA[<x>]]></p><empty/></article>");
  EXPECT_EQ(root.name, "article");
  ASSERT_NE(root.Attribute("id"), nullptr);
  EXPECT_EQ(*root.Attribute("id"), "7");
  ASSERT_EQ(root.children.size(), 2u);
  const XmlElement &p = *root.children[0].element;
  EXPECT_EQ(p.children[0].text, "a & b \xC3\xA9" "A<x>");
  EXPECT_EQ(root.line, 4u);
}

TEST(ParseXml, MismatchedTagReportsLineAndColumn) {
  Json d = ErrorDetail([] { ParseXml("<article>\n  <p>text</sec>\n</article>"); },
                       ErrorKind::kInvalidArgument);
  EXPECT_EQ(d.at("line"), 2);
  EXPECT_EQ(d.at("column"), 10);
}

TEST(ParseXml, UnclosedElementReportsOpeningTag) {
  Json d = ErrorDetail([] { ParseXml("<article>\n<sec>\n  <p>x</p>\n"); },
                       ErrorKind::kInvalidArgument);
  EXPECT_EQ(d.at("line"), 2);
  EXPECT_EQ(d.at("column"), 1);
}

TEST(ParseXml, ColumnsCountCodePoints) {
  Json d = ErrorDetail([] { ParseXml("<a>é&bogus;</a>"); }, ErrorKind::kInvalidArgument);
  EXPECT_EQ(d.at("line"), 1);
  EXPECT_EQ(d.at("column"), 5);
}

TEST(ParseXml, RejectsTrailingContentAndBadEntities) {
  EXPECT_THROW(ParseXml("<a/><b/>"), Error);
  EXPECT_THROW(ParseXml("<a>&#xZZ;</a>"), Error);
  EXPECT_THROW(ParseXml("<a b=c/>"), Error);
  EXPECT_THROW(ParseXml(""), Error);
}

TEST(ArticleToDocument, SectionsParagraphsAndSentences) {
  std::vector<std::string> warnings;
  Document d = ArticleToDocument(
      "a1",
      "<article><title> Case  report </title>"
      "<sec name=\"Case\"><p>Fever began.\n   Cough followed.</p><p>Then rest.</p></sec>"
      "<sec name=\"Outcome\"><p>Recovered.</p><fig/></sec></article>",
      &warnings);
  EXPECT_EQ(d.doc_id, "a1");
  EXPECT_EQ(d.title, "Case report");
  EXPECT_EQ(d.text, "Fever began. Cough followed.\n\nThen rest.\n\nRecovered.");
  ASSERT_EQ(d.sections.size(), 2u);
  EXPECT_EQ(d.sections[0].name, "Case");
  EXPECT_EQ(text::Substr(d.text, d.sections[0].span.start, d.sections[0].span.end),
            "Fever began. Cough followed.\n\nThen rest.");
  EXPECT_EQ(text::Substr(d.text, d.sections[1].span.start, d.sections[1].span.end),
            "Recovered.");
  EXPECT_EQ(d.sentences.size(), 4u);
  EXPECT_FALSE(warnings.empty());
}

TEST(ArticleToDocument, WrongRootIsSchemaError) {
  ErrorDetail([] { ArticleToDocument("x", "<html/>", nullptr); }, ErrorKind::kSchema);
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("casegraph-pipeline-" + std::to_string(::getpid()) + "-" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(root_);
    store_ = std::make_unique<Store>(root_);
    pipeline_ = std::make_unique<Pipeline>(
        Gazetteer::Load(CASEGRAPH_SOURCE_DIR "/data/gazetteer.tsv"), &engine_, store_.get());
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path root_;
  SearchEngine engine_;
  std::unique_ptr<Store> store_;
  std::unique_ptr<Pipeline> pipeline_;
};

TEST_F(PipelineTest, IngestTextPersistsAndIndexes) {
  IngestReport r = pipeline_->IngestText(
      "d1", "T", "A patient was admitted to the hospital because of fever and cough.");
  EXPECT_EQ(r.entities.size(), 3u);
  EXPECT_EQ(r.relations.size(), 1u);
  EXPECT_EQ(r.version, 1u);
  EXPECT_TRUE(r.indexed);
  EXPECT_TRUE(store_->Contains("d1"));
  EXPECT_EQ(engine_.KeywordSearch("cough", 10).size(), 1u);
  EXPECT_EQ(pipeline_->NextDocId(), "doc-1");
}

TEST_F(PipelineTest, DuplicateIdsNeedReplace) {
  pipeline_->IngestText("d1", "", "fever");
  ErrorDetail([&] { pipeline_->IngestText("d1", "", "cough"); }, ErrorKind::kAlreadyExists);
  IngestReport r = pipeline_->IngestText("d1", "", "cough", {.replace = true});
  EXPECT_EQ(r.version, 2u);
  EXPECT_TRUE(engine_.KeywordSearch("fever", 10).empty());
}

TEST_F(PipelineTest, XmlIngestUsesArticleStructure) {
  IngestReport r = pipeline_->IngestXml(
      "x1", ReadFile(CASEGRAPH_SOURCE_DIR "/fixtures/articles/12345.xml"));
  EXPECT_EQ(r.document.sections.size(), 2u);
  EXPECT_EQ(r.document.source_meta.at("provenance"), "user-upload");
  EXPECT_FALSE(r.relations.empty());
  EXPECT_TRUE(CheckGraphConsistency(r.graph).consistent);
}

constexpr char kText[] = "fever then cough";
constexpr char kContradiction[] =
    "T1\tSign_symptom 0 5\tfever\nT2\tSign_symptom 11 16\tcough\n"
    "R1\tBEFORE Arg1:T1 Arg2:T2\nR2\tBEFORE Arg1:T2 Arg2:T1\n";

TEST_F(PipelineTest, ContradictoryStandoffIsRejectedUnlessForced) {
  Json d = ErrorDetail([&] { pipeline_->IngestStandoff("s1", "", kText, kContradiction); },
                       ErrorKind::kInconsistent);
  EXPECT_EQ(d.at("status"), "inconsistent");
  EXPECT_FALSE(store_->Contains("s1"));

  IngestReport r = pipeline_->IngestStandoff("s1", "", kText, kContradiction, {.force = true});
  ASSERT_EQ(r.relations.size(), 1u);
  EXPECT_EQ(r.relations[0].id, "R1");
  EXPECT_FALSE(r.warnings.empty());
}

TEST_F(PipelineTest, ReplaceAnnotationsValidatesAndRequiresDocument) {
  pipeline_->IngestText("d1", "", "fever then cough");
  AnnotationSet bad;
  bad.entities = {{"T1", EntityType::Kind::kSignSymptom, {0, 5}, "cough"}};
  Json d = ErrorDetail([&] { pipeline_->ReplaceAnnotations("d1", bad); }, ErrorKind::kValidation);
  EXPECT_FALSE(d.at("violations").empty());
  ErrorDetail([&] { pipeline_->ReplaceAnnotations("nope", {}); }, ErrorKind::kNotFound);

  AnnotationSet good = ParseStandoff(kText, kContradiction);
  good.relations.pop_back();
  IngestReport r = pipeline_->ReplaceAnnotations("d1", good);
  EXPECT_EQ(r.version, 2u);
  EXPECT_EQ(store_->Get("d1").annotations, good);
}

TEST_F(PipelineTest, RebuildAndWarmIndexMatchLiveIndex) {
  pipeline_->IngestText("d1", "", "fever before death");
  pipeline_->IngestText("d2", "", "cough and fever");
  auto live = engine_.KeywordSearch("fever", 10);

  SearchEngine fresh;
  Pipeline other(Gazetteer(pipeline_->gazetteer()), &fresh, store_.get());
  EXPECT_FALSE(other.WarmIndex());  // no snapshot yet: rebuilt and snapshotted
  EXPECT_EQ(fresh.KeywordSearch("fever", 10), live);

  SearchEngine warm;
  Pipeline third(Gazetteer(pipeline_->gazetteer()), &warm, store_.get());
  EXPECT_TRUE(third.WarmIndex());
  EXPECT_EQ(warm.KeywordSearch("fever", 10), live);
  EXPECT_EQ(warm.graph_index(), engine_.graph_index());
}

TEST_F(PipelineTest, DeleteRemovesEverywhere) {
  pipeline_->IngestText("d1", "", "fever");
  EXPECT_TRUE(pipeline_->Delete("d1"));
  EXPECT_FALSE(pipeline_->Delete("d1"));
  EXPECT_FALSE(store_->Contains("d1"));
  EXPECT_TRUE(engine_.KeywordSearch("fever", 10).empty());
}

TEST_F(PipelineTest, EmptyTextIndexesWithEmptyGraph) {
  IngestReport r = pipeline_->IngestText("e1", "", "");
  EXPECT_TRUE(r.graph.nodes.empty());
  EXPECT_TRUE(r.indexed);
  EXPECT_TRUE(engine_.Contains("e1"));
}

TEST_F(PipelineTest, ChainStandoffClosesToBeforeBF) {
  const std::string text = "b d e f";
  const std::string ann =
      "T1\tSign_symptom 0 1\tb\nT2\tSign_symptom 2 3\td\nT3\tSign_symptom 4 5\te\n"
      "T4\tSign_symptom 6 7\tf\nR1\tBEFORE Arg1:T1 Arg2:T2\nR2\tAFTER Arg1:T3 Arg2:T2\n"
      "R3\tOVERLAP Arg1:T3 Arg2:T4\n";
  pipeline_->IngestStandoff("chain", "", text, ann);
  const temporal::TemporalGraph &closure = engine_.graph_index().closures().at("chain");
  EXPECT_TRUE(closure.HasBefore("T1", "T4"));
  // The stored annotations export back to the same standoff text.
  EXPECT_EQ(SerializeStandoff(*store_->Get("chain").annotations), ann);
}

TEST_F(PipelineTest, EntityOnlyStandoffHasNoEdges) {
  IngestReport r = pipeline_->IngestStandoff("n1", "", kText,
                                             "T1\tSign_symptom 0 5\tfever\nT2\tSign_symptom 11 16\tcough\n");
  EXPECT_EQ(r.graph.nodes.size(), 2u);
  EXPECT_TRUE(r.graph.edges.empty());
}

TEST_F(PipelineTest, ReplaceIsIdempotentForIndexState) {
  const std::string text = "Fever began before death. Cough and dyspnea followed.";
  IngestReport first = pipeline_->IngestText("d1", "T", text, {.replace = true});
  InvertedIndex inverted = engine_.inverted_index();
  GraphIndex graphs = engine_.graph_index();
  IngestReport second = pipeline_->IngestText("d1", "T", text, {.replace = true});
  EXPECT_EQ(engine_.inverted_index(), inverted);
  EXPECT_EQ(engine_.graph_index(), graphs);
  EXPECT_EQ(first.graph, second.graph);
  EXPECT_EQ(first.relations, second.relations);
  EXPECT_EQ(second.version, first.version + 1);
}

TEST(RepairTemporalConflicts, DropsLastListedImplicatedRelation) {
  std::vector<Entity> e = {{"T1", EntityType::Kind::kSignSymptom, {0, 1}, "a"},
                           {"T2", EntityType::Kind::kSignSymptom, {2, 3}, "b"},
                           {"T3", EntityType::Kind::kSignSymptom, {4, 5}, "c"}};
  std::vector<RelationAssertion> r = {{"R1", RelationType::kBefore, "T1", "T2"},
                                      {"R2", RelationType::kBefore, "T2", "T3"},
                                      {"R3", RelationType::kModify, "T1", "T3"},
                                      {"R4", RelationType::kBefore, "T3", "T1"}};
  std::vector<RelationAssertion> dropped;
  std::vector<RelationAssertion> kept = RepairTemporalConflicts(e, r, &dropped);
  ASSERT_EQ(dropped.size(), 1u);
  EXPECT_EQ(dropped[0].id, "R4");
  EXPECT_EQ(kept.size(), 3u);
}

TEST(FetchArticle, FixtureModeReadsFilesAndReportsMissing) {
  FetchConfig config;
  config.fixture_dir = CASEGRAPH_SOURCE_DIR "/fixtures/articles";
  EXPECT_NE(FetchArticle("12345", config).find("<article>"), std::string::npos);
  ErrorDetail([&] { FetchArticle("99999", config); }, ErrorKind::kNotFound);
  ErrorDetail([&] { FetchArticle("../secret", config); }, ErrorKind::kInvalidArgument);
}

TEST(FetchArticle, RemoteModeMapsStatusAndNetworkErrors) {
  httplib::Server server;
  server.Get("/ok/12345", [](const httplib::Request &, httplib::Response &res) {
    res.set_content("<article/>", "application/xml");
  });
  server.Get("/ok/500", [](const httplib::Request &, httplib::Response &res) { res.status = 500; });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  FetchConfig config;
  config.base_url_template = "http://127.0.0.1:" + std::to_string(port) + "/ok/{id}";
  config.timeout = std::chrono::milliseconds(2000);
  EXPECT_EQ(FetchArticle("12345", config), "<article/>");
  Json d = ErrorDetail([&] { FetchArticle("500", config); }, ErrorKind::kHttpStatus);
  EXPECT_EQ(d.at("status"), 500);
  ErrorDetail([&] { FetchArticle("404", config); }, ErrorKind::kHttpStatus);
  server.stop();
  thread.join();

  config.base_url_template = "http://127.0.0.1:" + std::to_string(port) + "/ok/{id}";
  config.retries = 0;
  Error err(ErrorKind::kInternal, "");
  try {
    FetchArticle("12345", config);
  } catch (const Error &e) {
    err = e;
  }
  EXPECT_TRUE(err.kind() == ErrorKind::kNetwork || err.kind() == ErrorKind::kTimeout)
      << err.what();
}

}  // namespace
}  // namespace casegraph
