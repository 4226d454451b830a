#include <gtest/gtest.h>

#include "support.hpp"

using namespace relsec;
using testsupport::fixture;

namespace {

const DomNode* by_id(const Document& doc, std::string_view id) {
  for (const DomNode* n : doc.nodes()) {
    if (const auto* v = n->attribute("id"); v && *v == id) return n;
  }
  return nullptr;
}

}  // namespace

TEST(Extract, QaPageRecommendsQuestion) {
  const Document doc = parse_html(fixture("qa_page.html"));
  const ExtractionResult r = extract(doc, testsupport::listing_context(), {}, Mode::combined);
  ASSERT_FALSE(r.empty());
  const DomNode* question = by_id(doc, "question");
  ASSERT_NE(question, nullptr);
  EXPECT_TRUE(doc.within(r.recommendation()->node_id, question->node_id));
  EXPECT_NE(r.recommendation()->text.find("EOFException"), std::string::npos);
  for (const Section& s : r.kept_sections) {
    EXPECT_FALSE(doc.within(s.node_id, by_id(doc, "nav")->node_id));
    EXPECT_FALSE(doc.within(s.node_id, by_id(doc, "ads")->node_id));
  }
}

TEST(Extract, SingleChildIsKept) {
  const Document doc = parse_html(fixture("article.html"));
  for (Mode mode : {Mode::density, Mode::combined}) {
    const ExtractionResult r = extract(doc, empty_context(), {}, mode);
    ASSERT_EQ(r.kept_sections.size(), 1u) << to_string(mode);
    EXPECT_TRUE(doc.within(r.recommendation()->node_id, doc.require_body().children[0].node_id));
  }
}

TEST(Extract, SingleArticleSameInDensityAndCombined) {
  const Document doc = parse_html(fixture("article.html"));
  const auto d = extract(doc, empty_context(), {}, Mode::density);
  const auto c = extract(doc, empty_context(), {}, Mode::combined);
  EXPECT_EQ(d.recommendation()->node_id, c.recommendation()->node_id);
}

TEST(Extract, LinkFarmIsEmpty) {
  const Document doc = parse_html(fixture("linkfarm.html"));
  EXPECT_TRUE(extract_density_only(doc).empty());
  EXPECT_TRUE(extract(doc, testsupport::listing_context(), {}, Mode::combined).empty());
}

TEST(Extract, DensityPrefersLongProseCombinedPrefersAnswer) {
  const Document doc = parse_html(fixture("mixed_qa.html"));
  const int essay = by_id(doc, "essay")->node_id;
  const int answer = by_id(doc, "answer")->node_id;
  const auto d = extract_density_only(doc);
  ASSERT_FALSE(d.empty());
  EXPECT_TRUE(doc.within(d.recommendation()->node_id, essay));
  const auto c = extract(doc, testsupport::listing_context(), {}, Mode::combined);
  ASSERT_FALSE(c.empty());
  EXPECT_TRUE(doc.within(c.recommendation()->node_id, answer));
}

TEST(Extract, LabelsCoverKeptSubtrees) {
  const Document doc = parse_html(fixture("qa_page.html"));
  const auto r = extract(doc, testsupport::listing_context(), {}, Mode::combined);
  const auto& labels = r.diagnostics.labels;
  ASSERT_EQ(labels.size(), doc.size());
  for (const Section& s : r.kept_sections) {
    for (const DomNode* n : doc.nodes()) {
      if (doc.within(n->node_id, s.node_id)) {
        EXPECT_EQ(labels[n->node_id], Label::content);
      }
    }
  }
  for (const DomNode& child : doc.require_body().children) {
    const auto& pc = r.diagnostics.preserved_children;
    if (std::find(pc.begin(), pc.end(), child.node_id) == pc.end()) {
      EXPECT_EQ(labels[child.node_id], Label::noise);
    }
  }
}

TEST(Extract, ThresholdIsBodyScore) {
  const Document doc = parse_html(fixture("qa_page.html"));
  const ExceptionContext ctx = testsupport::listing_context();
  const PageMetrics page = compute_page_metrics(doc, ctx, {});
  const auto r = select_sections(doc, page, Mode::combined);
  EXPECT_EQ(r.diagnostics.threshold, page.nodes[page.body_id].cts);
  for (int id : r.diagnostics.preserved_children) EXPECT_GT(page.nodes[id].cts, r.diagnostics.threshold);
}

TEST(Extract, RankedOrder) {
  const Document doc = parse_html(fixture("qa_page.html"));
  const auto r = extract(doc, testsupport::listing_context(), {}, Mode::combined);
  const auto ranked = r.ranked();
  ASSERT_EQ(ranked.size(), r.kept_sections.size());
  EXPECT_EQ(ranked.front(), r.recommendation());
  for (std::size_t i = 1; i < ranked.size(); ++i) EXPECT_GE(ranked[i - 1]->metrics.ctr, ranked[i]->metrics.ctr);
}

TEST(Render, TextAndHtml) {
  const Document doc = parse_html(fixture("qa_page.html"));
  const auto r = extract(doc, testsupport::listing_context(), {}, Mode::combined);
  const Section& s = *r.recommendation();
  EXPECT_EQ(render_section(s, Format::text), text_content(doc.node(s.node_id)));
  const Document again = parse_html(render_section(s, Format::html));
  const DomNode& reparsed = again.require_body().children.at(0);
  EXPECT_TRUE(same_tree(doc.node(s.node_id), reparsed));
}

TEST(Render, GoldenJson) {
  const Document doc = parse_html(fixture("qa_page.html"));
  const auto r = extract(doc, testsupport::listing_context(), {}, Mode::combined);
  std::string expected = fixture("qa_page.section.json");
  while (!expected.empty() && expected.back() == '\n') expected.pop_back();
  EXPECT_EQ(render_section(*r.recommendation(), Format::json), expected);
}

TEST(Baseline, IgnoresContext) {
  const Document doc = parse_html(fixture("mixed_qa.html"));
  const auto a = extract(doc, testsupport::listing_context(), {}, Mode::density);
  const auto b = extract(doc, build_context("java.lang.NullPointerException\n\tat x.Y.z(Y.java:1)"), {}, Mode::density);
  ASSERT_EQ(a.kept_sections.size(), b.kept_sections.size());
  for (std::size_t i = 0; i < a.kept_sections.size(); ++i) {
    EXPECT_EQ(section_json(a.kept_sections[i]).dump(), section_json(b.kept_sections[i]).dump());
  }
}

TEST(Modes, Parsing) {
  EXPECT_EQ(parse_mode("density"), Mode::density);
  EXPECT_EQ(parse_mode("bogus"), std::nullopt);
  EXPECT_EQ(parse_format("json"), Format::json);
  EXPECT_EQ(parse_format("xml"), std::nullopt);
}
