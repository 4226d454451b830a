#include <gtest/gtest.h>

#include "support.hpp"

using namespace relsec;
using testsupport::outline;

TEST(HtmlParser, Html5Goldens) {
  std::ifstream in(testsupport::data_dir() / "html5_golden.jsonl");
  ASSERT_TRUE(in);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    const Document doc = parse_html(j["html"].get<std::string>());
    ASSERT_NE(doc.body(), nullptr) << j["html"];
    EXPECT_EQ(outline(*doc.body()), j["body"].get<std::string>()) << "input: " << j["html"];
    ++n;
  }
  EXPECT_GE(n, 20);
}

TEST(HtmlParser, MinimalDocument) {
  const Document doc = parse_html("<p>hi</p>");
  EXPECT_EQ(doc.root().tag_name, "html");
  const DomNode& body = doc.require_body();
  ASSERT_EQ(body.children.size(), 1u);
  EXPECT_EQ(body.children[0].tag_name, "p");
  EXPECT_EQ(body.children[0].own_text, "hi");
}

TEST(HtmlParser, ListingFourShape) {
  const Document doc = parse_html(testsupport::fixture("listing4_dom.html"));
  const DomNode& content = doc.require_body().children.at(0);
  EXPECT_EQ(*content.attribute("id"), "content");
  ASSERT_EQ(content.children.size(), 2u);
  const DomNode& header = content.children[0];
  EXPECT_EQ(header.children.at(0).tag_name, "h1");
  EXPECT_EQ(header.children[0].children.at(0).tag_name, "a");
  const DomNode& post = content.children[1];
  EXPECT_EQ(post.children.at(0).tag_name, "p");
  EXPECT_EQ(post.children.at(1).tag_name, "pre");
  EXPECT_EQ(post.children[1].children.at(0).tag_name, "code");
  EXPECT_EQ(post.children[1].children[0].own_text, "java.lang.InstantiationException ..");
}

TEST(HtmlParser, PreorderIds) {
  const Document doc = parse_html("<div><p>a</p><p>b<span>c</span></p></div>");
  for (std::size_t i = 0; i < doc.size(); ++i) EXPECT_EQ(doc.nodes()[i]->node_id, static_cast<int>(i));
  EXPECT_EQ(doc.parent(0), -1);
  const DomNode& span = doc.require_body().children[0].children[1].children[0];
  EXPECT_TRUE(doc.within(span.node_id, doc.require_body().node_id));
}

TEST(HtmlParser, Entities) {
  const Document doc = parse_html("<p>a &amp; b &lt;c&gt; &#233; &#x41; &nbsp;x &copy &bogus;</p>");
  EXPECT_EQ(doc.require_body().children[0].own_text, "a & b <c> \xC3\xA9 A x \xC2\xA9 &bogus;");
}

TEST(HtmlParser, RawTextAndComments) {
  const Document doc = parse_html("<body><!-- <p>hidden</p> --><script>if (a<b) {}</script><p>shown</p></body>");
  const DomNode& body = doc.require_body();
  ASSERT_EQ(body.children.size(), 2u);
  EXPECT_EQ(body.children[0].tag_name, "script");
  EXPECT_EQ(body.children[0].own_text, "");
  ASSERT_EQ(body.children[0].text_runs.size(), 1u);
  EXPECT_EQ(body.children[0].text_runs[0].text, "if (a<b) {}");
  EXPECT_EQ(raw_text(body.children[0]), "");
  EXPECT_EQ(body.children[1].own_text, "shown");
}

TEST(HtmlParser, UnparseableInputs) {
  EXPECT_THROW(parse_html(""), UnparseableInput);
  EXPECT_THROW(parse_html("  \n\t "), UnparseableInput);
  EXPECT_THROW(parse_html(std::string("<p>a\0b</p>", 10)), UnparseableInput);
}

TEST(HtmlParser, TruncatedTagDropped) {
  const Document doc = parse_html("<p>text</p><div class=\"x");
  EXPECT_EQ(outline(doc.require_body()), "body{p{\"text\"}}");
}

TEST(HtmlParser, SelfClosingAndVoid) {
  const Document doc = parse_html("<p>a<br/>b<img src=x>c</p>");
  const DomNode& p = doc.require_body().children[0];
  ASSERT_EQ(p.children.size(), 2u);
  EXPECT_EQ(p.own_text, "a b c");
}

TEST(Encoding, MetaCharsetLatin1) {
  const std::string bytes = "<meta charset=\"iso-8859-1\"><p>caf\xE9</p>";
  const Document doc = parse_html(bytes);
  EXPECT_EQ(doc.require_body().children.at(0).own_text, "caf\xC3\xA9");
}

TEST(Encoding, HintWinsOverMeta) {
  const std::string bytes = "<meta charset=\"utf-8\"><p>caf\xE9</p>";
  const Document doc = parse_html(bytes, "windows-1252");
  EXPECT_EQ(doc.require_body().children.at(0).own_text, "caf\xC3\xA9");
}

TEST(Encoding, Utf8BomAndInvalidBytes) {
  EXPECT_EQ(decode_to_utf8("\xEF\xBB\xBFok"), "ok");
  EXPECT_TRUE(utf8::valid(decode_to_utf8("bad \xFF byte")));
}

TEST(Encoding, Utf16Bom) {
  const std::string le("\xFF\xFE<\0p\0>\0h\0i\0", 12);
  const Document doc = parse_html(le);
  EXPECT_EQ(doc.require_body().children.at(0).own_text, "hi");
}
