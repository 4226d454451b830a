#include <gtest/gtest.h>

#include "support.hpp"

using namespace relsec;
using Tokens = std::vector<std::string>;

namespace {

TokenBag bag(std::initializer_list<std::pair<const char*, unsigned>> items) {
  TokenBag b;
  for (const auto& [k, n] : items) {
    for (unsigned i = 0; i < n; ++i) b.add(k);
  }
  return b;
}

}  // namespace

TEST(Tokenize, CamelCaseType) {
  EXPECT_EQ(tokenize_text("StringBuffer"), bag({{"stringbuffer", 1}, {"string", 1}, {"buffer", 1}}));
}

TEST(Tokenize, EmptyInput) {
  EXPECT_TRUE(tokenize_text("").empty());
  EXPECT_TRUE(token_sequence("").empty());
  EXPECT_TRUE(token_sequence("   \n\t").empty());
}

// Segment composites are kept, so "IOException" also yields "ioexception".
TEST(Tokenize, DottedQualifiedName) {
  EXPECT_EQ(tokenize_text("java.io.IOException;"),
            bag({{"javaioioexception", 1}, {"java", 1}, {"io", 2}, {"ioexception", 1}, {"exception", 1}}));
}

TEST(Tokenize, SequenceOrder) {
  EXPECT_EQ(token_sequence("ois.readInt()"), (Tokens{"oisreadint", "ois", "readint", "read", "int"}));
  EXPECT_EQ(token_sequence("int x = 5;"), (Tokens{"int"}));
}

TEST(Tokenize, AcronymsAndDigits) {
  EXPECT_EQ(token_sequence("XMLHttpRequest"), (Tokens{"xmlhttprequest", "xml", "http", "request"}));
  EXPECT_EQ(token_sequence("utf8Decoder"), (Tokens{"utf8decoder", "utf8", "decoder"}));
  EXPECT_EQ(token_sequence("EOFException"), (Tokens{"eofexception", "eof", "exception"}));
}

TEST(Tokenize, SeparatorsSplitSegments) {
  EXPECT_EQ(token_sequence("ObjectInputStream$PeekInputStream"),
            (Tokens{"objectinputstreampeekinputstream", "objectinputstream", "object", "input", "stream",
                    "peekinputstream", "peek", "input", "stream"}));
  EXPECT_EQ(token_sequence("snake_case"), (Tokens{"snakecase", "snake", "case"}));
}

TEST(Tokenize, NonAsciiSurvives) {
  EXPECT_EQ(token_sequence("Größe über"), (Tokens{"größe", "über"}));
}

TEST(Cosine, IdenticalAndDisjoint) {
  const TokenBag a = tokenize_text("read the stream");
  EXPECT_DOUBLE_EQ(cosine(a, a), 1.0);
  EXPECT_DOUBLE_EQ(cosine(a, tokenize_text("unrelated words")), 0.0);
  EXPECT_DOUBLE_EQ(cosine(a, TokenBag{}), 0.0);
  EXPECT_DOUBLE_EQ(cosine(TokenBag{}, TokenBag{}), 0.0);
}

TEST(Cosine, HandValue) {
  const TokenBag a = bag({{"java", 2}, {"io", 1}});
  const TokenBag b = bag({{"java", 1}, {"io", 1}, {"read", 1}});
  EXPECT_NEAR(cosine(a, b), 3.0 / std::sqrt(15.0), 1e-12);
  EXPECT_NEAR(cosine(a, b), 0.7746, 1e-4);
}

TEST(Lcs, HandValues) {
  EXPECT_EQ(lcs_length(Tokens{"a", "b", "c", "d"}, Tokens{"b", "d", "e"}), 2u);
  EXPECT_EQ(lcs_length(Tokens{"x", "y"}, Tokens{"p", "q"}), 0u);
  const Tokens same{"a", "b", "a", "c"};
  EXPECT_EQ(lcs_length(same, same), same.size());
  EXPECT_EQ(lcs_length(Tokens{}, same), 0u);
}

TEST(TokenBag, Accounting) {
  TokenBag b = tokenize_text("read read write");
  EXPECT_EQ(b.count("read"), 2u);
  EXPECT_EQ(b.distinct(), 2u);
  EXPECT_EQ(b.total(), 3u);
  EXPECT_TRUE(b.contains("write"));
  EXPECT_FALSE(b.contains("wr"));
}
