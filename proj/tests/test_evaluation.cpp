#include <gtest/gtest.h>

#include "support.hpp"

using namespace relsec;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("relsec_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& p, const std::string& s) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << s;
}

void write_case(const fs::path& dir, const std::string& page, const std::string& gold) {
  write(dir / "page.html", page);
  write(dir / "context.json", R"j({"trace": "java.io.EOFException\n\tat a.B.c(B.java:1)"})j");
  write(dir / "gold.txt", gold);
}

}  // namespace

TEST(ScoreCase, Identical) {
  const auto s = score_case("some gold text", "some gold text");
  EXPECT_EQ(s.precision, 1.0);
  EXPECT_EQ(s.recall, 1.0);
  EXPECT_EQ(s.f1, 1.0);
}

TEST(ScoreCase, HandExample) {
  const auto s = score_case("the quick brown fox", "quick fox jumps");
  EXPECT_DOUBLE_EQ(s.precision, 0.5);
  EXPECT_NEAR(s.recall, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.f1, 4.0 / 7.0, 1e-12);
}

TEST(ScoreCase, DisjointAndEmpty) {
  EXPECT_EQ(score_case("alpha beta", "gamma"), (CaseScore{0, 0, 0, false}));
  EXPECT_EQ(score_case("", "gamma"), (CaseScore{0, 0, 0, false}));
  EXPECT_EQ(score_case("alpha", ""), (CaseScore{0, 0, 0, false}));
  EXPECT_EQ(score_case("", ""), (CaseScore{1, 1, 1, false}));
}

TEST(ScoreCase, Normalization) {
  EXPECT_EQ(normalize_words("  Hello, (World)!  foo.bar -- "), (std::vector<std::string>{"hello", "world", "foo.bar"}));
  EXPECT_EQ(score_case("Hello, World!", "hello world").f1, 1.0);
}

TEST(ScoreCase, WordCap) {
  std::string big;
  for (int i = 0; i < 30; ++i) big += "w" + std::to_string(i) + " ";
  const auto s = score_case(big, big, 10);
  EXPECT_TRUE(s.truncated);
  EXPECT_EQ(s.f1, 1.0);
}

TEST(Corpus, EmptyCorpusRejected) {
  TempDir t("empty");
  EXPECT_THROW(discover_corpus(t.path), CorpusLayoutError);
  EXPECT_THROW(discover_corpus(t.path / "missing"), CorpusLayoutError);
}

TEST(Corpus, MalformedCasesListed) {
  TempDir t("malformed");
  write_case(t.path / "good", "<p>x</p>", "x");
  write(t.path / "bad1" / "page.html", "<p>x</p>");
  write_case(t.path / "bad2", "<p>x</p>", "");
  try {
    discover_corpus(t.path);
    FAIL() << "expected CorpusLayoutError";
  } catch (const CorpusLayoutError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("bad1"), std::string::npos);
    EXPECT_NE(msg.find("bad2"), std::string::npos);
    EXPECT_EQ(msg.find("good"), std::string::npos);
  }
}

TEST(Corpus, PerfectSingleCase) {
  TempDir t("single");
  write_case(t.path / "only", "<html><body><div><p>read the stream header carefully</p></div></body></html>",
             "read the stream header carefully");
  const auto report = run_corpus(t.path, {Mode::combined, Mode::density}, {}, 1);
  ASSERT_EQ(report.means.size(), 2u);
  for (const auto& m : report.means) {
    EXPECT_EQ(m.mp, 1.0);
    EXPECT_EQ(m.mr, 1.0);
    EXPECT_EQ(m.mf, 1.0);
  }
}

TEST(Corpus, FailuresAreRecordedNotFatal) {
  TempDir t("failures");
  write_case(t.path / "a_ok", "<html><body><div><p>words here</p></div></body></html>", "words here");
  write(t.path / "b_badctx" / "page.html", "<p>x</p>");
  write(t.path / "b_badctx" / "context.json", "{\"trace\": \"no trace here\"}");
  write(t.path / "b_badctx" / "gold.txt", "x");
  write_case(t.path / "c_farm", "<html><body><div><a href=#>x y</a></div></body></html>", "x y");
  const auto report = run_corpus(t.path, {Mode::combined}, {}, 2);
  ASSERT_EQ(report.per_case.size(), 3u);
  EXPECT_EQ(report.per_case[0].status, "ok");
  EXPECT_EQ(report.per_case[1].status, "error");
  EXPECT_EQ(report.per_case[2].status, "empty");
  EXPECT_EQ(report.per_case[2].score.f1, 0.0);
  EXPECT_NEAR(report.means[0].mf, 1.0 / 3.0, 1e-12);
}

TEST(Corpus, MeanOfF1NotF1OfMeans) {
  std::vector<CaseResult> rows(2);
  rows[0].score = {1.0, 0.1, f1_of(1.0, 0.1), false};
  rows[1].score = {0.1, 1.0, f1_of(0.1, 1.0), false};
  const auto m = mean_by_mode(rows, {Mode::combined}).at(0);
  EXPECT_NEAR(m.mf, f1_of(1.0, 0.1), 1e-12);
  EXPECT_GT(f1_of(m.mp, m.mr), m.mf);
}

TEST(Corpus, GroupsAndCompare) {
  TempDir t("groups");
  write_case(t.path / "a", "<html><body><div><p>alpha beta gamma</p></div></body></html>", "alpha beta gamma");
  write(t.path / "a" / "meta.json", R"({"group": "so"})");
  write_case(t.path / "b", "<html><body><div><p>delta epsilon</p></div></body></html>", "delta");
  write(t.path / "b" / "meta.json", R"({"group": "non-so"})");
  const auto report = run_corpus(t.path, {Mode::density, Mode::relevance, Mode::combined}, {}, 1);
  EXPECT_EQ(report.group_means.size(), 2u);
  EXPECT_EQ(report.group_means.at("so").at(0).mf, 1.0);
  const std::string table = compare_modes(report);
  EXPECT_NE(table.find("density"), std::string::npos);
  EXPECT_NE(table.find("relevance"), std::string::npos);
  EXPECT_NE(table.find("Delta"), std::string::npos);
  const auto j = report.to_json();
  EXPECT_EQ(j["means"].size(), 3u);
  EXPECT_EQ(j["cases"].size(), 6u);
  EXPECT_NE(summary_table(report).find("MF"), std::string::npos);
}

TEST(Corpus, CompareNeedsTwoModes) {
  EvalReport r;
  r.means.resize(1);
  EXPECT_THROW(compare_modes(r), std::invalid_argument);
}
