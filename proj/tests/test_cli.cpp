#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>

#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(RELSEC_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  while (const std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return (testsupport::data_dir() / name).string(); }

fs::path scratch(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("relsec_cli_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Cli, ExtractPrintsOneSection) {
  const CliRun r = run("extract --page " + data("qa_page.html") + " --trace " + data("listing2_trace.txt") + " --code " +
                    data("listing1_code.java"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("java.io.EOFException"), std::string::npos);
  EXPECT_EQ(r.out.find("Cheap hosting"), std::string::npos);
}

TEST(Cli, ExtractJsonIsMachineReadable) {
  const CliRun r = run("extract --format json --top 2 --page " + data("qa_page.html") + " --trace " +
                    data("listing2_trace.txt"));
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  EXPECT_GE(j.size(), 1u);
  EXPECT_TRUE(j[0].contains("metrics"));
}

TEST(Cli, InlineTrace) {
  const CliRun r = run("extract --page " + data("qa_page.html") + " --trace-text 'java.io.EOFException'");
  EXPECT_EQ(r.code, 0);
}

TEST(Cli, LinkFarmExitsThree) {
  EXPECT_EQ(run("extract --page " + data("linkfarm.html") + " --trace " + data("listing2_trace.txt")).code, 3);
}

TEST(Cli, UsageErrors) {
  const std::string base = "extract --page " + data("qa_page.html") + " --trace " + data("listing2_trace.txt");
  EXPECT_EQ(run(base + " --mode bogus").code, 2);
  EXPECT_EQ(run(base + " --format xml").code, 2);
  EXPECT_EQ(run(base + " --top 0").code, 2);
  EXPECT_EQ(run("extract --trace " + data("listing2_trace.txt")).code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST(Cli, MissingFileNamesPath) {
  const std::string cmd = std::string(RELSEC_CLI) + " extract --page /nonexistent/page.html --trace " +
                          data("listing2_trace.txt") + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 1024> buf{};
  while (const std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  EXPECT_EQ(WEXITSTATUS(status), 1);
  EXPECT_NE(out.find("/nonexistent/page.html"), std::string::npos);
}

TEST(Cli, BadConfigIsInputError) {
  const fs::path dir = scratch("cfg");
  std::ofstream(dir / "w.conf") << "zeta = 3\n";
  EXPECT_EQ(run("extract --page " + data("qa_page.html") + " --trace " + data("listing2_trace.txt") + " --config " +
                (dir / "w.conf").string())
                .code,
            1);
  fs::remove_all(dir);
}

TEST(Cli, ContextCommand) {
  const CliRun r = run("context --trace " + data("listing2_trace.txt") + " --code " + data("listing1_code.java"));
  ASSERT_EQ(r.code, 0);
  for (const char* t : {"eofexception", "readint", "peekinputstream", "init", "arraylist"}) {
    EXPECT_NE(r.out.find(t), std::string::npos) << t;
  }
  const CliRun only = run("context --trace " + data("listing2_trace.txt"));
  EXPECT_EQ(only.out.find("arraylist"), std::string::npos);
  const fs::path dir = scratch("ctx");
  std::ofstream(dir / "empty.txt") << "";
  EXPECT_EQ(run("context --trace " + (dir / "empty.txt").string()).code, 1);
  fs::remove_all(dir);
}

TEST(Cli, EvaluateWritesReport) {
  const fs::path dir = scratch("eval");
  const CliRun r = run("evaluate --corpus " + testsupport::corpus_dir().string() +
                    " --modes density,relevance,combined --compare --workers 2 --report " +
                    (dir / "report.json").string());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Delta"), std::string::npos);
  const auto j = nlohmann::json::parse(testsupport::slurp(dir / "report.json"));
  EXPECT_EQ(j["means"].size(), 3u);
  fs::remove_all(dir);
}

TEST(Cli, EvaluateErrors) {
  const fs::path dir = scratch("evalbad");
  fs::create_directories(dir / "corpus" / "broken");
  std::ofstream(dir / "corpus" / "broken" / "page.html") << "<p>x</p>";
  const std::string report = " --report " + (dir / "r.json").string();
  const std::string cmd = std::string(RELSEC_CLI) + " evaluate --corpus " + (dir / "corpus").string() + report + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 1024> buf{};
  while (const std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  EXPECT_EQ(WEXITSTATUS(::pclose(pipe)), 1);
  EXPECT_NE(out.find("broken"), std::string::npos);
  EXPECT_EQ(run("evaluate --corpus " + testsupport::corpus_dir().string() + " --modes density --compare" + report).code,
            2);
  EXPECT_EQ(run("evaluate --corpus " + testsupport::corpus_dir().string() + " --modes nope" + report).code, 2);
  fs::remove_all(dir);
}
