// relsec: pick the page section most relevant to a Java exception.
//
// Exit codes: 0 ok, 1 input or corpus error, 2 usage error, 3 no section kept.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "relsec.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kInputError = 1, kUsageError = 2, kEmptyResult = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw relsec::Error("cannot read file: " + path.string());
  return relsec::read_file(path);
}

relsec::MetricWeights load_weights(const std::string& config_path) {
  if (config_path.empty()) return {};
  return relsec::parse_weights(read_input(config_path));
}

struct ExtractArgs {
  std::string page, trace, trace_text, code, mode = "combined", format = "text", config;
  std::size_t top = 1;
  bool verbose = false;
};

struct EvaluateArgs {
  std::string corpus, modes = "density,relevance,combined", report, config;
  bool compare = false;
  unsigned workers = 0;
  std::size_t top = 1;
};

struct ContextArgs {
  std::string trace, code;
  bool json = false;
};

int cmd_extract(const ExtractArgs& a) {
  const auto mode = relsec::parse_mode(a.mode);
  if (!mode) throw UsageError("unknown mode: " + a.mode);
  const auto format = relsec::parse_format(a.format);
  if (!format) throw UsageError("unknown format: " + a.format);
  if (a.trace.empty() == a.trace_text.empty()) throw UsageError("give exactly one of --trace or --trace-text");
  if (a.top < 1) throw UsageError("--top must be >= 1");

  relsec::RunConfig cfg;
  cfg.mode = *mode;
  cfg.format = *format;
  cfg.top_n = a.top;
  cfg.page = a.page;
  cfg.weights = load_weights(a.config);
  cfg.validate();

  const std::string trace = a.trace.empty() ? a.trace_text : read_input(a.trace);
  std::optional<std::string> code;
  if (!a.code.empty()) code = read_input(a.code);
  const relsec::Document doc = relsec::parse_html(read_input(cfg.page));
  const relsec::ExceptionContext ctx =
      code ? relsec::build_context(trace, *code) : relsec::build_context(trace);
  const relsec::ExtractionResult result = relsec::extract(doc, ctx, cfg.weights, cfg.mode);

  if (a.verbose) {
    std::cerr << "mode " << relsec::to_string(result.mode) << ", threshold " << result.diagnostics.threshold
              << ", kept " << result.kept_sections.size() << " of " << doc.require_body().children.size()
              << " body children\n";
    for (const relsec::Section& s : result.kept_sections) {
      const auto& m = s.metrics;
      std::cerr << "  node " << s.node_id << " <" << doc.node(s.node_id).tag_name << "> CTD=" << m.ctd
                << " CTR=" << m.ctr << " CTS=" << m.cts << "\n";
    }
  }
  if (result.empty()) {
    std::cerr << "no relevant section\n";
    return kEmptyResult;
  }
  const auto ranked = result.ranked();
  const std::size_t n = std::min(cfg.top_n, ranked.size());
  if (cfg.format == relsec::Format::json) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) out.push_back(relsec::section_json(*ranked[i]));
    std::cout << out.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (i) std::cout << "\n";
      std::cout << relsec::render_section(*ranked[i], cfg.format) << "\n";
    }
  }
  return kOk;
}

std::vector<relsec::Mode> parse_modes(const std::string& list) {
  std::vector<relsec::Mode> modes;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto m = relsec::parse_mode(item);
    if (!m) throw UsageError("unknown mode: " + item);
    if (std::find(modes.begin(), modes.end(), *m) == modes.end()) modes.push_back(*m);
  }
  if (modes.empty()) throw UsageError("no modes given");
  return modes;
}

int cmd_evaluate(const EvaluateArgs& a) {
  const auto modes = parse_modes(a.modes);
  if (a.compare && modes.size() < 2) throw UsageError("--compare needs >= 2 modes");
  if (a.top < 1) throw UsageError("--top must be >= 1");
  const relsec::MetricWeights w = load_weights(a.config);
  const relsec::EvalReport report = relsec::run_corpus(a.corpus, modes, w, a.workers, a.top);
  {
    std::ofstream out(a.report, std::ios::binary);
    if (!out) throw relsec::Error("cannot write report: " + a.report);
    out << report.to_json().dump(2) << "\n";
  }
  std::cout << relsec::summary_table(report);
  if (a.compare) std::cout << "\n" << relsec::compare_modes(report);
  for (const auto& r : report.per_case) {
    if (r.status == "error") std::cerr << "case " << r.case_id << ": " << r.error << "\n";
  }
  return kOk;
}

int cmd_context(const ContextArgs& a) {
  const std::string trace = read_input(a.trace);
  std::optional<std::string> code;
  if (!a.code.empty()) code = read_input(a.code);
  const relsec::ExceptionContext ctx = code ? relsec::build_context(trace, *code) : relsec::build_context(trace);
  if (a.json) {
    nlohmann::json j;
    j["exception"] = ctx.trace.exception_fqn;
    if (ctx.trace.message) j["message"] = *ctx.trace.message;
    j["frames"] = ctx.trace.frames.size();
    j["tokens"] = ctx.combined_list;
    j["support"] = ctx.combined.support();
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  std::vector<std::string> seen;
  for (const auto& t : ctx.combined_list) {
    if (std::find(seen.begin(), seen.end(), t) == seen.end()) seen.push_back(t);
  }
  for (std::size_t i = 0; i < seen.size(); ++i) std::cout << (i ? " " : "") << seen[i];
  std::cout << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Find the section of a web page most relevant to a programming exception"};
  app.require_subcommand(1);

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Print the most relevant section(s) of a page");
  extract->add_option("--page", ex.page, "Saved HTML page")->required();
  extract->add_option("--trace", ex.trace, "File holding the stack trace");
  extract->add_option("--trace-text", ex.trace_text, "Stack trace given inline");
  extract->add_option("--code", ex.code, "File holding the context code");
  extract->add_option("--mode", ex.mode, "density, relevance or combined")->capture_default_str();
  extract->add_option("--top", ex.top, "Number of sections to print")->capture_default_str();
  extract->add_option("--format", ex.format, "text, html or json")->capture_default_str();
  extract->add_option("--config", ex.config, "key=value weights file");
  extract->add_flag("--verbose,-v", ex.verbose, "Thresholds and section scores on stderr");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score extraction modes over a corpus");
  evaluate->add_option("--corpus", ev.corpus, "Corpus directory")->required();
  evaluate->add_option("--modes", ev.modes, "Comma-separated modes")->capture_default_str();
  evaluate->add_option("--report", ev.report, "Where to write the JSON report")->required();
  evaluate->add_flag("--compare", ev.compare, "Also print a side-by-side comparison");
  evaluate->add_option("--workers", ev.workers, "Worker threads (0 = all cores)")->capture_default_str();
  evaluate->add_option("--top", ev.top, "Sections joined for scoring")->capture_default_str();
  evaluate->add_option("--config", ev.config, "key=value weights file");

  ContextArgs cx;
  auto* context = app.add_subcommand("context", "Print the token context built from a trace and code");
  context->add_option("--trace", cx.trace, "File holding the stack trace")->required();
  context->add_option("--code", cx.code, "File holding the context code");
  context->add_flag("--json", cx.json, "Emit the ordered token list and parsed trace as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsageError;
  }

  try {
    if (extract->parsed()) return cmd_extract(ex);
    if (evaluate->parsed()) return cmd_evaluate(ev);
    return cmd_context(cx);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const relsec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
