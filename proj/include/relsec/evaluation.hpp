#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "relsec/context.hpp"
#include "relsec/error.hpp"
#include "relsec/extractor.hpp"
#include "relsec/html_parser.hpp"
#include "relsec/tokenize.hpp"
#include "relsec/utf8.hpp"

namespace relsec {

struct CaseScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  bool truncated = false;

  friend bool operator==(const CaseScore&, const CaseScore&) = default;
};

inline constexpr std::size_t kDefaultWordCap = 20000;

// Lowercased words with punctuation stripped from both edges; words that are
// pure punctuation disappear.
inline std::vector<std::string> normalize_words(std::string_view text) {
  std::vector<std::string> words;
  const std::string flat = utf8::normalize_whitespace(text);
  std::size_t i = 0;
  while (i < flat.size()) {
    const std::size_t sp = flat.find(' ', i);
    std::string_view w = std::string_view(flat).substr(i, sp == std::string::npos ? std::string::npos : sp - i);
    i = sp == std::string::npos ? flat.size() : sp + 1;
    while (!w.empty() && static_cast<unsigned char>(w.front()) < 0x80 && std::ispunct(static_cast<unsigned char>(w.front()))) w.remove_prefix(1);
    while (!w.empty() && static_cast<unsigned char>(w.back()) < 0x80 && std::ispunct(static_cast<unsigned char>(w.back()))) w.remove_suffix(1);
    if (w.empty()) continue;
    std::string word(w);
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c); });
    words.push_back(std::move(word));
  }
  return words;
}

inline double f1_of(double p, double r) { return p + r > 0 ? 2.0 * p * r / (p + r) : 0.0; }

// Word-LCS precision (against the extracted text), recall (against the
// gold text) and their harmonic mean. An empty side scores 1 only when the
// other side is empty too.
inline CaseScore score_case(std::string_view extracted_text, std::string_view gold_text,
                            std::size_t word_cap = kDefaultWordCap) {
  auto a = normalize_words(extracted_text);
  auto b = normalize_words(gold_text);
  CaseScore s;
  if (a.size() > word_cap) {
    a.resize(word_cap);
    s.truncated = true;
  }
  if (b.size() > word_cap) {
    b.resize(word_cap);
    s.truncated = true;
  }
  const auto l = static_cast<double>(sequence_lcs(a, b));
  s.precision = a.empty() ? (b.empty() ? 1.0 : 0.0) : l / static_cast<double>(a.size());
  s.recall = b.empty() ? (a.empty() ? 1.0 : 0.0) : l / static_cast<double>(b.size());
  s.f1 = f1_of(s.precision, s.recall);
  return s;
}

struct CorpusCase {
  std::string case_id;
  std::filesystem::path page_path;
  std::filesystem::path context_path;
  std::filesystem::path gold_path;
  std::string group;  // from meta.json, empty when absent
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Lists `<dir>/<case_id>/{page.html,context.json,gold.txt}` in case-id order.
// Throws CorpusLayoutError naming every malformed case, or when the corpus
// holds no case at all.
inline std::vector<CorpusCase> discover_corpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw CorpusLayoutError("corpus directory not found: " + dir.string());
  std::vector<fs::path> subdirs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) subdirs.push_back(entry.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  std::vector<CorpusCase> cases;
  std::vector<std::string> problems;
  for (const auto& sub : subdirs) {
    CorpusCase c;
    c.case_id = sub.filename().string();
    c.page_path = sub / "page.html";
    c.context_path = sub / "context.json";
    c.gold_path = sub / "gold.txt";
    std::string missing;
    for (const auto& p : {c.page_path, c.context_path, c.gold_path}) {
      std::error_code ec;
      if (!fs::is_regular_file(p, ec) || fs::file_size(p, ec) == 0) {
        missing += (missing.empty() ? "" : ", ") + p.filename().string();
      }
    }
    if (!missing.empty()) {
      problems.push_back(c.case_id + ": missing or empty " + missing);
      continue;
    }
    if (const fs::path meta = sub / "meta.json"; fs::is_regular_file(meta)) {
      try {
        const auto j = nlohmann::json::parse(read_file(meta));
        if (j.contains("group") && j["group"].is_string()) c.group = j["group"].get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        problems.push_back(c.case_id + ": bad meta.json (" + e.what() + ")");
        continue;
      }
    }
    cases.push_back(std::move(c));
  }
  if (!problems.empty()) {
    std::string msg = "malformed corpus cases:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw CorpusLayoutError(msg);
  }
  if (cases.empty()) throw CorpusLayoutError("corpus has no cases: " + dir.string());
  return cases;
}

struct CaseResult {
  std::string case_id;
  std::string group;
  Mode mode = Mode::combined;
  CaseScore score;
  std::string status;  // "ok", "empty" or "error"
  std::string error;
  std::optional<int> node_id;
};

struct ModeMeans {
  Mode mode = Mode::combined;
  double mp = 0, mr = 0, mf = 0;
  std::size_t n = 0;
};

struct EvalReport {
  std::vector<Mode> modes;
  MetricWeights weights;
  std::size_t top_n = 1;
  std::vector<CaseResult> per_case;  // case-id order, modes in request order
  std::vector<ModeMeans> means;
  std::map<std::string, std::vector<ModeMeans>> group_means;

  nlohmann::json to_json() const;
};

// Mean of per-case P, R and F1 (MF is the mean of F1, not F1 of means).
inline std::vector<ModeMeans> mean_by_mode(const std::vector<CaseResult>& rows, const std::vector<Mode>& modes,
                                           std::string_view group = {}) {
  std::vector<ModeMeans> out;
  for (Mode mode : modes) {
    ModeMeans m;
    m.mode = mode;
    for (const auto& r : rows) {
      if (r.mode != mode || (!group.empty() && r.group != group)) continue;
      m.mp += r.score.precision;
      m.mr += r.score.recall;
      m.mf += r.score.f1;
      ++m.n;
    }
    if (m.n > 0) {
      const auto n = static_cast<double>(m.n);
      m.mp /= n;
      m.mr /= n;
      m.mf /= n;
    }
    out.push_back(m);
  }
  return out;
}

// Text handed to scoring: the top `top_n` sections, best first.
inline std::string extracted_text(const ExtractionResult& r, std::size_t top_n) {
  std::string out;
  const auto ranked = r.ranked();
  for (std::size_t i = 0; i < ranked.size() && i < top_n; ++i) {
    if (!out.empty()) out.push_back('\n');
    out += ranked[i]->text;
  }
  return out;
}

inline std::vector<CaseResult> run_case(const CorpusCase& c, const std::vector<Mode>& modes, const MetricWeights& w,
                                        std::size_t top_n) {
  std::vector<CaseResult> rows;
  auto fail_all = [&](const std::string& why) {
    rows.clear();
    for (Mode mode : modes) rows.push_back(CaseResult{c.case_id, c.group, mode, {}, "error", why, std::nullopt});
  };
  try {
    const Document doc = parse_html(read_file(c.page_path));
    const ExceptionContext ctx = context_from_json(read_file(c.context_path));
    const std::string gold = read_file(c.gold_path);
    for (Mode mode : modes) {
      const ExtractionResult r = extract(doc, ctx, w, mode);
      CaseResult row{c.case_id, c.group, mode, {}, "ok", {}, std::nullopt};
      if (r.empty()) {
        row.status = "empty";
        row.score = CaseScore{};
      } else {
        row.score = score_case(extracted_text(r, top_n), gold);
        row.node_id = r.ranked().front()->node_id;
      }
      rows.push_back(std::move(row));
    }
  } catch (const std::exception& e) {
    fail_all(e.what());
  }
  return rows;
}

// Evaluates every case under every mode. Cases run on `workers` threads
// (0 = hardware concurrency); the report is identical for any worker count.
inline EvalReport run_corpus(const std::filesystem::path& corpus_dir, const std::vector<Mode>& modes,
                             const MetricWeights& w, unsigned workers = 0, std::size_t top_n = 1) {
  if (modes.empty()) throw std::invalid_argument("no modes requested");
  w.validate();
  const auto cases = discover_corpus(corpus_dir);
  std::vector<std::vector<CaseResult>> results(cases.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(cases.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) results[i] = run_case(cases[i], modes, w, top_n);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }

  EvalReport report;
  report.modes = modes;
  report.weights = w;
  report.top_n = top_n;
  for (auto& rows : results) {
    for (auto& r : rows) report.per_case.push_back(std::move(r));
  }
  report.means = mean_by_mode(report.per_case, modes);
  std::vector<std::string> groups;
  for (const auto& c : cases) {
    if (!c.group.empty() && std::find(groups.begin(), groups.end(), c.group) == groups.end()) groups.push_back(c.group);
  }
  for (const auto& g : groups) report.group_means[g] = mean_by_mode(report.per_case, modes, g);
  return report;
}

inline nlohmann::json means_json(const std::vector<ModeMeans>& means) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : means) {
    arr.push_back({{"mode", std::string(to_string(m.mode))}, {"MP", m.mp}, {"MR", m.mr}, {"MF", m.mf}, {"N", m.n}});
  }
  return arr;
}

inline nlohmann::json EvalReport::to_json() const {
  nlohmann::json j;
  nlohmann::json mode_names = nlohmann::json::array();
  for (Mode m : modes) mode_names.push_back(std::string(to_string(m)));
  j["modes"] = mode_names;
  j["weights"] = {{"alpha", weights.alpha}, {"beta", weights.beta}, {"gamma", weights.gamma},
                  {"delta", weights.delta}, {"eta", weights.eta}};
  j["top_n"] = top_n;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : per_case) {
    nlohmann::json row{{"case_id", r.case_id},
                       {"group", r.group},
                       {"mode", std::string(to_string(r.mode))},
                       {"P", r.score.precision},
                       {"R", r.score.recall},
                       {"F1", r.score.f1},
                       {"status", r.status}};
    if (r.node_id) row["node_id"] = *r.node_id;
    if (!r.error.empty()) row["error"] = r.error;
    if (r.score.truncated) row["truncated"] = true;
    rows.push_back(std::move(row));
  }
  j["cases"] = rows;
  j["means"] = means_json(means);
  nlohmann::json groups = nlohmann::json::object();
  for (const auto& [g, m] : group_means) groups[g] = means_json(m);
  j["group_means"] = groups;
  return j;
}

namespace detail {

inline std::string pct(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(2) << v * 100.0 << '%';
  return ss.str();
}

inline std::string signed_pct(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(2) << std::showpos << v * 100.0 << " pp";
  return ss.str();
}

}  // namespace detail

// Per-mode MP/MR/MF, one row per metric, with group columns when present.
inline std::string summary_table(const EvalReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(12) << "Mode" << std::setw(8) << "Metric";
  for (const auto& [g, _] : report.group_means) out << std::setw(12) << g;
  out << "All\n";
  for (std::size_t i = 0; i < report.means.size(); ++i) {
    const auto& m = report.means[i];
    const std::pair<const char*, double ModeMeans::*> metrics[] = {
        {"MP", &ModeMeans::mp}, {"MR", &ModeMeans::mr}, {"MF", &ModeMeans::mf}};
    for (const auto& [name, field] : metrics) {
      out << std::setw(12) << (name == std::string_view("MP") ? std::string(to_string(m.mode)) : "") << std::setw(8)
          << name;
      for (const auto& [g, gm] : report.group_means) out << std::setw(12) << detail::pct(gm[i].*field);
      out << detail::pct(m.*field) << '\n';
    }
  }
  return out.str();
}

// Side-by-side MP/MR/MF per mode with deltas against the first mode.
inline std::string compare_modes(const EvalReport& report) {
  if (report.means.size() < 2) throw std::invalid_argument("need >= 2 modes to compare");
  const ModeMeans& ref = report.means.front();
  std::ostringstream out;
  out << std::left << std::setw(12) << "Mode" << std::setw(10) << "MP" << std::setw(10) << "MR" << std::setw(10)
      << "MF" << "Delta MF vs " << to_string(ref.mode) << '\n';
  for (const auto& m : report.means) {
    out << std::setw(12) << to_string(m.mode) << std::setw(10) << detail::pct(m.mp) << std::setw(10)
        << detail::pct(m.mr) << std::setw(10) << detail::pct(m.mf) << detail::signed_pct(m.mf - ref.mf) << '\n';
  }
  return out.str();
}

}  // namespace relsec
