#pragma once

// Shared fixtures and independent oracles for the test binaries.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relsec.hpp"

namespace testsupport {

inline std::filesystem::path data_dir() { return RELSEC_TEST_DATA; }
inline std::filesystem::path corpus_dir() { return RELSEC_CORPUS; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture(const std::string& name) { return slurp(data_dir() / name); }

inline relsec::ExceptionContext listing_context() {
  return relsec::build_context(fixture("listing2_trace.txt"), fixture("listing1_code.java"));
}

// Same whitespace folding the golden generator applies to text runs.
inline std::string fold_ws(const std::string& s) {
  std::string out;
  bool pending = false;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    const bool nbsp = c == 0xC2 && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0xA0;
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' || nbsp) {
      pending = true;
      i += nbsp ? 2 : 1;
      continue;
    }
    if (pending && !out.empty()) out.push_back(' ');
    pending = false;
    out.push_back(s[i++]);
  }
  return out;
}

// tag{child,...} with text runs as JSON strings, in document order.
inline std::string outline(const relsec::DomNode& node) {
  std::vector<std::string> parts;
  std::size_t run = 0;
  auto flush_runs = [&](std::size_t upto) {
    std::string merged;
    while (run < node.text_runs.size() && node.text_runs[run].before_child <= upto) {
      merged += node.text_runs[run].text;
      ++run;
    }
    const std::string folded = fold_ws(merged);
    if (!folded.empty()) parts.push_back(nlohmann::json(folded).dump());
  };
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    flush_runs(i);
    parts.push_back(outline(node.children[i]));
  }
  flush_runs(node.children.size());
  std::string out = node.tag_name;
  if (!parts.empty()) {
    out += "{";
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
    out += "}";
  }
  return out;
}

// Cosine straight from the definition: dot product over the union of keys
// divided by the product of Euclidean norms.
inline double cosine_oracle(const std::map<std::string, int>& a, const std::map<std::string, int>& b) {
  std::set<std::string> keys;
  for (const auto& [k, _] : a) keys.insert(k);
  for (const auto& [k, _] : b) keys.insert(k);
  long double dot = 0, na = 0, nb = 0;
  for (const auto& k : keys) {
    const long double x = a.count(k) ? a.at(k) : 0;
    const long double y = b.count(k) ? b.at(k) : 0;
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0 || nb == 0) return 0.0;
  return static_cast<double>(dot / (std::sqrt(na) * std::sqrt(nb)));
}

// Longest common subsequence by enumerating every subsequence of `a` and
// testing it against `b`. Exponential; only for short inputs.
template <class T>
std::size_t lcs_bruteforce(const std::vector<T>& a, const std::vector<T>& b) {
  std::size_t best = 0;
  const std::size_t n = a.size();
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    const auto len = static_cast<std::size_t>(__builtin_popcountl(mask));
    if (len <= best) continue;
    std::size_t j = 0;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask & (1ul << i))) continue;
      while (j < b.size() && !(b[j] == a[i])) ++j;
      if (j == b.size()) ok = false;
      else ++j;
    }
    if (ok) best = len;
  }
  return best;
}

// Scalar evaluation of the composite density with the smoothing rules
// spelled out one by one.
inline double ctd_oracle(double td, double ld, double cd, double td_b, double ld_b) {
  if (td == 0) return 0.0;
  const double ld_s = ld == 0 ? 1.0 : ld;
  const double non_link = td - ld == 0 ? 1.0 : td - ld;
  const double td_b_s = td_b == 0 ? 1.0 : td_b;
  const double a = td * ld / non_link + ld_b * td / td_b_s;
  double base = std::log(std::log(a + std::exp(1.0)));
  if (base == 0) base = 1.0;
  return (td + cd / td) * std::log(td / ld_s + cd / td) / base;
}

// Random well-formed HTML built from a small tag and word vocabulary.
class RandomPage {
 public:
  explicit RandomPage(unsigned seed) : rng_(seed) {}

  std::string html(int max_depth = 4) {
    std::string out = "<html><head><title>t</title></head><body>";
    const int n = pick(1, 4);
    for (int i = 0; i < n; ++i) element(out, max_depth);
    out += "</body></html>";
    return out;
  }

  std::string words(int lo, int hi) {
    static const char* vocab[] = {"java",     "io",          "EOFException", "readInt", "ObjectInputStream",
                                  "stream",   "reading",     "file",         "the",     "when",
                                  "close",    "readObject",  "ArrayList",    "record",  "loop",
                                  "buffer",   "StringBuffer", "main",        "thread",  "error"};
    std::string out;
    const int n = pick(lo, hi);
    for (int i = 0; i < n; ++i) {
      if (i) out += ' ';
      out += vocab[pick(0, static_cast<int>(std::size(vocab)) - 1)];
    }
    return out;
  }

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  void element(std::string& out, int depth) {
    static const char* tags[] = {"div", "p", "span", "a", "pre", "code", "ul", "li", "blockquote", "section", "script"};
    const std::string tag = tags[pick(0, static_cast<int>(std::size(tags)) - 1)];
    out += "<" + tag + (tag == "a" ? " href=\"#\"" : "") + ">";
    if (tag == "script") {
      out += "var x = 1;</script>";
      return;
    }
    out += words(0, 6);
    if (depth > 0 && tag != "p" && tag != "a") {
      const int kids = pick(0, 3);
      for (int i = 0; i < kids; ++i) {
        element(out, depth - 1);
        out += words(0, 3);
      }
    }
    out += "</" + tag + ">";
  }

  std::mt19937 rng_;
};

}  // namespace testsupport
