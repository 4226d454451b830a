#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

#include "relsec/error.hpp"
#include "relsec/extractor.hpp"
#include "relsec/metrics.hpp"

namespace relsec {

struct RunConfig {
  MetricWeights weights;
  Mode mode = Mode::combined;
  std::size_t top_n = 1;
  Format format = Format::text;
  std::filesystem::path page;
  std::filesystem::path trace;
  std::optional<std::filesystem::path> code;

  void validate() const {
    weights.validate();
    if (top_n < 1) throw ConfigError("top must be >= 1");
  }
};

// key=value lines for alpha, beta, gamma, delta and eta; `#` starts a comment.
// Keys not mentioned keep their value in `base`.
inline MetricWeights parse_weights(std::string_view text, MetricWeights base = {}) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  };
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view val = trim(line.substr(eq + 1));
    double v = 0;
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc{} || ptr != val.data() + val.size() || val.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": bad number '" + std::string(val) + "'");
    }
    if (key == "alpha") base.alpha = v;
    else if (key == "beta") base.beta = v;
    else if (key == "gamma") base.gamma = v;
    else if (key == "delta") base.delta = v;
    else if (key == "eta") base.eta = v;
    else throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
  }
  base.validate();
  return base;
}

}  // namespace relsec
