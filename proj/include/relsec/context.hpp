#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "relsec/error.hpp"
#include "relsec/tokenize.hpp"

namespace relsec {

struct StackFrame {
  std::string package_name;
  std::string class_name;  // may hold nested classes as Outer$Inner
  std::string method_name;
  std::string file_name;
  std::optional<int> line_number;

  friend bool operator==(const StackFrame&, const StackFrame&) = default;
};

// One "exception line": the thrown type, its message, and the full line as
// printed (including any `Exception in thread "..."` banner).
struct ExceptionHeader {
  std::string exception_fqn;
  std::optional<std::string> message;
  std::string headline;
};

struct StackTrace {
  std::string exception_fqn;
  std::optional<std::string> message;
  std::string headline;
  // Frames of the outer exception first, then those of each `Caused by:`.
  std::vector<StackFrame> frames;
  std::vector<ExceptionHeader> causes;
  std::size_t skipped_lines = 0;
};

struct ExceptionContext {
  StackTrace trace;
  // Identifiers captured from the context code.
  TokenBag code_tokens;
  // Tokens of the trace material alone (headlines and frames).
  TokenBag trace_tokens;
  TokenBag combined;
  // Same material as `combined`, in first-seen order with duplicates.
  std::vector<std::string> combined_list;
  // Every token of the context code, in order.
  std::vector<std::string> code_sequence;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    lines.push_back(text.substr(start, end - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

inline bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

// Parses `at pkg.Class.method(File.java:12)`; nullopt for other lines.
inline std::optional<StackFrame> parse_frame_line(std::string_view line) {
  line = trim(line);
  if (!line.starts_with("at") || line.size() < 3 || !std::isspace(static_cast<unsigned char>(line[2]))) {
    return std::nullopt;
  }
  line = trim(line.substr(2));
  const std::size_t open = line.find('(');
  const std::size_t close = line.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) return std::nullopt;
  std::string_view qualified = trim(line.substr(0, open));
  // Module / class-loader prefixes: java.base/java.io.File.read
  if (const std::size_t slash = qualified.rfind('/'); slash != std::string_view::npos) {
    qualified.remove_prefix(slash + 1);
  }
  if (qualified.empty() || qualified.find_first_of(" \t") != std::string_view::npos) return std::nullopt;
  const std::size_t method_dot = qualified.rfind('.');
  if (method_dot == std::string_view::npos || method_dot == 0 || method_dot + 1 == qualified.size()) {
    return std::nullopt;
  }
  for (char c : qualified) {
    if (!is_ident_char(c) && c != '.' && c != '<' && c != '>') return std::nullopt;
  }
  StackFrame frame;
  frame.method_name = std::string(qualified.substr(method_dot + 1));
  const std::string_view type_path = qualified.substr(0, method_dot);
  const std::size_t class_dot = type_path.rfind('.');
  if (class_dot == std::string_view::npos) {
    frame.class_name = std::string(type_path);
  } else {
    frame.package_name = std::string(type_path.substr(0, class_dot));
    frame.class_name = std::string(type_path.substr(class_dot + 1));
  }
  if (frame.class_name.empty()) return std::nullopt;

  const std::string_view location = trim(line.substr(open + 1, close - open - 1));
  const std::size_t colon = location.rfind(':');
  if (colon != std::string_view::npos) {
    const std::string_view digits = location.substr(colon + 1);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) &&
        digits.size() < 10) {
      const int n = std::stoi(std::string(digits));
      frame.file_name = std::string(location.substr(0, colon));
      if (n > 0) frame.line_number = n;
      return frame;
    }
  }
  frame.file_name = std::string(location);
  return frame;
}

inline bool looks_like_exception_type(std::string_view fqn) {
  if (fqn.empty() || !is_ident_start(fqn.front())) return false;
  bool prev_dot = false;
  for (char c : fqn) {
    if (c == '.') {
      if (prev_dot) return false;
      prev_dot = true;
    } else if (is_ident_char(c)) {
      prev_dot = false;
    } else {
      return false;
    }
  }
  if (prev_dot) return false;
  if (fqn.find('.') != std::string_view::npos) return true;
  return fqn.ends_with("Exception") || fqn.ends_with("Error") || fqn.ends_with("Throwable");
}

// Parses `[Exception in thread "x"] [Caused by: ]pkg.Type[: message]`.
inline std::optional<ExceptionHeader> parse_exception_line(std::string_view line) {
  const std::string_view headline = trim(line);
  std::string_view rest = headline;
  if (rest.starts_with("Exception in thread \"")) {
    const std::size_t q = rest.find('"', 21);
    if (q == std::string_view::npos) return std::nullopt;
    rest = trim(rest.substr(q + 1));
  }
  if (rest.starts_with("Caused by:")) rest = trim(rest.substr(10));
  else if (rest.starts_with("Suppressed:")) rest = trim(rest.substr(11));
  const std::size_t colon = rest.find(':');
  const std::string_view type = trim(colon == std::string_view::npos ? rest : rest.substr(0, colon));
  if (!looks_like_exception_type(type)) return std::nullopt;
  ExceptionHeader header;
  header.exception_fqn = std::string(type);
  if (colon != std::string_view::npos) {
    const std::string_view msg = trim(rest.substr(colon + 1));
    if (!msg.empty()) header.message = std::string(msg);
  }
  header.headline = std::string(headline);
  return header;
}

inline bool is_ellipsis_line(std::string_view line) {
  line = trim(line);
  return line.starts_with("...") && line.ends_with("more");
}

inline void append(std::vector<std::string>& out, std::vector<std::string> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

// Replaces comments and string/char literals with spaces.
inline std::string strip_comments_and_literals(std::string_view src) {
  std::string out(src);
  std::size_t i = 0;
  while (i < out.size()) {
    if (out.compare(i, 2, "//") == 0) {
      while (i < out.size() && out[i] != '\n') out[i++] = ' ';
    } else if (out.compare(i, 2, "/*") == 0) {
      const std::size_t end = out.find("*/", i + 2);
      const std::size_t stop = end == std::string::npos ? out.size() : end + 2;
      for (; i < stop; ++i) {
        if (out[i] != '\n') out[i] = ' ';
      }
    } else if (out[i] == '"' || out[i] == '\'') {
      const char quote = out[i];
      out[i++] = ' ';
      while (i < out.size() && out[i] != quote && out[i] != '\n') {
        if (out[i] == '\\' && i + 1 < out.size()) out[i++] = ' ';
        out[i++] = ' ';
      }
      if (i < out.size() && out[i] == quote) out[i++] = ' ';
    } else {
      ++i;
    }
  }
  return out;
}

inline bool is_control_keyword(std::string_view id) {
  static constexpr std::string_view kKeywords[] = {
      "if",     "for",    "while", "switch", "catch", "synchronized", "return", "throw", "new",
      "super",  "this",   "assert", "try",   "do",    "else",         "sizeof", "typeof", "foreach",
      "elif",   "when",   "with",  "function", "and", "or",           "not",    "in",     "instanceof"};
  return std::find(std::begin(kKeywords), std::end(kKeywords), id) != std::end(kKeywords);
}

}  // namespace detail

// Reads a JVM-style stack trace. The first exception line gives the thrown
// type; `at ...(...)` lines become frames; `Caused by:` lines add further
// exception names. Other lines are skipped and counted.
inline StackTrace parse_stack_trace(std::string_view text) {
  StackTrace trace;
  bool have_header = false;
  for (std::string_view raw : detail::split_lines(text)) {
    const std::string_view line = detail::trim(raw);
    if (line.empty()) continue;
    if (auto frame = detail::parse_frame_line(line)) {
      trace.frames.push_back(std::move(*frame));
      continue;
    }
    if (auto header = detail::parse_exception_line(line)) {
      if (!have_header) {
        trace.exception_fqn = header->exception_fqn;
        trace.message = header->message;
        trace.headline = header->headline;
        have_header = true;
      } else {
        trace.causes.push_back(std::move(*header));
      }
      continue;
    }
    if (!detail::is_ellipsis_line(line)) ++trace.skipped_lines;
  }
  if (!have_header && trace.frames.empty()) throw NoTraceFound("no exception line or stack frame found");
  return trace;
}

// True when at least one line has the `at ...(...)` frame shape.
inline bool looks_like_stack_trace(std::string_view text) {
  for (std::string_view line : detail::split_lines(text)) {
    if (detail::parse_frame_line(line)) return true;
  }
  return false;
}

// Ordered tokens of a frame: package segments, each nested class, method.
// File names and line numbers are not included.
inline std::vector<std::string> frame_tokens(const StackFrame& frame) {
  std::vector<std::string> out;
  std::string_view pkg = frame.package_name;
  while (!pkg.empty()) {
    const std::size_t dot = pkg.find('.');
    detail::append(out, token_sequence(pkg.substr(0, dot)));
    if (dot == std::string_view::npos) break;
    pkg.remove_prefix(dot + 1);
  }
  std::string_view cls = frame.class_name;
  while (!cls.empty()) {
    const std::size_t dollar = cls.find('$');
    detail::append(out, token_sequence(cls.substr(0, dollar)));
    if (dollar == std::string_view::npos) break;
    cls.remove_prefix(dollar + 1);
  }
  detail::append(out, token_sequence(frame.method_name));
  return out;
}

inline std::vector<std::string> trace_token_sequence(const StackTrace& trace) {
  std::vector<std::string> out;
  if (!trace.headline.empty()) {
    detail::append(out, token_sequence(trace.headline));
  } else {
    detail::append(out, token_sequence(trace.exception_fqn));
    if (trace.message) detail::append(out, token_sequence(*trace.message));
  }
  for (const auto& cause : trace.causes) detail::append(out, token_sequence(cause.headline));
  for (const auto& frame : trace.frames) detail::append(out, frame_tokens(frame));
  return out;
}

// Identifiers in source order that look like types or calls: names followed
// by `(`, capitalized names followed by an identifier or `<`, and `new X`
// targets. Works on code that does not compile.
inline std::vector<std::string> code_identifiers(std::string_view source) {
  const std::string clean = detail::strip_comments_and_literals(source);
  struct Ident {
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Ident> idents;
  for (std::size_t i = 0; i < clean.size();) {
    if (detail::is_ident_start(clean[i]) && (i == 0 || !detail::is_ident_char(clean[i - 1]))) {
      std::size_t j = i;
      while (j < clean.size() && detail::is_ident_char(clean[j])) ++j;
      idents.push_back({i, j});
      i = j;
    } else {
      ++i;
    }
  }
  auto next_significant = [&](std::size_t pos) -> std::size_t {
    while (pos < clean.size() && std::isspace(static_cast<unsigned char>(clean[pos]))) ++pos;
    return pos;
  };
  std::vector<std::string> out;
  for (std::size_t k = 0; k < idents.size(); ++k) {
    const std::string_view id = std::string_view(clean).substr(idents[k].begin, idents[k].end - idents[k].begin);
    const std::size_t after = next_significant(idents[k].end);
    const char next = after < clean.size() ? clean[after] : '\0';
    bool capture = false;
    if (next == '(' && !detail::is_control_keyword(id)) capture = true;
    if (std::isupper(static_cast<unsigned char>(id.front())) &&
        (next == '<' || (k + 1 < idents.size() && idents[k + 1].begin == after))) {
      capture = true;
    }
    if (k > 0) {
      const std::string_view prev =
          std::string_view(clean).substr(idents[k - 1].begin, idents[k - 1].end - idents[k - 1].begin);
      if (prev == "new" && next_significant(idents[k - 1].end) == idents[k].begin) capture = true;
    }
    if (capture && !detail::is_control_keyword(id)) detail::append(out, token_sequence(id));
  }
  return out;
}

inline TokenBag extract_code_tokens(std::string_view source) {
  const auto ids = code_identifiers(source);
  return bag_of(ids);
}

// Builds the token representation of an exception: the exception line(s),
// frame package/class/method names, and type and call names from the code.
inline ExceptionContext build_context(std::string_view trace_text, std::optional<std::string_view> code_text = std::nullopt) {
  ExceptionContext ctx;
  ctx.trace = parse_stack_trace(trace_text);
  std::vector<std::string> trace_seq = trace_token_sequence(ctx.trace);
  ctx.trace_tokens = bag_of(trace_seq);
  ctx.combined_list = std::move(trace_seq);
  if (code_text) {
    std::vector<std::string> code_ids = code_identifiers(*code_text);
    ctx.code_tokens = bag_of(code_ids);
    detail::append(ctx.combined_list, std::move(code_ids));
    ctx.code_sequence = token_sequence(*code_text);
  }
  ctx.combined = bag_of(ctx.combined_list);
  return ctx;
}

// A context with no material at all; every relevance against it is zero.
inline ExceptionContext empty_context() { return ExceptionContext{}; }

// Reads the corpus context format {"trace": "...", "code": "..."}; `code`
// may be absent or null.
inline ExceptionContext context_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("context JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("trace") || !j["trace"].is_string()) {
    throw Error("context JSON needs a string field \"trace\"");
  }
  const std::string trace = j["trace"].get<std::string>();
  if (j.contains("code") && j["code"].is_string()) {
    const std::string code = j["code"].get<std::string>();
    return build_context(trace, code);
  }
  return build_context(trace);
}

}  // namespace relsec
