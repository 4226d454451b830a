#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relsec/utf8.hpp"

namespace relsec {

// Multiset of normalized tokens. Every stored frequency is >= 1.
class TokenBag {
 public:
  using Map = std::map<std::string, std::uint32_t, std::less<>>;

  TokenBag() = default;

  void add(std::string token, std::uint32_t n = 1) {
    if (n == 0) return;
    counts_[std::move(token)] += n;
  }

  TokenBag& operator+=(const TokenBag& other) {
    for (const auto& [token, n] : other.counts_) counts_[token] += n;
    return *this;
  }

  // Merges `other` into this bag, reusing whichever map is larger.
  void absorb(TokenBag&& other) {
    if (other.counts_.size() > counts_.size()) std::swap(counts_, other.counts_);
    for (auto& [token, n] : other.counts_) counts_[token] += n;
    other.counts_.clear();
  }

  std::uint32_t count(std::string_view token) const {
    const auto it = counts_.find(token);
    return it == counts_.end() ? 0 : it->second;
  }
  bool contains(std::string_view token) const { return counts_.find(token) != counts_.end(); }
  bool empty() const { return counts_.empty(); }
  std::size_t distinct() const { return counts_.size(); }
  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& [_, c] : counts_) n += c;
    return n;
  }
  const Map& counts() const { return counts_; }

  std::vector<std::string> support() const {
    std::vector<std::string> out;
    out.reserve(counts_.size());
    for (const auto& [token, _] : counts_) out.push_back(token);
    return out;
  }

  friend bool operator==(const TokenBag&, const TokenBag&) = default;

 private:
  Map counts_;
};

namespace detail {

inline bool is_ascii_upper(char32_t c) { return c >= 'A' && c <= 'Z'; }
inline bool is_ascii_lower(char32_t c) { return c >= 'a' && c <= 'z'; }
inline bool is_ascii_digit(char32_t c) { return c >= '0' && c <= '9'; }

// Word characters: ASCII alphanumerics plus non-ASCII code points outside the
// common punctuation and symbol blocks. Underscore, hyphen and `$` separate.
inline bool is_word_char(char32_t c) {
  if (c < 0x80) return is_ascii_upper(c) || is_ascii_lower(c) || is_ascii_digit(c);
  if (c >= 0xA0 && c <= 0xBF) return false;
  if (c == 0xD7 || c == 0xF7) return false;
  if (c >= 0x2000 && c <= 0x2BFF) return false;
  if (c >= 0x3000 && c <= 0x303F) return false;
  if (c >= 0xFE30 && c <= 0xFE4F) return false;
  if (c >= 0xFF00 && c <= 0xFF0F) return false;
  if (c == utf8::kReplacement) return false;
  return !utf8::is_space(c);
}

inline char32_t to_lower(char32_t c) { return is_ascii_upper(c) ? c + ('a' - 'A') : c; }

inline std::string lower_utf8(std::u32string_view cps) {
  std::string out;
  for (char32_t c : cps) utf8::append(out, to_lower(c));
  return out;
}

// Splits one alphanumeric segment at camel-case humps. Acronym runs stay
// together ("EOFException" -> EOF, Exception) and digits attach to the
// preceding part ("Base64Encoder" -> Base64, Encoder).
inline std::vector<std::u32string> camel_parts(std::u32string_view seg) {
  std::vector<std::u32string> parts;
  std::size_t start = 0;
  for (std::size_t i = 1; i < seg.size(); ++i) {
    const char32_t prev = seg[i - 1];
    const char32_t cur = seg[i];
    bool boundary = false;
    if (is_ascii_upper(cur)) {
      if (is_ascii_lower(prev) || is_ascii_digit(prev)) {
        boundary = true;
      } else if (is_ascii_upper(prev) && i + 1 < seg.size() && is_ascii_lower(seg[i + 1])) {
        boundary = true;
      }
    }
    if (boundary) {
      parts.emplace_back(seg.substr(start, i - start));
      start = i;
    }
  }
  parts.emplace_back(seg.substr(start));
  return parts;
}

inline constexpr std::size_t kMinTokenLength = 2;

inline void emit(std::vector<std::string>& out, std::u32string_view cps) {
  if (cps.size() >= kMinTokenLength) out.push_back(lower_utf8(cps));
}

// Appends the tokens of one whitespace-delimited chunk in emission order:
// the punctuation-stripped composite (when the chunk has several segments),
// then for each segment its own composite (when camel-split) followed by
// its camel parts.
inline void chunk_tokens(std::u32string_view chunk, std::vector<std::string>& out) {
  std::vector<std::u32string_view> segments;
  std::size_t i = 0;
  while (i < chunk.size()) {
    while (i < chunk.size() && !is_word_char(chunk[i])) ++i;
    const std::size_t start = i;
    while (i < chunk.size() && is_word_char(chunk[i])) ++i;
    if (i > start) segments.push_back(chunk.substr(start, i - start));
  }
  if (segments.empty()) return;
  if (segments.size() > 1) {
    std::u32string joined;
    for (auto seg : segments) joined.append(seg);
    emit(out, joined);
  }
  for (auto seg : segments) {
    const auto parts = camel_parts(seg);
    if (parts.size() > 1) emit(out, seg);
    for (const auto& part : parts) emit(out, part);
  }
}

inline std::vector<std::u32string> whitespace_chunks(std::string_view text) {
  std::vector<std::u32string> chunks;
  std::u32string cur;
  for (std::size_t pos = 0; pos < text.size();) {
    const char32_t cp = utf8::next(text, pos);
    if (utf8::is_space(cp)) {
      if (!cur.empty()) chunks.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(cp);
    }
  }
  if (!cur.empty()) chunks.push_back(std::move(cur));
  return chunks;
}

}  // namespace detail

// Ordered token stream with duplicates; the normalization behind every bag.
inline std::vector<std::string> token_sequence(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& chunk : detail::whitespace_chunks(text)) detail::chunk_tokens(chunk, out);
  return out;
}

inline TokenBag bag_of(std::span<const std::string> tokens) {
  TokenBag bag;
  for (const auto& t : tokens) bag.add(t);
  return bag;
}

inline TokenBag tokenize_text(std::string_view text) {
  const auto seq = token_sequence(text);
  return bag_of(seq);
}

// Cosine similarity of two frequency vectors over their combined token set.
// Zero when either bag is empty.
inline double cosine(const TokenBag& a, const TokenBag& b) {
  if (a.empty() || b.empty()) return 0.0;
  const TokenBag& small = a.distinct() <= b.distinct() ? a : b;
  const TokenBag& large = &small == &a ? b : a;
  double dot = 0.0;
  for (const auto& [token, n] : small.counts()) {
    const auto m = large.count(token);
    if (m != 0) dot += static_cast<double>(n) * static_cast<double>(m);
  }
  if (dot == 0.0) return 0.0;
  auto norm = [](const TokenBag& bag) {
    double s = 0.0;
    for (const auto& [_, n] : bag.counts()) s += static_cast<double>(n) * static_cast<double>(n);
    return std::sqrt(s);
  };
  return std::clamp(dot / (norm(a) * norm(b)), 0.0, 1.0);
}

namespace detail {

template <class T>
std::size_t lcs_rows(std::span<const T> a, std::span<const T> b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (const T& x : a) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = x == b[j - 1] ? diag + 1 : std::max(up, row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

// Bit-vector LCS for |b| <= 64: one word of state, O(|a|*|b|) compares but
// no dependent row updates.
template <class T>
std::size_t lcs_bits(std::span<const T> a, std::span<const T> b) {
  const std::uint64_t full = b.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << b.size()) - 1;
  std::uint64_t v = full;
  for (const T& x : a) {
    std::uint64_t match = 0;
    for (std::size_t j = 0; j < b.size(); ++j) match |= static_cast<std::uint64_t>(x == b[j]) << j;
    const std::uint64_t u = v & match;
    v = ((v + u) | (v - u)) & full;
  }
  return b.size() - static_cast<std::size_t>(std::popcount(v));
}

}  // namespace detail

// Longest common subsequence length, O(|a|*|b|) time and O(min) space.
template <class T>
std::size_t lcs_length(std::span<const T> a, std::span<const T> b) {
  if (a.empty() || b.empty()) return 0;
  if (b.size() > a.size()) std::swap(a, b);
  return b.size() <= 64 ? detail::lcs_bits(a, b) : detail::lcs_rows(a, b);
}

template <class T>
std::size_t lcs_length(const std::vector<T>& a, const std::vector<T>& b) {
  return lcs_length(std::span<const T>(a), std::span<const T>(b));
}

// Maps strings to dense ids so sequence comparisons become integer compares.
class Interner {
 public:
  std::uint32_t id(std::string_view s) {
    const auto it = ids_.find(s);
    if (it != ids_.end()) return it->second;
    const auto next = static_cast<std::uint32_t>(ids_.size());
    ids_.emplace(std::string(s), next);
    return next;
  }

  std::vector<std::uint32_t> ids(std::span<const std::string> seq) {
    std::vector<std::uint32_t> out;
    out.reserve(seq.size());
    for (const auto& s : seq) out.push_back(id(s));
    return out;
  }

 private:
  std::map<std::string, std::uint32_t, std::less<>> ids_;
};

// LCS over token or word sequences, compared as interned ids.
inline std::size_t sequence_lcs(std::span<const std::string> a, std::span<const std::string> b) {
  Interner in;
  const auto ia = in.ids(a);
  const auto ib = in.ids(b);
  return lcs_length(ia, ib);
}

}  // namespace relsec
