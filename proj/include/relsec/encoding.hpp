#pragma once

#include <iconv.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <optional>
#include <string>
#include <string_view>

#include "relsec/utf8.hpp"

namespace relsec {

namespace detail {

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline bool is_utf8_label(std::string_view label) {
  return label == "utf-8" || label == "utf8" || label == "unicode-1-1-utf-8";
}

}  // namespace detail

// Looks for <meta charset=...> or an http-equiv content charset within the
// first 1024 bytes.
inline std::optional<std::string> sniff_meta_charset(std::string_view bytes) {
  const std::string head = detail::ascii_lower(bytes.substr(0, std::min<std::size_t>(bytes.size(), 1024)));
  std::size_t pos = 0;
  while ((pos = head.find("<meta", pos)) != std::string::npos) {
    const std::size_t end = head.find('>', pos);
    const std::string_view tag = std::string_view(head).substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    pos += 5;
    const std::size_t cs = tag.find("charset");
    if (cs == std::string_view::npos) continue;
    std::size_t i = cs + 7;
    while (i < tag.size() && std::isspace(static_cast<unsigned char>(tag[i]))) ++i;
    if (i >= tag.size() || tag[i] != '=') continue;
    ++i;
    while (i < tag.size() && (std::isspace(static_cast<unsigned char>(tag[i])) || tag[i] == '"' || tag[i] == '\'')) ++i;
    std::size_t j = i;
    while (j < tag.size() && (std::isalnum(static_cast<unsigned char>(tag[j])) || tag[j] == '-' || tag[j] == '_' || tag[j] == ':' || tag[j] == '.')) ++j;
    if (j > i) return std::string(tag.substr(i, j - i));
  }
  return std::nullopt;
}

// Converts raw page bytes to UTF-8. The charset comes from the hint, a BOM,
// or a meta declaration, in that order; unknown charsets fall back to UTF-8.
// Invalid UTF-8 sequences are replaced with U+FFFD.
inline std::string decode_to_utf8(std::string_view bytes, std::optional<std::string_view> hint = std::nullopt) {
  if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xEF\xBB\xBF") {
    return utf8::sanitize(bytes.substr(3));
  }
  std::string label;
  if (hint && !hint->empty()) {
    label = detail::ascii_lower(*hint);
  } else if (bytes.size() >= 2 && (bytes.substr(0, 2) == "\xFF\xFE" || bytes.substr(0, 2) == "\xFE\xFF")) {
    label = bytes[0] == '\xFF' ? "utf-16le" : "utf-16be";
    bytes.remove_prefix(2);
  } else if (auto sniffed = sniff_meta_charset(bytes)) {
    label = *sniffed;
  }
  if (label.empty() || detail::is_utf8_label(label)) return utf8::sanitize(bytes);
  // Browsers treat latin-1 labels as windows-1252.
  if (label == "iso-8859-1" || label == "latin1" || label == "latin-1" || label == "us-ascii" || label == "ascii") {
    label = "windows-1252";
  }

  iconv_t cd = iconv_open("UTF-8", label.c_str());
  if (cd == reinterpret_cast<iconv_t>(-1)) return utf8::sanitize(bytes);
  std::string out;
  std::string in(bytes);
  char* inp = in.data();
  std::size_t inleft = in.size();
  char buf[4096];
  while (inleft > 0) {
    char* outp = buf;
    std::size_t outleft = sizeof buf;
    const std::size_t rc = iconv(cd, &inp, &inleft, &outp, &outleft);
    out.append(buf, static_cast<std::size_t>(outp - buf));
    if (rc == static_cast<std::size_t>(-1)) {
      if (errno == E2BIG) continue;
      // Undecodable byte: emit a replacement and skip it.
      utf8::append(out, utf8::kReplacement);
      ++inp;
      --inleft;
    }
  }
  iconv_close(cd);
  return utf8::sanitize(out);
}

}  // namespace relsec
