#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <iterator>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

#include "relsec/utf8.hpp"

namespace relsec::detail {

struct NamedEntity {
  std::string_view name;
  char32_t cp;
};

// Sorted by name. Covers the entities that occur in practice on technical
// pages; anything else is left as literal text.
inline constexpr NamedEntity kNamedEntities[] = {
    {"AElig", 0xC6},   {"Aacute", 0xC1},  {"Agrave", 0xC0},  {"Auml", 0xC4},    {"Ccedil", 0xC7},
    {"Eacute", 0xC9},  {"Ouml", 0xD6},    {"Uuml", 0xDC},    {"aacute", 0xE1},  {"acute", 0xB4},
    {"aelig", 0xE6},   {"agrave", 0xE0},  {"alpha", 0x3B1},  {"amp", '&'},      {"and", 0x2227},
    {"apos", '\''},    {"aring", 0xE5},   {"asymp", 0x2248}, {"auml", 0xE4},    {"bdquo", 0x201E},
    {"beta", 0x3B2},   {"brvbar", 0xA6},  {"bull", 0x2022},  {"ccedil", 0xE7},  {"cedil", 0xB8},
    {"cent", 0xA2},    {"copy", 0xA9},    {"curren", 0xA4},  {"dagger", 0x2020}, {"darr", 0x2193},
    {"deg", 0xB0},     {"delta", 0x3B4},  {"divide", 0xF7},  {"eacute", 0xE9},  {"egrave", 0xE8},
    {"empty", 0x2205}, {"emsp", 0x2003},  {"ensp", 0x2002},  {"equiv", 0x2261}, {"euml", 0xEB},
    {"euro", 0x20AC},  {"exist", 0x2203}, {"forall", 0x2200}, {"frac12", 0xBD}, {"frac14", 0xBC},
    {"frac34", 0xBE},  {"gamma", 0x3B3},  {"ge", 0x2265},    {"gt", '>'},       {"harr", 0x2194},
    {"hellip", 0x2026}, {"iacute", 0xED}, {"iexcl", 0xA1},   {"infin", 0x221E}, {"iquest", 0xBF},
    {"isin", 0x2208},  {"iuml", 0xEF},    {"lambda", 0x3BB}, {"laquo", 0xAB},   {"larr", 0x2190},
    {"ldquo", 0x201C}, {"le", 0x2264},    {"lowast", 0x2217}, {"lsaquo", 0x2039}, {"lsquo", 0x2018},
    {"lt", '<'},       {"macr", 0xAF},    {"mdash", 0x2014}, {"micro", 0xB5},   {"middot", 0xB7},
    {"minus", 0x2212}, {"mu", 0x3BC},     {"nbsp", 0xA0},    {"ndash", 0x2013}, {"ne", 0x2260},
    {"not", 0xAC},     {"ntilde", 0xF1},  {"oacute", 0xF3},  {"ograve", 0xF2},  {"or", 0x2228},
    {"ordf", 0xAA},    {"ordm", 0xBA},    {"ouml", 0xF6},    {"para", 0xB6},    {"permil", 0x2030},
    {"pi", 0x3C0},     {"plusmn", 0xB1},  {"pound", 0xA3},   {"prime", 0x2032}, {"quot", '"'},
    {"raquo", 0xBB},   {"rarr", 0x2192},  {"rdquo", 0x201D}, {"reg", 0xAE},     {"rsaquo", 0x203A},
    {"rsquo", 0x2019}, {"sbquo", 0x201A}, {"sect", 0xA7},    {"shy", 0xAD},     {"sigma", 0x3C3},
    {"sum", 0x2211},   {"sup2", 0xB2},    {"szlig", 0xDF},   {"thinsp", 0x2009}, {"times", 0xD7},
    {"trade", 0x2122}, {"uacute", 0xFA},  {"uarr", 0x2191},  {"uuml", 0xFC},    {"yen", 0xA5},
    {"zwj", 0x200D},
};

// Entities browsers still honour without the trailing semicolon.
inline bool legacy_without_semicolon(std::string_view name) {
  return name == "amp" || name == "lt" || name == "gt" || name == "quot" || name == "nbsp" || name == "copy" ||
         name == "reg";
}

inline const NamedEntity* find_entity(std::string_view name) {
  const auto it = std::lower_bound(std::begin(kNamedEntities), std::end(kNamedEntities), name,
                                   [](const NamedEntity& e, std::string_view n) { return e.name < n; });
  if (it != std::end(kNamedEntities) && it->name == name) return &*it;
  return nullptr;
}

// Windows-1252 remapping applied to numeric references in 0x80..0x9F.
inline char32_t remap_c1(char32_t cp) {
  static constexpr std::array<char32_t, 32> kC1{
      0x20AC, 0x81,   0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021, 0x02C6, 0x2030, 0x0160,
      0x2039, 0x0152, 0x8D,   0x017D, 0x8F,   0x90,   0x2018, 0x2019, 0x201C, 0x201D, 0x2022,
      0x2013, 0x2014, 0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0x9D,   0x017E, 0x0178};
  if (cp >= 0x80 && cp <= 0x9F) return kC1[cp - 0x80];
  return cp;
}

// Replaces character references in `text`.
inline std::string decode_entities(std::string_view text) {
  if (text.find('&') == std::string_view::npos) return std::string(text);
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t j = i + 1;
    if (j < text.size() && text[j] == '#') {
      ++j;
      const bool hex = j < text.size() && (text[j] == 'x' || text[j] == 'X');
      if (hex) ++j;
      const std::size_t digits_start = j;
      char32_t cp = 0;
      bool overflow = false;
      while (j < text.size() && (hex ? std::isxdigit(static_cast<unsigned char>(text[j])) != 0
                                     : std::isdigit(static_cast<unsigned char>(text[j])) != 0)) {
        const char c = text[j];
        const int v = std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : (std::tolower(c) - 'a' + 10);
        if (cp > 0x10FFFF) overflow = true;
        else cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(v);
        ++j;
      }
      if (j == digits_start) {
        out.push_back(text[i++]);
        continue;
      }
      if (j < text.size() && text[j] == ';') ++j;
      if (overflow || cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = utf8::kReplacement;
      utf8::append(out, remap_c1(cp));
      i = j;
      continue;
    }
    while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j])) && j - i <= 10) ++j;
    const std::string_view name = text.substr(i + 1, j - i - 1);
    const bool semicolon = j < text.size() && text[j] == ';';
    const NamedEntity* e = name.empty() ? nullptr : find_entity(name);
    if (e != nullptr && (semicolon || legacy_without_semicolon(name))) {
      utf8::append(out, e->cp);
      i = semicolon ? j + 1 : j;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

}  // namespace relsec::detail
