#pragma once

#include <algorithm>
#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relsec/dom.hpp"
#include "relsec/encoding.hpp"
#include "relsec/error.hpp"
#include "relsec/html_entities.hpp"

namespace relsec {

namespace detail {

inline bool one_of(std::string_view tag, std::initializer_list<std::string_view> set) {
  return std::find(set.begin(), set.end(), tag) != set.end();
}

inline bool is_heading(std::string_view tag) {
  return tag.size() == 2 && tag[0] == 'h' && tag[1] >= '1' && tag[1] <= '6';
}

inline bool is_special(std::string_view tag) {
  static constexpr std::string_view kSpecial[] = {
      "address", "applet",   "area",     "article",    "aside",   "base",     "basefont", "bgsound",
      "blockquote", "body",  "br",       "button",     "caption", "center",   "col",      "colgroup",
      "dd",      "details",  "dir",      "div",        "dl",      "dt",       "embed",    "fieldset",
      "figcaption", "figure", "footer",  "form",       "frame",   "frameset", "h1",       "h2",
      "h3",      "h4",       "h5",       "h6",         "head",    "header",   "hgroup",   "hr",
      "html",    "iframe",   "img",      "input",      "keygen",  "li",       "link",     "listing",
      "main",    "marquee",  "menu",     "meta",       "nav",     "noembed",  "noframes", "noscript",
      "object",  "ol",       "p",        "param",      "plaintext", "pre",    "script",   "section",
      "select",  "source",   "style",    "summary",    "table",   "tbody",    "td",       "template",
      "textarea", "tfoot",   "th",       "thead",      "title",   "tr",       "track",    "ul",
      "wbr",     "xmp"};
  return std::find(std::begin(kSpecial), std::end(kSpecial), tag) != std::end(kSpecial);
}

// Start tags that implicitly close an open <p>.
inline bool closes_p(std::string_view tag) {
  return is_heading(tag) ||
         one_of(tag, {"address", "article", "aside", "blockquote", "center", "details", "dialog", "dir", "div",
                      "dl", "fieldset", "figcaption", "figure", "footer", "form", "header", "hgroup", "hr",
                      "listing", "main", "menu", "nav", "ol", "p", "pre", "section", "summary", "ul", "li", "dd",
                      "dt", "plaintext", "xmp"});
}

// End tags resolved with the "has an element in scope" rule.
inline bool scoped_end_tag(std::string_view tag) {
  return is_heading(tag) ||
         one_of(tag, {"address", "article", "aside", "blockquote", "button", "center", "details", "dialog",
                      "dir", "div", "dl", "fieldset", "figcaption", "figure", "footer", "form", "header",
                      "hgroup", "listing", "main", "menu", "nav", "ol", "pre", "section", "summary", "ul",
                      "applet", "marquee", "object", "caption", "table", "tbody", "thead", "tfoot", "tr",
                      "td", "th", "select"});
}

inline bool is_head_content(std::string_view tag) {
  return one_of(tag, {"title", "meta", "link", "base", "style", "script", "noscript", "basefont", "bgsound"});
}

enum class Scope { kDefault, kButton, kListItem, kTable, kSelect };

inline bool is_scope_marker(std::string_view tag, Scope scope) {
  switch (scope) {
    case Scope::kTable:
      return one_of(tag, {"html", "table", "template"});
    case Scope::kSelect:
      return !one_of(tag, {"optgroup", "option"});
    default:
      break;
  }
  if (one_of(tag, {"applet", "caption", "html", "table", "td", "th", "marquee", "object", "template"})) {
    return true;
  }
  if (scope == Scope::kButton) return tag == "button";
  if (scope == Scope::kListItem) return tag == "ol" || tag == "ul";
  return false;
}

using Attributes = std::vector<std::pair<std::string, std::string>>;

// Simplified HTML5 tree construction: implied end tags, list/table
// auto-closing, head/body synthesis and scope-checked end tags. The
// adoption agency algorithm and foster parenting are not implemented;
// misnested formatting end tags are ignored instead.
class TreeBuilder {
 public:
  TreeBuilder() : html_(std::make_unique<DomNode>()) {
    html_->tag_name = "html";
    stack_.push_back(html_.get());
  }

  DomNode* current() { return stack_.back(); }

  void text(std::string data) {
    if (drop_leading_newline_) {
      drop_leading_newline_ = false;
      if (data.starts_with("\r\n")) data.erase(0, 2);
      else if (data.starts_with('\n')) data.erase(0, 1);
    }
    if (data.empty()) return;
    const bool blank = std::all_of(data.begin(), data.end(),
                                   [](unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; });
    if (body_ == nullptr) {
      if (blank) return;
      ensure_body();
    }
    append_text(current(), std::move(data));
  }

  // Returns the inserted element when it was pushed onto the open stack.
  DomNode* start_tag(std::string name, Attributes attrs, bool self_closing) {
    drop_leading_newline_ = false;
    if (name == "image") name = "img";
    if (name == "html") {
      merge_attributes(*html_, attrs);
      return nullptr;
    }
    if (name == "body") {
      if (body_ != nullptr) {
        merge_attributes(*body_, attrs);
        return nullptr;
      }
      ensure_body();
      merge_attributes(*body_, attrs);
      return nullptr;
    }
    if (name == "head") {
      if (body_ == nullptr && head_ == nullptr) {
        head_ = insert(std::move(name), std::move(attrs));
        stack_.push_back(head_);
      }
      return nullptr;
    }
    if (one_of(name, {"frameset", "frame"})) return nullptr;

    if (body_ == nullptr && is_head_content(name)) {
      ensure_head_open();
      return place(std::move(name), std::move(attrs), self_closing);
    }
    ensure_body();

    if (closes_p(name) && in_scope("p", Scope::kButton)) pop_through("p");
    if (is_heading(name) && is_heading(current()->tag_name)) stack_.pop_back();
    if (name == "li") close_list_item({"li"});
    if (name == "dd" || name == "dt") close_list_item({"dd", "dt"});
    if (name == "a" && in_scope("a", Scope::kDefault)) pop_through("a");
    if (name == "button" && in_scope("button", Scope::kDefault)) pop_through("button");
    if (name == "option" && current()->tag_name == "option") stack_.pop_back();
    if (name == "optgroup" && current()->tag_name == "option") stack_.pop_back();
    if (one_of(name, {"tbody", "thead", "tfoot"})) {
      while (one_of(current()->tag_name, {"tr", "td", "th", "tbody", "thead", "tfoot"}) &&
             in_scope("table", Scope::kTable)) {
        stack_.pop_back();
      }
    }
    if (name == "tr") {
      if (in_scope("tr", Scope::kTable)) pop_through("tr");
      if (current()->tag_name == "table") place("tbody", {}, false);
    }
    if (name == "td" || name == "th") {
      if (in_scope("td", Scope::kTable)) pop_through("td");
      else if (in_scope("th", Scope::kTable)) pop_through("th");
      if (current()->tag_name == "table") place("tbody", {}, false);
      if (one_of(current()->tag_name, {"tbody", "thead", "tfoot"})) place("tr", {}, false);
    }

    const bool newline_sensitive = name == "pre" || name == "listing";
    DomNode* node = place(std::move(name), std::move(attrs), self_closing);
    if (newline_sensitive) drop_leading_newline_ = true;
    return node;
  }

  void end_tag(const std::string& name) {
    drop_leading_newline_ = false;
    if (name == "html" || name == "body") return;
    if (name == "head") {
      if (current()->tag_name == "head") stack_.pop_back();
      return;
    }
    if (name == "br") {
      start_tag("br", {}, false);
      return;
    }
    if (name == "p") {
      if (!in_scope("p", Scope::kButton)) {
        ensure_body();
        place("p", {}, false);
      }
      pop_through("p");
      return;
    }
    if (name == "li") {
      if (in_scope("li", Scope::kListItem)) pop_through("li");
      return;
    }
    if (name == "dd" || name == "dt") {
      if (in_scope(name, Scope::kDefault)) pop_through(name);
      return;
    }
    if (is_heading(name)) {
      for (std::size_t i = stack_.size(); i-- > 1;) {
        if (is_heading(stack_[i]->tag_name)) {
          stack_.resize(i);
          return;
        }
        if (is_scope_marker(stack_[i]->tag_name, Scope::kDefault)) return;
      }
      return;
    }
    if (scoped_end_tag(name)) {
      const Scope scope = one_of(name, {"table", "tbody", "thead", "tfoot", "tr", "td", "th"}) ? Scope::kTable
                          : name == "select"                                                   ? Scope::kSelect
                                                                                               : Scope::kDefault;
      if (in_scope(name, scope)) pop_through(name);
      return;
    }
    // Any other end tag: close the nearest matching element unless a special
    // element intervenes.
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->tag_name == name) {
        stack_.resize(i);
        return;
      }
      if (is_special(stack_[i]->tag_name)) return;
    }
  }

  // Closes the element most recently returned by start_tag (raw text).
  void close(DomNode* node) {
    if (!stack_.empty() && stack_.back() == node) stack_.pop_back();
  }

  void append_text(DomNode* node, std::string data) {
    const std::size_t at = node->children.size();
    if (!node->text_runs.empty() && node->text_runs.back().before_child == at) {
      node->text_runs.back().text += data;
    } else {
      node->text_runs.push_back(TextRun{at, std::move(data)});
    }
  }

  std::unique_ptr<DomNode> finish() {
    ensure_body();
    stack_.clear();
    return std::move(html_);
  }

 private:
  static void merge_attributes(DomNode& node, const Attributes& attrs) {
    for (const auto& [k, v] : attrs) {
      if (node.attribute(k) == nullptr) node.attributes.emplace_back(k, v);
    }
  }

  DomNode* insert(std::string name, Attributes attrs) {
    DomNode* parent = current();
    parent->children.push_back(DomNode{});
    DomNode& node = parent->children.back();
    node.tag_name = std::move(name);
    node.attributes = std::move(attrs);
    return &node;
  }

  DomNode* place(std::string name, Attributes attrs, bool /*self_closing*/) {
    const bool is_void = is_void_element(name);
    DomNode* node = insert(std::move(name), std::move(attrs));
    if (is_void) return nullptr;
    stack_.push_back(node);
    return node;
  }

  void ensure_head_open() {
    if (head_ == nullptr) {
      head_ = insert("head", {});
      stack_.push_back(head_);
    } else if (current() != head_) {
      stack_.resize(1);
      stack_.push_back(head_);
    }
  }

  void ensure_body() {
    if (body_ != nullptr) return;
    stack_.resize(1);
    body_ = insert("body", {});
    stack_.push_back(body_);
  }

  bool in_scope(std::string_view tag, Scope scope) const {
    for (std::size_t i = stack_.size(); i-- > 0;) {
      if (stack_[i]->tag_name == tag) return true;
      if (is_scope_marker(stack_[i]->tag_name, scope)) return false;
    }
    return false;
  }

  void pop_through(std::string_view tag) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->tag_name == tag) {
        stack_.resize(i);
        return;
      }
    }
  }

  void close_list_item(std::initializer_list<std::string_view> items) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      const std::string& tag = stack_[i]->tag_name;
      if (one_of(tag, items)) {
        stack_.resize(i);
        return;
      }
      if (is_special(tag) && !one_of(tag, {"address", "div", "p"})) return;
    }
  }

  std::unique_ptr<DomNode> html_;
  std::vector<DomNode*> stack_;
  DomNode* head_ = nullptr;
  DomNode* body_ = nullptr;
  bool drop_leading_newline_ = false;
};

inline bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool is_html_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

inline std::size_t find_ci(std::string_view hay, std::string_view needle, std::size_t from) {
  if (needle.size() > hay.size()) return std::string_view::npos;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < needle.size() && match; ++k) {
      match = std::tolower(static_cast<unsigned char>(hay[i + k])) == needle[k];
    }
    if (match) return i;
  }
  return std::string_view::npos;
}

// End of raw text content for element `tag`: the first `</tag` followed by
// whitespace, `/` or `>`.
inline std::size_t raw_text_end(std::string_view s, std::size_t from, std::string_view tag) {
  const std::string needle = "</" + std::string(tag);
  for (std::size_t pos = from;;) {
    const std::size_t hit = find_ci(s, needle, pos);
    if (hit == std::string_view::npos) return s.size();
    const std::size_t after = hit + needle.size();
    if (after >= s.size() || is_html_space(s[after]) || s[after] == '/' || s[after] == '>') return hit;
    pos = hit + 1;
  }
}

}  // namespace detail

// Parses already-decoded UTF-8 markup.
inline Document parse_html_utf8(std::string_view s) {
  using detail::is_ascii_alpha;
  using detail::is_html_space;

  if (s.empty()) throw UnparseableInput("empty input");
  if (s.find('\0') != std::string_view::npos) throw UnparseableInput("input contains NUL bytes; not HTML");
  if (std::all_of(s.begin(), s.end(), [](char c) { return is_html_space(c); })) {
    throw UnparseableInput("input contains only whitespace");
  }

  detail::TreeBuilder builder;
  std::string pending;
  auto flush = [&] {
    if (!pending.empty()) builder.text(detail::decode_entities(pending));
    pending.clear();
  };

  const std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    if (s[i] != '<') {
      const std::size_t next = s.find('<', i);
      const std::size_t end = next == std::string_view::npos ? n : next;
      pending.append(s.substr(i, end - i));
      i = end;
      continue;
    }
    if (s.substr(i, 4) == "<!--") {
      flush();
      std::size_t close = s.find("-->", i + 4);
      if (s.substr(i, 5) == "<!-->") close = i + 2;
      else if (s.substr(i, 6) == "<!--->") close = i + 3;
      i = close == std::string_view::npos ? n : close + 3;
      continue;
    }
    if (i + 1 < n && (s[i + 1] == '!' || s[i + 1] == '?')) {
      flush();
      const std::size_t close = s.find('>', i + 2);
      i = close == std::string_view::npos ? n : close + 1;
      continue;
    }
    if (i + 2 < n && s[i + 1] == '/' && is_ascii_alpha(s[i + 2])) {
      flush();
      std::size_t j = i + 2;
      while (j < n && !is_html_space(s[j]) && s[j] != '/' && s[j] != '>') ++j;
      const std::string name = detail::ascii_lower(s.substr(i + 2, j - i - 2));
      const std::size_t close = s.find('>', j);
      if (close == std::string_view::npos) {
        i = n;
        break;
      }
      i = close + 1;
      builder.end_tag(name);
      continue;
    }
    if (i + 1 < n && is_ascii_alpha(s[i + 1])) {
      std::size_t j = i + 1;
      while (j < n && !is_html_space(s[j]) && s[j] != '/' && s[j] != '>') ++j;
      std::string name = detail::ascii_lower(s.substr(i + 1, j - i - 1));
      detail::Attributes attrs;
      bool self_closing = false;
      bool complete = false;
      while (j < n) {
        while (j < n && (is_html_space(s[j]) || s[j] == '/')) {
          self_closing = s[j] == '/';
          ++j;
        }
        if (j >= n) break;
        if (s[j] == '>') {
          complete = true;
          ++j;
          break;
        }
        self_closing = false;
        std::size_t k = j + 1;
        while (k < n && !is_html_space(s[k]) && s[k] != '/' && s[k] != '>' && s[k] != '=') ++k;
        std::string attr = detail::ascii_lower(s.substr(j, k - j));
        j = k;
        while (j < n && is_html_space(s[j])) ++j;
        std::string value;
        if (j < n && s[j] == '=') {
          ++j;
          while (j < n && is_html_space(s[j])) ++j;
          if (j < n && (s[j] == '"' || s[j] == '\'')) {
            const char quote = s[j];
            const std::size_t close = s.find(quote, j + 1);
            const std::size_t end = close == std::string_view::npos ? n : close;
            value = detail::decode_entities(s.substr(j + 1, end - j - 1));
            j = close == std::string_view::npos ? n : close + 1;
          } else {
            std::size_t k2 = j;
            while (k2 < n && !is_html_space(s[k2]) && s[k2] != '>') ++k2;
            value = detail::decode_entities(s.substr(j, k2 - j));
            j = k2;
          }
        }
        const bool duplicate = std::any_of(attrs.begin(), attrs.end(), [&](const auto& a) { return a.first == attr; });
        if (!duplicate) attrs.emplace_back(std::move(attr), std::move(value));
      }
      if (!complete) {
        // A tag cut off by end of input is dropped.
        i = n;
        break;
      }
      flush();
      i = j;
      const bool raw = detail::is_raw_text_element(name);
      const bool rcdata = detail::is_rcdata_element(name);
      const std::string tag = name;
      DomNode* node = builder.start_tag(std::move(name), std::move(attrs), self_closing);
      if ((raw || rcdata) && node != nullptr) {
        const std::size_t end = detail::raw_text_end(s, i, tag);
        std::string content(s.substr(i, end - i));
        if (tag == "textarea" && content.starts_with('\n')) content.erase(0, 1);
        if (!content.empty()) builder.append_text(node, rcdata ? detail::decode_entities(content) : content);
        builder.close(node);
        const std::size_t close = s.find('>', end);
        i = end >= n ? n : (close == std::string_view::npos ? n : close + 1);
      }
      continue;
    }
    pending.push_back('<');
    ++i;
  }
  flush();
  return Document(builder.finish());
}

// Parses raw page bytes. The encoding comes from `encoding_hint`, a BOM or a
// meta charset declaration, falling back to UTF-8. A body element always
// exists in the result.
inline Document parse_html(std::string_view raw_bytes, std::optional<std::string_view> encoding_hint = std::nullopt) {
  if (raw_bytes.empty()) throw UnparseableInput("empty input");
  return parse_html_utf8(decode_to_utf8(raw_bytes, encoding_hint));
}

}  // namespace relsec
