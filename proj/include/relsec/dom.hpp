#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relsec/error.hpp"
#include "relsec/utf8.hpp"

namespace relsec {

// A run of decoded character data that sits before children[before_child]
// (or after the last child when before_child == children.size()).
struct TextRun {
  std::size_t before_child = 0;
  std::string text;

  friend bool operator==(const TextRun&, const TextRun&) = default;
};

struct DomNode {
  std::string tag_name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<DomNode> children;
  std::vector<TextRun> text_runs;
  // Whitespace-normalized text directly under this element. Empty for
  // structural elements.
  std::string own_text;
  int node_id = -1;

  const std::string* attribute(std::string_view name) const {
    for (const auto& [k, v] : attributes) {
      if (k == name) return &v;
    }
    return nullptr;
  }
};

struct NodeClass {
  bool is_linked_element = false;
  bool is_code_element = false;
  bool is_structural = false;

  friend bool operator==(const NodeClass&, const NodeClass&) = default;
};

inline NodeClass classify(std::string_view tag) {
  NodeClass c;
  c.is_linked_element = tag == "a" || tag == "input" || tag == "button";
  c.is_code_element = tag == "code" || tag == "pre" || tag == "blockquote";
  c.is_structural = tag == "script" || tag == "style" || tag == "head" || tag == "meta" || tag == "title" ||
                    tag == "noscript";
  return c;
}

inline NodeClass classify(const DomNode& node) { return classify(node.tag_name); }

namespace detail {

inline bool is_void_element(std::string_view tag) {
  static constexpr std::string_view kVoid[] = {"area",  "base", "br",   "col",   "embed",  "hr",    "img",
                                               "input", "link", "meta", "param", "source", "track", "wbr"};
  for (auto v : kVoid) {
    if (v == tag) return true;
  }
  return false;
}

// Elements whose content is not parsed for markup or character references.
inline bool is_raw_text_element(std::string_view tag) {
  return tag == "script" || tag == "style" || tag == "xmp" || tag == "iframe" || tag == "noembed" ||
         tag == "noframes" || tag == "noscript";
}

// Elements whose content is not parsed for markup but does decode references.
inline bool is_rcdata_element(std::string_view tag) { return tag == "title" || tag == "textarea"; }

inline bool is_block_element(std::string_view tag) {
  static constexpr std::string_view kBlock[] = {
      "address", "article", "aside", "blockquote", "dd",     "div",    "dl",     "dt",   "fieldset",
      "figure",  "footer",  "form",  "h1",         "h2",     "h3",     "h4",     "h5",   "h6",
      "header",  "hr",      "li",    "main",       "nav",    "ol",     "p",      "pre",  "section",
      "table",   "tbody",   "td",    "tfoot",      "th",     "thead",  "tr",     "ul",   "body"};
  for (auto b : kBlock) {
    if (b == tag) return true;
  }
  return false;
}

inline void append_text_content(const DomNode& node, bool skip_code, std::string& out) {
  const NodeClass cls = classify(node);
  if (cls.is_structural || (skip_code && cls.is_code_element)) return;
  std::size_t run = 0;
  for (std::size_t i = 0; i <= node.children.size(); ++i) {
    for (; run < node.text_runs.size() && node.text_runs[run].before_child == i; ++run) {
      out.push_back(' ');
      out.append(node.text_runs[run].text);
    }
    if (i < node.children.size()) append_text_content(node.children[i], skip_code, out);
  }
}

inline void append_raw_text(const DomNode& node, std::string& out) {
  if (classify(node).is_structural) return;
  if (node.tag_name == "br") {
    out.push_back('\n');
    return;
  }
  const bool block = is_block_element(node.tag_name);
  if (block && !out.empty() && out.back() != '\n') out.push_back('\n');
  std::size_t run = 0;
  for (std::size_t i = 0; i <= node.children.size(); ++i) {
    for (; run < node.text_runs.size() && node.text_runs[run].before_child == i; ++run) {
      out.append(node.text_runs[run].text);
    }
    if (i < node.children.size()) append_raw_text(node.children[i], out);
  }
  if (block && !out.empty() && out.back() != '\n') out.push_back('\n');
}

inline void escape_into(std::string_view s, bool attribute, std::string& out) {
  for (std::size_t pos = 0; pos < s.size();) {
    const std::size_t start = pos;
    const char32_t cp = utf8::next(s, pos);
    switch (cp) {
      case '&': out += "&amp;"; break;
      case 0xA0: out += "&nbsp;"; break;
      case '<': out += attribute ? "<" : "&lt;"; break;
      case '>': out += attribute ? ">" : "&gt;"; break;
      case '"': out += attribute ? "&quot;" : "\""; break;
      default: out.append(s.substr(start, pos - start));
    }
  }
}

inline void serialize_into(const DomNode& node, std::string& out) {
  out.push_back('<');
  out += node.tag_name;
  for (const auto& [k, v] : node.attributes) {
    out.push_back(' ');
    out += k;
    out += "=\"";
    escape_into(v, true, out);
    out.push_back('"');
  }
  out.push_back('>');
  if (is_void_element(node.tag_name)) return;
  const bool raw = is_raw_text_element(node.tag_name);
  // A leading newline directly inside these is dropped by parsers.
  if ((node.tag_name == "pre" || node.tag_name == "textarea" || node.tag_name == "listing") &&
      !node.text_runs.empty() && node.text_runs.front().before_child == 0 &&
      node.text_runs.front().text.starts_with('\n')) {
    out.push_back('\n');
  }
  std::size_t run = 0;
  for (std::size_t i = 0; i <= node.children.size(); ++i) {
    for (; run < node.text_runs.size() && node.text_runs[run].before_child == i; ++run) {
      if (raw) out += node.text_runs[run].text;
      else escape_into(node.text_runs[run].text, false, out);
    }
    if (i < node.children.size()) serialize_into(node.children[i], out);
  }
  out += "</";
  out += node.tag_name;
  out.push_back('>');
}

}  // namespace detail

// Normalized text of the subtree in document order, skipping structural
// elements and, optionally, code-classified ones.
inline std::string text_content(const DomNode& node, bool skip_code = false) {
  std::string raw;
  detail::append_text_content(node, skip_code, raw);
  return utf8::normalize_whitespace(raw);
}

// Subtree text with line structure kept: newlines from the source, from
// <br>, and around block elements.
inline std::string raw_text(const DomNode& node) {
  std::string out;
  detail::append_raw_text(node, out);
  return out;
}

inline std::string serialize(const DomNode& node) {
  std::string out;
  detail::serialize_into(node, out);
  return out;
}

// Structural equality: tags, attributes, normalized text and shape. Node ids
// and raw text runs are ignored.
inline bool same_tree(const DomNode& a, const DomNode& b) {
  if (a.tag_name != b.tag_name || a.attributes != b.attributes || a.own_text != b.own_text ||
      a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!same_tree(a.children[i], b.children[i])) return false;
  }
  return true;
}

// Owns a parsed tree and indexes it by node id. Immutable once built.
class Document {
 public:
  explicit Document(std::unique_ptr<DomNode> root) : root_(std::move(root)) {
    index(*root_, -1);
  }

  Document(Document&&) noexcept = default;
  Document& operator=(Document&&) noexcept = default;
  Document(const Document&) = delete;
  Document& operator=(const Document&) = delete;

  const DomNode& root() const { return *root_; }

  // The first <body> in pre-order, or null.
  const DomNode* body() const {
    for (const DomNode* n : nodes_) {
      if (n->tag_name == "body") return n;
    }
    return nullptr;
  }

  const DomNode& require_body() const {
    const DomNode* b = body();
    if (b == nullptr) throw MissingBody("document has no body element");
    return *b;
  }

  std::size_t size() const { return nodes_.size(); }
  const DomNode& node(int id) const { return *nodes_.at(static_cast<std::size_t>(id)); }
  int parent(int id) const { return parents_.at(static_cast<std::size_t>(id)); }

  // All elements in pre-order; index == node_id.
  std::span<const DomNode* const> nodes() const { return nodes_; }

  // True when `id` lies in the subtree rooted at `ancestor` (inclusive).
  bool within(int id, int ancestor) const {
    for (int cur = id; cur >= 0; cur = parent(cur)) {
      if (cur == ancestor) return true;
    }
    return false;
  }

 private:
  void index(DomNode& node, int parent) {
    node.node_id = static_cast<int>(nodes_.size());
    nodes_.push_back(&node);
    parents_.push_back(parent);
    if (classify(node).is_structural) {
      node.own_text.clear();
    } else {
      std::string joined;
      for (const auto& run : node.text_runs) {
        joined.push_back(' ');
        joined += run.text;
      }
      node.own_text = utf8::normalize_whitespace(joined);
    }
    for (auto& child : node.children) index(child, node.node_id);
  }

  std::unique_ptr<DomNode> root_;
  std::vector<const DomNode*> nodes_;
  std::vector<int> parents_;
};

}  // namespace relsec
