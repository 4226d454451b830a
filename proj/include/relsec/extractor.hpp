#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "relsec/context.hpp"
#include "relsec/dom.hpp"
#include "relsec/metrics.hpp"

namespace relsec {

// density: CTD without the code term and no exception context;
// relevance: raw CTR; combined: CTS.
enum class Mode { density, relevance, combined };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::density: return "density";
    case Mode::relevance: return "relevance";
    default: return "combined";
  }
}

inline std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "density") return Mode::density;
  if (s == "relevance") return Mode::relevance;
  if (s == "combined") return Mode::combined;
  return std::nullopt;
}

enum class Format { text, html, json };

inline std::optional<Format> parse_format(std::string_view s) {
  if (s == "text") return Format::text;
  if (s == "html") return Format::html;
  if (s == "json") return Format::json;
  return std::nullopt;
}

struct Section {
  int node_id = -1;
  std::string text;
  std::string html;
  NodeMetrics metrics;
};

struct Diagnostics {
  double threshold = 0.0;
  std::vector<int> preserved_children;
  std::vector<Label> labels;  // indexed by node id
};

struct ExtractionResult {
  Mode mode = Mode::combined;
  std::vector<Section> kept_sections;  // document order
  std::optional<std::size_t> recommended;  // index into kept_sections
  Diagnostics diagnostics;

  // No body child beat the threshold.
  bool empty() const { return kept_sections.empty(); }

  const Section* recommendation() const { return recommended ? &kept_sections[*recommended] : nullptr; }

  // Kept sections by descending recommendation key, ties in document order.
  std::vector<const Section*> ranked() const;
};

// Score used for thresholding and marking in each mode.
inline double mode_score(const NodeMetrics& m, Mode mode) {
  switch (mode) {
    case Mode::density: return m.ctd;
    case Mode::relevance: return m.ctr;
    default: return m.cts;
  }
}

// Key for the final recommendation: CTD in density mode, raw CTR otherwise.
inline double recommendation_key(const NodeMetrics& m, Mode mode) { return mode == Mode::density ? m.ctd : m.ctr; }

inline std::vector<const Section*> ExtractionResult::ranked() const {
  std::vector<const Section*> out;
  for (const auto& s : kept_sections) out.push_back(&s);
  std::stable_sort(out.begin(), out.end(), [this](const Section* a, const Section* b) {
    return recommendation_key(a->metrics, mode) > recommendation_key(b->metrics, mode);
  });
  return out;
}

namespace detail {

inline void label_subtree(const DomNode& node, Label label, std::vector<Label>& labels) {
  labels[static_cast<std::size_t>(node.node_id)] = label;
  for (const DomNode& child : node.children) label_subtree(child, label, labels);
}

// Code blocks are scored as part of the section around them and are never
// section roots themselves, unless the preserved child is one.
inline void best_in_subtree(const DomNode& node, const PageMetrics& page, Mode mode, const DomNode*& best) {
  const NodeClass cls = classify(node);
  if (cls.is_structural || (cls.is_code_element && best != nullptr)) return;
  const double s = mode_score(page.nodes[static_cast<std::size_t>(node.node_id)], mode);
  if (best == nullptr || s > mode_score(page.nodes[static_cast<std::size_t>(best->node_id)], mode)) best = &node;
  for (const DomNode& child : node.children) best_in_subtree(child, page, mode, best);
}

}  // namespace detail

// Section selection over precomputed metrics:
//  1. the body's score is the threshold;
//  2. body children scoring strictly above it are preserved, the rest is noise;
//  3. inside each preserved child the highest-scoring node outside code
//     blocks (the child itself included, earliest in document order on ties)
//     is kept with its whole subtree as content; off-path siblings down to it
//     become noise;
//  4. the kept subtree with the highest recommendation key is recommended.
inline ExtractionResult select_sections(const Document& doc, const PageMetrics& page, Mode mode) {
  const DomNode& body = doc.require_body();
  ExtractionResult result;
  result.mode = mode;
  result.diagnostics.labels.assign(doc.size(), Label::unlabeled);
  auto& labels = result.diagnostics.labels;
  const auto score = [&](const DomNode& n) { return mode_score(page.nodes[static_cast<std::size_t>(n.node_id)], mode); };
  const double threshold = score(body);
  result.diagnostics.threshold = threshold;

  for (const DomNode& child : body.children) {
    if (classify(child).is_structural || !(score(child) > threshold)) {
      detail::label_subtree(child, Label::noise, labels);
      continue;
    }
    result.diagnostics.preserved_children.push_back(child.node_id);
    const DomNode* best = nullptr;
    detail::best_in_subtree(child, page, mode, best);
    detail::label_subtree(*best, Label::content, labels);
    for (int cur = best->node_id; cur != child.node_id; cur = doc.parent(cur)) {
      for (const DomNode& sibling : doc.node(doc.parent(cur)).children) {
        if (sibling.node_id != cur) detail::label_subtree(sibling, Label::noise, labels);
      }
    }
    Section section;
    section.node_id = best->node_id;
    section.text = text_content(*best);
    section.html = serialize(*best);
    section.metrics = page.nodes[static_cast<std::size_t>(best->node_id)];
    section.metrics.label = Label::content;
    result.kept_sections.push_back(std::move(section));
  }
  for (std::size_t i = 0; i < result.kept_sections.size(); ++i) {
    const auto key = recommendation_key(result.kept_sections[i].metrics, mode);
    if (!result.recommended || key > recommendation_key(result.kept_sections[*result.recommended].metrics, mode)) {
      result.recommended = i;
    }
  }
  return result;
}

inline PageMetrics metrics_for_mode(const Document& doc, const ExceptionContext& ctx, const MetricWeights& w,
                                    Mode mode) {
  if (mode == Mode::density) return compute_page_metrics(doc, empty_context(), w, DensityVariant::text_link);
  return compute_page_metrics(doc, ctx, w, DensityVariant::content);
}

// Full pipeline for one page. Density mode ignores `ctx`.
inline ExtractionResult extract(const Document& doc, const ExceptionContext& ctx, const MetricWeights& w, Mode mode) {
  w.validate();
  const PageMetrics page = metrics_for_mode(doc, ctx, w, mode);
  return select_sections(doc, page, mode);
}

inline nlohmann::json metrics_json(const NodeMetrics& m) {
  return nlohmann::json{{"C", m.counts.chars},
                        {"T", m.counts.tags},
                        {"LC", m.counts.link_chars},
                        {"CC", m.counts.code_chars},
                        {"TD", m.td},
                        {"LD", m.ld},
                        {"CD", m.cd},
                        {"CTD", m.ctd},
                        {"TR", m.tr},
                        {"CR", m.cr},
                        {"CTR", m.ctr},
                        {"CTD_norm", m.ctd_norm},
                        {"CTR_norm", m.ctr_norm},
                        {"CTS", m.cts},
                        {"label", std::string(to_string(m.label))}};
}

inline nlohmann::json section_json(const Section& s) {
  return nlohmann::json{{"node_id", s.node_id}, {"text", s.text}, {"html", s.html}, {"metrics", metrics_json(s.metrics)}};
}

inline std::string render_section(const Section& s, Format format) {
  switch (format) {
    case Format::text: return s.text;
    case Format::html: return s.html;
    default: return section_json(s).dump(2);
  }
}

}  // namespace relsec
