#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "relsec/context.hpp"
#include "relsec/dom.hpp"
#include "relsec/error.hpp"
#include "relsec/tokenize.hpp"
#include "relsec/utf8.hpp"

namespace relsec {

// alpha/beta weight text and code relevance, gamma/delta weight normalized
// density and relevance, eta is the link relevance gate.
struct MetricWeights {
  double alpha = 1.00;
  double beta = 0.59;
  double gamma = 1.00;
  double delta = 1.00;
  double eta = 0.75;

  void validate() const {
    for (double w : {alpha, beta, gamma, delta}) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("metric weights must be finite and non-negative");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta must lie in [0, 1]");
  }

  friend bool operator==(const MetricWeights&, const MetricWeights&) = default;
};

enum class Label { unlabeled, content, noise };

inline std::string_view to_string(Label l) {
  switch (l) {
    case Label::content: return "content";
    case Label::noise: return "noise";
    default: return "unlabeled";
  }
}

// C, T, LC and CC of one subtree, in characters and element counts.
struct SubtreeCounts {
  std::size_t chars = 0;
  std::size_t tags = 1;
  std::size_t link_chars = 0;
  std::size_t code_chars = 0;

  friend bool operator==(const SubtreeCounts&, const SubtreeCounts&) = default;
};

struct NodeMetrics {
  SubtreeCounts counts;
  double td = 0, ld = 0, cd = 0, ctd = 0;
  double tr = 0, cr = 0, ctr = 0;
  double ctd_norm = 0, ctr_norm = 0, cts = 0;
  Label label = Label::unlabeled;
};

// Whether CTD includes the code term. `text_link` drops it, giving the
// classic text/link composite used by the density-only baseline.
enum class DensityVariant { content, text_link };

enum class LinkVerdict { legitimate, noise };

// A link is legitimate when its text is at least `eta`-similar to the
// context. Against an empty context every link is noise.
inline LinkVerdict link_legitimacy(const DomNode& link, const TokenBag& context, double eta) {
  if (context.empty()) return LinkVerdict::noise;
  const double sim = cosine(tokenize_text(text_content(link)), context);
  return sim >= eta ? LinkVerdict::legitimate : LinkVerdict::noise;
}

// Counts for every element, indexed by node id. Structural subtrees count
// nothing towards their ancestors. A character is linked text when its
// outermost linked ancestor-or-self failed the relevance gate, and code text
// when any ancestor-or-self is code-classified.
inline std::vector<SubtreeCounts> count_all(const Document& doc, const TokenBag& context, double eta) {
  const std::size_t n = doc.size();
  std::vector<char> structural(n, 0), in_code(n, 0), link_noise(n, 0), in_link(n, 0);
  for (std::size_t id = 0; id < n; ++id) {
    const DomNode& node = *doc.nodes()[id];
    const NodeClass cls = classify(node);
    const int p = doc.parent(static_cast<int>(id));
    const bool has_parent = p >= 0;
    structural[id] = cls.is_structural || (has_parent && structural[p]);
    in_code[id] = cls.is_code_element || (has_parent && in_code[p]);
    if (has_parent && in_link[p]) {
      in_link[id] = 1;
      link_noise[id] = link_noise[p];
    } else if (cls.is_linked_element) {
      in_link[id] = 1;
      link_noise[id] = link_legitimacy(node, context, eta) == LinkVerdict::noise;
    }
  }
  std::vector<SubtreeCounts> counts(n);
  for (std::size_t id = n; id-- > 0;) {
    SubtreeCounts& c = counts[id];
    if (structural[id]) continue;  // C = LC = CC = 0, T = 1
    const DomNode& node = *doc.nodes()[id];
    const std::size_t own = utf8::length(node.own_text);
    c.chars = own;
    c.link_chars = link_noise[id] ? own : 0;
    c.code_chars = in_code[id] ? own : 0;
    for (const DomNode& child : node.children) {
      const auto cid = static_cast<std::size_t>(child.node_id);
      if (structural[cid]) continue;
      c.chars += counts[cid].chars;
      c.tags += counts[cid].tags;
      c.link_chars += counts[cid].link_chars;
      c.code_chars += counts[cid].code_chars;
    }
  }
  return counts;
}

inline SubtreeCounts subtree_counts(const Document& doc, const DomNode& node, const TokenBag& context, double eta) {
  return count_all(doc, context, eta).at(static_cast<std::size_t>(node.node_id));
}

// Log-based composite density. Zero denominators (LD, non-link density,
// body TD, TD and the log of the log base) are replaced by 1; a node with
// no text scores 0.
inline double content_density(double td, double ld, double cd, double td_body, double ld_body) {
  if (!(td > 0.0)) return 0.0;
  const auto nonzero = [](double x) { return x > 0.0 ? x : 1.0; };
  const double non_link = td - ld;
  const double base_excess = td * ld / nonzero(non_link) + ld_body * td / nonzero(td_body);
  // ln(ln(x + e)) computed as log1p(log1p(x / e)) stays exact near x = 0.
  const double log_of_base = std::log1p(std::log1p(base_excess / std::numbers::e));
  const double argument = td / nonzero(ld) + cd / td;
  return (td + cd / td) * std::log(argument) / nonzero(log_of_base);
}

inline double text_relevance(const DomNode& node, const TokenBag& context) {
  return cosine(tokenize_text(text_content(node, /*skip_code=*/true)), context);
}

// Relevance of one code-classified block: trace-shaped blocks compare trace
// tokens by cosine, other blocks use token LCS against the context code
// normalized by the context code length.
inline double code_block_relevance(std::string_view block_text, const ExceptionContext& ctx) {
  if (looks_like_stack_trace(block_text)) {
    const StackTrace block_trace = parse_stack_trace(block_text);
    const auto seq = trace_token_sequence(block_trace);
    return cosine(bag_of(seq), ctx.trace_tokens);
  }
  if (ctx.code_sequence.empty()) return 0.0;
  const auto block_seq = token_sequence(block_text);
  const std::size_t lcs = sequence_lcs(block_seq, ctx.code_sequence);
  return static_cast<double>(lcs) / static_cast<double>(ctx.code_sequence.size());
}

namespace detail {

inline void max_block_relevance(const DomNode& node, const ExceptionContext& ctx, double& best) {
  const NodeClass cls = classify(node);
  if (cls.is_structural) return;
  if (cls.is_code_element) best = std::max(best, code_block_relevance(raw_text(node), ctx));
  for (const DomNode& child : node.children) max_block_relevance(child, ctx, best);
}

}  // namespace detail

// Maximum relevance over the code blocks at or below `node`; 0 without any.
inline double code_relevance(const DomNode& node, const ExceptionContext& ctx) {
  double best = 0.0;
  detail::max_block_relevance(node, ctx, best);
  return best;
}

inline double content_relevance(double tr, double cr, const MetricWeights& w) { return w.alpha * tr + w.beta * cr; }

struct PageMetrics {
  std::vector<NodeMetrics> nodes;  // indexed by node id
  int body_id = -1;
};

// Counts plus TD/LD/CD/CTD for every element. CTD uses the body's TD and LD.
inline PageMetrics compute_densities(const Document& doc, const TokenBag& context, const MetricWeights& w,
                                     DensityVariant variant = DensityVariant::content) {
  const DomNode& body = doc.require_body();
  const auto counts = count_all(doc, context, w.eta);
  PageMetrics page;
  page.body_id = body.node_id;
  page.nodes.resize(doc.size());
  for (std::size_t id = 0; id < doc.size(); ++id) {
    NodeMetrics& m = page.nodes[id];
    m.counts = counts[id];
    const auto t = static_cast<double>(m.counts.tags);
    m.td = static_cast<double>(m.counts.chars) / t;
    m.ld = static_cast<double>(m.counts.link_chars) / t;
    m.cd = static_cast<double>(m.counts.code_chars) / t;
  }
  const NodeMetrics& b = page.nodes[static_cast<std::size_t>(page.body_id)];
  for (NodeMetrics& m : page.nodes) {
    const double cd = variant == DensityVariant::content ? m.cd : 0.0;
    m.ctd = content_density(m.td, m.ld, cd, b.td, b.ld);
  }
  return page;
}

// Fills TR, CR and CTR bottom-up in one pass over the tree.
inline void compute_relevances(const Document& doc, const ExceptionContext& ctx, const MetricWeights& w,
                               PageMetrics& page) {
  const std::size_t n = doc.size();
  std::vector<TokenBag> bags(n);
  std::vector<double> block_max(n, 0.0);
  std::vector<char> structural(n, 0);
  for (std::size_t id = 0; id < n; ++id) {
    const int p = doc.parent(static_cast<int>(id));
    structural[id] = classify(*doc.nodes()[id]).is_structural || (p >= 0 && structural[p]);
  }
  for (std::size_t id = n; id-- > 0;) {
    NodeMetrics& m = page.nodes[id];
    if (structural[id]) {
      m.tr = m.cr = m.ctr = 0.0;
      continue;
    }
    const DomNode& node = *doc.nodes()[id];
    const NodeClass cls = classify(node);
    double cr = cls.is_code_element ? code_block_relevance(raw_text(node), ctx) : 0.0;
    TokenBag bag;
    if (!cls.is_code_element) bag = tokenize_text(node.own_text);
    for (const DomNode& child : node.children) {
      const auto cid = static_cast<std::size_t>(child.node_id);
      if (structural[cid]) continue;
      cr = std::max(cr, block_max[cid]);
      if (!cls.is_code_element && !classify(child).is_code_element) bag.absorb(std::move(bags[cid]));
      bags[cid] = TokenBag{};
    }
    m.tr = cosine(bag, ctx.combined);
    m.cr = cr;
    m.ctr = content_relevance(m.tr, m.cr, w);
    block_max[id] = cr;
    bags[id] = std::move(bag);
  }
}

// Min-max normalizes CTD and CTR over the non-structural body subtree and
// sets CTS = gamma * CTD_norm + delta * CTR_norm. Constant columns map to 0.
inline void content_score(const Document& doc, const MetricWeights& w, PageMetrics& page) {
  std::vector<std::size_t> members;
  const std::size_t n = doc.size();
  std::vector<char> inside(n, 0), structural(n, 0);
  for (std::size_t id = 0; id < n; ++id) {
    const int p = doc.parent(static_cast<int>(id));
    structural[id] = classify(*doc.nodes()[id]).is_structural || (p >= 0 && structural[p]);
    inside[id] = static_cast<int>(id) == page.body_id || (p >= 0 && inside[p]);
    if (inside[id] && !structural[id]) members.push_back(id);
  }
  if (members.empty()) return;
  double ctd_min = page.nodes[members[0]].ctd, ctd_max = ctd_min;
  double ctr_min = page.nodes[members[0]].ctr, ctr_max = ctr_min;
  for (std::size_t id : members) {
    ctd_min = std::min(ctd_min, page.nodes[id].ctd);
    ctd_max = std::max(ctd_max, page.nodes[id].ctd);
    ctr_min = std::min(ctr_min, page.nodes[id].ctr);
    ctr_max = std::max(ctr_max, page.nodes[id].ctr);
  }
  const auto norm = [](double v, double lo, double hi) { return hi > lo ? (v - lo) / (hi - lo) : 0.0; };
  for (NodeMetrics& m : page.nodes) m.ctd_norm = m.ctr_norm = m.cts = 0.0;
  for (std::size_t id : members) {
    NodeMetrics& m = page.nodes[id];
    m.ctd_norm = norm(m.ctd, ctd_min, ctd_max);
    m.ctr_norm = norm(m.ctr, ctr_min, ctr_max);
    m.cts = w.gamma * m.ctd_norm + w.delta * m.ctr_norm;
  }
}

inline PageMetrics compute_page_metrics(const Document& doc, const ExceptionContext& ctx, const MetricWeights& w,
                                        DensityVariant variant = DensityVariant::content) {
  PageMetrics page = compute_densities(doc, ctx.combined, w, variant);
  compute_relevances(doc, ctx, w, page);
  content_score(doc, w, page);
  return page;
}

}  // namespace relsec
