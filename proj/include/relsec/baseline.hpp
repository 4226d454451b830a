#pragma once

#include "relsec/extractor.hpp"

namespace relsec {

// Density-only extraction in the style of composite text density: no
// exception context, every link counted as noise, no code term in CTD.
// The result depends on the page alone.
inline ExtractionResult extract_density_only(const Document& doc, const MetricWeights& w = {}) {
  return extract(doc, empty_context(), w, Mode::density);
}

}  // namespace relsec
