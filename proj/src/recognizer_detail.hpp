#pragma once

// Shared by the batch and online recognizers so both produce bit-identical
// results from the same inputs.

#include <span>
#include <vector>

#include "mapdist/recognizer.hpp"

namespace mapdist::detail {

/// Fuses a T x M matrix of per-frame log scores over `candidates`.
RecognitionResult aggregate_scores(std::vector<ClassId> candidates, Matrix scores,
                                   Aggregation aggregation);

/// Validates `cfg` against `index`.
void check_config(const RecognizerConfig& cfg, const GalleryIndex& index);

}  // namespace mapdist::detail
