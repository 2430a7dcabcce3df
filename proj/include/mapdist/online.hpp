#pragma once

#include <cstddef>
#include <vector>

#include "mapdist/execution.hpp"
#include "mapdist/feature.hpp"
#include "mapdist/gallery.hpp"
#include "mapdist/recognizer.hpp"

namespace mapdist {

/// Frame-by-frame form of proposed_classify. After t frames, result() is
/// bit-identical to proposed_classify on those t frames.
///
/// Keeps the T x C distance table and caches per-(frame, class) exponents,
/// so a new frame costs O(R + M C) unless the candidate set changes, in
/// which case only the newly admitted classes are backfilled. The index
/// must outlive the recognizer. Not safe for concurrent mutation.
class OnlineRecognizer {
 public:
  OnlineRecognizer(const GalleryIndex& index, RecognizerConfig cfg);

  /// Consumes one frame and returns the decision over all frames so far.
  RecognitionResult push_frame(const FeatureVector& frame);

  /// Decision over the frames pushed so far; requires at least one.
  RecognitionResult result() const;

  std::size_t frames() const noexcept { return class_dist_.rows(); }
  void reset();

 private:
  const GalleryIndex* index_;
  RecognizerConfig cfg_;
  RegularizerParams params_;
  Matrix class_dist_;
  std::vector<double> totals_;
  // exponents_[c][t] for t < exponents_[c].size()
  mutable std::vector<std::vector<double>> exponents_;
};

}  // namespace mapdist
