#include "mapdist/online.hpp"

#include "mapdist/error.hpp"
#include "mapdist/kernels.hpp"
#include "recognizer_detail.hpp"

namespace mapdist {

OnlineRecognizer::OnlineRecognizer(const GalleryIndex& index, RecognizerConfig cfg)
    : index_(&index), cfg_(cfg), params_(regularizer_params(cfg, index)) {
  detail::check_config(cfg_, index);
  reset();
}

void OnlineRecognizer::reset() {
  class_dist_ = Matrix();
  totals_.assign(index_->num_classes(), 0.0);
  exponents_.assign(index_->num_classes(), {});
}

RecognitionResult OnlineRecognizer::push_frame(const FeatureVector& frame) {
  const Matrix row = frame_class_distances(*index_, ProbeSequence({frame}), cfg_.execution);
  class_dist_.append_row(row.row(0));
  for (std::size_t c = 0; c < totals_.size(); ++c) totals_[c] += row(0, c);
  return result();
}

RecognitionResult OnlineRecognizer::result() const {
  const std::size_t num_frames = frames();
  if (num_frames == 0) throw Error(ErrorCode::InvalidConfig, "no frames pushed yet");

  std::vector<ClassId> candidates = select_candidates(totals_, cfg_.candidates);
  Matrix scores(num_frames, candidates.size());
  for (std::size_t m = 0; m < candidates.size(); ++m) {
    std::vector<double>& cached = exponents_[candidates[m]];
    for (std::size_t t = cached.size(); t < num_frames; ++t) {
      cached.push_back(
          kernels::candidate_exponent(class_dist_.row(t), candidates[m], *index_, params_));
    }
    for (std::size_t t = 0; t < num_frames; ++t) scores(t, m) = cached[t];
  }
  return detail::aggregate_scores(std::move(candidates), std::move(scores), cfg_.aggregation);
}

}  // namespace mapdist
