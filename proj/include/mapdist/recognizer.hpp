#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mapdist/distance.hpp"
#include "mapdist/execution.hpp"
#include "mapdist/feature.hpp"
#include "mapdist/gallery.hpp"
#include "mapdist/regularizer.hpp"

namespace mapdist {

inline constexpr double kDefaultScale = 100.0;
inline constexpr double kDefaultLambda = 7.0;
inline constexpr std::size_t kDefaultCandidates = 64;

/// How per-frame evidence is fused over the sequence.
enum class Aggregation {
  /// Sum of per-frame posteriors normalized over the candidates.
  SumRule,
  /// Sum of per-frame log scores, normalized once at the end.
  ProductRule,
};

struct RecognizerConfig {
  /// When set, must equal the index's dissimilarity.
  std::optional<DissimilarityKind> kind;
  double scale = kDefaultScale;  // n
  double lambda = kDefaultLambda;
  /// Candidate count M, clamped to C at run time.
  std::size_t candidates = kDefaultCandidates;
  Aggregation aggregation = Aggregation::SumRule;
  PhiMode phi_mode = PhiMode::Approximate;
  /// D for PhiMode::Exact; 0 means the gallery dimension.
  std::size_t phi_dim = 0;
  Execution execution = Execution::Parallel;
};

/// Throws InvalidConfig unless n > 0, lambda >= 0 (both finite) and M >= 1.
void validate(const RecognizerConfig& cfg);

struct RecognitionResult {
  ClassId predicted = 0;
  /// Classes that entered the final decision. For the pruned criterion
  /// this is {c_1..c_M} ordered by accumulated distance, otherwise 0..C-1.
  std::vector<ClassId> candidates;
  /// Aggregated posterior L[m], aligned with `candidates`.
  std::vector<double> candidate_posteriors;
  /// T x M per-frame posteriors (rows sum to 1). Empty under the product
  /// rule, which normalizes only the aggregate.
  Matrix frame_posteriors;
  /// T x M per-frame log scores before normalization.
  Matrix frame_scores;
  /// Frame used by the clustering baseline.
  std::optional<std::size_t> representative_frame;

  std::optional<double> posterior_of(ClassId c) const;
};

/// Regularizer and aggregation settings of `cfg` as kernel parameters.
RegularizerParams regularizer_params(const RecognizerConfig& cfg, const GalleryIndex& index);

/// In-place softmax; subtracts the maximum before exponentiating.
void softmax_in_place(std::span<double> scores) noexcept;

/// Indices of the M smallest totals, ordered by (total, index).
std::vector<ClassId> select_candidates(std::span<const double> totals, std::size_t count);

/// T x C matrix of single-linkage distances rho_c(x(t)).
Matrix frame_class_distances(const GalleryIndex& index, const ProbeSequence& probe,
                             Execution exec = Execution::Parallel);

/// Nearest neighbour with accumulation: argmin_c sum_t rho_c(x(t)).
/// Posteriors are diagnostic: per-frame rows are the softmax of
/// -n rho_c(x(t)); the aggregate is the softmax of -n sum_t rho_c(x(t)).
RecognitionResult ml_classify(const GalleryIndex& index, const ProbeSequence& probe,
                              double scale = kDefaultScale);

/// Sum rule over per-frame softmax posteriors of -n rho_c(x(t)).
RecognitionResult map_classify(const GalleryIndex& index, const ProbeSequence& probe,
                               double scale = kDefaultScale);

/// Index of the frame minimizing sum_t' rho(x(t), x(t')).
std::size_t select_medoid_frame(const ProbeSequence& probe, DissimilarityKind kind);

/// ml_classify applied to the medoid frame alone.
RecognitionResult ml_clustering_classify(const GalleryIndex& index, const ProbeSequence& probe,
                                         double scale = kDefaultScale);

/// Regularized MAP of distances restricted to the M classes with the
/// smallest accumulated distance. Cost O(T (R + M C)) past the index.
RecognitionResult proposed_classify(const GalleryIndex& index, const ProbeSequence& probe,
                                    const RecognizerConfig& cfg);

/// Unpruned regularized criterion over all C classes, evaluated naively
/// from the raw gallery. Ground truth for the pruned path.
RecognitionResult oracle_classify_full(const GalleryIndex& index, const ProbeSequence& probe,
                                       const RecognizerConfig& cfg);

}  // namespace mapdist
