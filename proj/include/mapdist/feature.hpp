#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mapdist {

/// Default lower bound applied to every component before L1 normalization.
inline constexpr double kDefaultProbabilityFloor = 1e-10;

/// Absolute tolerance on the component sum of a simplex vector.
inline constexpr double kSimplexTolerance = 1e-9;

/// A finite D-dimensional feature vector with D >= 2.
///
/// Whether the vector lies on the probability simplex (nonnegative, sum 1
/// within kSimplexTolerance) is computed once at construction; the
/// probabilistic dissimilarities check this flag instead of rescanning.
class FeatureVector {
 public:
  explicit FeatureVector(std::vector<double> values);
  FeatureVector(std::initializer_list<double> values);

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t d) const { return values_[d]; }
  bool on_simplex() const noexcept { return on_simplex_; }

  friend bool operator==(const FeatureVector& a, const FeatureVector& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<double> values_;
  bool on_simplex_ = false;
};

/// A feature vector known to lie on the probability simplex.
class ProbVector {
 public:
  /// Wraps values that already sum to 1 and are nonnegative; throws
  /// DomainMismatch otherwise.
  static ProbVector from_simplex(std::vector<double> values);

  const FeatureVector& features() const noexcept { return features_; }
  operator const FeatureVector&() const noexcept { return features_; }  // NOLINT

  std::size_t dim() const noexcept { return features_.dim(); }
  std::span<const double> values() const noexcept { return features_.values(); }
  double operator[](std::size_t d) const { return features_[d]; }

 private:
  explicit ProbVector(FeatureVector features) : features_(std::move(features)) {}

  FeatureVector features_;
};

/// Ordered frames of one probe; nonempty, all frames share one dimension.
class ProbeSequence {
 public:
  explicit ProbeSequence(std::vector<FeatureVector> frames);

  std::size_t size() const noexcept { return frames_.size(); }
  std::size_t dim() const noexcept { return frames_.front().dim(); }
  const FeatureVector& operator[](std::size_t t) const { return frames_[t]; }
  std::span<const FeatureVector> frames() const noexcept { return frames_; }

  auto begin() const noexcept { return frames_.begin(); }
  auto end() const noexcept { return frames_.end(); }

 private:
  std::vector<FeatureVector> frames_;
};

/// Scales to unit Euclidean norm. Throws ZeroVector when the norm is 0.
FeatureVector l2_normalize(const FeatureVector& v);

/// Floors every component at `floor`, then rescales to sum 1.
/// Throws NegativeFeature for negative input, ZeroVector for all-zero input.
ProbVector l1_normalize_to_prob(const FeatureVector& v,
                                double floor = kDefaultProbabilityFloor);

/// Normalization scheme a caller applies before matching.
enum class Normalization { None, L2, L1Probability };

/// Applies `scheme` to `v`; L1Probability uses the default floor.
FeatureVector normalize(const FeatureVector& v, Normalization scheme);

}  // namespace mapdist
