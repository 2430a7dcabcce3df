#include "mapdist/feature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mapdist/error.hpp"

namespace mapdist {
namespace {

bool lies_on_simplex(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) {
    if (x < 0.0) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= kSimplexTolerance;
}

}  // namespace

FeatureVector::FeatureVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw Error(ErrorCode::InvalidFeature,
                "feature dimension must be at least 2, got " + std::to_string(values_.size()));
  }
  for (std::size_t d = 0; d < values_.size(); ++d) {
    if (!std::isfinite(values_[d])) {
      throw Error(ErrorCode::InvalidFeature, "non-finite component at index " + std::to_string(d));
    }
  }
  on_simplex_ = lies_on_simplex(values_);
}

FeatureVector::FeatureVector(std::initializer_list<double> values)
    : FeatureVector(std::vector<double>(values)) {}

ProbVector ProbVector::from_simplex(std::vector<double> values) {
  FeatureVector f(std::move(values));
  if (!f.on_simplex()) {
    throw Error(ErrorCode::DomainMismatch, "vector is not on the probability simplex");
  }
  return ProbVector(std::move(f));
}

ProbeSequence::ProbeSequence(std::vector<FeatureVector> frames) : frames_(std::move(frames)) {
  if (frames_.empty()) throw Error(ErrorCode::InvalidFeature, "probe sequence has no frames");
  const std::size_t d = frames_.front().dim();
  for (std::size_t t = 1; t < frames_.size(); ++t) {
    if (frames_[t].dim() != d) {
      throw Error(ErrorCode::DimensionMismatch,
                  "frame " + std::to_string(t) + " has dim " + std::to_string(frames_[t].dim()) +
                      ", expected " + std::to_string(d));
    }
  }
}

FeatureVector l2_normalize(const FeatureVector& v) {
  const auto x = v.values();
  const double norm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
  if (norm == 0.0) throw Error(ErrorCode::ZeroVector, "cannot L2-normalize a zero vector");
  std::vector<double> out(x.begin(), x.end());
  for (double& e : out) e /= norm;
  return FeatureVector(std::move(out));
}

ProbVector l1_normalize_to_prob(const FeatureVector& v, double floor) {
  const auto x = v.values();
  if (!(floor >= 0.0)) throw Error(ErrorCode::InvalidConfig, "probability floor must be >= 0");
  bool any_positive = false;
  for (std::size_t d = 0; d < x.size(); ++d) {
    if (x[d] < 0.0) {
      throw Error(ErrorCode::NegativeFeature, "negative component at index " + std::to_string(d));
    }
    any_positive = any_positive || x[d] > 0.0;
  }
  if (!any_positive) throw Error(ErrorCode::ZeroVector, "cannot L1-normalize a zero vector");

  std::vector<double> out(x.begin(), x.end());
  for (double& e : out) e = std::max(e, floor);
  const double sum = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& e : out) e /= sum;
  return ProbVector::from_simplex(std::move(out));
}

FeatureVector normalize(const FeatureVector& v, Normalization scheme) {
  switch (scheme) {
    case Normalization::None: return v;
    case Normalization::L2: return l2_normalize(v);
    case Normalization::L1Probability: return l1_normalize_to_prob(v).features();
  }
  return v;
}

}  // namespace mapdist
