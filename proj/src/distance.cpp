#include "mapdist/distance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mapdist/error.hpp"

namespace mapdist {
namespace {

double squared_euclidean(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

double kl_raw(std::span<const double> p, std::span<const double> q) noexcept {
  double s = 0.0;
  for (std::size_t d = 0; d < p.size(); ++d) {
    if (p[d] > 0.0) s += p[d] * std::log(p[d] / q[d]);
  }
  return std::max(s, 0.0);
}

double chi_squared(std::span<const double> p, std::span<const double> q) noexcept {
  double s = 0.0;
  for (std::size_t d = 0; d < p.size(); ++d) {
    const double diff = p[d] - q[d];
    if (diff != 0.0) s += diff * diff / q[d];
  }
  return s;
}

double jensen_shannon(std::span<const double> p, std::span<const double> q) noexcept {
  double s = 0.0;
  for (std::size_t d = 0; d < p.size(); ++d) {
    const double m = 0.5 * (p[d] + q[d]);
    if (p[d] > 0.0) s += p[d] * std::log(p[d] / m);
    if (q[d] > 0.0) s += q[d] * std::log(q[d] / m);
  }
  return std::max(0.5 * s, 0.0);
}

void check_dims(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                "operand dims differ: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

std::string_view to_string(DissimilarityKind kind) noexcept {
  switch (kind) {
    case DissimilarityKind::Euclidean: return "euclid";
    case DissimilarityKind::SquaredEuclidean: return "sq-euclid";
    case DissimilarityKind::KullbackLeibler: return "kl";
    case DissimilarityKind::ChiSquared: return "chi2";
    case DissimilarityKind::JensenShannon: return "js";
  }
  return "unknown";
}

std::optional<DissimilarityKind> parse_dissimilarity(std::string_view name) noexcept {
  for (auto k : {DissimilarityKind::Euclidean, DissimilarityKind::SquaredEuclidean,
                 DissimilarityKind::KullbackLeibler, DissimilarityKind::ChiSquared,
                 DissimilarityKind::JensenShannon}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

double kl_divergence(const ProbVector& p, const ProbVector& q) {
  check_dims(p.dim(), q.dim());
  return kl_raw(p.values(), q.values());
}

double dissimilarity(DissimilarityKind kind, const FeatureVector& a, const FeatureVector& b) {
  check_dims(a.dim(), b.dim());
  if (is_probabilistic(kind) && !(a.on_simplex() && b.on_simplex())) {
    throw Error(ErrorCode::DomainMismatch,
                std::string(to_string(kind)) + " requires probability-simplex operands");
  }
  return dissimilarity_unchecked(kind, a.values(), b.values());
}

double dissimilarity_unchecked(DissimilarityKind kind, std::span<const double> a,
                               std::span<const double> b) noexcept {
  switch (kind) {
    case DissimilarityKind::Euclidean: return std::sqrt(squared_euclidean(a, b));
    case DissimilarityKind::SquaredEuclidean: return squared_euclidean(a, b);
    case DissimilarityKind::KullbackLeibler: return kl_raw(a, b);
    case DissimilarityKind::ChiSquared: return chi_squared(a, b);
    case DissimilarityKind::JensenShannon: return jensen_shannon(a, b);
  }
  return 0.0;
}

}  // namespace mapdist
