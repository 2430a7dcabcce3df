#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "mapdist/feature.hpp"

namespace mapdist {

enum class DissimilarityKind {
  Euclidean,
  SquaredEuclidean,
  KullbackLeibler,
  ChiSquared,
  JensenShannon,
};

/// KL, chi-squared and Jensen-Shannon accept only simplex vectors.
constexpr bool is_probabilistic(DissimilarityKind kind) noexcept {
  return kind == DissimilarityKind::KullbackLeibler ||
         kind == DissimilarityKind::ChiSquared ||
         kind == DissimilarityKind::JensenShannon;
}

constexpr bool is_symmetric(DissimilarityKind kind) noexcept {
  return kind == DissimilarityKind::Euclidean ||
         kind == DissimilarityKind::SquaredEuclidean ||
         kind == DissimilarityKind::JensenShannon;
}

/// Command-line names: euclid, sq-euclid, kl, chi2, js.
std::string_view to_string(DissimilarityKind kind) noexcept;
std::optional<DissimilarityKind> parse_dissimilarity(std::string_view name) noexcept;

/// I(p:q) = sum_d p_d ln(p_d / q_d), with 0 ln 0 = 0.
double kl_divergence(const ProbVector& p, const ProbVector& q);

/// Checked dispatch: dimensions must agree and probabilistic kinds require
/// both operands on the simplex (DomainMismatch otherwise).
double dissimilarity(DissimilarityKind kind, const FeatureVector& a, const FeatureVector& b);

/// Unchecked inner-loop form used by the kernels; callers validate operands.
///
/// ChiSquared is the Pearson form sum (a_d - b_d)^2 / b_d. JensenShannon is
/// (KL(a:m) + KL(b:m)) / 2 with m the midpoint.
double dissimilarity_unchecked(DissimilarityKind kind, std::span<const double> a,
                               std::span<const double> b) noexcept;

}  // namespace mapdist
