#include <doctest.h>

#include <cmath>
#include <random>

#include "mapdist/distance.hpp"
#include "mapdist/error.hpp"

using namespace mapdist;

namespace {

ProbVector prob(std::vector<double> v) { return ProbVector::from_simplex(std::move(v)); }

ProbVector random_prob(std::mt19937_64& rng, std::size_t dim) {
  std::gamma_distribution<double> gamma(0.7, 1.0);
  std::vector<double> v(dim);
  for (double& x : v) x = gamma(rng);
  return l1_normalize_to_prob(FeatureVector(v));
}

}  // namespace

TEST_CASE("kl_divergence values") {
  const auto p = prob({0.5, 0.5});
  const auto q = prob({0.25, 0.75});
  CHECK(kl_divergence(p, p) == 0.0);
  // mpmath: 0.5 ln 2 + 0.5 ln(2/3)
  CHECK(kl_divergence(p, q) == doctest::Approx(0.14384103622589046).epsilon(1e-14));
  // mpmath: 0.25 ln(0.5) + 0.75 ln(1.5)
  CHECK(kl_divergence(q, p) == doctest::Approx(0.13081203594113696).epsilon(1e-14));
  CHECK(kl_divergence(p, q) != doctest::Approx(kl_divergence(q, p)));
}

TEST_CASE("kl_divergence rejects unequal dims") {
  CHECK_THROWS_AS(kl_divergence(prob({0.5, 0.5}), prob({0.2, 0.3, 0.5})), Error);
}

TEST_CASE("dissimilarity examples") {
  CHECK(dissimilarity(DissimilarityKind::Euclidean, FeatureVector{0, 0}, FeatureVector{3, 4}) == 5.0);
  CHECK(dissimilarity(DissimilarityKind::SquaredEuclidean, FeatureVector{0, 0},
                      FeatureVector{3, 4}) == 25.0);
  const auto p = prob({0.1, 0.2, 0.7});
  CHECK(dissimilarity(DissimilarityKind::ChiSquared, p, p) == 0.0);

  // mpmath on the floored vectors: 0.69314717815736...
  const auto a = l1_normalize_to_prob(FeatureVector{1, 0});
  const auto b = l1_normalize_to_prob(FeatureVector{0, 1});
  const double js = dissimilarity(DissimilarityKind::JensenShannon, a, b);
  CHECK(js == doctest::Approx(0.69314717815736022).epsilon(1e-12));
  CHECK(std::abs(js - std::log(2.0)) < 1e-8);
}

TEST_CASE("chi-squared is the Pearson form") {
  const auto p = prob({0.5, 0.5});
  const auto q = prob({0.25, 0.75});
  // (0.25^2 / 0.25) + (0.25^2 / 0.75)
  CHECK(dissimilarity(DissimilarityKind::ChiSquared, p, q) ==
        doctest::Approx(0.25 + 0.0625 / 0.75).epsilon(1e-15));
}

TEST_CASE("probabilistic kinds reject unnormalized operands") {
  const FeatureVector raw{1.0, 2.0};
  const FeatureVector ok{0.5, 0.5};
  for (auto kind : {DissimilarityKind::KullbackLeibler, DissimilarityKind::ChiSquared,
                    DissimilarityKind::JensenShannon}) {
    try {
      dissimilarity(kind, raw, ok);
      FAIL("expected DomainMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DomainMismatch);
    }
  }
  CHECK_NOTHROW(dissimilarity(DissimilarityKind::Euclidean, raw, ok));
  try {
    dissimilarity(DissimilarityKind::Euclidean, raw, FeatureVector{1, 2, 3});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("nonnegativity, symmetry and the J-divergence over random inputs") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  bool kl_asymmetric = false;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t dim = 2 + trial % 20;
    const auto p = random_prob(rng, dim);
    const auto q = random_prob(rng, dim);
    std::vector<double> xa(dim), xb(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      xa[d] = normal(rng);
      xb[d] = normal(rng);
    }
    const FeatureVector a(xa), b(xb);

    for (auto kind : {DissimilarityKind::Euclidean, DissimilarityKind::SquaredEuclidean}) {
      CHECK(dissimilarity(kind, a, b) >= 0.0);
      CHECK(dissimilarity(kind, a, b) == dissimilarity(kind, b, a));
      CHECK(dissimilarity(kind, a, a) == 0.0);
    }
    for (auto kind : {DissimilarityKind::KullbackLeibler, DissimilarityKind::ChiSquared,
                      DissimilarityKind::JensenShannon}) {
      CHECK(dissimilarity(kind, p, q) >= 0.0);
      CHECK(dissimilarity(kind, p, p) == 0.0);
    }
    CHECK(dissimilarity(DissimilarityKind::JensenShannon, p, q) ==
          doctest::Approx(dissimilarity(DissimilarityKind::JensenShannon, q, p)).epsilon(1e-12));

    const double j = kl_divergence(p, q) + kl_divergence(q, p);
    CHECK(j > 0.0);
    CHECK(kl_divergence(p, p) + kl_divergence(p, p) == 0.0);
    if (std::abs(kl_divergence(p, q) - kl_divergence(q, p)) > 1e-6) kl_asymmetric = true;
  }
  CHECK(kl_asymmetric);
}

TEST_CASE("dissimilarity names round-trip") {
  for (auto kind : {DissimilarityKind::Euclidean, DissimilarityKind::SquaredEuclidean,
                    DissimilarityKind::KullbackLeibler, DissimilarityKind::ChiSquared,
                    DissimilarityKind::JensenShannon}) {
    CHECK(parse_dissimilarity(to_string(kind)) == kind);
  }
  CHECK_FALSE(parse_dissimilarity("cosine").has_value());
}
