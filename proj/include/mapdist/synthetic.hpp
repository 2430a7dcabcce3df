#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mapdist/feature.hpp"
#include "mapdist/gallery.hpp"

namespace mapdist {

enum class GeneratorFamily {
  /// Prototypes drawn from a flat Dirichlet. Perturbations are Gaussian in
  /// log space with per-component deviation equal to the spread, and the
  /// shift is video_shift times a standard normal vector.
  DirichletSimplex,
  /// Gaussian prototypes projected onto the unit sphere. Perturbations are
  /// isotropic Gaussians of per-component deviation spread / sqrt(D), and
  /// the shift is a random unit direction of length video_shift.
  GaussianUnitSphere,
};

/// Parameters of a synthetic still-to-video problem. All spreads are in
/// the units described on GeneratorFamily.
struct SyntheticSpec {
  std::size_t classes = 20;
  std::size_t stills_min = 1;
  std::size_t stills_max = 3;
  std::size_t frames_min = 5;
  std::size_t frames_max = 10;
  std::size_t probes_per_class = 1;
  std::size_t dim = 32;
  std::uint64_t seed = 1;
  double still_spread = 0.3;
  /// Per-class shift shared by all frames of a probe.
  double video_shift = 0.3;
  /// Independent per-frame perturbation on top of the shift.
  double frame_spread = 0.3;
  GeneratorFamily family = GeneratorFamily::GaussianUnitSphere;
};

/// Throws InvalidSpec on zero counts, inverted ranges, dim < 2 or negative
/// spreads.
void validate(const SyntheticSpec& spec);

/// Normalization that keeps vectors of `family` admissible.
Normalization family_normalization(GeneratorFamily family) noexcept;

/// One probe sequence with its (optional) ground-truth class name.
struct ProbeRecord {
  ProbeSequence sequence;
  std::optional<std::string> label;
};

struct SyntheticProblem {
  Gallery gallery;
  std::vector<ProbeRecord> probes;
};

/// Deterministic in `spec.seed`. Class names are "c0", "c1", ...
SyntheticProblem generate_problem(const SyntheticSpec& spec);

struct NoiseSpec {
  double x_max = 0.0;
  std::uint64_t seed = 0;
};

/// Adds i.i.d. U[-x_max, x_max] to every component, then re-applies
/// `scheme`. Under L1Probability components are first clipped to the
/// probability floor, so a frame never collapses to the zero vector.
/// x_max = 0 returns the input unchanged.
ProbeSequence inject_noise(const ProbeSequence& seq, const NoiseSpec& noise,
                           Normalization scheme);

/// Sub-seed for stream `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

struct AsymptoticsReport {
  std::size_t dim = 0;
  std::size_t sample_size = 0;  // n
  std::size_t trials = 0;
  double divergence = 0.0;  // I(x_r : x_i)
  // Statistic 2n KL(sample : x_i) against non-central chi-squared moments.
  double empirical_mean = 0.0;
  double empirical_var = 0.0;
  double predicted_mean = 0.0;  // (D - 1) + 2n I
  double predicted_var = 0.0;   // 2(D - 1) + 8n I
  // The distance KL(sample : x_i) itself against the Gaussian approximation
  // with mean I + (D - 1) / n and variance (4n I + D - 1) / (2 n^2).
  double distance_mean = 0.0;
  double distance_var = 0.0;
  double gaussian_predicted_mean = 0.0;
  double gaussian_predicted_var = 0.0;
  /// Mean implied by the chi-squared moments, I + (D - 1) / (2n).
  double chi_squared_implied_mean = 0.0;
};

/// Non-central chi-squared moments of 2n KL: {(D - 1) + 2n I, 2(D - 1) + 8n I}.
std::pair<double, double> predicted_statistic_moments(std::size_t dim, double sample_size,
                                                      double divergence) noexcept;

/// Monte-Carlo check of the large-sample law of 2n KL. Each trial draws a
/// multinomial sample of size n from x_r. Throws DegenerateCase when
/// x_r == x_i and DimensionMismatch on unequal dims.
AsymptoticsReport validate_kl_asymptotics(const ProbVector& x_r, const ProbVector& x_i,
                                          std::size_t sample_size, std::size_t trials,
                                          std::uint64_t seed = 1);

/// A random simplex pair at controlled separation: x_r ~ Dirichlet(1) and
/// x_i = x_r tilted in log space by Gaussian noise of deviation `tilt`.
std::pair<ProbVector, ProbVector> random_simplex_pair(std::size_t dim, double tilt,
                                                      std::uint64_t seed);

}  // namespace mapdist
