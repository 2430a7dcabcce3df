#include "mapdist/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mapdist/distance.hpp"
#include "mapdist/error.hpp"

namespace mapdist {
namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

std::vector<double> gaussian(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dim);
  for (double& x : v) x = normal(rng);
  return v;
}

std::vector<double> flat_dirichlet(Rng& rng, std::size_t dim) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> v(dim);
  for (double& x : v) x = expo(rng);
  const auto p = l1_normalize_to_prob(FeatureVector(v));
  return {p.values().begin(), p.values().end()};
}

// Class-level draws shared by its stills and probes.
struct ClassModel {
  std::vector<double> prototype;  // unit vector, or log-probabilities
  std::vector<double> shift;      // already scaled by video_shift
};

ClassModel draw_class(Rng& rng, const SyntheticSpec& spec) {
  ClassModel m;
  if (spec.family == GeneratorFamily::GaussianUnitSphere) {
    const auto proto = l2_normalize(FeatureVector(gaussian(rng, spec.dim)));
    m.prototype.assign(proto.values().begin(), proto.values().end());
    const auto dir = l2_normalize(FeatureVector(gaussian(rng, spec.dim)));
    m.shift.assign(dir.values().begin(), dir.values().end());
    for (double& x : m.shift) x *= spec.video_shift;
  } else {
    m.prototype = flat_dirichlet(rng, spec.dim);
    for (double& x : m.prototype) x = std::log(x);
    m.shift = gaussian(rng, spec.dim);
    for (double& x : m.shift) x *= spec.video_shift;
  }
  return m;
}

FeatureVector realize(Rng& rng, const SyntheticSpec& spec, const ClassModel& m, bool shifted,
                      double spread) {
  const std::size_t dim = spec.dim;
  std::vector<double> v = m.prototype;
  if (shifted)
    for (std::size_t d = 0; d < dim; ++d) v[d] += m.shift[d];
  std::normal_distribution<double> normal(0.0, 1.0);
  if (spec.family == GeneratorFamily::GaussianUnitSphere) {
    const double sigma = spread / std::sqrt(static_cast<double>(dim));
    for (double& x : v) x += sigma * normal(rng);
    return l2_normalize(FeatureVector(std::move(v)));
  }
  for (double& x : v) x += spread * normal(rng);
  const double top = *std::max_element(v.begin(), v.end());
  for (double& x : v) x = std::exp(x - top);
  return l1_normalize_to_prob(FeatureVector(std::move(v))).features();
}

std::size_t draw_count(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ (index + 0x632be59bd9b4e019ULL));
}

void validate(const SyntheticSpec& spec) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); };
  if (spec.classes == 0) fail("classes must be positive");
  if (spec.stills_min == 0 || spec.stills_min > spec.stills_max) fail("invalid stills range");
  if (spec.frames_min == 0 || spec.frames_min > spec.frames_max) fail("invalid frames range");
  if (spec.probes_per_class == 0) fail("probes_per_class must be positive");
  if (spec.dim < 2) fail("dim must be at least 2");
  for (double s : {spec.still_spread, spec.video_shift, spec.frame_spread}) {
    if (!(s >= 0.0) || !std::isfinite(s)) fail("spreads must be nonnegative and finite");
  }
}

Normalization family_normalization(GeneratorFamily family) noexcept {
  return family == GeneratorFamily::DirichletSimplex ? Normalization::L1Probability
                                                     : Normalization::L2;
}

SyntheticProblem generate_problem(const SyntheticSpec& spec) {
  validate(spec);
  std::vector<FeatureVector> instances;
  std::vector<ClassId> labels;
  std::vector<std::string> names;
  std::vector<ProbeRecord> probes;
  for (ClassId c = 0; c < spec.classes; ++c) {
    Rng rng(derive_seed(spec.seed, c));
    const ClassModel model = draw_class(rng, spec);
    names.push_back("c" + std::to_string(c));
    const std::size_t stills = draw_count(rng, spec.stills_min, spec.stills_max);
    for (std::size_t s = 0; s < stills; ++s) {
      instances.push_back(realize(rng, spec, model, false, spec.still_spread));
      labels.push_back(c);
    }
    for (std::size_t p = 0; p < spec.probes_per_class; ++p) {
      const std::size_t frames = draw_count(rng, spec.frames_min, spec.frames_max);
      std::vector<FeatureVector> seq;
      seq.reserve(frames);
      for (std::size_t t = 0; t < frames; ++t) {
        seq.push_back(realize(rng, spec, model, true, spec.frame_spread));
      }
      probes.push_back({ProbeSequence(std::move(seq)), names.back()});
    }
  }
  // Probes are emitted round-robin over classes rather than grouped.
  std::vector<ProbeRecord> ordered;
  ordered.reserve(probes.size());
  for (std::size_t p = 0; p < spec.probes_per_class; ++p)
    for (ClassId c = 0; c < spec.classes; ++c)
      ordered.push_back(std::move(probes[c * spec.probes_per_class + p]));
  return {Gallery(std::move(instances), std::move(labels), std::move(names)), std::move(ordered)};
}

ProbeSequence inject_noise(const ProbeSequence& seq, const NoiseSpec& noise,
                           Normalization scheme) {
  if (!(noise.x_max >= 0.0) || !std::isfinite(noise.x_max)) {
    throw Error(ErrorCode::InvalidSpec, "noise level must be nonnegative and finite");
  }
  if (noise.x_max == 0.0) return seq;
  Rng rng(noise.seed);
  std::uniform_real_distribution<double> uniform(-noise.x_max, noise.x_max);
  std::vector<FeatureVector> frames;
  frames.reserve(seq.size());
  for (const auto& frame : seq) {
    std::vector<double> v(frame.values().begin(), frame.values().end());
    for (double& x : v) x += uniform(rng);
    if (scheme == Normalization::L1Probability)
      for (double& x : v) x = std::max(x, kDefaultProbabilityFloor);
    frames.push_back(normalize(FeatureVector(std::move(v)), scheme));
  }
  return ProbeSequence(std::move(frames));
}

std::pair<double, double> predicted_statistic_moments(std::size_t dim, double sample_size,
                                                      double divergence) noexcept {
  const double dof = static_cast<double>(dim) - 1.0;
  return {dof + 2.0 * sample_size * divergence, 2.0 * dof + 8.0 * sample_size * divergence};
}

AsymptoticsReport validate_kl_asymptotics(const ProbVector& x_r, const ProbVector& x_i,
                                          std::size_t sample_size, std::size_t trials,
                                          std::uint64_t seed) {
  if (x_r.dim() != x_i.dim()) throw Error(ErrorCode::DimensionMismatch, "pair dims differ");
  if (x_r.features() == x_i.features()) {
    throw Error(ErrorCode::DegenerateCase, "asymptotics do not hold for identical distributions");
  }
  if (sample_size == 0 || trials < 2) {
    throw Error(ErrorCode::InvalidSpec, "need sample_size >= 1 and trials >= 2");
  }

  const std::size_t dim = x_r.dim();
  const auto p = x_r.values();
  const auto q = x_i.values();
  // tail[d] = sum_{e >= d} p_e, for conditional-binomial multinomial draws.
  std::vector<double> tail(dim + 1, 0.0);
  for (std::size_t d = dim; d-- > 0;) tail[d] = tail[d + 1] + p[d];

  const double n = static_cast<double>(sample_size);
  std::vector<double> distances(trials);
  const auto n_trials = static_cast<std::int64_t>(trials);
#ifdef MAPDIST_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t k = 0; k < n_trials; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    std::size_t remaining = sample_size;
    double kl = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      std::size_t count = remaining;
      if (d + 1 < dim && remaining > 0) {
        const double prob = std::clamp(p[d] / tail[d], 0.0, 1.0);
        count = std::binomial_distribution<std::size_t>(remaining, prob)(rng);
      }
      remaining -= count;
      if (count > 0) {
        const double freq = static_cast<double>(count) / n;
        kl += freq * std::log(freq / q[d]);
      }
    }
    distances[static_cast<std::size_t>(k)] = kl;
  }

  auto moments = [](const std::vector<double>& xs, double factor) {
    double mean = 0.0;
    for (double x : xs) mean += factor * x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (factor * x - mean) * (factor * x - mean);
    return std::pair{mean, var / static_cast<double>(xs.size() - 1)};
  };

  AsymptoticsReport rep;
  rep.dim = dim;
  rep.sample_size = sample_size;
  rep.trials = trials;
  rep.divergence = kl_divergence(x_r, x_i);
  const double dof = static_cast<double>(dim) - 1.0;
  std::tie(rep.empirical_mean, rep.empirical_var) = moments(distances, 2.0 * n);
  std::tie(rep.predicted_mean, rep.predicted_var) =
      predicted_statistic_moments(dim, n, rep.divergence);
  std::tie(rep.distance_mean, rep.distance_var) = moments(distances, 1.0);
  rep.gaussian_predicted_mean = rep.divergence + dof / n;
  rep.gaussian_predicted_var = (4.0 * n * rep.divergence + dof) / (2.0 * n * n);
  rep.chi_squared_implied_mean = rep.divergence + dof / (2.0 * n);
  return rep;
}

std::pair<ProbVector, ProbVector> random_simplex_pair(std::size_t dim, double tilt,
                                                      std::uint64_t seed) {
  if (dim < 2 || !(tilt > 0.0)) throw Error(ErrorCode::InvalidSpec, "need dim >= 2 and tilt > 0");
  Rng rng(seed);
  ProbVector x_r = l1_normalize_to_prob(FeatureVector(flat_dirichlet(rng, dim)));
  std::normal_distribution<double> normal(0.0, tilt);
  std::vector<double> v(x_r.values().begin(), x_r.values().end());
  for (double& x : v) x *= std::exp(normal(rng));
  ProbVector x_i = l1_normalize_to_prob(FeatureVector(std::move(v)));
  return {std::move(x_r), std::move(x_i)};
}

}  // namespace mapdist
