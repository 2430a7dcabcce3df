#include "mapdist/recognizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "mapdist/error.hpp"
#include "mapdist/kernels.hpp"
#include "recognizer_detail.hpp"

namespace mapdist {
namespace {

std::size_t argmin_lowest(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[best]) best = i;
  return best;
}

std::size_t argmax_lowest(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

std::vector<ClassId> all_classes(std::size_t num_classes) {
  std::vector<ClassId> ids(num_classes);
  std::iota(ids.begin(), ids.end(), ClassId{0});
  return ids;
}

std::vector<double> column_sums(const Matrix& m) {
  std::vector<double> sums(m.cols(), 0.0);
  for (std::size_t t = 0; t < m.rows(); ++t)
    for (std::size_t c = 0; c < m.cols(); ++c) sums[c] += m(t, c);
  return sums;
}

Matrix scaled(const Matrix& m, double factor) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t t = 0; t < m.rows(); ++t)
    for (std::size_t c = 0; c < m.cols(); ++c) out(t, c) = factor * m(t, c);
  return out;
}

void check_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::InvalidConfig, "scale n must be positive and finite");
  }
}

}  // namespace

namespace detail {

RecognitionResult aggregate_scores(std::vector<ClassId> candidates, Matrix scores,
                                   Aggregation aggregation) {
  RecognitionResult out;
  const std::size_t num_candidates = candidates.size();
  out.candidate_posteriors.assign(num_candidates, 0.0);
  if (aggregation == Aggregation::SumRule) {
    Matrix posteriors = scores;
    for (std::size_t t = 0; t < posteriors.rows(); ++t) {
      auto row = posteriors.row(t);
      softmax_in_place(row);
      for (std::size_t m = 0; m < num_candidates; ++m) out.candidate_posteriors[m] += row[m];
    }
    out.frame_posteriors = std::move(posteriors);
  } else {
    for (std::size_t t = 0; t < scores.rows(); ++t)
      for (std::size_t m = 0; m < num_candidates; ++m) out.candidate_posteriors[m] += scores(t, m);
    softmax_in_place(out.candidate_posteriors);
  }

  std::size_t best = 0;
  for (std::size_t m = 1; m < num_candidates; ++m) {
    const double l = out.candidate_posteriors[m];
    const double b = out.candidate_posteriors[best];
    if (l > b || (l == b && candidates[m] < candidates[best])) best = m;
  }
  out.predicted = candidates[best];
  out.candidates = std::move(candidates);
  out.frame_scores = std::move(scores);
  return out;
}

void check_config(const RecognizerConfig& cfg, const GalleryIndex& index) {
  validate(cfg);
  if (cfg.kind && *cfg.kind != index.kind()) {
    throw Error(ErrorCode::InvalidConfig,
                "config dissimilarity " + std::string(to_string(*cfg.kind)) +
                    " does not match index dissimilarity " + std::string(to_string(index.kind())));
  }
}

}  // namespace detail

double phi_approx(double probe_distance, double interclass) noexcept {
  const double diff = probe_distance - interclass;
  return diff * diff / interclass;
}

double phi_exact(double probe_distance, double interclass, std::size_t dim,
                 double scale) noexcept {
  const double dof = static_cast<double>(dim) - 1.0;
  const double log_term =
      std::log(4.0 * interclass + (std::numbers::pi + dof) / scale) / (2.0 * scale);
  const double diff = probe_distance - interclass - dof / scale;
  return log_term + diff * diff / (4.0 * interclass + dof / scale);
}

void validate(const RecognizerConfig& cfg) {
  check_scale(cfg.scale);
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) {
    throw Error(ErrorCode::InvalidConfig, "lambda must be nonnegative and finite");
  }
  if (cfg.candidates == 0) throw Error(ErrorCode::InvalidConfig, "candidate count M must be >= 1");
}

std::optional<double> RecognitionResult::posterior_of(ClassId c) const {
  for (std::size_t m = 0; m < candidates.size(); ++m)
    if (candidates[m] == c) return candidate_posteriors[m];
  return std::nullopt;
}

RegularizerParams regularizer_params(const RecognizerConfig& cfg, const GalleryIndex& index) {
  RegularizerParams p;
  p.scale = cfg.scale;
  p.lambda = cfg.lambda;
  p.mode = cfg.phi_mode;
  p.phi_dim = cfg.phi_dim != 0 ? cfg.phi_dim : index.dim();
  return p;
}

void softmax_in_place(std::span<double> scores) noexcept {
  if (scores.empty()) return;
  const double top = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp(s - top);
    sum += s;
  }
  for (double& s : scores) s /= sum;
}

std::vector<ClassId> select_candidates(std::span<const double> totals, std::size_t count) {
  count = std::min(count, totals.size());
  std::vector<ClassId> ids = all_classes(totals.size());
  auto less = [&](ClassId a, ClassId b) {
    return totals[a] < totals[b] || (totals[a] == totals[b] && a < b);
  };
  if (count < ids.size()) {
    // Introselect: average O(C).
    std::nth_element(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(count), ids.end(), less);
    ids.resize(count);
  }
  std::sort(ids.begin(), ids.end(), less);
  return ids;
}

Matrix frame_class_distances(const GalleryIndex& index, const ProbeSequence& probe,
                             Execution exec) {
  for (const auto& frame : probe) check_probe(index, frame);
  const Matrix cross =
      kernels::cross_distances(probe.frames(), index.gallery().instances(), index.kind(), exec);
  return kernels::class_minima(cross, index.gallery().all_members(), exec);
}

RecognitionResult ml_classify(const GalleryIndex& index, const ProbeSequence& probe,
                              double scale) {
  check_scale(scale);
  const Matrix table = frame_class_distances(index, probe);
  const std::vector<double> totals = column_sums(table);

  RecognitionResult out;
  out.predicted = argmin_lowest(totals);
  out.candidates = all_classes(index.num_classes());
  out.frame_scores = scaled(table, -scale);
  out.frame_posteriors = out.frame_scores;
  for (std::size_t t = 0; t < table.rows(); ++t) softmax_in_place(out.frame_posteriors.row(t));
  out.candidate_posteriors.resize(totals.size());
  for (std::size_t c = 0; c < totals.size(); ++c) out.candidate_posteriors[c] = -scale * totals[c];
  softmax_in_place(out.candidate_posteriors);
  return out;
}

RecognitionResult map_classify(const GalleryIndex& index, const ProbeSequence& probe,
                               double scale) {
  check_scale(scale);
  const Matrix table = frame_class_distances(index, probe);
  return detail::aggregate_scores(all_classes(index.num_classes()), scaled(table, -scale),
                                  Aggregation::SumRule);
}

std::size_t select_medoid_frame(const ProbeSequence& probe, DissimilarityKind kind) {
  const Matrix cross = kernels::cross_distances(probe.frames(), probe.frames(), kind,
                                                Execution::Serial);
  std::vector<double> spread(probe.size(), 0.0);
  for (std::size_t t = 0; t < probe.size(); ++t)
    for (double d : cross.row(t)) spread[t] += d;
  return argmin_lowest(spread);
}

RecognitionResult ml_clustering_classify(const GalleryIndex& index, const ProbeSequence& probe,
                                         double scale) {
  for (const auto& frame : probe) check_probe(index, frame);
  const std::size_t medoid = select_medoid_frame(probe, index.kind());
  RecognitionResult out = ml_classify(index, ProbeSequence({probe[medoid]}), scale);
  out.representative_frame = medoid;
  return out;
}

RecognitionResult proposed_classify(const GalleryIndex& index, const ProbeSequence& probe,
                                    const RecognizerConfig& cfg) {
  detail::check_config(cfg, index);
  const Matrix table = frame_class_distances(index, probe, cfg.execution);
  const std::vector<double> totals = column_sums(table);
  std::vector<ClassId> candidates = select_candidates(totals, cfg.candidates);
  Matrix scores = kernels::candidate_exponents(table, candidates, index,
                                               regularizer_params(cfg, index), cfg.execution);
  return detail::aggregate_scores(std::move(candidates), std::move(scores), cfg.aggregation);
}

RecognitionResult oracle_classify_full(const GalleryIndex& index, const ProbeSequence& probe,
                                       const RecognizerConfig& cfg) {
  detail::check_config(cfg, index);
  for (const auto& frame : probe) check_probe(index, frame);

  const Gallery& g = index.gallery();
  const DissimilarityKind kind = index.kind();
  const std::size_t num_classes = g.num_classes();
  const std::size_t num_instances = g.size();
  const std::size_t num_frames = probe.size();
  const bool exclude_self = index.options().intra_mode == IntraClassMode::ExcludeSelfPairs;
  const std::size_t phi_dim = cfg.phi_dim != 0 ? cfg.phi_dim : g.dim();

  // Inter-class mean distances straight from the double sum over instances.
  std::vector<std::vector<double>> inter(num_classes, std::vector<double>(num_classes, 0.0));
  for (ClassId c = 0; c < num_classes; ++c) {
    for (ClassId i = 0; i < num_classes; ++i) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t r = 0; r < num_instances; ++r) {
        if (g.label(r) != c) continue;
        for (std::size_t s = 0; s < num_instances; ++s) {
          if (g.label(s) != i || (exclude_self && r == s)) continue;
          sum += dissimilarity(kind, g.instance(r), g.instance(s));
          ++count;
        }
      }
      inter[c][i] = count == 0 ? 0.0 : sum / static_cast<double>(count);
    }
  }
  auto term_valid = [&](ClassId c, ClassId i) {
    if (c == i && g.class_count(c) < 2) return false;
    return inter[c][i] >= index.options().division_epsilon;
  };

  Matrix scores(num_frames, num_classes);
  for (std::size_t t = 0; t < num_frames; ++t) {
    std::vector<double> rho(num_classes, std::numeric_limits<double>::infinity());
    for (std::size_t r = 0; r < num_instances; ++r) {
      rho[g.label(r)] = std::min(rho[g.label(r)], dissimilarity(kind, probe[t], g.instance(r)));
    }
    for (ClassId c = 0; c < num_classes; ++c) {
      double omega = 0.0;
      for (ClassId i = 0; i < num_classes; ++i) {
        if (!term_valid(c, i)) continue;
        omega += cfg.phi_mode == PhiMode::Approximate
                     ? phi_approx(rho[i], inter[c][i])
                     : phi_exact(rho[i], inter[c][i], phi_dim, cfg.scale);
      }
      scores(t, c) = -cfg.scale * (rho[c] + cfg.lambda / static_cast<double>(num_classes) * omega);
    }
  }

  RecognitionResult out;
  out.candidates = all_classes(num_classes);
  out.candidate_posteriors.assign(num_classes, 0.0);
  if (cfg.aggregation == Aggregation::SumRule) {
    out.frame_posteriors = Matrix(num_frames, num_classes);
    for (std::size_t t = 0; t < num_frames; ++t) {
      double top = -std::numeric_limits<double>::infinity();
      for (ClassId c = 0; c < num_classes; ++c) top = std::max(top, scores(t, c));
      double denom = 0.0;
      for (ClassId c = 0; c < num_classes; ++c) denom += std::exp(scores(t, c) - top);
      for (ClassId c = 0; c < num_classes; ++c) {
        const double p = std::exp(scores(t, c) - top) / denom;
        out.frame_posteriors(t, c) = p;
        out.candidate_posteriors[c] += p;
      }
    }
  } else {
    std::vector<double> total(num_classes, 0.0);
    for (std::size_t t = 0; t < num_frames; ++t)
      for (ClassId c = 0; c < num_classes; ++c) total[c] += scores(t, c);
    const double top = *std::max_element(total.begin(), total.end());
    double denom = 0.0;
    for (double s : total) denom += std::exp(s - top);
    for (ClassId c = 0; c < num_classes; ++c)
      out.candidate_posteriors[c] = std::exp(total[c] - top) / denom;
  }
  out.predicted = argmax_lowest(out.candidate_posteriors);
  out.frame_scores = std::move(scores);
  return out;
}

}  // namespace mapdist
