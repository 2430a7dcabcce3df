#pragma once

// Naive reference implementations used as test oracles. They work from the
// raw gallery with long double accumulation and share no code path with the
// library's kernels beyond the checked dissimilarity().

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "mapdist/distance.hpp"
#include "mapdist/gallery.hpp"
#include "mapdist/recognizer.hpp"

namespace mapdist::testing {

inline std::vector<std::vector<double>> reference_interclass(const Gallery& g,
                                                             DissimilarityKind kind,
                                                             bool exclude_self = false) {
  const std::size_t C = g.num_classes();
  std::vector<std::vector<double>> out(C, std::vector<double>(C, 0.0));
  for (ClassId c = 0; c < C; ++c) {
    for (ClassId i = 0; i < C; ++i) {
      long double sum = 0.0L;
      std::size_t count = 0;
      for (std::size_t r = 0; r < g.size(); ++r) {
        for (std::size_t s = 0; s < g.size(); ++s) {
          if (g.label(r) != c || g.label(s) != i) continue;
          if (exclude_self && r == s) continue;
          sum += dissimilarity(kind, g.instance(r), g.instance(s));
          ++count;
        }
      }
      out[c][i] = count ? static_cast<double>(sum / static_cast<long double>(count)) : 0.0;
    }
  }
  return out;
}

inline std::vector<double> reference_class_distances(const Gallery& g, DissimilarityKind kind,
                                                     const FeatureVector& x) {
  std::vector<double> out(g.num_classes(), std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < g.size(); ++r) {
    out[g.label(r)] = std::min(out[g.label(r)], dissimilarity(kind, x, g.instance(r)));
  }
  return out;
}

/// Brute-force accumulated-distance rule.
inline ClassId reference_ml(const Gallery& g, DissimilarityKind kind, const ProbeSequence& probe) {
  std::vector<long double> totals(g.num_classes(), 0.0L);
  for (const auto& frame : probe) {
    const auto rho = reference_class_distances(g, kind, frame);
    for (ClassId c = 0; c < g.num_classes(); ++c) totals[c] += rho[c];
  }
  return static_cast<ClassId>(std::min_element(totals.begin(), totals.end()) - totals.begin());
}

/// Regularized posterior criterion over all C classes (sum or product rule),
/// long double and the textbook softmax. Returns L[c] over 0..C-1.
inline std::vector<double> reference_regularized(const Gallery& g, DissimilarityKind kind,
                                                 const ProbeSequence& probe,
                                                 const RecognizerConfig& cfg,
                                                 bool exclude_self = false,
                                                 double division_epsilon = 1e-12) {
  const std::size_t C = g.num_classes();
  const auto inter = reference_interclass(g, kind, exclude_self);
  const long double n = cfg.scale;
  const long double dim = static_cast<long double>(cfg.phi_dim ? cfg.phi_dim : g.dim());
  std::vector<long double> agg(C, 0.0L);
  for (const auto& frame : probe) {
    const auto rho = reference_class_distances(g, kind, frame);
    std::vector<long double> e(C);
    for (ClassId c = 0; c < C; ++c) {
      long double omega = 0.0L;
      for (ClassId i = 0; i < C; ++i) {
        const long double ref = inter[c][i];
        if ((c == i && g.class_count(c) < 2) || ref < division_epsilon) continue;
        if (cfg.phi_mode == PhiMode::Approximate) {
          omega += (rho[i] - ref) * (rho[i] - ref) / ref;
        } else {
          const long double shift = (dim - 1.0L) / n;
          omega += std::log(4.0L * ref + (std::numbers::pi_v<long double> + dim - 1.0L) / n) / (2.0L * n) +
                   (rho[i] - ref - shift) * (rho[i] - ref - shift) / (4.0L * ref + shift);
        }
      }
      e[c] = -n * (rho[c] + static_cast<long double>(cfg.lambda) / C * omega);
    }
    if (cfg.aggregation == Aggregation::SumRule) {
      const long double top = *std::max_element(e.begin(), e.end());
      long double z = 0.0L;
      for (long double v : e) z += std::exp(v - top);
      for (ClassId c = 0; c < C; ++c) agg[c] += std::exp(e[c] - top) / z;
    } else {
      for (ClassId c = 0; c < C; ++c) agg[c] += e[c];
    }
  }
  if (cfg.aggregation == Aggregation::ProductRule) {
    const long double top = *std::max_element(agg.begin(), agg.end());
    long double z = 0.0L;
    for (long double v : agg) z += std::exp(v - top);
    for (auto& v : agg) v = std::exp(v - top) / z;
  }
  return std::vector<double>(agg.begin(), agg.end());
}

}  // namespace mapdist::testing
