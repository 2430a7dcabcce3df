#pragma once

// Data-parallel kernels behind the index and the recognizers.
//
// Every kernel has a serial reference driver and an OpenMP driver. Both call
// the same per-cell routine and write each output cell exactly once, so the
// two drivers agree bit for bit; tests rely on that.

#include <cstddef>
#include <span>
#include <vector>

#include "mapdist/distance.hpp"
#include "mapdist/execution.hpp"
#include "mapdist/feature.hpp"
#include "mapdist/gallery.hpp"
#include "mapdist/regularizer.hpp"

namespace mapdist::kernels {

/// out(a, b) = rho(lhs[a], rhs[b]).
Matrix cross_distances(std::span<const FeatureVector> lhs, std::span<const FeatureVector> rhs,
                       DissimilarityKind kind, Execution exec);

/// out(t, c) = min over r in members[c] of cross(t, r).
Matrix class_minima(const Matrix& cross, std::span<const std::vector<std::size_t>> members,
                    Execution exec);

/// C x C mean of pairwise(r, r') over r in class c, r' in class i. Each mean
/// sums its terms in sorted order, so the result does not depend on the
/// order of instances inside a class.
Matrix interclass_means(const Matrix& pairwise,
                        std::span<const std::vector<std::size_t>> members,
                        IntraClassMode mode, Execution exec);

/// -n (rho_c + (lambda / C) sum_i phi(rho_i, rho_ci)) for one frame row of
/// class distances and one candidate c.
double candidate_exponent(std::span<const double> class_row, ClassId candidate,
                          const GalleryIndex& index, const RegularizerParams& params) noexcept;

/// T x M matrix of candidate_exponent over frames and candidates.
Matrix candidate_exponents(const Matrix& class_dist, std::span<const ClassId> candidates,
                           const GalleryIndex& index, const RegularizerParams& params,
                           Execution exec);

/// True when the build has OpenMP; otherwise the parallel driver runs serially.
bool parallel_available() noexcept;

/// Worker count the parallel driver would use.
int parallel_threads() noexcept;

}  // namespace mapdist::kernels
