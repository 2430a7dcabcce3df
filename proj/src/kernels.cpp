#include "mapdist/kernels.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

#ifdef MAPDIST_HAVE_OPENMP
#include <omp.h>
#endif

namespace mapdist::kernels {
namespace {

using Index = std::int64_t;

// Runs cell(i, j) over an rows x cols grid. Each cell is independent.
template <typename Cell>
void for_each_cell(std::size_t rows, std::size_t cols, Execution exec, Cell&& cell) {
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) cell(i, j);
    return;
  }
  const Index n_rows = static_cast<Index>(rows);
  const Index n_cols = static_cast<Index>(cols);
#ifdef MAPDIST_HAVE_OPENMP
#pragma omp parallel for collapse(2) schedule(static)
#endif
  for (Index i = 0; i < n_rows; ++i)
    for (Index j = 0; j < n_cols; ++j) cell(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
}

double class_min(std::span<const double> row, std::span<const std::size_t> members) noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r : members) best = std::min(best, row[r]);
  return best;
}

double interclass_mean(const Matrix& pairwise, std::span<const std::size_t> a,
                       std::span<const std::size_t> b, bool skip_self,
                       std::vector<double>& scratch) {
  scratch.clear();
  for (std::size_t r : a) {
    for (std::size_t s : b) {
      if (skip_self && r == s) continue;
      scratch.push_back(pairwise(r, s));
    }
  }
  if (scratch.empty()) return 0.0;
  std::sort(scratch.begin(), scratch.end());
  const double sum = std::accumulate(scratch.begin(), scratch.end(), 0.0);
  return sum / static_cast<double>(scratch.size());
}

}  // namespace

Matrix cross_distances(std::span<const FeatureVector> lhs, std::span<const FeatureVector> rhs,
                       DissimilarityKind kind, Execution exec) {
  Matrix out(lhs.size(), rhs.size());
  for_each_cell(lhs.size(), rhs.size(), exec, [&](std::size_t a, std::size_t b) {
    out(a, b) = dissimilarity_unchecked(kind, lhs[a].values(), rhs[b].values());
  });
  return out;
}

Matrix class_minima(const Matrix& cross, std::span<const std::vector<std::size_t>> members,
                    Execution exec) {
  Matrix out(cross.rows(), members.size());
  for_each_cell(cross.rows(), members.size(), exec, [&](std::size_t t, std::size_t c) {
    out(t, c) = class_min(cross.row(t), members[c]);
  });
  return out;
}

Matrix interclass_means(const Matrix& pairwise,
                        std::span<const std::vector<std::size_t>> members,
                        IntraClassMode mode, Execution exec) {
  const std::size_t num_classes = members.size();
  Matrix out(num_classes, num_classes);
  const bool exclude = mode == IntraClassMode::ExcludeSelfPairs;
  if (exec == Execution::Serial) {
    std::vector<double> scratch;
    for (std::size_t c = 0; c < num_classes; ++c)
      for (std::size_t i = 0; i < num_classes; ++i)
        out(c, i) = interclass_mean(pairwise, members[c], members[i], exclude && c == i, scratch);
    return out;
  }
  const Index n = static_cast<Index>(num_classes);
#ifdef MAPDIST_HAVE_OPENMP
#pragma omp parallel
#endif
  {
    std::vector<double> scratch;
#ifdef MAPDIST_HAVE_OPENMP
#pragma omp for collapse(2) schedule(dynamic, 16)
#endif
    for (Index c = 0; c < n; ++c)
      for (Index i = 0; i < n; ++i)
        out(c, i) = interclass_mean(pairwise, members[c], members[i], exclude && c == i, scratch);
  }
  return out;
}

double candidate_exponent(std::span<const double> class_row, ClassId candidate,
                          const GalleryIndex& index, const RegularizerParams& params) noexcept {
  const std::size_t num_classes = class_row.size();
  double omega = 0.0;
  if (params.lambda != 0.0) {
    const auto rho = index.interclass_matrix().row(candidate);
    const auto weight = index.regularizer_weights().row(candidate);
    if (params.mode == PhiMode::Approximate) {
      for (std::size_t i = 0; i < num_classes; ++i) {
        const double diff = class_row[i] - rho[i];
        omega += weight[i] * diff * diff;
      }
    } else {
      for (std::size_t i = 0; i < num_classes; ++i) {
        if (weight[i] != 0.0) omega += phi_exact(class_row[i], rho[i], params.phi_dim, params.scale);
      }
    }
  }
  return -params.scale *
         (class_row[candidate] + params.lambda / static_cast<double>(num_classes) * omega);
}

Matrix candidate_exponents(const Matrix& class_dist, std::span<const ClassId> candidates,
                           const GalleryIndex& index, const RegularizerParams& params,
                           Execution exec) {
  Matrix out(class_dist.rows(), candidates.size());
  for_each_cell(class_dist.rows(), candidates.size(), exec, [&](std::size_t t, std::size_t m) {
    out(t, m) = candidate_exponent(class_dist.row(t), candidates[m], index, params);
  });
  return out;
}

bool parallel_available() noexcept {
#ifdef MAPDIST_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

int parallel_threads() noexcept {
#ifdef MAPDIST_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace mapdist::kernels
