#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mapdist/distance.hpp"
#include "mapdist/execution.hpp"
#include "mapdist/feature.hpp"

namespace mapdist {

/// Zero-based class index. Ties anywhere in the library go to the lowest id.
using ClassId = std::size_t;

/// Labeled reference set of R instances over C classes.
class Gallery {
 public:
  /// `labels[r]` is the class of `instances[r]`; every id in [0, C) must
  /// occur. `class_names` defaults to the decimal ids.
  Gallery(std::vector<FeatureVector> instances, std::vector<ClassId> labels,
          std::vector<std::string> class_names = {});

  /// Builds a gallery from named rows; class ids follow first appearance.
  static Gallery from_named(std::vector<std::pair<std::string, FeatureVector>> rows);

  std::size_t size() const noexcept { return instances_.size(); }
  std::size_t num_classes() const noexcept { return members_.size(); }
  std::size_t dim() const noexcept { return instances_.front().dim(); }

  std::span<const FeatureVector> instances() const noexcept { return instances_; }
  const FeatureVector& instance(std::size_t r) const { return instances_[r]; }
  ClassId label(std::size_t r) const { return labels_[r]; }
  std::span<const ClassId> labels() const noexcept { return labels_; }

  /// Instance indices of class c, in gallery order.
  std::span<const std::size_t> members(ClassId c) const { return members_.at(c); }
  std::span<const std::vector<std::size_t>> all_members() const noexcept { return members_; }
  std::size_t class_count(ClassId c) const { return members_.at(c).size(); }

  const std::string& class_name(ClassId c) const { return class_names_.at(c); }
  std::span<const std::string> class_names() const noexcept { return class_names_; }
  std::optional<ClassId> find_class(std::string_view name) const;

 private:
  std::vector<FeatureVector> instances_;
  std::vector<ClassId> labels_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<std::string> class_names_;
};

/// How the diagonal of the inter-class matrix treats the r == r' pairs.
enum class IntraClassMode {
  /// Literal mean over all R_c^2 ordered pairs, self-pairs included.
  IncludeSelfPairs,
  /// Mean over the R_c (R_c - 1) distinct ordered pairs.
  ExcludeSelfPairs,
};

struct IndexOptions {
  IntraClassMode intra_mode = IntraClassMode::IncludeSelfPairs;
  /// Inter-class entries below this are dropped from the regularizer.
  double division_epsilon = 1e-12;
  Execution execution = Execution::Parallel;
};

/// Immutable gallery plus its C x C mean inter-class distance matrix.
class GalleryIndex {
 public:
  GalleryIndex(Gallery gallery, DissimilarityKind kind, IndexOptions options = {});

  const Gallery& gallery() const noexcept { return gallery_; }
  DissimilarityKind kind() const noexcept { return kind_; }
  const IndexOptions& options() const noexcept { return options_; }
  std::size_t num_classes() const noexcept { return gallery_.num_classes(); }
  std::size_t dim() const noexcept { return gallery_.dim(); }

  /// Mean distance from instances of c to instances of i.
  double interclass(ClassId c, ClassId i) const { return interclass_(c, i); }
  const Matrix& interclass_matrix() const noexcept { return interclass_; }

  /// False when class c has a single instance, so its diagonal is only the
  /// zero self-pair.
  bool intra_valid(ClassId c) const { return intra_valid_.at(c) != 0; }

  /// Whether the regularizer keeps term i for candidate c.
  bool regularizer_term_valid(ClassId c, ClassId i) const;

  /// 1 / interclass(c, i) for valid terms and 0 for skipped ones.
  const Matrix& regularizer_weights() const noexcept { return weights_; }

 private:
  Gallery gallery_;
  DissimilarityKind kind_;
  IndexOptions options_;
  Matrix interclass_;
  Matrix weights_;
  std::vector<unsigned char> intra_valid_;
};

GalleryIndex build_index(Gallery gallery, DissimilarityKind kind, IndexOptions options = {});

/// Single-linkage distance: min over instances r of class c of rho(probe, x_r).
double class_distance(const GalleryIndex& index, const FeatureVector& probe, ClassId c);

/// class_distance for every class in one pass over the instances.
std::vector<double> all_class_distances(const GalleryIndex& index, const FeatureVector& probe);

/// Throws DimensionMismatch or DomainMismatch if `probe` cannot be matched
/// against `index`.
void check_probe(const GalleryIndex& index, const FeatureVector& probe);

}  // namespace mapdist
