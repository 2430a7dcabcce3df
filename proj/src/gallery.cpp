#include "mapdist/gallery.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_map>

#include "mapdist/error.hpp"
#include "mapdist/kernels.hpp"

namespace mapdist {

Gallery::Gallery(std::vector<FeatureVector> instances, std::vector<ClassId> labels,
                 std::vector<std::string> class_names)
    : instances_(std::move(instances)), labels_(std::move(labels)) {
  if (instances_.empty()) throw Error(ErrorCode::EmptyGallery, "gallery has no instances");
  if (instances_.size() != labels_.size()) {
    throw Error(ErrorCode::InvalidConfig, "gallery has " + std::to_string(instances_.size()) +
                                              " instances but " + std::to_string(labels_.size()) +
                                              " labels");
  }
  const std::size_t d = instances_.front().dim();
  for (std::size_t r = 0; r < instances_.size(); ++r) {
    if (instances_[r].dim() != d) {
      throw Error(ErrorCode::DimensionMismatch, "instance " + std::to_string(r) + " has dim " +
                                                    std::to_string(instances_[r].dim()) +
                                                    ", expected " + std::to_string(d));
    }
  }

  const ClassId num_classes = *std::max_element(labels_.begin(), labels_.end()) + 1;
  members_.resize(num_classes);
  for (std::size_t r = 0; r < labels_.size(); ++r) members_[labels_[r]].push_back(r);
  for (ClassId c = 0; c < num_classes; ++c) {
    if (members_[c].empty()) {
      throw Error(ErrorCode::UnknownClass,
                  "class id " + std::to_string(c) + " has no instances; ids must be contiguous");
    }
  }

  if (class_names.empty()) {
    class_names_.reserve(num_classes);
    for (ClassId c = 0; c < num_classes; ++c) class_names_.push_back(std::to_string(c));
  } else {
    if (class_names.size() != num_classes) {
      throw Error(ErrorCode::InvalidConfig, "expected " + std::to_string(num_classes) +
                                                " class names, got " +
                                                std::to_string(class_names.size()));
    }
    class_names_ = std::move(class_names);
    std::vector<std::string> sorted = class_names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::InvalidConfig, "duplicate class names");
    }
  }
}

Gallery Gallery::from_named(std::vector<std::pair<std::string, FeatureVector>> rows) {
  std::vector<FeatureVector> instances;
  std::vector<ClassId> labels;
  std::vector<std::string> names;
  std::unordered_map<std::string, ClassId> ids;
  instances.reserve(rows.size());
  labels.reserve(rows.size());
  for (auto& [name, vec] : rows) {
    auto [it, inserted] = ids.try_emplace(name, names.size());
    if (inserted) names.push_back(name);
    labels.push_back(it->second);
    instances.push_back(std::move(vec));
  }
  return Gallery(std::move(instances), std::move(labels), std::move(names));
}

std::optional<ClassId> Gallery::find_class(std::string_view name) const {
  auto it = std::find(class_names_.begin(), class_names_.end(), name);
  if (it == class_names_.end()) return std::nullopt;
  return static_cast<ClassId>(it - class_names_.begin());
}

GalleryIndex::GalleryIndex(Gallery gallery, DissimilarityKind kind, IndexOptions options)
    : gallery_(std::move(gallery)), kind_(kind), options_(options) {
  if (is_probabilistic(kind_)) {
    for (std::size_t r = 0; r < gallery_.size(); ++r) {
      if (!gallery_.instance(r).on_simplex()) {
        throw Error(ErrorCode::DomainMismatch, std::string(to_string(kind_)) +
                                                   " requires simplex instances; instance " +
                                                   std::to_string(r) + " is not normalized");
      }
    }
  }

  const Matrix pairwise = kernels::cross_distances(gallery_.instances(), gallery_.instances(),
                                                   kind_, options_.execution);
  interclass_ = kernels::interclass_means(pairwise, gallery_.all_members(), options_.intra_mode,
                                          options_.execution);

  const std::size_t num_classes = gallery_.num_classes();
  intra_valid_.resize(num_classes);
  for (ClassId c = 0; c < num_classes; ++c) intra_valid_[c] = gallery_.class_count(c) >= 2;

  weights_ = Matrix(num_classes, num_classes);
  for (ClassId c = 0; c < num_classes; ++c) {
    for (ClassId i = 0; i < num_classes; ++i) {
      if (regularizer_term_valid(c, i)) weights_(c, i) = 1.0 / interclass_(c, i);
    }
  }
}

bool GalleryIndex::regularizer_term_valid(ClassId c, ClassId i) const {
  if (c == i && !intra_valid(c)) return false;
  return interclass_(c, i) >= options_.division_epsilon;
}

GalleryIndex build_index(Gallery gallery, DissimilarityKind kind, IndexOptions options) {
  return GalleryIndex(std::move(gallery), kind, options);
}

void check_probe(const GalleryIndex& index, const FeatureVector& probe) {
  if (probe.dim() != index.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "probe dim " + std::to_string(probe.dim()) +
                                                  " does not match gallery dim " +
                                                  std::to_string(index.dim()));
  }
  if (is_probabilistic(index.kind()) && !probe.on_simplex()) {
    throw Error(ErrorCode::DomainMismatch, std::string(to_string(index.kind())) +
                                               " requires a probability-simplex probe");
  }
}

double class_distance(const GalleryIndex& index, const FeatureVector& probe, ClassId c) {
  if (c >= index.num_classes()) {
    throw Error(ErrorCode::UnknownClass, "class id " + std::to_string(c) + " out of range");
  }
  check_probe(index, probe);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r : index.gallery().members(c)) {
    best = std::min(best, dissimilarity_unchecked(index.kind(), probe.values(),
                                                  index.gallery().instance(r).values()));
  }
  return best;
}

std::vector<double> all_class_distances(const GalleryIndex& index, const FeatureVector& probe) {
  check_probe(index, probe);
  const Gallery& g = index.gallery();
  std::vector<double> out(g.num_classes(), std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < g.size(); ++r) {
    const double d = dissimilarity_unchecked(index.kind(), probe.values(), g.instance(r).values());
    double& slot = out[g.label(r)];
    slot = std::min(slot, d);
  }
  return out;
}

}  // namespace mapdist
