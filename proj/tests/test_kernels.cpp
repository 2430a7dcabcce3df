#include <doctest.h>

#include "mapdist/kernels.hpp"
#include "mapdist/recognizer.hpp"
#include "support/random_instances.hpp"

using namespace mapdist;
using namespace mapdist::testing;

TEST_CASE("serial and parallel drivers agree bit for bit") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto inst = make_instance(seed);
    const Gallery& g = inst.gallery;

    const Matrix ps = kernels::cross_distances(g.instances(), g.instances(), inst.kind, Execution::Serial);
    const Matrix pp = kernels::cross_distances(g.instances(), g.instances(), inst.kind, Execution::Parallel);
    CHECK(ps == pp);

    for (auto mode : {IntraClassMode::IncludeSelfPairs, IntraClassMode::ExcludeSelfPairs}) {
      CHECK(kernels::interclass_means(ps, g.all_members(), mode, Execution::Serial) ==
            kernels::interclass_means(ps, g.all_members(), mode, Execution::Parallel));
    }

    IndexOptions serial_opt;
    serial_opt.execution = Execution::Serial;
    const auto index = build_index(g, inst.kind);
    const auto serial_index = build_index(g, inst.kind, serial_opt);
    CHECK(index.interclass_matrix() == serial_index.interclass_matrix());

    const Matrix ts = frame_class_distances(index, inst.probe, Execution::Serial);
    const Matrix tp = frame_class_distances(index, inst.probe, Execution::Parallel);
    CHECK(ts == tp);

    std::vector<ClassId> candidates(index.num_classes());
    for (ClassId c = 0; c < candidates.size(); ++c) candidates[c] = c;
    for (auto mode : {PhiMode::Approximate, PhiMode::Exact}) {
      inst.cfg.phi_mode = mode;
      const auto params = regularizer_params(inst.cfg, index);
      CHECK(kernels::candidate_exponents(ts, candidates, index, params, Execution::Serial) ==
            kernels::candidate_exponents(ts, candidates, index, params, Execution::Parallel));
    }
  }
}

TEST_CASE("class_minima picks the nearest member") {
  Matrix cross(1, 4);
  cross(0, 0) = 3.0;
  cross(0, 1) = 1.0;
  cross(0, 2) = 2.0;
  cross(0, 3) = 0.5;
  const std::vector<std::vector<std::size_t>> members{{0, 1}, {2, 3}};
  const Matrix out = kernels::class_minima(cross, members, Execution::Parallel);
  CHECK(out(0, 0) == 1.0);
  CHECK(out(0, 1) == 0.5);
}

TEST_CASE("candidate_exponent without regularization is -n rho_c") {
  const auto inst = make_instance(4);
  const auto index = build_index(inst.gallery, inst.kind);
  const Matrix table = frame_class_distances(index, inst.probe);
  RegularizerParams params;
  params.scale = 3.5;
  params.lambda = 0.0;
  for (ClassId c = 0; c < index.num_classes(); ++c)
    CHECK(kernels::candidate_exponent(table.row(0), c, index, params) == -3.5 * table(0, c));
}

TEST_CASE("parallel driver reports its worker count") {
  CHECK(kernels::parallel_threads() >= 1);
  if (!kernels::parallel_available()) CHECK(kernels::parallel_threads() == 1);
}
