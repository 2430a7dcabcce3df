// Serial vs OpenMP timings of the hot kernels, plus the per-probe cost of the
// pruned criterion as a function of the candidate count.
//
// usage: bench_kernels [classes] [dim] [reps]

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string_view>
#include <vector>

#include "mapdist/kernels.hpp"
#include "mapdist/recognizer.hpp"
#include "mapdist/synthetic.hpp"

using namespace mapdist;
using Clock = std::chrono::steady_clock;

namespace {

std::size_t arg_or(int argc, char** argv, int i, std::size_t fallback) {
  if (argc <= i) return fallback;
  std::size_t v = 0;
  const std::string_view s(argv[i]);
  if (std::from_chars(s.data(), s.data() + s.size(), v).ec != std::errc() || v == 0) {
    std::fprintf(stderr, "bad argument `%s`\n", argv[i]);
    std::exit(2);
  }
  return v;
}

double median_ms(std::size_t reps, const std::function<void()>& body) {
  std::vector<double> t;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto start = Clock::now();
    body();
    t.push_back(std::chrono::duration<double, std::milli>(Clock::now() - start).count());
  }
  std::nth_element(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(reps / 2), t.end());
  return t[reps / 2];
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-28s %12.3f %12.3f %9.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  SyntheticSpec spec;
  spec.classes = arg_or(argc, argv, 1, 1000);
  spec.dim = arg_or(argc, argv, 2, 128);
  const std::size_t reps = arg_or(argc, argv, 3, 5);
  spec.stills_min = spec.stills_max = 2;
  spec.frames_min = spec.frames_max = 20;
  const auto problem = generate_problem(spec);
  const Gallery& g = problem.gallery;
  const ProbeSequence& probe = problem.probes.front().sequence;
  const auto kind = DissimilarityKind::SquaredEuclidean;

  std::printf("C=%zu R=%zu D=%zu T=%zu, reps=%zu, openmp=%s threads=%d\n\n", g.num_classes(), g.size(),
              g.dim(), probe.size(), reps, kernels::parallel_available() ? "yes" : "no",
              kernels::parallel_threads());
  std::printf("%-28s %12s %12s %10s\n", "kernel (median ms)", "serial", "parallel", "speedup");

  Matrix pairwise;
  auto cross = [&](Execution e) {
    return median_ms(reps, [&] { pairwise = kernels::cross_distances(g.instances(), g.instances(), kind, e); });
  };
  row("gallery pairwise distances", cross(Execution::Serial), cross(Execution::Parallel));

  auto means = [&](Execution e) {
    return median_ms(reps, [&] {
      kernels::interclass_means(pairwise, g.all_members(), IntraClassMode::IncludeSelfPairs, e);
    });
  };
  row("inter-class means", means(Execution::Serial), means(Execution::Parallel));

  const auto index = build_index(g, kind);
  auto table = [&](Execution e) {
    return median_ms(reps, [&] { frame_class_distances(index, probe, e); });
  };
  row("frame-class distances", table(Execution::Serial), table(Execution::Parallel));

  RecognizerConfig cfg;
  auto classify = [&](Execution e, std::size_t m) {
    cfg.execution = e;
    cfg.candidates = m;
    return median_ms(reps, [&] { proposed_classify(index, probe, cfg); });
  };
  row("proposed, M=64", classify(Execution::Serial, 64), classify(Execution::Parallel, 64));
  row("proposed, M=C", classify(Execution::Serial, g.num_classes()),
      classify(Execution::Parallel, g.num_classes()));

  std::printf("\n%-10s %12s %12s\n", "M", "serial ms", "parallel ms");
  for (std::size_t m = 1; m <= g.num_classes(); m *= 4) {
    std::printf("%-10zu %12.3f %12.3f\n", m, classify(Execution::Serial, m), classify(Execution::Parallel, m));
  }
  std::printf("%-10zu %12.3f %12.3f\n", g.num_classes(), classify(Execution::Serial, g.num_classes()),
              classify(Execution::Parallel, g.num_classes()));
  return 0;
}
