#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mapdist/distance.hpp"
#include "mapdist/recognizer.hpp"
#include "mapdist/synthetic.hpp"

namespace mapdist {

enum class Method { ML, MLCluster, MAP, Proposed, Oracle };

/// CLI names: ml, ml-cluster, map, proposed, oracle.
std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view name) noexcept;

enum class SweepParam { Lambda, Candidates, Noise, Scale };

std::string_view to_string(SweepParam p) noexcept;

/// Inclusive grid START:END:STEP.
struct SweepSpec {
  SweepParam param = SweepParam::Lambda;
  double start = 0.0;
  double end = 0.0;
  double step = 1.0;

  std::vector<double> points() const;
};

/// Parses `lambda=0:16:1`; params are lambda, m, noise, n.
SweepSpec parse_sweep(std::string_view text);

/// Normalization applied to loaded or noisy vectors. Auto picks
/// L1Probability for probabilistic kinds and None otherwise.
enum class NormalizationChoice { Auto, None, L2, L1 };

struct RunOptions {
  std::optional<std::filesystem::path> gallery_path;
  std::optional<std::filesystem::path> probes_path;
  bool synthetic = false;
  SyntheticSpec spec;
  std::vector<Method> methods{Method::ML, Method::MLCluster, Method::MAP, Method::Proposed};
  DissimilarityKind kind = DissimilarityKind::SquaredEuclidean;
  NormalizationChoice normalization = NormalizationChoice::Auto;
  RecognizerConfig recognizer;
  std::optional<SweepSpec> sweep;
  double noise = 0.0;
  std::uint64_t seed = 1;
  IntraClassMode intra_mode = IntraClassMode::IncludeSelfPairs;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::filesystem::path> save_dataset_dir;
};

/// Throws InvalidConfig when neither or both of a dataset and --synthetic
/// are given, or the method list is empty.
void validate(const RunOptions& options);

struct TimingStats {
  double mean_us = 0.0;
  double p50_us = 0.0;
  double p90_us = 0.0;
  double max_us = 0.0;
};

/// One (sweep point, method) row.
struct MethodResult {
  Method method = Method::ML;
  /// Sweep coordinate; absent outside sweeps.
  std::optional<double> x;
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy = 0.0;  // correct / total, 0 when total == 0
  /// Predicted class name per probe, in probe order.
  std::vector<std::string> predictions;
  TimingStats timing;
};

struct RunReport {
  /// Self-describing config echo; feeding it back reproduces the run.
  std::string config_json;
  std::uint64_t seed = 0;
  std::size_t gallery_size = 0;
  std::size_t num_classes = 0;
  std::size_t num_probes = 0;
  double index_build_us = 0.0;
  std::vector<MethodResult> rows;
};

RunReport run_benchmark(const RunOptions& options);

/// Config echo as JSON text (stable key order).
std::string config_to_json(const RunOptions& options);

/// results.csv: x,method,accuracy,correct,total,mean_us,p50_us,p90_us.
void write_results_csv(std::ostream& out, const RunReport& report);

/// report.json: config echo, accuracies, predictions and timing.
void write_report_json(std::ostream& out, const RunReport& report);

/// Writes results.csv and report.json under `dir`, creating it.
void write_report(const std::filesystem::path& dir, const RunReport& report);

/// Fixed-width human-readable summary.
std::string format_table(const RunReport& report);

/// Entry point of the `mapdist` executable; returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace mapdist
