#include "mapdist/benchmark_runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mapdist/dataset_io.hpp"
#include "mapdist/error.hpp"

namespace mapdist {
namespace {

using ordered_json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;

double micros_since(Clock::time_point start) {
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

std::string format_double(double x) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  return {buf, static_cast<std::size_t>(len)};
}

TimingStats summarize(std::vector<double> samples) {
  TimingStats s;
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  double sum = 0.0;
  for (double x : samples) sum += x;
  auto pct = [&](double q) {
    const auto i = static_cast<std::size_t>(std::ceil(q * static_cast<double>(samples.size()))) - 1;
    return samples[std::min(i, samples.size() - 1)];
  };
  s.mean_us = sum / static_cast<double>(samples.size());
  s.p50_us = pct(0.5);
  s.p90_us = pct(0.9);
  s.max_us = samples.back();
  return s;
}

std::string_view to_string(Aggregation a) { return a == Aggregation::SumRule ? "sum" : "product"; }
std::string_view to_string(PhiMode p) { return p == PhiMode::Approximate ? "approx" : "exact"; }
std::string_view to_string(NormalizationChoice n) {
  switch (n) {
    case NormalizationChoice::Auto: return "auto";
    case NormalizationChoice::None: return "none";
    case NormalizationChoice::L2: return "l2";
    case NormalizationChoice::L1: return "l1";
  }
  return "auto";
}
std::string_view to_string(GeneratorFamily f) {
  return f == GeneratorFamily::DirichletSimplex ? "dirichlet" : "gaussian";
}
std::string_view to_string(IntraClassMode m) {
  return m == IntraClassMode::IncludeSelfPairs ? "include-self" : "exclude-self";
}

FeatureVector apply_normalization(const FeatureVector& v, NormalizationChoice choice,
                                  DissimilarityKind kind) {
  switch (choice) {
    case NormalizationChoice::None: return v;
    case NormalizationChoice::L2: return l2_normalize(v);
    case NormalizationChoice::L1: return l1_normalize_to_prob(v).features();
    case NormalizationChoice::Auto:
      if (is_probabilistic(kind) && !v.on_simplex()) return l1_normalize_to_prob(v).features();
      return v;
  }
  return v;
}

Normalization noise_scheme(const RunOptions& o) {
  switch (o.normalization) {
    case NormalizationChoice::L2: return Normalization::L2;
    case NormalizationChoice::L1: return Normalization::L1Probability;
    case NormalizationChoice::None: return Normalization::None;
    case NormalizationChoice::Auto:
      if (is_probabilistic(o.kind)) return Normalization::L1Probability;
      return o.synthetic ? family_normalization(o.spec.family) : Normalization::None;
  }
  return Normalization::None;
}

RecognitionResult classify(Method method, const GalleryIndex& index, const ProbeSequence& probe,
                           const RecognizerConfig& cfg) {
  switch (method) {
    case Method::ML: return ml_classify(index, probe, cfg.scale);
    case Method::MLCluster: return ml_clustering_classify(index, probe, cfg.scale);
    case Method::MAP: return map_classify(index, probe, cfg.scale);
    case Method::Proposed: return proposed_classify(index, probe, cfg);
    case Method::Oracle: return oracle_classify_full(index, probe, cfg);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method");
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::ML: return "ml";
    case Method::MLCluster: return "ml-cluster";
    case Method::MAP: return "map";
    case Method::Proposed: return "proposed";
    case Method::Oracle: return "oracle";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  for (auto m : {Method::ML, Method::MLCluster, Method::MAP, Method::Proposed, Method::Oracle})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

std::string_view to_string(SweepParam p) noexcept {
  switch (p) {
    case SweepParam::Lambda: return "lambda";
    case SweepParam::Candidates: return "m";
    case SweepParam::Noise: return "noise";
    case SweepParam::Scale: return "n";
  }
  return "unknown";
}

std::vector<double> SweepSpec::points() const {
  std::vector<double> out;
  const double span = end - start;
  const auto steps = static_cast<std::size_t>(std::floor(span / step + 1e-9));
  out.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    // Snap to 12 significant digits so 0:0.4:0.1 yields 0.3, not 0.30000000000000004.
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", start + static_cast<double>(k) * step);
    out.push_back(std::strtod(buf, nullptr));
  }
  return out;
}

SweepSpec parse_sweep(std::string_view text) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::InvalidConfig, "bad --sweep `" + std::string(text) + "`: " + why);
  };
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) fail("expected PARAM=START:END:STEP");
  SweepSpec s;
  const std::string_view name = text.substr(0, eq);
  bool found = false;
  for (auto p : {SweepParam::Lambda, SweepParam::Candidates, SweepParam::Noise, SweepParam::Scale}) {
    if (to_string(p) == name) {
      s.param = p;
      found = true;
    }
  }
  if (!found) fail("unknown parameter (lambda, m, noise, n)");
  std::string rest(text.substr(eq + 1));
  std::replace(rest.begin(), rest.end(), ':', ' ');
  std::istringstream in(rest);
  std::string extra;
  if (!(in >> s.start >> s.end >> s.step) || (in >> extra)) fail("expected START:END:STEP");
  if (!(s.step > 0.0) || !std::isfinite(s.start) || !std::isfinite(s.end) || s.end < s.start) {
    fail("need finite START <= END and STEP > 0");
  }
  if (s.param == SweepParam::Candidates && s.start < 1.0) fail("m must start at 1 or more");
  if (s.param == SweepParam::Scale && !(s.start > 0.0)) fail("n must be positive");
  return s;
}

void validate(const RunOptions& o) {
  const bool dataset = o.gallery_path.has_value() || o.probes_path.has_value();
  if (dataset == o.synthetic) {
    throw Error(ErrorCode::InvalidConfig, "give either --gallery and --probes, or --synthetic");
  }
  if (dataset && !(o.gallery_path && o.probes_path)) {
    throw Error(ErrorCode::InvalidConfig, "--gallery and --probes must be given together");
  }
  if (o.methods.empty()) throw Error(ErrorCode::InvalidConfig, "no methods selected");
  if (!(o.noise >= 0.0) || !std::isfinite(o.noise)) {
    throw Error(ErrorCode::InvalidConfig, "noise must be nonnegative");
  }
  mapdist::validate(o.recognizer);
  if (o.synthetic) mapdist::validate(o.spec);
}

std::string config_to_json(const RunOptions& o) {
  ordered_json j;
  j["source"] = o.synthetic ? "synthetic" : "dataset";
  if (o.synthetic) {
    const auto& s = o.spec;
    j["spec"] = {{"classes", s.classes},
                 {"stills_min", s.stills_min},
                 {"stills_max", s.stills_max},
                 {"frames_min", s.frames_min},
                 {"frames_max", s.frames_max},
                 {"probes_per_class", s.probes_per_class},
                 {"dim", s.dim},
                 {"still_spread", s.still_spread},
                 {"video_shift", s.video_shift},
                 {"frame_spread", s.frame_spread},
                 {"family", to_string(s.family)}};
  } else {
    j["gallery"] = o.gallery_path->string();
    j["probes"] = o.probes_path->string();
  }
  std::vector<std::string> methods;
  for (auto m : o.methods) methods.emplace_back(to_string(m));
  j["methods"] = methods;
  j["distance"] = to_string(o.kind);
  j["normalize"] = to_string(o.normalization);
  j["lambda"] = o.recognizer.lambda;
  j["m"] = o.recognizer.candidates;
  j["n"] = o.recognizer.scale;
  j["aggregation"] = to_string(o.recognizer.aggregation);
  j["phi"] = to_string(o.recognizer.phi_mode);
  j["intra"] = to_string(o.intra_mode);
  if (o.sweep) {
    j["sweep"] = std::string(to_string(o.sweep->param)) + "=" + format_double(o.sweep->start) +
                 ":" + format_double(o.sweep->end) + ":" + format_double(o.sweep->step);
  } else {
    j["sweep"] = nullptr;
  }
  j["noise"] = o.noise;
  j["seed"] = o.seed;
  return j.dump(2);
}

RunReport run_benchmark(const RunOptions& options) {
  validate(options);
  RunOptions o = options;
  o.spec.seed = o.seed;

  std::optional<Gallery> raw_gallery;
  std::vector<ProbeRecord> raw_probes;
  if (o.synthetic) {
    SyntheticProblem problem = generate_problem(o.spec);
    raw_gallery.emplace(std::move(problem.gallery));
    raw_probes = std::move(problem.probes);
  } else {
    raw_gallery.emplace(load_gallery(*o.gallery_path));
    raw_probes = load_probes(*o.probes_path);
  }
  if (o.save_dataset_dir) {
    std::filesystem::create_directories(*o.save_dataset_dir);
    save_gallery(*o.save_dataset_dir / "gallery.csv", *raw_gallery);
    save_probes(*o.save_dataset_dir / "probes.jsonl", raw_probes);
  }

  std::vector<FeatureVector> instances;
  instances.reserve(raw_gallery->size());
  for (const auto& v : raw_gallery->instances())
    instances.push_back(apply_normalization(v, o.normalization, o.kind));
  std::vector<std::string> names(raw_gallery->class_names().begin(),
                                 raw_gallery->class_names().end());
  Gallery gallery(std::move(instances),
                  std::vector<ClassId>(raw_gallery->labels().begin(), raw_gallery->labels().end()),
                  std::move(names));

  std::vector<ProbeSequence> probes;
  std::vector<std::optional<ClassId>> truth;
  for (std::size_t p = 0; p < raw_probes.size(); ++p) {
    std::vector<FeatureVector> frames;
    for (const auto& f : raw_probes[p].sequence)
      frames.push_back(apply_normalization(f, o.normalization, o.kind));
    probes.emplace_back(std::move(frames));
    if (raw_probes[p].label) {
      auto id = gallery.find_class(*raw_probes[p].label);
      if (!id) {
        throw Error(ErrorCode::UnknownClass, "probe " + std::to_string(p) + " has label `" +
                                                 *raw_probes[p].label + "` absent from gallery");
      }
      truth.push_back(id);
    } else {
      truth.push_back(std::nullopt);
    }
  }

  RunReport report;
  report.config_json = config_to_json(options);
  report.seed = o.seed;
  report.gallery_size = gallery.size();
  report.num_classes = gallery.num_classes();
  report.num_probes = probes.size();

  IndexOptions index_options;
  index_options.intra_mode = o.intra_mode;
  index_options.execution = o.recognizer.execution;
  const auto build_start = Clock::now();
  const GalleryIndex index(std::move(gallery), o.kind, index_options);
  report.index_build_us = micros_since(build_start);

  const std::vector<std::optional<double>> grid = [&] {
    std::vector<std::optional<double>> g;
    if (!o.sweep) return std::vector<std::optional<double>>{std::nullopt};
    for (double x : o.sweep->points()) g.emplace_back(x);
    return g;
  }();
  const Normalization scheme = noise_scheme(o);

  for (const auto& x : grid) {
    RecognizerConfig cfg = o.recognizer;
    double noise = o.noise;
    if (x) {
      switch (o.sweep->param) {
        case SweepParam::Lambda: cfg.lambda = *x; break;
        case SweepParam::Candidates: cfg.candidates = static_cast<std::size_t>(std::llround(*x)); break;
        case SweepParam::Noise: noise = *x; break;
        case SweepParam::Scale: cfg.scale = *x; break;
      }
    }
    std::vector<ProbeSequence> noisy;
    noisy.reserve(probes.size());
    for (std::size_t p = 0; p < probes.size(); ++p) {
      noisy.push_back(inject_noise(probes[p], {noise, derive_seed(o.seed ^ kNoiseStream, p)}, scheme));
    }

    for (Method method : o.methods) {
      MethodResult row;
      row.method = method;
      row.x = x;
      std::vector<double> times;
      times.reserve(noisy.size());
      for (std::size_t p = 0; p < noisy.size(); ++p) {
        const auto start = Clock::now();
        const RecognitionResult res = classify(method, index, noisy[p], cfg);
        times.push_back(micros_since(start));
        row.predictions.push_back(index.gallery().class_name(res.predicted));
        if (truth[p]) {
          ++row.total;
          if (*truth[p] == res.predicted) ++row.correct;
        }
      }
      row.accuracy = row.total == 0 ? 0.0
                                    : static_cast<double>(row.correct) / static_cast<double>(row.total);
      row.timing = summarize(std::move(times));
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

void write_results_csv(std::ostream& out, const RunReport& report) {
  out << "x,method,accuracy,correct,total,mean_us,p50_us,p90_us\n";
  for (const auto& r : report.rows) {
    out << (r.x ? format_double(*r.x) : std::string()) << ',' << to_string(r.method) << ','
        << format_double(r.accuracy) << ',' << r.correct << ',' << r.total << ','
        << format_double(r.timing.mean_us) << ',' << format_double(r.timing.p50_us) << ','
        << format_double(r.timing.p90_us) << '\n';
  }
}

void write_report_json(std::ostream& out, const RunReport& report) {
  ordered_json j;
  j["config"] = ordered_json::parse(report.config_json);
  j["seed"] = report.seed;
  j["gallery_size"] = report.gallery_size;
  j["num_classes"] = report.num_classes;
  j["num_probes"] = report.num_probes;
  j["timing"] = {{"index_build_us", report.index_build_us}};
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json row;
    row["x"] = r.x ? ordered_json(*r.x) : ordered_json(nullptr);
    row["method"] = to_string(r.method);
    row["accuracy"] = r.accuracy;
    row["correct"] = r.correct;
    row["total"] = r.total;
    row["predictions"] = r.predictions;
    row["timing"] = {{"mean_us", r.timing.mean_us},
                     {"p50_us", r.timing.p50_us},
                     {"p90_us", r.timing.p90_us},
                     {"max_us", r.timing.max_us}};
    rows.push_back(std::move(row));
  }
  j["results"] = std::move(rows);
  out << j.dump(2) << '\n';
}

void write_report(const std::filesystem::path& dir, const RunReport& report) {
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / "results.csv");
  std::ofstream js(dir / "report.json");
  if (!csv || !js) throw Error(ErrorCode::IoError, "cannot write report under " + dir.string());
  write_results_csv(csv, report);
  write_report_json(js, report);
}

std::string format_table(const RunReport& report) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "gallery R=%zu C=%zu, probes=%zu, index build %.1f ms\n",
                report.gallery_size, report.num_classes, report.num_probes,
                report.index_build_us / 1000.0);
  out << buf;
  std::snprintf(buf, sizeof buf, "%-12s %10s %10s %12s %12s\n", "method", "x", "accuracy",
                "correct", "mean_us");
  out << buf;
  for (const auto& r : report.rows) {
    const std::string x = r.x ? format_double(*r.x) : "-";
    const std::string frac = std::to_string(r.correct) + "/" + std::to_string(r.total);
    std::snprintf(buf, sizeof buf, "%-12s %10s %10.4f %12s %12.1f\n",
                  std::string(to_string(r.method)).c_str(), x.c_str(), r.accuracy, frac.c_str(),
                  r.timing.mean_us);
    out << buf;
  }
  return out.str();
}

}  // namespace mapdist
