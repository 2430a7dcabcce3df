#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mapdist/benchmark_runner.hpp"
#include "mapdist/error.hpp"
#include "mapdist/synthetic.hpp"

namespace mapdist {
namespace {

struct AsymptoticsOptions {
  std::size_t dim = 16;
  std::size_t sample_size = 10000;
  std::size_t trials = 10000;
  double tilt = 0.1;
};

std::pair<std::size_t, std::size_t> parse_range(const std::string& key, const std::string& value) {
  std::size_t lo = 0, hi = 0;
  char dash = 0;
  std::istringstream in(value);
  std::string rest;
  if (!(in >> lo)) throw Error(ErrorCode::InvalidSpec, "bad value for " + key + ": " + value);
  if (in >> dash) {
    if (dash != '-' || !(in >> hi) || (in >> rest)) {
      throw Error(ErrorCode::InvalidSpec, "bad range for " + key + ": " + value);
    }
  } else {
    hi = lo;
  }
  return {lo, hi};
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  auto [lo, hi] = parse_range(key, value);
  if (lo != hi) throw Error(ErrorCode::InvalidSpec, key + " takes a single integer");
  return lo;
}

double parse_real(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  double x = 0.0;
  std::string rest;
  if (!(in >> x) || (in >> rest)) throw Error(ErrorCode::InvalidSpec, "bad value for " + key + ": " + value);
  return x;
}

// Applies KEY=VAL pairs; entries may also be comma-separated within one token.
bool apply_spec(const std::vector<std::string>& tokens, SyntheticSpec& spec,
                AsymptoticsOptions& asym) {
  bool family_set = false;
  for (const auto& token : tokens) {
    std::istringstream parts(token);
    std::string item;
    while (std::getline(parts, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::InvalidSpec, "expected KEY=VAL, got " + item);
      const std::string key = item.substr(0, eq);
      const std::string value = item.substr(eq + 1);
      if (key == "classes") {
        spec.classes = parse_count(key, value);
      } else if (key == "stills") {
        std::tie(spec.stills_min, spec.stills_max) = parse_range(key, value);
      } else if (key == "frames") {
        std::tie(spec.frames_min, spec.frames_max) = parse_range(key, value);
      } else if (key == "probes") {
        spec.probes_per_class = parse_count(key, value);
      } else if (key == "dim") {
        spec.dim = parse_count(key, value);
        asym.dim = spec.dim;
      } else if (key == "still_spread") {
        spec.still_spread = parse_real(key, value);
      } else if (key == "video_shift") {
        spec.video_shift = parse_real(key, value);
      } else if (key == "frame_spread") {
        spec.frame_spread = parse_real(key, value);
      } else if (key == "family") {
        if (value == "dirichlet") spec.family = GeneratorFamily::DirichletSimplex;
        else if (value == "gaussian") spec.family = GeneratorFamily::GaussianUnitSphere;
        else throw Error(ErrorCode::InvalidSpec, "family must be dirichlet or gaussian");
        family_set = true;
      } else if (key == "sample_size") {
        asym.sample_size = parse_count(key, value);
      } else if (key == "trials") {
        asym.trials = parse_count(key, value);
      } else if (key == "tilt") {
        asym.tilt = parse_real(key, value);
      } else {
        throw Error(ErrorCode::InvalidSpec, "unknown spec key `" + key + "`");
      }
    }
  }
  return family_set;
}

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::istringstream in(list);
  std::string name;
  while (std::getline(in, name, ',')) {
    if (name.empty()) continue;
    auto m = parse_method(name);
    if (!m) throw Error(ErrorCode::InvalidConfig, "unknown method `" + name + "`");
    out.push_back(*m);
  }
  return out;
}

int run_asymptotics(const AsymptoticsOptions& a, std::uint64_t seed,
                    const std::optional<std::filesystem::path>& out_dir) {
  const auto [x_r, x_i] = random_simplex_pair(a.dim, a.tilt, seed);
  const AsymptoticsReport r = validate_kl_asymptotics(x_r, x_i, a.sample_size, a.trials, seed);
  nlohmann::ordered_json j;
  j["dim"] = r.dim;
  j["sample_size"] = r.sample_size;
  j["trials"] = r.trials;
  j["tilt"] = a.tilt;
  j["seed"] = seed;
  j["divergence"] = r.divergence;
  j["statistic"] = {{"empirical_mean", r.empirical_mean},
                    {"predicted_mean", r.predicted_mean},
                    {"mean_rel_error", r.empirical_mean / r.predicted_mean - 1.0},
                    {"empirical_var", r.empirical_var},
                    {"predicted_var", r.predicted_var},
                    {"var_rel_error", r.empirical_var / r.predicted_var - 1.0}};
  j["distance"] = {{"empirical_mean", r.distance_mean},
                   {"gaussian_predicted_mean", r.gaussian_predicted_mean},
                   {"chi_squared_implied_mean", r.chi_squared_implied_mean},
                   {"empirical_var", r.distance_var},
                   {"gaussian_predicted_var", r.gaussian_predicted_var}};
  const std::string text = j.dump(2);
  std::cout << text << '\n';
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    std::ofstream f(*out_dir / "asymptotics.json");
    if (!f) throw Error(ErrorCode::IoError, "cannot write asymptotics.json");
    f << text << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Still-to-video recognition benchmark: MAP of distances vs. baselines"};
  app.set_version_flag("--version", "mapdist 0.1.0");

  RunOptions opts;
  std::string gallery, probes, methods = "ml,ml-cluster,map,proposed", distance = "sq-euclid";
  std::string aggregation = "sum", phi = "approx", normalize = "auto", intra = "include-self";
  std::string sweep, out, save_dataset, execution = "parallel";
  std::vector<std::string> spec_tokens;
  bool validate_asymptotics = false;

  app.add_option("--gallery", gallery, "Gallery CSV (header dim=D, rows label,f_1..f_D)");
  app.add_option("--probes", probes, "Probe sequences as JSON lines");
  app.add_flag("--synthetic", opts.synthetic, "Generate a seeded synthetic problem");
  app.add_option("--spec", spec_tokens,
                 "Synthetic KEY=VAL: classes, stills, frames, probes, dim, still_spread, "
                 "video_shift, frame_spread, family; asymptotics: sample_size, trials, tilt")
      ->expected(1, -1);
  app.add_option("--methods", methods, "Comma list of ml, ml-cluster, map, proposed, oracle");
  app.add_option("--distance", distance, "Dissimilarity")
      ->check(CLI::IsMember({"euclid", "sq-euclid", "kl", "chi2", "js"}));
  app.add_option("--lambda", opts.recognizer.lambda, "Regularizer weight");
  app.add_option("--m", opts.recognizer.candidates, "Candidate classes M");
  app.add_option("--n", opts.recognizer.scale, "Scale n of the exponentials");
  app.add_option("--aggregation", aggregation, "Frame fusion rule")
      ->check(CLI::IsMember({"sum", "product"}));
  app.add_option("--phi", phi, "Regularizer term")->check(CLI::IsMember({"approx", "exact"}));
  app.add_option("--normalize", normalize, "Normalization of loaded vectors")
      ->check(CLI::IsMember({"auto", "none", "l2", "l1"}));
  app.add_option("--intra", intra, "Diagonal of the inter-class matrix")
      ->check(CLI::IsMember({"include-self", "exclude-self"}));
  app.add_option("--sweep", sweep, "PARAM=START:END:STEP with PARAM in lambda, m, noise, n");
  app.add_option("--noise", opts.noise, "Uniform feature noise amplitude X_max");
  app.add_option("--seed", opts.seed, "Seed for generation and noise");
  app.add_option("--out", out, "Directory for results.csv and report.json");
  app.add_option("--save-dataset", save_dataset, "Write gallery.csv and probes.jsonl here");
  app.add_option("--execution", execution, "Kernel driver")
      ->check(CLI::IsMember({"parallel", "serial"}));
  app.add_flag("--validate-asymptotics", validate_asymptotics,
               "Monte-Carlo check of the large-sample law of 2n KL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    AsymptoticsOptions asym;
    const bool family_set = apply_spec(spec_tokens, opts.spec, asym);
    std::optional<std::filesystem::path> out_dir;
    if (!out.empty()) out_dir = out;
    if (validate_asymptotics) return run_asymptotics(asym, opts.seed, out_dir);

    if (!gallery.empty()) opts.gallery_path = gallery;
    if (!probes.empty()) opts.probes_path = probes;
    opts.methods = parse_methods(methods);
    opts.kind = *parse_dissimilarity(distance);
    if (!family_set) {
      opts.spec.family = is_probabilistic(opts.kind) ? GeneratorFamily::DirichletSimplex
                                                     : GeneratorFamily::GaussianUnitSphere;
    }
    opts.recognizer.kind = opts.kind;
    opts.recognizer.aggregation = aggregation == "sum" ? Aggregation::SumRule : Aggregation::ProductRule;
    opts.recognizer.phi_mode = phi == "approx" ? PhiMode::Approximate : PhiMode::Exact;
    opts.recognizer.execution = execution == "serial" ? Execution::Serial : Execution::Parallel;
    opts.normalization = normalize == "none" ? NormalizationChoice::None
                         : normalize == "l2" ? NormalizationChoice::L2
                         : normalize == "l1" ? NormalizationChoice::L1
                                             : NormalizationChoice::Auto;
    opts.intra_mode = intra == "include-self" ? IntraClassMode::IncludeSelfPairs
                                              : IntraClassMode::ExcludeSelfPairs;
    if (!sweep.empty()) opts.sweep = parse_sweep(sweep);
    opts.out_dir = out_dir;
    if (!save_dataset.empty()) opts.save_dataset_dir = save_dataset;

    const RunReport report = run_benchmark(opts);
    std::cout << format_table(report);
    if (opts.out_dir) write_report(*opts.out_dir, report);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace mapdist
