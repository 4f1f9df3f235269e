// Command-line front end: stability sweeps, error curves, best-of-method
// comparison, holdout model selection and sample synthesis, all as CSV.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "helmholtz/experiments.hpp"
#include "helmholtz/stability.hpp"

using namespace helmholtz;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string output = "-";
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* app, CommonOptions& opts) {
  app->add_option("--config", opts.config_path, "JSON configuration file (schema_version 1)")->check(CLI::ExistingFile);
  app->add_option("--output", opts.output, "CSV destination, '-' for stdout");
  app->add_option("--seed", opts.seed, "Master seed, overrides the config file");
}

ExperimentConfig resolve(const CommonOptions& opts) {
  ExperimentConfig config = opts.config_path.empty() ? ExperimentConfig{} : load_config(opts.config_path);
  if (opts.seed) config.seed = *opts.seed;
  config.validate();
  return config;
}

// Writes to the file named by `path`, or stdout for "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Helmholtz field reconstruction on the unit disk"};
  app.require_subcommand(1);

  CommonOptions kbound_opts, curve_opts, best_opts, gcv_opts, synth_opts;

  auto* kbound = app.add_subcommand("kbound", "K(m) sweep under nu_alpha and the admissible dimension");
  add_common(kbound, kbound_opts);
  std::vector<double> kbound_alphas{0.0, 0.5};
  std::optional<double> r_exponent;
  std::optional<std::size_t> kbound_n;
  std::optional<std::string> kbound_dict;
  kbound->add_option("--alpha", kbound_alphas, "Boundary proportions (repeatable)")->check(CLI::Range(0.0, 1.0));
  kbound->add_option("--r-exponent", r_exponent, "Exponent r in kappa = (1 - log 2) / (2 + 2r)");
  kbound->add_option("--n", kbound_n, "Sample count for the admissible dimension");
  kbound->add_option("--dictionary", kbound_dict, "fourier_bessel, plane_wave, aliased_plane_wave or square_fourier");

  auto* curve = app.add_subcommand("curve", "Mean relative L2 error against dimension or OMP iterations");
  add_common(curve, curve_opts);
  std::optional<std::string> curve_method;
  std::string trials_path;
  curve->add_option("--method", curve_method, "fourier_bessel_ls, plane_wave_ls, square_fourier_ls or omp");
  curve->add_option("--trials-output", trials_path, "Per-trial log (default: <output>.trials.csv)");

  auto* best = app.add_subcommand("best", "Best error per method over knob and alpha, for each n");
  add_common(best, best_opts);
  std::vector<std::string> best_methods{"fourier_bessel_ls", "square_fourier_ls", "omp"};
  best->add_option("--methods", best_methods, "Methods to compare");

  auto* gcv = app.add_subcommand("gcv", "Holdout selection of the Fourier-Bessel order");
  add_common(gcv, gcv_opts);
  int gcv_trial = 0;
  gcv->add_option("--trial", gcv_trial, "Trial index (selects the sample)");

  auto* synth = app.add_subcommand("synth", "Emit a sampled ground-truth field");
  add_common(synth, synth_opts);
  double synth_alpha = 0.5;
  int synth_trial = 0;
  synth->add_option("--alpha", synth_alpha, "Boundary proportion")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--trial", synth_trial, "Trial index");

  CLI11_PARSE(app, argc, argv);

  try {
    if (kbound->parsed()) {
      auto config = resolve(kbound_opts);
      if (r_exponent) config.r_exponent = *r_exponent;
      if (kbound_dict) config.kbound_dictionary = parse_dictionary_kind(*kbound_dict);
      const std::size_t n = kbound_n.value_or(config.n);
      KSearch search;
      search.r_grid = config.k_search_grid;
      Sink sink(kbound_opts.output);
      bool header = true;
      for (double alpha : kbound_alphas) {
        const DictionarySpec base{config.kbound_dictionary, 0, config.lambda};
        const auto report = stability_sweep(base, alpha, config.kbound_m_min, config.kbound_m_max, n,
                                            config.r_exponent, search);
        std::ostringstream block;
        write_kbound_csv(block, report);
        const std::string text = block.str();
        sink.stream() << (header ? text : text.substr(text.find('\n') + 1));
        header = false;
        std::cerr << "alpha=" << alpha << " growth exponent " << report.growth.exponent << " (raw log-log slope "
                  << report.growth.raw_slope << "); kappa n/log n = " << report.admissible.threshold;
        if (report.admissible.none_admissible)
          std::cerr << ", no admissible order\n";
        else
          std::cerr << ", m* = " << report.admissible.order << " (dim " << report.admissible.dimension << ")\n";
      }
    } else if (curve->parsed()) {
      auto config = resolve(curve_opts);
      if (curve_method) config.method = parse_method(*curve_method);
      const auto result = run_error_curve(config);
      for (const auto& notice : result.notices) std::cerr << "notice: " << notice << '\n';
      Sink sink(curve_opts.output);
      write_curve_csv(sink.stream(), result.rows);
      if (trials_path.empty() && curve_opts.output != "-") trials_path = curve_opts.output + ".trials.csv";
      if (!trials_path.empty()) {
        Sink log(trials_path);
        write_trials_csv(log.stream(), result.records);
      }
    } else if (best->parsed()) {
      const auto config = resolve(best_opts);
      std::vector<Method> methods;
      for (const auto& m : best_methods) methods.push_back(parse_method(m));
      Sink sink(best_opts.output);
      write_best_csv(sink.stream(), run_best_comparison(config, methods));
    } else if (gcv->parsed()) {
      const auto config = resolve(gcv_opts);
      const auto result = run_gcv_experiment(config, gcv_trial);
      Sink sink(gcv_opts.output);
      write_gcv_csv(sink.stream(), result.gcv);
      std::cerr << "selected m = " << result.gcv.selected_order << " (rel L2 " << result.selected_error
                << "); best m = " << result.oracle_order << " (rel L2 " << result.oracle_error << ")\n";
    } else if (synth->parsed()) {
      auto config = resolve(synth_opts);
      config.alphas = {synth_alpha};
      const auto data = make_trial(config, config.n, 0, synth_trial);
      Sink sink(synth_opts.output);
      write_synth_csv(sink.stream(), data.samples, data.truth);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
