#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "helmholtz/experiments.hpp"
#include "helmholtz/random.hpp"

namespace helmholtz {

namespace {

int grid_order(const ExperimentConfig& config) {
  return std::max(config.m_max, static_cast<int>(std::ceil(config.lambda)) + 40);
}

std::optional<double> bound_for(const ExperimentConfig& config, const SampleSet& samples,
                                const ComplexVector& truth_values, bool truncate) {
  if (!truncate) return std::nullopt;
  const double reference = config.truncation_reference == ExperimentConfig::BoundReference::Truth
                               ? truth_values.cwiseAbs().maxCoeff()
                               : samples.values.cwiseAbs().maxCoeff();
  const double bound = config.truncation_factor * reference;
  return bound > 0.0 ? std::optional<double>(bound) : std::nullopt;
}

void note(std::vector<std::string>* notices, std::string text) {
  if (notices) notices->push_back(std::move(text));
}

// Indices used in seed derivation for draws that belong to no alpha grid.
constexpr std::size_t kGcvAlphaIndex = 0xFFFF;

}  // namespace

std::uint64_t sampling_seed(const ExperimentConfig& config, std::size_t alpha_index, int trial) {
  return derive_seed(config.seed, stream::kSampling,
                     (static_cast<std::uint64_t>(alpha_index) << 32) | static_cast<std::uint32_t>(trial));
}

std::uint64_t truth_seed(const ExperimentConfig& config, int trial) {
  return derive_seed(config.seed, stream::kTruth, config.redraw_truth ? static_cast<std::uint64_t>(trial) : 0);
}

namespace {

TrialData make_trial_at(const ExperimentConfig& config, std::size_t n, double alpha, std::size_t alpha_index,
                        int trial) {
  SamplingConfig sc;
  sc.alpha = alpha;
  sc.n = n;
  sc.seed = sampling_seed(config, alpha_index, trial);
  sc.mode = config.sampling;
  GroundTruthSpec gt;
  gt.lambda = config.lambda;
  gt.count = config.truth_terms;
  gt.seed = truth_seed(config, trial);
  TrialData data{synth_solution(gt), {}};
  const std::uint64_t noise_seed = derive_seed(sc.seed, stream::kNoise, 0);
  data.samples = make_samples(sample_nu_alpha(sc), data.truth, config.noise_sigma, noise_seed);
  return data;
}

}  // namespace

TrialData make_trial(const ExperimentConfig& config, std::size_t n, std::size_t alpha_index, int trial) {
  return make_trial_at(config, n, config.alphas.at(alpha_index), alpha_index, trial);
}

std::vector<std::pair<Eigen::Index, double>> trial_errors(const ExperimentConfig& config, Method method,
                                                          const TrialData& data, const ErrorGrid& grid,
                                                          std::vector<std::string>* notices) {
  const SampleSet& samples = data.samples;
  const std::size_t n = samples.size();
  const ComplexVector truth_values = grid.evaluate(data.truth);
  std::vector<std::pair<Eigen::Index, double>> out;

  switch (method) {
    case Method::FourierBesselLs: {
      int top = config.m_max;
      while (top >= config.m_min && static_cast<std::size_t>(2 * top + 1) > n) --top;
      if (top < config.m_max)
        note(notices, "fourier_bessel_ls: orders above " + std::to_string(top) + " skipped (dimension > n = " +
                          std::to_string(n) + ")");
      if (top < config.m_min) break;
      // Fourier-Bessel spaces are nested: order m uses the middle 2m+1 columns.
      const DictionarySpec full{DictionaryKind::FourierBessel, top, config.lambda};
      const ComplexMatrix a = build_design_matrix(samples.points, full);
      for (int m = config.m_min; m <= top; ++m) {
        const ComplexMatrix am = a.middleCols(top - m, 2 * m + 1);
        const auto fit = least_squares_fit<double>(am, samples.values);
        const Estimate est{full.with_order(m), fit.coefficients, bound_for(config, samples, truth_values, true)};
        out.emplace_back(2 * m + 1, estimate_error(est, data.truth, grid, truth_values));
      }
      break;
    }
    case Method::PlaneWaveLs: {
      for (int m = config.m_min; m <= config.m_max; ++m) {
        if (static_cast<std::size_t>(2 * m + 1) > n) {
          note(notices, "plane_wave_ls: order " + std::to_string(m) + " skipped (dimension > n)");
          break;
        }
        const DictionarySpec spec{DictionaryKind::PlaneWave, m, config.lambda};
        const auto fit = fit_dictionary(samples, spec);
        const Estimate est{spec, fit.coefficients, bound_for(config, samples, truth_values, true)};
        out.emplace_back(spec.dimension(), estimate_error(est, data.truth, grid, truth_values));
      }
      break;
    }
    case Method::SquareFourierLs: {
      for (int k = 0; k <= config.square_order; ++k) {
        const DictionarySpec spec{DictionaryKind::SquareFourier, k, config.lambda};
        if (static_cast<std::size_t>(spec.dimension()) >= n) {
          note(notices, "square_fourier_ls: K = " + std::to_string(k) + " skipped ((2K+1)^2 >= n = " +
                            std::to_string(n) + ")");
          break;
        }
        const auto fit = fit_dictionary(samples, spec);
        const Estimate est{spec, fit.coefficients, bound_for(config, samples, truth_values, config.truncate_all)};
        out.emplace_back(spec.dimension(), estimate_error(est, data.truth, grid, truth_values));
      }
      break;
    }
    case Method::Omp: {
      const DictionarySpec spec{DictionaryKind::SquareFourier, config.omp_order, config.lambda};
      if (static_cast<std::size_t>(spec.dimension()) <= n) {
        note(notices, "omp: (2K+1)^2 = " + std::to_string(spec.dimension()) + " <= n = " + std::to_string(n) +
                          ", skipped");
        break;
      }
      const Eigen::Index cap = std::min<Eigen::Index>(
          static_cast<Eigen::Index>(n), config.omp_max_iterations ? *config.omp_max_iterations : spec.dimension());
      std::vector<Eigen::Index> checkpoints;
      for (Eigen::Index k = config.omp_step; k <= cap; k += config.omp_step) checkpoints.push_back(k);
      if (checkpoints.empty()) break;
      const ComplexMatrix a = build_design_matrix(samples.points, spec);
      const auto path = omp_path<double>(a, samples.values, checkpoints);
      const auto bound = bound_for(config, samples, truth_values, config.truncate_all);
      std::optional<SquareFourierGram> gram;
      if (!bound) gram.emplace(spec.order, spec.square_scale);
      for (std::size_t i = 0; i < path.size(); ++i) {
        const double err = gram ? gram->relative_error(data.truth, path[i].coefficients)
                                : estimate_error({spec, path[i].coefficients, bound}, data.truth, grid, truth_values);
        out.emplace_back(checkpoints[i], err);
      }
      break;
    }
  }
  return out;
}

std::vector<ErrorCurveRow> aggregate(const std::vector<TrialRecord>& records) {
  std::map<std::tuple<int, double, Eigen::Index>, std::vector<double>> groups;
  for (const auto& r : records) groups[{static_cast<int>(r.method), r.alpha, r.knob}].push_back(r.rel_l2);
  std::vector<ErrorCurveRow> rows;
  for (const auto& [key, errs] : groups) {
    ErrorCurveRow row;
    row.method = static_cast<Method>(std::get<0>(key));
    row.alpha = std::get<1>(key);
    row.dimension = std::get<2>(key);
    row.trials = static_cast<int>(errs.size());
    row.mean_rel_l2 = std::accumulate(errs.begin(), errs.end(), 0.0) / static_cast<double>(errs.size());
    if (errs.size() > 1) {
      double ss = 0.0;
      for (double e : errs) ss += (e - row.mean_rel_l2) * (e - row.mean_rel_l2);
      row.std_rel_l2 = std::sqrt(ss / static_cast<double>(errs.size() - 1));
    }
    rows.push_back(row);
  }
  return rows;
}

ErrorCurve run_error_curve(const ExperimentConfig& config, Method method, std::size_t n) {
  config.validate();
  const ErrorGrid grid(config.lambda, grid_order(config));
  ErrorCurve curve;
  for (std::size_t ai = 0; ai < config.alphas.size(); ++ai) {
    for (int t = 0; t < config.trials; ++t) {
      const auto data = make_trial(config, n, ai, t);
      std::vector<std::string> notices;
      for (const auto& [knob, err] : trial_errors(config, method, data, grid, &notices))
        curve.records.push_back({method, n, config.alphas[ai], knob, t, err});
      if (t == 0 && ai == 0) curve.notices = std::move(notices);
    }
  }
  curve.rows = aggregate(curve.records);
  return curve;
}

ErrorCurve run_error_curve(const ExperimentConfig& config) { return run_error_curve(config, config.method, config.n); }

BestRow best_of_curve(const ErrorCurve& curve, std::size_t n) {
  if (curve.rows.empty()) throw std::invalid_argument("best_of_curve: empty curve");
  BestRow best;
  best.n = n;
  best.best_err = std::numeric_limits<double>::infinity();
  for (const auto& row : curve.rows) {
    if (row.mean_rel_l2 < best.best_err) {
      best.method = row.method;
      best.best_err = row.mean_rel_l2;
      best.best_dim_or_iters = row.dimension;
      best.best_alpha = row.alpha;
    }
  }
  return best;
}

std::vector<BestRow> run_best_comparison(const ExperimentConfig& config, const std::vector<Method>& methods) {
  std::vector<BestRow> rows;
  for (Method method : methods) {
    for (std::size_t n : config.n_values) {
      const auto curve = run_error_curve(config, method, n);
      if (curve.rows.empty()) continue;
      rows.push_back(best_of_curve(curve, n));
    }
  }
  return rows;
}

GcvExperiment run_gcv_experiment(const ExperimentConfig& config, int trial) {
  config.validate();
  const auto data = make_trial_at(config, config.n, config.gcv_alpha, kGcvAlphaIndex, trial);
  GcvConfig gc;
  gc.holdout_fraction = config.holdout_fraction;
  gc.repetitions = config.repetitions;
  gc.seed = derive_seed(config.seed, stream::kSplit, static_cast<std::uint64_t>(trial));
  gc.stratified = config.stratified;
  gc.truncation_factor = config.truncation_factor;
  for (int m = config.m_min; m <= config.m_max; ++m) gc.orders.push_back(m);

  const ErrorGrid grid(config.lambda, grid_order(config));
  const ComplexVector truth_values = grid.evaluate(data.truth);
  const auto bound = bound_for(config, data.samples, truth_values, true);
  if (config.truncation_reference == ExperimentConfig::BoundReference::Truth) gc.truncation_bound = bound;

  const DictionarySpec base{DictionaryKind::FourierBessel, 0, config.lambda};
  GcvExperiment out;
  out.gcv = gcv_select(data.samples, base, gc);
  out.oracle_error = std::numeric_limits<double>::infinity();
  for (const auto& cand : out.gcv.candidates) {
    const auto spec = base.with_order(cand.order);
    const auto fit = fit_dictionary(data.samples, spec);
    const double err = estimate_error({spec, fit.coefficients, bound}, data.truth, grid, truth_values);
    out.true_errors.push_back(err);
    if (err < out.oracle_error) {
      out.oracle_error = err;
      out.oracle_order = cand.order;
    }
    if (cand.order == out.gcv.selected_order) out.selected_error = err;
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_kbound_csv(std::ostream& out, const StabilityReport& report) {
  out << "m,dim,K,alpha,lambda\n";
  for (const auto& p : report.profile)
    out << p.order << ',' << p.dimension << ',' << format_real(p.K) << ',' << format_real(report.alpha) << ','
        << format_real(report.base.lambda) << '\n';
}

void write_curve_csv(std::ostream& out, const std::vector<ErrorCurveRow>& rows) {
  out << "method,alpha,dim,mean_rel_l2,std_rel_l2,trials\n";
  for (const auto& r : rows)
    out << to_string(r.method) << ',' << format_real(r.alpha) << ',' << r.dimension << ','
        << format_real(r.mean_rel_l2) << ',' << format_real(r.std_rel_l2) << ',' << r.trials << '\n';
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "method,n,alpha,dim,trial,rel_l2\n";
  for (const auto& r : records)
    out << to_string(r.method) << ',' << r.n << ',' << format_real(r.alpha) << ',' << r.knob << ',' << r.trial
        << ',' << format_real(r.rel_l2) << '\n';
}

void write_best_csv(std::ostream& out, const std::vector<BestRow>& rows) {
  out << "method,n,best_err,best_dim_or_iters,best_alpha\n";
  for (const auto& r : rows)
    out << to_string(r.method) << ',' << r.n << ',' << format_real(r.best_err) << ',' << r.best_dim_or_iters << ','
        << format_real(r.best_alpha) << '\n';
}

void write_gcv_csv(std::ostream& out, const GcvResult& result) {
  out << "m,dim,val_mse,selected\n";
  for (const auto& c : result.candidates)
    out << c.order << ',' << c.dimension << ',' << format_real(c.mean_validation_mse) << ','
        << (c.order == result.selected_order ? 1 : 0) << '\n';
}

void write_synth_csv(std::ostream& out, const SampleSet& samples, const HelmholtzField& truth) {
  out << "x,y,boundary,re_y,im_y,re_u,im_u\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& p = samples.points[i];
    const auto y = samples.values(static_cast<Eigen::Index>(i));
    const auto u = truth(p);
    out << format_real(p.x) << ',' << format_real(p.y) << ',' << (on_boundary(p) ? 1 : 0) << ','
        << format_real(y.real()) << ',' << format_real(y.imag()) << ',' << format_real(u.real()) << ','
        << format_real(u.imag()) << '\n';
  }
}

}  // namespace helmholtz
