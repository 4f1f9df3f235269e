// Ground-truth fields, L2(disk, dx) error measurement and the drivers for
// the reconstruction experiments (error curves, best-of-method comparison,
// holdout model selection), plus their configuration and CSV output.

#ifndef HELMHOLTZ_EXPERIMENTS_HPP
#define HELMHOLTZ_EXPERIMENTS_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "helmholtz/dictionaries.hpp"
#include "helmholtz/estimators.hpp"
#include "helmholtz/geometry.hpp"
#include "helmholtz/model_selection.hpp"
#include "helmholtz/stability.hpp"

namespace helmholtz {

// ---------------------------------------------------------------------------
// Ground truth

struct PlaneWaveTerm {
  double direction = 0.0;  // angle of the wave vector
  std::complex<double> coefficient;
};

/// A Helmholtz solution held as plane waves plus a Fourier-Bessel part.
class HelmholtzField {
 public:
  explicit HelmholtzField(double lambda = 12.0) : lambda_(lambda) {}

  static HelmholtzField plane_waves(double lambda, std::vector<PlaneWaveTerm> terms);
  /// sum_i coefficients(i) * atom_i for a Helmholtz dictionary (anything
  /// except SquareFourier).
  static HelmholtzField from_dictionary(const DictionarySpec& spec, const ComplexVector& coefficients);

  double lambda() const { return lambda_; }
  const std::vector<PlaneWaveTerm>& terms() const { return terms_; }
  int fb_order() const { return fb_order_; }
  bool has_fourier_bessel_part() const { return fb_order_ >= 0; }

  std::complex<double> operator()(const Point2d& x) const;

  /// d_q with u = sum_{|q| <= max_order} d_q J_q(lambda r) e^{i q theta}.
  /// Plane waves are expanded by Jacobi-Anger; orders past ceil(lambda) + 40
  /// carry less than 1e-28 of a unit wave on the disk.
  ComplexVector fourier_bessel_coefficients(int max_order) const;

  HelmholtzField operator+(const HelmholtzField& other) const;

 private:
  double lambda_;
  std::vector<PlaneWaveTerm> terms_;
  int fb_order_ = -1;
  ComplexVector fb_coefficients_;  // index q + fb_order_
};

struct GroundTruthSpec {
  enum class Kind { RandomPlaneWaves, Coefficients };
  Kind kind = Kind::RandomPlaneWaves;
  double lambda = 12.0;
  int count = 20;
  std::uint64_t seed = 0;
  DictionarySpec dictionary;  // Coefficients only
  ComplexVector coefficients;
};

/// Random superpositions use uniform directions on the circle and circular
/// Gaussian coefficients with E|c|^2 = 1.
HelmholtzField synth_solution(const GroundTruthSpec& spec);

// ---------------------------------------------------------------------------
// Error measurement in L2(disk, dx)

/// ||u - u_hat|| / ||u|| from values at the nodes of an area quadrature.
/// Throws std::domain_error when ||u|| vanishes.
double relative_l2_error(const DiskQuadrature& quad, const ComplexVector& u, const ComplexVector& u_hat);

/// Same, evaluating both callables at every node.
template <typename F, typename G>
double l2_error(const F& u, const G& u_hat, const DiskQuadrature& quad) {
  ComplexVector a(static_cast<Eigen::Index>(quad.size())), b(static_cast<Eigen::Index>(quad.size()));
  for (std::size_t i = 0; i < quad.size(); ++i) {
    a(static_cast<Eigen::Index>(i)) = u(quad.nodes[i]);
    b(static_cast<Eigen::Index>(i)) = u_hat(quad.nodes[i]);
  }
  return relative_l2_error(quad, a, b);
}

/// The standard error quadrature (200 x 512, area measure) with a cached
/// table of J_q(lambda r_i), so that any Fourier-Bessel series is evaluated
/// at all nodes with one FFT per ring.
class ErrorGrid {
 public:
  ErrorGrid(double lambda, int max_order, int n_r = kErrorQuadratureRadial, int n_theta = kErrorQuadratureAngular);

  const DiskQuadrature& quadrature() const { return quad_; }
  int max_order() const { return max_order_; }
  double lambda() const { return lambda_; }

  /// Values at the quadrature nodes of sum_q d_q J_q(lambda r) e^{iq theta};
  /// `coefficients` has odd length 2Q+1 with Q <= max_order.
  ComplexVector evaluate(const ComplexVector& coefficients) const;
  ComplexVector evaluate(const HelmholtzField& field) const;

 private:
  double lambda_;
  int max_order_;
  DiskQuadrature quad_;
  Eigen::MatrixXd bessel_;  // (ring, q + max_order) -> J_q(lambda r_ring)
};

/// Exact inner products of square Fourier modes e^{i s k.x} on the disk:
///   <e^{ia.x}, e^{ib.x}> = 2 pi J_1(|a - b|) / |a - b|   (pi when a = b).
/// Kernel values are cached by squared lattice distance.
class SquareFourierGram {
 public:
  SquareFourierGram(int order, double scale);

  double kernel(int dx, int dy) const;
  /// <e_mode, plane wave of wave vector k>.
  static double cross(double ax, double ay, double kx, double ky);

  /// ||u - sum c_a e_a|| / ||u|| for a plane-wave field u.
  double relative_error(const HelmholtzField& truth, const ComplexVector& coefficients) const;

 private:
  int order_;
  double scale_;
  std::vector<double> cache_;  // by dx^2 + dy^2
};

/// A fitted estimate: dictionary, coefficients and optional amplitude bound.
struct Estimate {
  DictionarySpec spec;
  ComplexVector coefficients;
  std::optional<double> truncation_bound;
};

/// Relative L2(disk, dx) error of an estimate. Helmholtz dictionaries go
/// through the grid (with pointwise truncation); untruncated square Fourier
/// estimates of plane-wave fields use the exact Gram route; anything else is
/// evaluated atom by atom on the grid.
double estimate_error(const Estimate& estimate, const HelmholtzField& truth, const ErrorGrid& grid,
                      const ComplexVector& truth_values);

/// Values of an estimate (truncation applied) at the grid nodes.
ComplexVector estimate_values(const Estimate& estimate, const ErrorGrid& grid);

/// sigma(u) = min over the span of ||u - v|| in the quadrature's measure,
/// by projection onto an orthogonal frame of the span.
double best_approximation_error(const HelmholtzField& u, const DictionarySpec& spec, const DiskQuadrature& quad);

// ---------------------------------------------------------------------------
// Experiment configuration

enum class Method { FourierBesselLs, PlaneWaveLs, SquareFourierLs, Omp };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

inline constexpr int kConfigSchemaVersion = 1;

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  std::string rng = std::string(kRngAlgorithm);
  std::uint64_t seed = 0;

  double lambda = 12.0;
  std::size_t n = 400;
  std::vector<double> alphas{0.0, 0.1, 0.5, 0.9, 1.0};
  SamplingMode sampling = SamplingMode::IidMixture;
  int trials = 10;
  double noise_sigma = 0.0;

  Method method = Method::FourierBesselLs;
  int m_min = 0;  // methods (i): Fourier-Bessel / plane-wave order range
  int m_max = 60;
  int square_order = 9;  // K for square Fourier least squares
  int omp_order = 40;    // K of the OMP dictionary
  int omp_step = 10;     // OMP iteration checkpoints: step, 2 step, ..., n
  std::optional<int> omp_max_iterations;

  int truth_terms = 20;
  bool redraw_truth = true;
  /// Amplitude bound M = truncation_factor * reference, where the reference
  /// is sup |u| over the error grid (Truth) or max_l |y_l| (Samples).
  enum class BoundReference { Truth, Samples };
  BoundReference truncation_reference = BoundReference::Truth;
  double truncation_factor = 1.2;
  bool truncate_all = false;       // also truncate the baselines

  std::vector<std::size_t> n_values{100, 200, 300, 400, 500, 600, 700, 800};

  // holdout model selection
  double gcv_alpha = 0.5;
  double holdout_fraction = 0.1;
  int repetitions = 10;
  bool stratified = false;

  // stability sweep
  DictionaryKind kbound_dictionary = DictionaryKind::FourierBessel;
  int kbound_m_min = 0;
  int kbound_m_max = 60;
  double r_exponent = 1.0;
  int k_search_grid = 4096;

  void validate() const;
};

/// Reads a JSON object; unknown keys are rejected, missing keys keep their
/// defaults. `schema_version` must equal kConfigSchemaVersion.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::string_view json_text);
std::string config_to_json(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Drivers

struct TrialRecord {
  Method method = Method::FourierBesselLs;
  std::size_t n = 0;
  double alpha = 0.0;
  Eigen::Index knob = 0;  // dimension, or OMP iteration count
  int trial = 0;
  double rel_l2 = 0.0;
};

struct ErrorCurveRow {
  Method method = Method::FourierBesselLs;
  double alpha = 0.0;
  Eigen::Index dimension = 0;
  double mean_rel_l2 = 0.0;
  double std_rel_l2 = 0.0;  // sample standard deviation, 0 for one trial
  int trials = 0;
};

struct ErrorCurve {
  std::vector<ErrorCurveRow> rows;
  std::vector<TrialRecord> records;
  std::vector<std::string> notices;
};

/// Seeds of trial `trial` at alpha index `alpha_index`; shared by all methods.
std::uint64_t sampling_seed(const ExperimentConfig& config, std::size_t alpha_index, int trial);
std::uint64_t truth_seed(const ExperimentConfig& config, int trial);

/// Samples and ground truth of one trial.
struct TrialData {
  HelmholtzField truth;
  SampleSet samples;
};
TrialData make_trial(const ExperimentConfig& config, std::size_t n, std::size_t alpha_index, int trial);

/// Relative errors of `method` for every knob value on one trial.
std::vector<std::pair<Eigen::Index, double>> trial_errors(const ExperimentConfig& config, Method method,
                                                          const TrialData& data, const ErrorGrid& grid,
                                                          std::vector<std::string>* notices = nullptr);

/// Error curve for config.method over config.alphas and the method's knob.
ErrorCurve run_error_curve(const ExperimentConfig& config);
ErrorCurve run_error_curve(const ExperimentConfig& config, Method method, std::size_t n);

/// Aggregates per-trial records into rows sorted by (alpha, knob).
std::vector<ErrorCurveRow> aggregate(const std::vector<TrialRecord>& records);

struct BestRow {
  Method method = Method::FourierBesselLs;
  std::size_t n = 0;
  double best_err = 0.0;
  Eigen::Index best_dim_or_iters = 0;
  double best_alpha = 0.0;
};

/// Best mean error over (knob, alpha) for each method and each n in
/// config.n_values. Ties go to the smaller alpha, then the smaller knob.
std::vector<BestRow> run_best_comparison(const ExperimentConfig& config, const std::vector<Method>& methods);
BestRow best_of_curve(const ErrorCurve& curve, std::size_t n);

struct GcvExperiment {
  GcvResult gcv;
  std::vector<double> true_errors;  // per candidate, same order as gcv.candidates
  double selected_error = 0.0;      // true error of the selected order
  double oracle_error = 0.0;        // smallest true error over the candidates
  int oracle_order = 0;
};

/// Holdout selection of the Fourier-Bessel order at config.gcv_alpha for one
/// sample, with the true error of every candidate for comparison.
GcvExperiment run_gcv_experiment(const ExperimentConfig& config, int trial);

// ---------------------------------------------------------------------------
// CSV output (17 significant digits)

std::string format_real(double value);

void write_kbound_csv(std::ostream& out, const StabilityReport& report);
void write_curve_csv(std::ostream& out, const std::vector<ErrorCurveRow>& rows);
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);
void write_best_csv(std::ostream& out, const std::vector<BestRow>& rows);
void write_gcv_csv(std::ostream& out, const GcvResult& result);
void write_synth_csv(std::ostream& out, const SampleSet& samples, const HelmholtzField& truth);

}  // namespace helmholtz

#endif  // HELMHOLTZ_EXPERIMENTS_HPP
