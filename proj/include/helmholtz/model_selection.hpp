// Dimension selection by repeated random holdout ("GCV" in the experiments):
// fit on a training split, score on the held-out points, average over
// repetitions, and keep the order with the smallest mean validation error.

#ifndef HELMHOLTZ_MODEL_SELECTION_HPP
#define HELMHOLTZ_MODEL_SELECTION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "helmholtz/dictionaries.hpp"
#include "helmholtz/estimators.hpp"

namespace helmholtz {

struct GcvConfig {
  double holdout_fraction = 0.1;
  int repetitions = 10;
  std::vector<int> orders;  // candidate m (or K) values
  std::uint64_t seed = 0;
  /// Hold out the same fraction of boundary and of interior points, so the
  /// training set keeps the boundary proportion of the full sample.
  bool stratified = false;
  /// When set, predictions are clamped to factor * max |y_train| before
  /// scoring, matching how the final estimate is truncated.
  std::optional<double> truncation_factor = 1.2;
  /// Fixed bound used instead of the factor when set.
  std::optional<double> truncation_bound;

  void validate() const;
};

struct GcvCandidate {
  int order = 0;
  Eigen::Index dimension = 0;
  double mean_validation_mse = 0.0;
  std::vector<double> validation_mse;  // one entry per repetition
};

struct GcvResult {
  int selected_order = 0;
  std::vector<GcvCandidate> candidates;  // feasible orders, ascending
  std::vector<int> skipped_orders;       // dimension above the training size
  FitResult final_fit;                   // refit on every sample
  std::size_t training_size = 0;
  std::size_t validation_size = 0;
};

/// Validation-set size for n samples: round(fraction * n), at least 1.
std::size_t holdout_size(std::size_t n, double fraction);

/// Index split (training, validation) for one repetition.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> holdout_split(const SampleSet& samples,
                                                                            const GcvConfig& config,
                                                                            int repetition);

/// Index of the smallest value, first one on ties.
std::size_t argmin_first(const std::vector<double>& values);

GcvResult gcv_select(const SampleSet& samples, const DictionarySpec& base, const GcvConfig& config);

}  // namespace helmholtz

#endif  // HELMHOLTZ_MODEL_SELECTION_HPP
