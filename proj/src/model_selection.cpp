#include "helmholtz/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "helmholtz/random.hpp"

namespace helmholtz {

void GcvConfig::validate() const {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
    throw std::invalid_argument("GcvConfig: holdout_fraction must lie in (0, 1)");
  if (repetitions < 1) throw std::invalid_argument("GcvConfig: repetitions must be positive");
  if (orders.empty()) throw std::invalid_argument("GcvConfig: no candidate orders");
  for (int m : orders)
    if (m < 0) throw std::invalid_argument("GcvConfig: candidate orders must be non-negative");
  if (truncation_bound && !(*truncation_bound > 0.0))
    throw std::invalid_argument("GcvConfig: truncation_bound must be positive");
  if (truncation_factor && !(*truncation_factor > 0.0))
    throw std::invalid_argument("GcvConfig: truncation_factor must be positive");
}

std::size_t holdout_size(std::size_t n, double fraction) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))));
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> holdout_split(const SampleSet& samples,
                                                                            const GcvConfig& config,
                                                                            int repetition) {
  const std::size_t n = samples.size();
  Rng rng(derive_seed(config.seed, stream::kSplit, static_cast<std::uint64_t>(repetition)));
  std::vector<char> held(n, 0);
  auto hold_from = [&](std::vector<std::size_t> pool, std::size_t count) {
    rng.shuffle(pool);
    for (std::size_t i = 0; i < count && i < pool.size(); ++i) held[pool[i]] = 1;
  };
  if (config.stratified) {
    std::vector<std::size_t> boundary, interior;
    for (std::size_t i = 0; i < n; ++i) (on_boundary(samples.points[i]) ? boundary : interior).push_back(i);
    const std::size_t total = holdout_size(n, config.holdout_fraction);
    std::size_t from_boundary = static_cast<std::size_t>(
        std::llround(config.holdout_fraction * static_cast<double>(boundary.size())));
    from_boundary = std::min(from_boundary, total);
    hold_from(boundary, from_boundary);
    hold_from(interior, total - from_boundary);
  } else {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    hold_from(all, holdout_size(n, config.holdout_fraction));
  }
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split;
  for (std::size_t i = 0; i < n; ++i) (held[i] ? split.second : split.first).push_back(i);
  return split;
}

std::size_t argmin_first(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("argmin_first: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[best]) best = i;
  return best;
}

GcvResult gcv_select(const SampleSet& samples, const DictionarySpec& base, const GcvConfig& config) {
  samples.validate();
  config.validate();
  const std::size_t n = samples.size();
  GcvResult result;
  result.validation_size = holdout_size(n, config.holdout_fraction);
  if (result.validation_size >= n) throw std::invalid_argument("gcv_select: holdout leaves no training points");
  result.training_size = n - result.validation_size;

  std::vector<int> orders = config.orders;
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  std::vector<int> feasible;
  for (int m : orders) {
    if (static_cast<std::size_t>(base.with_order(m).dimension()) <= result.training_size)
      feasible.push_back(m);
    else
      result.skipped_orders.push_back(m);
  }
  if (feasible.empty()) throw std::invalid_argument("gcv_select: no candidate order fits the training size");

  // Splits are shared by every candidate so the comparison is paired.
  std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> splits;
  for (int rep = 0; rep < config.repetitions; ++rep) splits.push_back(holdout_split(samples, config, rep));

  for (int m : feasible) {
    const auto spec = base.with_order(m);
    const ComplexMatrix a = build_design_matrix(samples.points, spec);
    GcvCandidate cand;
    cand.order = m;
    cand.dimension = spec.dimension();
    for (const auto& [train, valid] : splits) {
      ComplexMatrix a_train(static_cast<Eigen::Index>(train.size()), a.cols());
      ComplexVector y_train(static_cast<Eigen::Index>(train.size()));
      for (std::size_t i = 0; i < train.size(); ++i) {
        a_train.row(static_cast<Eigen::Index>(i)) = a.row(static_cast<Eigen::Index>(train[i]));
        y_train(static_cast<Eigen::Index>(i)) = samples.values(static_cast<Eigen::Index>(train[i]));
      }
      const auto fit = least_squares_fit<double>(a_train, y_train);
      ComplexVector pred(static_cast<Eigen::Index>(valid.size()));
      ComplexVector y_valid(static_cast<Eigen::Index>(valid.size()));
      for (std::size_t i = 0; i < valid.size(); ++i) {
        pred(static_cast<Eigen::Index>(i)) = a.row(static_cast<Eigen::Index>(valid[i])) * fit.coefficients;
        y_valid(static_cast<Eigen::Index>(i)) = samples.values(static_cast<Eigen::Index>(valid[i]));
      }
      if (config.truncation_bound) {
        pred = truncate_field(pred, *config.truncation_bound);
      } else if (config.truncation_factor) {
        const double bound = *config.truncation_factor * y_train.cwiseAbs().maxCoeff();
        if (bound > 0.0) pred = truncate_field(pred, bound);
      }
      cand.validation_mse.push_back((pred - y_valid).squaredNorm() / static_cast<double>(valid.size()));
    }
    cand.mean_validation_mse = std::accumulate(cand.validation_mse.begin(), cand.validation_mse.end(), 0.0) /
                               static_cast<double>(cand.validation_mse.size());
    result.candidates.push_back(std::move(cand));
  }

  std::vector<double> means;
  for (const auto& c : result.candidates) means.push_back(c.mean_validation_mse);
  result.selected_order = result.candidates[argmin_first(means)].order;
  result.final_fit = fit_dictionary(samples, base.with_order(result.selected_order));
  if (config.truncation_bound)
    result.final_fit.truncation_bound = config.truncation_bound;
  else if (config.truncation_factor)
    result.final_fit.truncation_bound = *config.truncation_factor * samples.values.cwiseAbs().maxCoeff();
  return result;
}

}  // namespace helmholtz
