#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "helmholtz/experiments.hpp"
#include "helmholtz/model_selection.hpp"

using namespace helmholtz;

namespace {

const DictionarySpec kFb{DictionaryKind::FourierBessel, 0, 12.0};

SampleSet noisy_samples(std::size_t n, double alpha, double sigma, std::uint64_t seed) {
  GroundTruthSpec gt;
  gt.seed = seed;
  const auto u = synth_solution(gt);
  auto pts = sample_nu_alpha({alpha, n, seed + 1, SamplingMode::IidMixture});
  return make_samples(std::move(pts), u, sigma, seed + 2);
}

GcvConfig orders_upto(int top, std::uint64_t seed = 0) {
  GcvConfig c;
  c.seed = seed;
  for (int m = 0; m <= top; ++m) c.orders.push_back(m);
  return c;
}

}  // namespace

TEST_CASE("argmin of a known convex curve, ties to the first") {
  std::vector<double> curve;
  for (int m = 0; m < 30; ++m) curve.push_back((m - 11.3) * (m - 11.3) + 2.0);
  CHECK(argmin_first(curve) == 11);
  CHECK(argmin_first({3.0, 1.0, 1.0, 2.0}) == 1);
  CHECK(argmin_first({5.0}) == 0);
  CHECK_THROWS_AS(argmin_first({}), std::invalid_argument);
}

TEST_CASE("holdout splits") {
  const auto s = noisy_samples(200, 0.5, 0.0, 3);
  GcvConfig c = orders_upto(3, 11);
  CHECK(holdout_size(200, 0.1) == 20);
  CHECK(holdout_size(5, 0.1) == 1);
  std::set<std::vector<std::size_t>> seen;
  for (int rep = 0; rep < 5; ++rep) {
    const auto [train, valid] = holdout_split(s, c, rep);
    CHECK(valid.size() == 20);
    CHECK(train.size() == 180);
    std::vector<std::size_t> all = train;
    all.insert(all.end(), valid.begin(), valid.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
    seen.insert(valid);
    // same repetition, same split
    CHECK(holdout_split(s, c, rep).second == valid);
  }
  CHECK(seen.size() == 5);

  c.stratified = true;
  std::size_t boundary_total = 0;
  for (const auto& p : s.points) boundary_total += on_boundary(p);
  for (int rep = 0; rep < 5; ++rep) {
    const auto [train, valid] = holdout_split(s, c, rep);
    std::size_t held_boundary = 0;
    for (auto i : valid) held_boundary += on_boundary(s.points[i]);
    CHECK(valid.size() == 20);
    CHECK(held_boundary == static_cast<std::size_t>(std::llround(0.1 * boundary_total)));
  }
}

TEST_CASE("gcv_select bookkeeping") {
  const auto s = noisy_samples(120, 0.5, 0.01, 5);
  auto c = orders_upto(30, 2);
  const auto r = gcv_select(s, kFb, c);
  CHECK(r.validation_size == 12);
  CHECK(r.training_size == 108);
  // orders with 2m+1 > 108 are skipped
  CHECK(r.candidates.back().order == 30);
  c.orders = {10, 60, 55, 20};
  const auto r2 = gcv_select(s, kFb, c);
  CHECK(r2.candidates.size() == 2);
  CHECK(r2.skipped_orders == std::vector<int>{55, 60});
  CHECK(r2.selected_order <= 53);
  for (const auto& cand : r.candidates) {
    CHECK(cand.validation_mse.size() == static_cast<std::size_t>(c.repetitions));
    double mean = 0.0;
    for (double v : cand.validation_mse) mean += v;
    CHECK(cand.mean_validation_mse == doctest::Approx(mean / c.repetitions).epsilon(1e-14));
  }
  CHECK(r.final_fit.spec.order == r.selected_order);
  CHECK(r.final_fit.coefficients.size() == 2 * r.selected_order + 1);
  // refit on all n samples
  const auto direct = fit_dictionary(s, kFb.with_order(r.selected_order));
  CHECK((direct.coefficients - r.final_fit.coefficients).norm() < 1e-12);
}

TEST_CASE("gcv_select errors") {
  const auto s = noisy_samples(20, 0.0, 0.0, 1);
  GcvConfig c;
  c.orders = {20, 30};
  CHECK_THROWS_AS(gcv_select(s, kFb, c), std::invalid_argument);
  c.orders = {};
  CHECK_THROWS_AS(gcv_select(s, kFb, c), std::invalid_argument);
  c.orders = {1};
  c.holdout_fraction = 1.5;
  CHECK_THROWS_AS(gcv_select(s, kFb, c), std::invalid_argument);
  c.holdout_fraction = 0.1;
  c.repetitions = 0;
  CHECK_THROWS_AS(gcv_select(s, kFb, c), std::invalid_argument);
}

TEST_CASE("gcv_select is deterministic and scale invariant") {
  const auto s = noisy_samples(200, 0.5, 0.05, 9);
  auto c = orders_upto(40, 4);
  c.truncation_factor.reset();
  const auto a = gcv_select(s, kFb, c);
  const auto b = gcv_select(s, kFb, c);
  CHECK(a.selected_order == b.selected_order);
  for (std::size_t i = 0; i < a.candidates.size(); ++i)
    CHECK(a.candidates[i].mean_validation_mse == b.candidates[i].mean_validation_mse);

  SampleSet scaled = s;
  const std::complex<double> factor(-3.0, 4.0);  // |factor|^2 = 25
  scaled.values *= factor;
  const auto sc = gcv_select(scaled, kFb, c);
  CHECK(sc.selected_order == a.selected_order);
  for (std::size_t i = 0; i < a.candidates.size(); ++i)
    CHECK(sc.candidates[i].mean_validation_mse ==
          doctest::Approx(25.0 * a.candidates[i].mean_validation_mse).epsilon(1e-8));

  // the relative truncation bound scales with y as well
  auto ct = c;
  ct.truncation_factor = 1.2;
  CHECK(gcv_select(scaled, kFb, ct).selected_order == gcv_select(s, kFb, ct).selected_order);
}

TEST_CASE("gcv pick tracks the exhaustive-sweep oracle") {
  // Noisy samples give a U-shaped true-error curve; the oracle order is its
  // argmin over the same candidates.
  const ErrorGrid grid(12.0, 52, 100, 256);
  int hits = 0;
  for (int t = 0; t < 10; ++t) {
    GroundTruthSpec gt;
    gt.seed = 1000 + t;
    const auto u = synth_solution(gt);
    const ComplexVector truth = grid.evaluate(u);
    auto pts = sample_nu_alpha({0.0, 400, static_cast<std::uint64_t>(77 + t), SamplingMode::IidMixture});
    const auto s = make_samples(std::move(pts), u, 0.01, 999 + t);
    auto c = orders_upto(40, t);
    c.truncation_factor.reset();
    const auto g = gcv_select(s, kFb, c);
    std::vector<double> errs;
    for (int m = 0; m <= 40; ++m) {
      const auto fit = fit_dictionary(s, kFb.with_order(m));
      errs.push_back(relative_l2_error(grid.quadrature(), truth, grid.evaluate(fit.coefficients)));
    }
    const int oracle = static_cast<int>(argmin_first(errs));
    CAPTURE(t);
    CAPTURE(oracle);
    CAPTURE(g.selected_order);
    hits += std::abs(g.selected_order - oracle) <= 2;
  }
  CHECK(hits >= 8);
}
