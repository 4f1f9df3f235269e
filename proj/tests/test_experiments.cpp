#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <sstream>

#include "helmholtz/experiments.hpp"
#include "helmholtz/random.hpp"

using namespace helmholtz;
using Complex = std::complex<double>;

namespace {

HelmholtzField random_field(std::uint64_t seed, int count = 20) {
  GroundTruthSpec gt;
  gt.seed = seed;
  gt.count = count;
  return synth_solution(gt);
}

ComplexVector random_coefficients(Eigen::Index size, std::uint64_t seed) {
  Rng rng(seed);
  ComplexVector c(size);
  for (Eigen::Index i = 0; i < size; ++i) c(i) = Complex(rng.normal(), rng.normal());
  return c;
}

const DiskQuadrature& area_quad() {
  static const DiskQuadrature q = disk_quadrature(kErrorQuadratureRadial, kErrorQuadratureAngular, 0.0,
                                                  QuadratureMeasure::Area);
  return q;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.trials = 2;
  c.alphas = {0.0, 0.9};
  c.m_min = 10;
  c.m_max = 14;
  c.seed = 123;
  return c;
}

}  // namespace

TEST_CASE("ground truth fields") {
  const auto single = HelmholtzField::plane_waves(12.0, {{0.7, Complex(1.0)}});
  CHECK(std::abs(single(Point2d{0.0, 0.0}) - Complex(1.0)) < 1e-15);

  const auto u = random_field(5);
  CHECK(u.terms().size() == 20);
  CHECK(helmholtz_residual(u, 12.0, 1e-3) < 0.03);
  const auto again = random_field(5);
  CHECK(again(Point2d{0.2, -0.1}) == u(Point2d{0.2, -0.1}));

  const auto v = random_field(6, 3);
  const auto w = u + v;
  for (const auto& p : {Point2d{0.1, 0.4}, Point2d{-0.6, 0.2}, Point2d::from_polar(1.0, 2.0)})
    CHECK(std::abs(w(p) - u(p) - v(p)) < 1e-13);

  // circular Gaussian coefficients with unit variance
  const auto big = random_field(7, 20000);
  double second = 0.0;
  Complex first(0.0);
  for (const auto& t : big.terms()) {
    second += std::norm(t.coefficient);
    first += t.coefficient;
  }
  CHECK(second / 20000 == doctest::Approx(1.0).epsilon(0.03));
  CHECK(std::abs(first) / 20000 < 0.03);
}

TEST_CASE("fields from dictionaries") {
  const Point2d p{0.3, -0.55};
  for (auto kind : {DictionaryKind::FourierBessel, DictionaryKind::PlaneWave, DictionaryKind::AliasedPlaneWave}) {
    const DictionarySpec spec{kind, 6, 12.0};
    const auto c = random_coefficients(spec.dimension(), 17);
    const auto f = HelmholtzField::from_dictionary(spec, c);
    const Complex direct = eval_atoms(spec, p) * c;
    CHECK(std::abs(f(p) - direct) < 1e-12 * std::max(1.0, std::abs(direct)));
  }
  CHECK_THROWS_AS(HelmholtzField::from_dictionary({DictionaryKind::SquareFourier, 1, 12.0}, ComplexVector::Zero(9)),
                  std::invalid_argument);
  GroundTruthSpec gt;
  gt.kind = GroundTruthSpec::Kind::Coefficients;
  gt.dictionary = {DictionaryKind::PlaneWave, 0, 12.0};
  gt.coefficients = ComplexVector::Ones(1);
  CHECK(std::abs(synth_solution(gt)(Point2d{0.0, 0.0}) - Complex(1.0)) < 1e-15);
}

TEST_CASE("Fourier-Bessel expansion of a field") {
  const auto u = random_field(11) + HelmholtzField::from_dictionary({DictionaryKind::FourierBessel, 3, 12.0},
                                                                     random_coefficients(7, 2));
  const auto d = u.fourier_bessel_coefficients(52);
  const auto as_fb = HelmholtzField::from_dictionary({DictionaryKind::FourierBessel, 52, 12.0}, d);
  for (const auto& p : {Point2d{0.0, 0.0}, Point2d{0.5, 0.5}, Point2d::from_polar(1.0, -2.2)})
    CHECK(std::abs(as_fb(p) - u(p)) < 1e-11);
  CHECK_THROWS_AS(u.fourier_bessel_coefficients(2), std::invalid_argument);
}

TEST_CASE("error grid evaluation matches pointwise evaluation") {
  const ErrorGrid grid(12.0, 60, 40, 128);
  const auto u = random_field(21);
  const ComplexVector fast = grid.evaluate(u);
  const auto& q = grid.quadrature();
  REQUIRE(fast.size() == static_cast<Eigen::Index>(q.size()));
  double worst = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) worst = std::max(worst, std::abs(fast(i) - u(q.nodes[i])));
  CHECK(worst < 1e-11);
  CHECK_THROWS_AS(ErrorGrid(12.0, 70, 10, 128), std::invalid_argument);
}

TEST_CASE("relative L2 error") {
  const auto u = random_field(31);
  const auto& quad = area_quad();
  CHECK(l2_error(u, u, quad) == 0.0);
  CHECK(l2_error(u, [](const Point2d&) { return Complex(0.0); }, quad) == doctest::Approx(1.0).epsilon(1e-15));

  // u + b_5: error^2 = ||b_5||^2 / ||u||^2 in L2(disk, dx)
  const auto b5 = [](const Point2d& p) { return eval_fourier_bessel(5, 12.0, p); };
  const double err = l2_error(u, [&](const Point2d& p) { return u(p) + b5(p); }, quad);
  const double u_norm_sq = std::pow(l2_error([](const Point2d&) { return Complex(1.0); },
                                             [&](const Point2d& p) { return Complex(1.0) - u(p); }, quad),
                                    2) * M_PI;
  CHECK(err * err * u_norm_sq == doctest::Approx(M_PI * fb_norm_sq(5, 12.0, 0.0)).epsilon(1e-10));

  const auto zero = [](const Point2d&) { return Complex(0.0); };
  CHECK_THROWS_AS(l2_error(zero, u, quad), std::domain_error);
}

TEST_CASE("square Fourier Gram kernel") {
  const SquareFourierGram gram(3, M_PI);
  CHECK(gram.kernel(0, 0) == doctest::Approx(M_PI).epsilon(1e-15));
  for (auto [dx, dy] : {std::pair{1, 0}, {2, 3}, {6, 6}, {-4, 1}}) {
    const double d = M_PI * std::hypot(dx, dy);
    CHECK(gram.kernel(dx, dy) ==
          doctest::Approx(2 * M_PI * boost::math::cyl_bessel_j(1, d) / d).epsilon(1e-12));
  }
  // against quadrature of e^{i (b - a) . x}
  const auto& quad = area_quad();
  Complex sum(0.0);
  for (std::size_t i = 0; i < quad.size(); ++i)
    sum += quad.weights[i] * std::polar(1.0, M_PI * (2 * quad.nodes[i].x - 1 * quad.nodes[i].y));
  CHECK(std::abs(sum - gram.kernel(2, -1)) < 1e-10);
  CHECK(SquareFourierGram::cross(1.0, 2.0, 1.0, 2.0) == doctest::Approx(M_PI));
}

TEST_CASE("exact and quadrature error routes agree") {
  const ErrorGrid grid(12.0, 52);
  const auto u = random_field(41);
  const ComplexVector truth = grid.evaluate(u);
  const DictionarySpec spec{DictionaryKind::SquareFourier, 3, 12.0};
  ComplexVector c = 0.3 * random_coefficients(spec.dimension(), 5);
  const double exact = SquareFourierGram(3, M_PI).relative_error(u, c);
  const double quad = relative_l2_error(grid.quadrature(), truth, estimate_values({spec, c, std::nullopt}, grid));
  CHECK(exact == doctest::Approx(quad).epsilon(1e-9));
  // sparse coefficient vector, as OMP produces
  c.setZero();
  c(3) = Complex(0.5, -1.0);
  c(30) = Complex(2.0, 0.1);
  CHECK(SquareFourierGram(3, M_PI).relative_error(u, c) ==
        doctest::Approx(relative_l2_error(grid.quadrature(), truth, estimate_values({spec, c, std::nullopt}, grid)))
            .epsilon(1e-9));
  // estimate_error picks the exact route without truncation and the grid with it
  CHECK(estimate_error({spec, c, std::nullopt}, u, grid, truth) ==
        doctest::Approx(estimate_error({spec, c, 1e9}, u, grid, truth)).epsilon(1e-9));
}

TEST_CASE("truncation enters the error through the grid") {
  const ErrorGrid grid(12.0, 52, 60, 128);
  const auto u = random_field(51);
  const ComplexVector truth = grid.evaluate(u);
  const double sup = truth.cwiseAbs().maxCoeff();
  const DictionarySpec spec{DictionaryKind::FourierBessel, 52, 12.0};
  const ComplexVector d = u.fourier_bessel_coefficients(52);
  CHECK(estimate_error({spec, d, std::nullopt}, u, grid, truth) < 1e-12);
  CHECK(estimate_error({spec, d, 1.2 * sup}, u, grid, truth) < 1e-12);
  // clamping below sup |u| cuts the field
  const double clipped = estimate_error({spec, d, 0.5 * sup}, u, grid, truth);
  CHECK(clipped > 1e-3);
  const ComplexVector values = estimate_values({spec, d, 0.5 * sup}, grid);
  CHECK(values.cwiseAbs().maxCoeff() <= 0.5 * sup * (1 + 1e-14));
}

TEST_CASE("best approximation error") {
  const auto& quad = area_quad();
  const DictionarySpec fb{DictionaryKind::FourierBessel, 8, 12.0};
  const auto in_space = HelmholtzField::from_dictionary(fb, random_coefficients(17, 3));
  CHECK(best_approximation_error(in_space, fb, quad) < 1e-10);

  const auto u = random_field(61);
  const double u_norm = std::sqrt(M_PI) * l2_error([](const Point2d&) { return Complex(1.0); },
                                                   [&](const Point2d& p) { return Complex(1.0) - u(p); }, quad);
  std::vector<double> sigma;
  for (int m : {4, 8, 12, 16, 20, 24, 28}) sigma.push_back(best_approximation_error(u, fb.with_order(m), quad) / u_norm);
  for (std::size_t i = 1; i < sigma.size(); ++i) CHECK(sigma[i] <= sigma[i - 1] * (1 + 1e-12));
  // fast decay once 2m+1 exceeds about 2 lambda
  CHECK(sigma.back() < 1e-5);
  CHECK(sigma.back() < 1e-4 * sigma[2]);
  // plane-wave span, through its DFT frame
  CHECK(best_approximation_error(u, {DictionaryKind::PlaneWave, 24, 12.0}, quad) / u_norm < 1e-3);
}

TEST_CASE("estimation error is at least the best-approximation error") {
  ExperimentConfig c = small_config();
  c.trials = 1;
  const ErrorGrid grid(12.0, 60);
  const auto data = make_trial(c, 400, 0, 0);
  const auto errors = trial_errors(c, Method::FourierBesselLs, data, grid);
  const auto& quad = grid.quadrature();
  const ComplexVector truth = grid.evaluate(data.truth);
  double u_norm_sq = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) u_norm_sq += quad.weights[i] * std::norm(truth(i));
  for (const auto& [dim, err] : errors) {
    const int m = static_cast<int>(dim / 2);
    const double sigma = best_approximation_error(data.truth, {DictionaryKind::FourierBessel, m, 12.0}, quad);
    CHECK(err >= sigma / std::sqrt(u_norm_sq) * (1 - 1e-9));
  }
}

TEST_CASE("trivial error curve") {
  ExperimentConfig c;
  c.trials = 1;
  c.alphas = {0.0};
  c.m_min = c.m_max = 40;
  const auto curve = run_error_curve(c);
  REQUIRE(curve.rows.size() == 1);
  CHECK(curve.rows[0].dimension == 81);
  CHECK(curve.rows[0].mean_rel_l2 < 1e-6);
  CHECK(curve.rows[0].std_rel_l2 == 0.0);
  CHECK(curve.rows[0].trials == 1);
}

TEST_CASE("error curve rows aggregate the per-trial log") {
  const auto c = small_config();
  const auto curve = run_error_curve(c);
  CHECK(curve.rows.size() == 2 * 5);
  CHECK(curve.records.size() == 2 * 2 * 5);
  for (const auto& row : curve.rows) {
    std::vector<double> errs;
    for (const auto& r : curve.records)
      if (r.alpha == row.alpha && r.knob == row.dimension) errs.push_back(r.rel_l2);
    REQUIRE(errs.size() == 2);
    CHECK(row.mean_rel_l2 == doctest::Approx((errs[0] + errs[1]) / 2).epsilon(1e-15));
    CHECK(row.std_rel_l2 == doctest::Approx(std::abs(errs[0] - errs[1]) / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(row.mean_rel_l2 >= 0.0);
    CHECK(row.std_rel_l2 >= 0.0);
  }
  // rows sorted by alpha, then dimension
  for (std::size_t i = 1; i < curve.rows.size(); ++i)
    CHECK(std::pair(curve.rows[i - 1].alpha, curve.rows[i - 1].dimension) <
          std::pair(curve.rows[i].alpha, curve.rows[i].dimension));
}

TEST_CASE("trials are shared across methods and reproducible") {
  const auto c = small_config();
  const auto a = make_trial(c, 100, 1, 1);
  const auto b = make_trial(c, 100, 1, 1);
  CHECK(a.samples.values == b.samples.values);
  CHECK(a.samples.points == b.samples.points);
  CHECK(make_trial(c, 100, 0, 1).samples.points != a.samples.points);
  // same truth for every alpha of a trial
  CHECK(make_trial(c, 100, 0, 1).truth(Point2d{0.1, 0.1}) == a.truth(Point2d{0.1, 0.1}));
  auto fixed = c;
  fixed.redraw_truth = false;
  CHECK(make_trial(fixed, 100, 0, 0).truth(Point2d{0.1, 0.1}) == make_trial(fixed, 100, 0, 3).truth(Point2d{0.1, 0.1}));
  CHECK(make_trial(c, 100, 0, 0).truth(Point2d{0.1, 0.1}) != make_trial(c, 100, 0, 3).truth(Point2d{0.1, 0.1}));

  std::ostringstream x, y;
  write_curve_csv(x, run_error_curve(c).rows);
  write_curve_csv(y, run_error_curve(c).rows);
  CHECK(x.str() == y.str());
}

TEST_CASE("method feasibility") {
  ExperimentConfig c = small_config();
  c.square_order = 9;
  const ErrorGrid grid(12.0, 60);
  const auto data = make_trial(c, 100, 0, 0);
  std::vector<std::string> notices;
  const auto sq = trial_errors(c, Method::SquareFourierLs, data, grid, &notices);
  CHECK(sq.size() == 5);  // K = 0..4, since 11^2 > 100
  CHECK(sq.back().first == 81);
  REQUIRE(notices.size() == 1);
  c.omp_order = 4;  // 81 atoms <= 100 samples
  notices.clear();
  CHECK(trial_errors(c, Method::Omp, data, grid, &notices).empty());
  CHECK(notices.size() == 1);
  c.omp_order = 10;
  c.omp_step = 20;
  const auto omp = trial_errors(c, Method::Omp, data, grid);
  REQUIRE(omp.size() == 5);
  CHECK(omp.front().first == 20);
  CHECK(omp.back().first == 100);
}

TEST_CASE("best of curve") {
  ErrorCurve curve;
  curve.rows = {{Method::Omp, 0.0, 10, 0.5, 0, 1},
                {Method::Omp, 0.0, 20, 0.2, 0, 1},
                {Method::Omp, 0.5, 10, 0.2, 0, 1},
                {Method::Omp, 0.5, 20, 0.3, 0, 1}};
  const auto best = best_of_curve(curve, 400);
  CHECK(best.best_err == 0.2);
  CHECK(best.best_alpha == 0.0);  // tie goes to the smaller alpha
  CHECK(best.best_dim_or_iters == 20);
  CHECK(best.n == 400);
}

TEST_CASE("CSV formatting") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(-2.5e-300) == "-2.5e-300");
  CHECK(format_real(1.0 / 3.0) == "0.33333333333333331");
  std::ostringstream out;
  write_best_csv(out, {{Method::FourierBesselLs, 400, 0.125, 65, 0.9}});
  CHECK(out.str() == "method,n,best_err,best_dim_or_iters,best_alpha\nfourier_bessel_ls,400,0.125,65,0.90000000000000002\n");
  std::ostringstream curve;
  write_curve_csv(curve, {});
  CHECK(curve.str() == "method,alpha,dim,mean_rel_l2,std_rel_l2,trials\n");
  GcvResult g;
  g.selected_order = 2;
  g.candidates = {{1, 3, 0.5, {}}, {2, 5, 0.25, {}}};
  std::ostringstream gcv;
  write_gcv_csv(gcv, g);
  CHECK(gcv.str() == "m,dim,val_mse,selected\n1,3,0.5,0\n2,5,0.25,1\n");
  StabilityReport k;
  k.alpha = 0.5;
  k.base.lambda = 12.0;
  k.profile = {{3, 7, 12.5}};
  std::ostringstream kb;
  write_kbound_csv(kb, k);
  CHECK(kb.str() == "m,dim,K,alpha,lambda\n3,7,12.5,0.5,12\n");
}

TEST_CASE("configuration files") {
  const auto c = parse_config(R"({"schema_version": 1})");
  CHECK(c.lambda == 12.0);
  CHECK(c.n == 400);
  CHECK(c.alphas == std::vector<double>{0.0, 0.1, 0.5, 0.9, 1.0});
  CHECK(c.trials == 10);
  CHECK(c.square_order == 9);
  CHECK(c.omp_order == 40);
  CHECK(c.rng == "mt19937_64");

  const auto d = parse_config(
      R"({"schema_version": 1, "method": "omp", "alphas": [0.25], "sampling": "fixed-proportion",
          "truncation_reference": "samples", "omp_max_iterations": 50, "seed": 99})");
  CHECK(d.method == Method::Omp);
  CHECK(d.alphas == std::vector<double>{0.25});
  CHECK(d.sampling == SamplingMode::FixedProportion);
  CHECK(d.truncation_reference == ExperimentConfig::BoundReference::Samples);
  CHECK(d.omp_max_iterations == 50);
  CHECK(d.seed == 99);

  const auto round = parse_config(config_to_json(d));
  CHECK(config_to_json(round) == config_to_json(d));

  CHECK_THROWS_AS(parse_config(R"({"lambda": 12})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 2})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "lamda": 3})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "alphas": [1.5]})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "rng": "pcg64"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "trials": "ten"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_method("fourier"), std::invalid_argument);
}
