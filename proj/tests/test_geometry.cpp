#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "helmholtz/geometry.hpp"
#include "helmholtz/special_functions.hpp"

using namespace helmholtz;

TEST_CASE("Point2 polar form") {
  const auto p = Point2d::from_polar(0.5, 1.0);
  CHECK(p.radius() == doctest::Approx(0.5));
  CHECK(p.angle() == doctest::Approx(1.0));
  CHECK(Point2d{-1.0, 0.0}.angle() == doctest::Approx(-M_PI));
  CHECK(Point2d{-1.0, -0.0}.angle() < M_PI);
}

TEST_CASE("sampling with no boundary mass stays strictly inside") {
  const auto pts = sample_nu_alpha({0.0, 100, 7, SamplingMode::IidMixture});
  REQUIRE(pts.size() == 100);
  for (const auto& p : pts) CHECK(p.radius() < 1.0);
}

TEST_CASE("boundary-only sampling lies on the circle") {
  for (auto mode : {SamplingMode::IidMixture, SamplingMode::FixedProportion}) {
    const auto pts = sample_nu_alpha({1.0, 100, 7, mode});
    for (const auto& p : pts) CHECK(std::abs(p.radius() - 1.0) < 1e-14);
  }
}

TEST_CASE("iid mixture boundary fraction is binomial") {
  const std::size_t n = 100000;
  const auto pts = sample_nu_alpha({0.5, n, 11, SamplingMode::IidMixture});
  std::size_t boundary = 0;
  for (const auto& p : pts) boundary += on_boundary(p) ? 1 : 0;
  const double sigma = std::sqrt(n * 0.5 * 0.5);
  CHECK(std::abs(static_cast<double>(boundary) - 0.5 * n) < 3.0 * sigma);
}

TEST_CASE("boundary fraction over many small draws converges to alpha") {
  const double alpha = 0.3;
  std::size_t boundary = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto pts = sample_nu_alpha({alpha, 50, seed, SamplingMode::IidMixture});
    for (const auto& p : pts) boundary += on_boundary(p) ? 1 : 0;
    total += pts.size();
  }
  const double sigma = std::sqrt(total * alpha * (1 - alpha));
  CHECK(std::abs(static_cast<double>(boundary) - alpha * total) < 3.0 * sigma);
}

TEST_CASE("fixed proportion places exactly round(alpha n) points on the boundary") {
  for (double alpha : {0.0, 0.1, 0.25, 0.9, 1.0}) {
    const auto pts = sample_nu_alpha({alpha, 401, 3, SamplingMode::FixedProportion});
    std::size_t boundary = 0;
    for (const auto& p : pts) boundary += on_boundary(p) ? 1 : 0;
    CHECK(boundary == static_cast<std::size_t>(std::llround(alpha * 401)));
  }
}

TEST_CASE("interior samples are uniform in area") {
  // P(r < 1/2) = 1/4 under the area measure.
  const std::size_t n = 40000;
  const auto pts = sample_nu_alpha({0.0, n, 5, SamplingMode::IidMixture});
  std::size_t inner = 0;
  double mean_angle = 0.0;
  for (const auto& p : pts) {
    inner += p.radius() < 0.5 ? 1 : 0;
    mean_angle += p.angle() / n;
    CHECK(p.radius() <= 1.0 + 1e-12);
  }
  CHECK(std::abs(static_cast<double>(inner) - 0.25 * n) < 3.0 * std::sqrt(n * 0.25 * 0.75));
  CHECK(std::abs(mean_angle) < 3.0 * M_PI / std::sqrt(3.0 * n));
}

TEST_CASE("same seed gives bit-identical draws") {
  const SamplingConfig cfg{0.4, 500, 1234, SamplingMode::IidMixture};
  CHECK(sample_nu_alpha(cfg) == sample_nu_alpha(cfg));
  auto other = cfg;
  other.seed = 1235;
  CHECK(sample_nu_alpha(cfg) != sample_nu_alpha(other));
}

TEST_CASE("sampling rejects invalid configuration") {
  CHECK_THROWS_AS(sample_nu_alpha({-0.1, 10, 0, SamplingMode::IidMixture}), std::invalid_argument);
  CHECK_THROWS_AS(sample_nu_alpha({0.5, 0, 0, SamplingMode::IidMixture}), std::invalid_argument);
  CHECK_THROWS_AS(parse_sampling_mode("stratified"), std::invalid_argument);
  CHECK(parse_sampling_mode(to_string(SamplingMode::FixedProportion)) == SamplingMode::FixedProportion);
}

TEST_CASE("quadrature total mass") {
  for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
    const auto q = disk_quadrature(40, 64, alpha);
    CHECK(q.total_mass() == doctest::Approx(1.0).epsilon(1e-13));
    for (double w : q.weights) CHECK(w > 0.0);
  }
  const auto area = disk_quadrature(40, 64, 0.0, QuadratureMeasure::Area);
  CHECK(area.total_mass() == doctest::Approx(M_PI).epsilon(1e-13));
}

TEST_CASE("quadrature integrates r^2 over the area measure") {
  const auto q = disk_quadrature(30, 16, 0.0, QuadratureMeasure::Area);
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) sum += q.weights[i] * std::pow(q.nodes[i].radius(), 2);
  CHECK(std::abs(sum - M_PI / 2) < 1e-12);
}

TEST_CASE("quadrature kills angular harmonics") {
  const int n_theta = 32;
  const auto q = disk_quadrature(10, n_theta, 0.4);
  for (int k = 1; k < n_theta; ++k) {
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
      sum += q.weights[i] * std::polar(1.0, k * q.nodes[i].angle());
    CHECK(std::abs(sum) < 1e-13);
  }
}

TEST_CASE("quadrature reproduces the Fourier-Bessel norm") {
  const auto q = disk_quadrature(kErrorQuadratureRadial, kErrorQuadratureAngular, 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& p = q.nodes[i];
    const std::complex<double> b = std::polar(bessel_j(3, 12.0 * p.radius()), 3 * p.angle());
    sum += q.weights[i] * std::norm(b);
  }
  CHECK(sum == doctest::Approx(fb_norm_sq(3, 12.0, 0.0)).epsilon(1e-10));
}

TEST_CASE("quadrature layout") {
  const auto q = disk_quadrature(5, 8, 0.5);
  CHECK(q.size() == 5 * 8 + 8);
  CHECK(q.has_boundary_ring);
  CHECK(q.radii.size() == 5);
  CHECK(q.nodes[8].radius() == doctest::Approx(q.radii[1]));
  CHECK(q.nodes.back().radius() == doctest::Approx(1.0));
  const auto ring = disk_quadrature(5, 8, 1.0);
  CHECK(ring.size() == 8);
  CHECK(ring.radii.empty());
  CHECK_THROWS_AS(disk_quadrature(1, 8, 0.0), std::invalid_argument);
}
