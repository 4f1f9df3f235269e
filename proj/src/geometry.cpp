#include "helmholtz/geometry.hpp"

#include <numeric>
#include <stdexcept>

#include "helmholtz/random.hpp"
#include "helmholtz/special_functions.hpp"

namespace helmholtz {

std::string_view to_string(SamplingMode mode) {
  return mode == SamplingMode::IidMixture ? "iid-mixture" : "fixed-proportion";
}

SamplingMode parse_sampling_mode(std::string_view text) {
  if (text == "iid-mixture") return SamplingMode::IidMixture;
  if (text == "fixed-proportion") return SamplingMode::FixedProportion;
  throw std::invalid_argument("unknown sampling mode '" + std::string(text) + "'");
}

std::vector<Point2d> sample_nu_alpha(const SamplingConfig& config) {
  if (!(config.alpha >= 0.0 && config.alpha <= 1.0))
    throw std::invalid_argument("sample_nu_alpha: alpha must lie in [0, 1]");
  if (config.n == 0) throw std::invalid_argument("sample_nu_alpha: n must be positive");

  Rng rng(config.seed);
  std::vector<char> boundary(config.n, 0);
  if (config.mode == SamplingMode::IidMixture) {
    for (auto& b : boundary) b = rng.uniform() < config.alpha ? 1 : 0;
  } else {
    const auto count = static_cast<std::size_t>(std::llround(config.alpha * config.n));
    std::fill(boundary.begin(), boundary.begin() + count, 1);
    rng.shuffle(boundary);
  }

  std::vector<Point2d> points;
  points.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    const double theta = 2.0 * M_PI * rng.uniform() - M_PI;
    const double r = boundary[i] ? 1.0 : std::sqrt(rng.uniform());
    points.push_back(Point2d::from_polar(r, theta));
  }
  return points;
}

double DiskQuadrature::total_mass() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double DiskQuadrature::angle(int k) const {
  return -M_PI + 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n_theta);
}

DiskQuadrature disk_quadrature(int n_r, int n_theta, double alpha, QuadratureMeasure measure) {
  if (n_r < 2 || n_theta < 2) throw std::invalid_argument("disk_quadrature: need n_r, n_theta >= 2");
  if (measure == QuadratureMeasure::Area) alpha = 0.0;
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("disk_quadrature: alpha must lie in [0, 1]");

  DiskQuadrature q;
  q.n_r = n_r;
  q.n_theta = n_theta;
  const double dtheta = 2.0 * M_PI / n_theta;
  // nu_alpha normalises the area pi to 1.
  const double interior_scale = measure == QuadratureMeasure::Area ? 1.0 : (1.0 - alpha) / M_PI;

  if (interior_scale > 0.0) {
    const auto rule = gauss_legendre<double>(n_r);
    q.radii = rule.nodes;
    q.ring_weights.resize(n_r);
    for (int i = 0; i < n_r; ++i) {
      const double r = rule.nodes[i];
      q.ring_weights[i] = interior_scale * rule.weights[i] * r * dtheta;
      for (int k = 0; k < n_theta; ++k) {
        q.nodes.push_back(Point2d::from_polar(r, q.angle(k)));
        q.weights.push_back(q.ring_weights[i]);
      }
    }
  }
  if (alpha > 0.0) {
    q.has_boundary_ring = true;
    q.boundary_node_weight = alpha / n_theta;
    for (int k = 0; k < n_theta; ++k) {
      q.nodes.push_back(Point2d::from_polar(1.0, q.angle(k)));
      q.weights.push_back(q.boundary_node_weight);
    }
  }
  return q;
}

}  // namespace helmholtz
