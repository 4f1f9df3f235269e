// Points on the unit disk, sampling from nu_alpha, and polar quadrature.

#ifndef HELMHOLTZ_GEOMETRY_HPP
#define HELMHOLTZ_GEOMETRY_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace helmholtz {

template <typename Scalar>
struct Point2 {
  Scalar x{0};
  Scalar y{0};

  static Point2 from_polar(Scalar r, Scalar theta) {
    using std::cos;
    using std::sin;
    return {r * cos(theta), r * sin(theta)};
  }

  Scalar radius() const {
    using std::hypot;
    return hypot(x, y);
  }

  /// Polar angle in [-pi, pi).
  Scalar angle() const {
    using std::atan2;
    const Scalar t = atan2(y, x);
    const Scalar pi = std::acos(Scalar(-1));
    return t >= pi ? t - Scalar(2) * pi : t;
  }

  friend bool operator==(const Point2&, const Point2&) = default;
};

using Point2d = Point2<double>;

enum class SamplingMode { IidMixture, FixedProportion };

std::string_view to_string(SamplingMode mode);
SamplingMode parse_sampling_mode(std::string_view text);

struct SamplingConfig {
  double alpha = 0.0;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  SamplingMode mode = SamplingMode::IidMixture;
};

/// Draws n points from nu_alpha = (1 - alpha) dx/pi + alpha dsigma/(2 pi).
/// Interior points use r = sqrt(U), boundary points lie exactly on r = 1.
std::vector<Point2d> sample_nu_alpha(const SamplingConfig& config);

/// True when the point was placed on the unit circle by the sampler.
inline bool on_boundary(const Point2d& p) { return std::abs(p.radius() - 1.0) < 1e-12; }

enum class QuadratureMeasure {
  NuAlpha,  // probability measure, total mass 1
  Area      // Lebesgue measure on the disk, total mass pi
};

/// Tensor rule on the disk: Gauss-Legendre in r (weight r) times the
/// trapezoid rule in theta, plus an optional ring of boundary nodes.
///
/// Nodes are stored ring by ring (radius outer, angle inner); the boundary
/// ring, when present, comes last.
struct DiskQuadrature {
  std::vector<Point2d> nodes;
  std::vector<double> weights;

  int n_r = 0;
  int n_theta = 0;
  std::vector<double> radii;           // interior ring radii, empty when alpha == 1
  std::vector<double> ring_weights;    // weight of each node on interior ring i
  bool has_boundary_ring = false;
  double boundary_node_weight = 0.0;

  std::size_t size() const { return nodes.size(); }
  double total_mass() const;

  /// theta of node k on any ring: -pi + 2 pi k / n_theta.
  double angle(int k) const;
};

DiskQuadrature disk_quadrature(int n_r, int n_theta, double alpha,
                               QuadratureMeasure measure = QuadratureMeasure::NuAlpha);

/// Area-measure rule used for every L2(disk, dx) error in the experiments.
inline constexpr int kErrorQuadratureRadial = 200;
inline constexpr int kErrorQuadratureAngular = 512;

}  // namespace helmholtz

#endif  // HELMHOLTZ_GEOMETRY_HPP
