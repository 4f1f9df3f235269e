// Bessel functions of the first kind (integer order) and the radial norms of
// Fourier-Bessel functions on the unit disk.
//
// J_n(x) for x > 0 is computed either by the ascending power series (x <= 1)
// or by Miller's backward recurrence normalised with
//   J_0(x) + 2 * sum_{k>=1} J_{2k}(x) = 1.
// Both paths give an absolute error close to machine precision for the
// supported range |n| <= 200, 0 <= x <= 50.

#ifndef HELMHOLTZ_SPECIAL_FUNCTIONS_HPP
#define HELMHOLTZ_SPECIAL_FUNCTIONS_HPP

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace helmholtz {

/// Largest |order| accepted by bessel_j.
inline constexpr int kMaxBesselOrder = 200;

/// Gauss-Legendre nodes used by the quadrature route of fb_norm_sq.
inline constexpr int kNormQuadratureNodes = 400;

namespace detail {

template <typename Scalar>
Scalar bessel_series(int order, Scalar x) {
  using std::abs;
  using std::exp;
  using std::log;
  using std::lgamma;
  if (x == Scalar(0)) return order == 0 ? Scalar(1) : Scalar(0);
  const Scalar half = x / Scalar(2);
  Scalar term = exp(Scalar(order) * log(half) - lgamma(Scalar(order + 1)));
  if (term == Scalar(0)) return Scalar(0);
  const Scalar q = -half * half;
  Scalar sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (Scalar(k) * Scalar(order + k));
    sum += term;
    if (abs(term) <= std::numeric_limits<Scalar>::epsilon() * abs(sum) * Scalar(0.25)) break;
  }
  return sum;
}

// Starting order for the backward recurrence. The error in J_n introduced by
// J_{start+1} = 0 decays like (J_start / J_n)^2, so a margin of order
// sqrt(160 * top) is far more than double precision needs.
inline int miller_start(int max_order, double x) {
  const int top = std::max(max_order, static_cast<int>(std::ceil(x)));
  int start = top + 20 + static_cast<int>(std::sqrt(160.0 * (top + 1)));
  return start + (start & 1);
}

}  // namespace detail

/// J_0(x), ..., J_{max_order}(x) for x >= 0.
///
/// Orders above kMaxBesselOrder are allowed here; internal routines (norm
/// series, alias sums) need a few dozen orders past the public range.
template <typename Scalar>
std::vector<Scalar> bessel_j_sequence(int max_order, Scalar x) {
  if (max_order < 0) throw std::invalid_argument("bessel_j_sequence: negative max_order");
  if (!(x >= Scalar(0))) throw std::domain_error("bessel_j_sequence: x must be nonnegative");
  std::vector<Scalar> out(static_cast<std::size_t>(max_order) + 1, Scalar(0));
  if (x == Scalar(0)) {
    out[0] = Scalar(1);
    return out;
  }
  if (x <= Scalar(1)) {
    for (int n = 0; n <= max_order; ++n) out[n] = detail::bessel_series(n, x);
    return out;
  }

  using std::abs;
  using std::sqrt;
  const Scalar big = sqrt(std::numeric_limits<Scalar>::max()) / Scalar(16);
  const Scalar rescale = Scalar(1) / big;
  const int start = detail::miller_start(max_order, static_cast<double>(x));
  const Scalar two_over_x = Scalar(2) / x;

  Scalar next = Scalar(0);  // J_{k+1}
  Scalar curr = Scalar(1);  // J_k, unnormalised
  Scalar even_sum = Scalar(0);
  for (int k = start; k > 0; --k) {
    const Scalar prev = Scalar(k) * two_over_x * curr - next;  // J_{k-1}
    next = curr;
    curr = prev;
    if (abs(curr) > big) {
      curr *= rescale;
      next *= rescale;
      even_sum *= rescale;
      for (int n = k; n <= max_order; ++n) out[n] *= rescale;
    }
    if (k - 1 <= max_order) out[k - 1] = curr;
    if (((k - 1) & 1) == 0 && k - 1 > 0) even_sum += curr;
  }
  const Scalar norm = curr + Scalar(2) * even_sum;
  for (auto& v : out) v /= norm;
  return out;
}

/// J_order(x) for |order| <= kMaxBesselOrder and x >= 0. Negative orders use
/// J_{-n} = (-1)^n J_n.
template <typename Scalar>
Scalar bessel_j(int order, Scalar x) {
  if (std::abs(order) > kMaxBesselOrder)
    throw std::out_of_range("bessel_j: order " + std::to_string(order) + " outside [-" +
                            std::to_string(kMaxBesselOrder) + ", " +
                            std::to_string(kMaxBesselOrder) + "]");
  if (!(x >= Scalar(0))) throw std::domain_error("bessel_j: x must be nonnegative");
  const int n = std::abs(order);
  Scalar value;
  if (x <= Scalar(1)) {
    value = detail::bessel_series(n, x);
  } else {
    value = bessel_j_sequence(n, x)[n];
  }
  return (order < 0 && (n & 1)) ? -value : value;
}

template <typename Scalar>
struct GaussLegendreRule {
  std::vector<Scalar> nodes;
  std::vector<Scalar> weights;
};

/// n-point Gauss-Legendre rule on [a, b], nodes ascending.
template <typename Scalar>
GaussLegendreRule<Scalar> gauss_legendre(int n, Scalar a = Scalar(0), Scalar b = Scalar(1)) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  using std::abs;
  using std::cos;
  const Scalar pi = std::acos(Scalar(-1));
  GaussLegendreRule<Scalar> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const Scalar mid = (a + b) / Scalar(2);
  const Scalar half = (b - a) / Scalar(2);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Scalar z = cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
    Scalar dp = Scalar(0);
    for (int iter = 0; iter < 100; ++iter) {
      Scalar p0 = Scalar(1);
      Scalar p1 = z;
      for (int k = 2; k <= n; ++k) {
        const Scalar p2 = (Scalar(2 * k - 1) * z * p1 - Scalar(k - 1) * p0) / Scalar(k);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = Scalar(1);
      dp = Scalar(n) * (z * p1 - p0) / (z * z - Scalar(1));
      const Scalar dz = p1 / dp;
      z -= dz;
      if (abs(dz) <= Scalar(4) * std::numeric_limits<Scalar>::epsilon()) break;
    }
    // Refresh the derivative at the converged node.
    {
      Scalar p0 = Scalar(1);
      Scalar p1 = z;
      for (int k = 2; k <= n; ++k) {
        const Scalar p2 = (Scalar(2 * k - 1) * z * p1 - Scalar(k - 1) * p0) / Scalar(k);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = Scalar(1);
      dp = Scalar(n) * (z * p1 - p0) / (z * z - Scalar(1));
    }
    const Scalar w = Scalar(2) / ((Scalar(1) - z * z) * dp * dp);
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.nodes[i] = mid - half * z;
    rule.weights[i] = rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

enum class RadialIntegral { Series, Quadrature };

/// 2 * int_0^1 r J_j(lambda r)^2 dr, i.e. ||b_j||^2 under the normalised area
/// measure. The series route is the Lommel-type identity
///   (4 / lambda^2) * sum_{p>=0} (j + 1 + 2p) J_{j+1+2p}(lambda)^2,
/// truncated once terms fall below 1e-18 of the running sum.
template <typename Scalar>
Scalar fb_radial_norm_sq(int order, Scalar lambda, RadialIntegral route = RadialIntegral::Series) {
  if (!(lambda > Scalar(0))) throw std::invalid_argument("fb_radial_norm_sq: lambda must be positive");
  if (std::abs(order) > kMaxBesselOrder)
    throw std::out_of_range("fb_radial_norm_sq: order " + std::to_string(order) + " out of range");
  const int j = std::abs(order);
  if (route == RadialIntegral::Quadrature) {
    const auto rule = gauss_legendre<Scalar>(kNormQuadratureNodes);
    Scalar sum = Scalar(0);
    for (int i = 0; i < kNormQuadratureNodes; ++i) {
      const Scalar r = rule.nodes[i];
      const Scalar v = j <= kMaxBesselOrder ? bessel_j(j, lambda * r) : Scalar(0);
      sum += rule.weights[i] * r * v * v;
    }
    return Scalar(2) * sum;
  }
  const int top = j + 1 + 2 * (static_cast<int>(std::ceil(static_cast<double>(lambda))) + 60);
  const auto seq = bessel_j_sequence(top, lambda);
  Scalar sum = Scalar(0);
  for (int q = j + 1; q <= top; q += 2) {
    const Scalar term = Scalar(q) * seq[q] * seq[q];
    sum += term;
    if (Scalar(q) > lambda && term <= Scalar(1e-18) * sum) break;
  }
  return Scalar(4) / (lambda * lambda) * sum;
}

/// ||b_j||^2 under nu_alpha = (1 - alpha) dx/|disk| + alpha dsigma/|circle|.
template <typename Scalar>
Scalar fb_norm_sq(int order, Scalar lambda, Scalar alpha,
                  RadialIntegral route = RadialIntegral::Series) {
  if (!(alpha >= Scalar(0) && alpha <= Scalar(1)))
    throw std::invalid_argument("fb_norm_sq: alpha must lie in [0, 1]");
  const Scalar boundary = bessel_j(order, lambda);
  Scalar interior = Scalar(0);
  if (alpha < Scalar(1)) interior = fb_radial_norm_sq(order, lambda, route);
  return (Scalar(1) - alpha) * interior + alpha * boundary * boundary;
}

}  // namespace helmholtz

#endif  // HELMHOLTZ_SPECIAL_FUNCTIONS_HPP
