// Approximation families on the unit disk.
//
//   FourierBessel    b_j(x) = J_j(lambda r) e^{i j theta},               j = -m..m
//   PlaneWave        e_j(x) = exp(i k_j . x), k_j on a (2m+1)-point grid, j = -m..m
//   AliasedPlaneWave b^m_j  = DFT combination of the grid plane waves,    j = -m..m
//   SquareFourier    exp(i a (kx x + ky y)),                     kx, ky = -K..K
//
// Atom ordering is fixed: ascending j for the one-dimensional families,
// row-major (kx outer, ky inner) for SquareFourier.

#ifndef HELMHOLTZ_DICTIONARIES_HPP
#define HELMHOLTZ_DICTIONARIES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "helmholtz/geometry.hpp"
#include "helmholtz/special_functions.hpp"

namespace helmholtz {

enum class DictionaryKind { FourierBessel, PlaneWave, AliasedPlaneWave, SquareFourier };

std::string_view to_string(DictionaryKind kind);
DictionaryKind parse_dictionary_kind(std::string_view text);

struct DictionarySpec {
  DictionaryKind kind = DictionaryKind::FourierBessel;
  int order = 0;  // m, or K for SquareFourier
  double lambda = 12.0;
  double square_scale = M_PI;

  Eigen::Index dimension() const {
    const Eigen::Index side = 2 * static_cast<Eigen::Index>(order) + 1;
    return kind == DictionaryKind::SquareFourier ? side * side : side;
  }

  DictionarySpec with_order(int new_order) const {
    DictionarySpec copy = *this;
    copy.order = new_order;
    return copy;
  }

  void validate() const;
};

/// (kx, ky) of SquareFourier atom `index`.
inline std::pair<int, int> square_mode(int order, Eigen::Index index) {
  const int side = 2 * order + 1;
  return {static_cast<int>(index / side) - order, static_cast<int>(index % side) - order};
}

/// Atom index of SquareFourier mode (kx, ky).
inline Eigen::Index square_index(int order, int kx, int ky) {
  const int side = 2 * order + 1;
  return static_cast<Eigen::Index>(kx + order) * side + (ky + order);
}

/// i^n for any integer n.
template <typename Scalar>
std::complex<Scalar> i_pow(long long n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {Scalar(1), Scalar(0)};
    case 1: return {Scalar(0), Scalar(1)};
    case 2: return {Scalar(-1), Scalar(0)};
    default: return {Scalar(0), Scalar(-1)};
  }
}

/// Direction angle of grid plane wave j in a (2m+1)-point grid.
template <typename Scalar>
Scalar grid_angle(int j, int m) {
  return Scalar(2) * std::acos(Scalar(-1)) * Scalar(j) / Scalar(2 * m + 1);
}

template <typename Scalar>
std::complex<Scalar> eval_fourier_bessel(int j, Scalar lambda, const Point2<Scalar>& p) {
  const Scalar amplitude = bessel_j(j, lambda * p.radius());
  return std::polar(amplitude, Scalar(j) * p.angle());
}

/// exp(i k . p) for wavevector k = lambda (cos phi, sin phi).
template <typename Scalar>
std::complex<Scalar> eval_plane_wave_dir(Scalar lambda, Scalar phi, const Point2<Scalar>& p) {
  using std::cos;
  using std::sin;
  const Scalar phase = lambda * (cos(phi) * p.x + sin(phi) * p.y);
  return {cos(phase), sin(phase)};
}

template <typename Scalar>
std::complex<Scalar> eval_plane_wave(int j, int m, Scalar lambda, const Point2<Scalar>& p) {
  if (std::abs(j) > m) throw std::out_of_range("eval_plane_wave: |j| > m");
  return eval_plane_wave_dir(lambda, grid_angle<Scalar>(j, m), p);
}

/// b^m_j(p) = 1 / ((2m+1) i^j) * sum_{l=-m}^{m} e^{i j phi_l} e^{i k(phi_l) . p}.
/// This normalisation gives b^m_j = sum_p i^{p(2m+1)} b_{j + p(2m+1)} exactly.
template <typename Scalar>
std::complex<Scalar> eval_aliased_fb(int j, int m, Scalar lambda, const Point2<Scalar>& p) {
  if (std::abs(j) > m) throw std::out_of_range("eval_aliased_fb: |j| > m");
  std::complex<Scalar> sum(0);
  for (int l = -m; l <= m; ++l) {
    const Scalar phi = grid_angle<Scalar>(l, m);
    sum += std::polar(Scalar(1), Scalar(j) * phi) * eval_plane_wave_dir(lambda, phi, p);
  }
  return sum / (Scalar(2 * m + 1) * i_pow<Scalar>(j));
}

template <typename Scalar>
std::complex<Scalar> eval_square_fourier(int kx, int ky, Scalar a, const Point2<Scalar>& p) {
  return std::polar(Scalar(1), a * (Scalar(kx) * p.x + Scalar(ky) * p.y));
}

/// Truncated alias series sum_{|p| <= max_alias} i^{p(2m+1)} b_{j+p(2m+1)}(x).
template <typename Scalar>
std::complex<Scalar> alias_series(int j, int m, Scalar lambda, const Point2<Scalar>& x,
                                   int max_alias) {
  const int period = 2 * m + 1;
  const int top = std::abs(j) + max_alias * period;
  const auto seq = bessel_j_sequence(top, lambda * x.radius());
  const Scalar theta = x.angle();
  std::complex<Scalar> sum(0);
  for (int p = -max_alias; p <= max_alias; ++p) {
    const int q = j + p * period;
    const Scalar jq = (q < 0 && (-q & 1)) ? -seq[-q] : seq[std::abs(q)];
    sum += i_pow<Scalar>(static_cast<long long>(p) * period) * std::polar(jq, Scalar(q) * theta);
  }
  return sum;
}

/// Jacobi-Anger partial sum sum_{|q| <= max_order} i^q J_q(lambda r) e^{i q (theta - phi)}.
template <typename Scalar>
std::complex<Scalar> jacobi_anger_sum(Scalar lambda, Scalar phi, const Point2<Scalar>& x,
                                      int max_order) {
  const auto seq = bessel_j_sequence(max_order, lambda * x.radius());
  const Scalar theta = x.angle();
  std::complex<Scalar> sum(seq[0]);
  for (int q = 1; q <= max_order; ++q) {
    const Scalar jneg = (q & 1) ? -seq[q] : seq[q];
    sum += i_pow<Scalar>(q) * std::polar(seq[q], Scalar(q) * (theta - phi));
    sum += i_pow<Scalar>(-q) * std::polar(jneg, Scalar(-q) * (theta - phi));
  }
  return sum;
}

/// Atom `index` of the dictionary described by spec.
template <typename Scalar>
std::complex<Scalar> eval_atom(const DictionarySpec& spec, Eigen::Index index,
                               const Point2<Scalar>& p) {
  const Scalar lambda = static_cast<Scalar>(spec.lambda);
  const int j = static_cast<int>(index) - spec.order;
  switch (spec.kind) {
    case DictionaryKind::FourierBessel: return eval_fourier_bessel(j, lambda, p);
    case DictionaryKind::PlaneWave: return eval_plane_wave(j, spec.order, lambda, p);
    case DictionaryKind::AliasedPlaneWave: return eval_aliased_fb(j, spec.order, lambda, p);
    case DictionaryKind::SquareFourier: {
      const auto [kx, ky] = square_mode(spec.order, index);
      return eval_square_fourier(kx, ky, static_cast<Scalar>(spec.square_scale), p);
    }
  }
  throw std::logic_error("eval_atom: unknown dictionary kind");
}

/// All atoms of spec at p, in the pinned order. Shares one Bessel sequence or
/// one set of plane waves across the row.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 1, Eigen::Dynamic> eval_atoms(const DictionarySpec& spec,
                                                                  const Point2<Scalar>& p) {
  using Complex = std::complex<Scalar>;
  const int m = spec.order;
  const Eigen::Index dim = spec.dimension();
  Eigen::Matrix<Complex, 1, Eigen::Dynamic> row(dim);
  const Scalar lambda = static_cast<Scalar>(spec.lambda);
  switch (spec.kind) {
    case DictionaryKind::FourierBessel: {
      const auto seq = bessel_j_sequence(m, lambda * p.radius());
      const Scalar theta = p.angle();
      for (int j = -m; j <= m; ++j) {
        const int n = std::abs(j);
        const Scalar jj = (j < 0 && (n & 1)) ? -seq[n] : seq[n];
        row(j + m) = std::polar(jj, Scalar(j) * theta);
      }
      break;
    }
    case DictionaryKind::PlaneWave: {
      for (int j = -m; j <= m; ++j)
        row(j + m) = eval_plane_wave_dir(lambda, grid_angle<Scalar>(j, m), p);
      break;
    }
    case DictionaryKind::AliasedPlaneWave: {
      Eigen::Matrix<Complex, 1, Eigen::Dynamic> waves(dim);
      for (int l = -m; l <= m; ++l)
        waves(l + m) = eval_plane_wave_dir(lambda, grid_angle<Scalar>(l, m), p);
      for (int j = -m; j <= m; ++j) {
        Complex sum(0);
        for (int l = -m; l <= m; ++l)
          sum += std::polar(Scalar(1), Scalar(j) * grid_angle<Scalar>(l, m)) * waves(l + m);
        row(j + m) = sum / (Scalar(2 * m + 1) * i_pow<Scalar>(j));
      }
      break;
    }
    case DictionaryKind::SquareFourier: {
      const Scalar a = static_cast<Scalar>(spec.square_scale);
      const int side = 2 * m + 1;
      Eigen::Matrix<Complex, Eigen::Dynamic, 1> ex(side), ey(side);
      for (int k = -m; k <= m; ++k) {
        ex(k + m) = std::polar(Scalar(1), a * Scalar(k) * p.x);
        ey(k + m) = std::polar(Scalar(1), a * Scalar(k) * p.y);
      }
      for (int kx = 0; kx < side; ++kx)
        for (int ky = 0; ky < side; ++ky) row(kx * side + ky) = ex(kx) * ey(ky);
      break;
    }
  }
  return row;
}

/// max over an interior test grid of |Lap_h v + lambda^2 v| / max |v|, with the
/// 5-point Laplacian at step h. Grid: 21 x 21 points on [-0.6, 0.6]^2.
template <typename Scalar, typename Field>
Scalar helmholtz_residual(const Field& field, Scalar lambda, Scalar h) {
  using std::abs;
  constexpr int kGrid = 21;
  const Scalar extent = Scalar(0.6);
  Scalar worst = Scalar(0);
  Scalar scale = Scalar(0);
  for (int a = 0; a < kGrid; ++a) {
    for (int b = 0; b < kGrid; ++b) {
      const Scalar x = -extent + Scalar(2) * extent * Scalar(a) / Scalar(kGrid - 1);
      const Scalar y = -extent + Scalar(2) * extent * Scalar(b) / Scalar(kGrid - 1);
      const auto c = field(Point2<Scalar>{x, y});
      const auto lap = (field(Point2<Scalar>{x + h, y}) + field(Point2<Scalar>{x - h, y}) +
                        field(Point2<Scalar>{x, y + h}) + field(Point2<Scalar>{x, y - h}) -
                        Scalar(4) * c) /
                       (h * h);
      worst = std::max<Scalar>(worst, abs(lap + lambda * lambda * c));
      scale = std::max<Scalar>(scale, abs(c));
    }
  }
  return scale > Scalar(0) ? worst / scale : worst;
}

}  // namespace helmholtz

#endif  // HELMHOLTZ_DICTIONARIES_HPP
