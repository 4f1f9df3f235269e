// Reconstruction from point samples: least squares on a dictionary,
// truncation to an amplitude bound, and Orthogonal Matching Pursuit.

#ifndef HELMHOLTZ_ESTIMATORS_HPP
#define HELMHOLTZ_ESTIMATORS_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "helmholtz/dictionaries.hpp"
#include "helmholtz/geometry.hpp"
#include "helmholtz/random.hpp"

namespace helmholtz {

template <typename Scalar>
using ComplexMatrixT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVectorT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using ComplexMatrix = ComplexMatrixT<double>;
using ComplexVector = ComplexVectorT<double>;

/// Relative singular-value cutoff of the least-squares solver.
inline constexpr double kSolverThreshold = 1e-12;

/// Observed data y_l = u(x_l) + eta_l.
struct SampleSet {
  std::vector<Point2d> points;
  ComplexVector values;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  std::size_t size() const { return points.size(); }
  void validate() const {
    if (points.empty()) throw std::invalid_argument("SampleSet: no samples");
    if (static_cast<std::size_t>(values.size()) != points.size())
      throw std::invalid_argument("SampleSet: point/value count mismatch");
  }
};

/// Samples `field` at `points` and adds circular complex Gaussian noise with
/// standard deviation noise_sigma (E|eta|^2 = sigma^2).
template <typename Field>
SampleSet make_samples(std::vector<Point2d> points, const Field& field, double noise_sigma = 0.0,
                       std::uint64_t noise_seed = 0) {
  SampleSet set;
  set.values.resize(static_cast<Eigen::Index>(points.size()));
  for (std::size_t l = 0; l < points.size(); ++l) set.values(l) = field(points[l]);
  if (noise_sigma > 0.0) {
    Rng rng(noise_seed);
    const double s = noise_sigma / std::sqrt(2.0);
    for (Eigen::Index l = 0; l < set.values.size(); ++l) {
      const double re = rng.normal();
      const double im = rng.normal();
      set.values(l) += std::complex<double>(s * re, s * im);
    }
  }
  set.points = std::move(points);
  set.noise_sigma = noise_sigma;
  set.seed = noise_seed;
  return set;
}

template <typename Scalar = double>
struct FitResultT {
  DictionarySpec spec;
  ComplexVectorT<Scalar> coefficients;
  Scalar condition_number = Scalar(0);
  Scalar empirical_residual = Scalar(0);  // (1/n) sum |y_l - v(x_l)|^2
  std::optional<Scalar> truncation_bound;
  Eigen::Index rank = 0;
  bool rank_deficient = false;
  Eigen::Index iterations = 0;            // OMP steps actually taken
  std::vector<Eigen::Index> support;      // OMP selection order
};

using FitResult = FitResultT<double>;

/// n x dim matrix with entry (l, j) = atom_j(x_l).
template <typename Scalar>
ComplexMatrixT<Scalar> build_design_matrix(std::span<const Point2<Scalar>> points,
                                           const DictionarySpec& spec) {
  if (points.empty()) throw std::invalid_argument("build_design_matrix: no points");
  spec.validate();
  ComplexMatrixT<Scalar> a(static_cast<Eigen::Index>(points.size()), spec.dimension());
  for (std::size_t l = 0; l < points.size(); ++l) a.row(static_cast<Eigen::Index>(l)) = eval_atoms(spec, points[l]);
  return a;
}

template <typename Scalar>
ComplexMatrixT<Scalar> build_design_matrix(const std::vector<Point2<Scalar>>& points,
                                           const DictionarySpec& spec) {
  return build_design_matrix(std::span<const Point2<Scalar>>(points), spec);
}

/// ((1/n) sum |v_l|^2)^{1/2}.
template <typename Derived>
auto empirical_norm(const Eigen::MatrixBase<Derived>& values) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (values.size() == 0) return Real(0);
  using std::sqrt;
  return sqrt(values.squaredNorm() / Real(values.size()));
}

/// Minimiser of ||A c - y||_2 by SVD. Singular values below 1e-12 of the
/// largest are dropped, giving the minimum-norm solution when A is rank
/// deficient.
template <typename Scalar>
FitResultT<Scalar> least_squares_fit(const ComplexMatrixT<Scalar>& a, const ComplexVectorT<Scalar>& y) {
  if (a.rows() != y.size()) throw std::invalid_argument("least_squares_fit: dimension mismatch");
  FitResultT<Scalar> fit;
  Eigen::BDCSVD<ComplexMatrixT<Scalar>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(Scalar(kSolverThreshold));
  fit.coefficients = svd.solve(y);
  const auto& sv = svd.singularValues();
  fit.rank = svd.rank();
  fit.rank_deficient = fit.rank < std::min(a.rows(), a.cols());
  if (sv.size() > 0) {
    const Scalar smin = sv(sv.size() - 1);
    fit.condition_number = smin > Scalar(0) ? sv(0) / smin : std::numeric_limits<Scalar>::infinity();
  }
  fit.empirical_residual = (y - a * fit.coefficients).squaredNorm() / Scalar(y.size());
  return fit;
}

/// Least squares on the dictionary `spec` at the sample points.
inline FitResult fit_dictionary(const SampleSet& samples, const DictionarySpec& spec) {
  samples.validate();
  auto fit = least_squares_fit<double>(build_design_matrix(samples.points, spec), samples.values);
  fit.spec = spec;
  return fit;
}

/// Clamps each value to modulus M with its phase kept: v * min(1, M / |v|).
/// For real input this is sign(t) * min(|t|, M).
template <typename Derived>
typename Derived::PlainObject truncate_field(const Eigen::MatrixBase<Derived>& values,
                                             typename Eigen::NumTraits<typename Derived::Scalar>::Real bound) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (!(bound > Real(0))) throw std::invalid_argument("truncate_field: bound must be positive");
  return values.unaryExpr([bound](const typename Derived::Scalar& v) {
    using std::abs;
    const Real mag = abs(v);
    return mag > bound ? typename Derived::Scalar(v * (bound / mag)) : v;
  });
}

/// Orthogonal Matching Pursuit.
///
/// Each step picks the column with the largest |<r, a_k>| / ||a_k|| (lowest
/// index on ties), then projects y onto the span of every selected column.
/// The projection is kept as an incrementally grown QR factorisation (two
/// Gram-Schmidt passes), which gives the same least-squares refit as solving
/// from scratch. A FitResult is returned for each requested iteration count;
/// if the residual vanishes first, the remaining checkpoints repeat the final
/// fit with `iterations` set to the steps actually taken.
template <typename Scalar>
std::vector<FitResultT<Scalar>> omp_path(const ComplexMatrixT<Scalar>& a, const ComplexVectorT<Scalar>& y,
                                         std::vector<Eigen::Index> checkpoints) {
  using Complex = std::complex<Scalar>;
  const Eigen::Index n = a.rows();
  const Eigen::Index atoms = a.cols();
  if (y.size() != n) throw std::invalid_argument("omp_path: dimension mismatch");
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  if (checkpoints.empty() || checkpoints.front() < 1)
    throw std::invalid_argument("omp_path: iteration counts must be positive");
  const Eigen::Index max_iter = checkpoints.back();
  if (max_iter > std::min(n, atoms)) throw std::invalid_argument("omp_path: more iterations than samples");

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> col_norms = a.colwise().norm().transpose();
  std::vector<char> taken(static_cast<std::size_t>(atoms), 0);
  ComplexMatrixT<Scalar> q(n, max_iter);
  ComplexMatrixT<Scalar> r = ComplexMatrixT<Scalar>::Zero(max_iter, max_iter);
  ComplexVectorT<Scalar> z(max_iter);  // Q^H y
  ComplexVectorT<Scalar> residual = y;
  const Scalar y_norm = y.norm();
  const Scalar tiny = Scalar(1e-13) * (y_norm > Scalar(0) ? y_norm : Scalar(1));

  std::vector<Eigen::Index> support;
  std::vector<FitResultT<Scalar>> out;
  std::size_t next_checkpoint = 0;

  auto snapshot = [&](Eigen::Index k) {
    FitResultT<Scalar> fit;
    fit.coefficients = ComplexVectorT<Scalar>::Zero(atoms);
    if (k > 0) {
      const ComplexVectorT<Scalar> c =
          r.topLeftCorner(k, k).template triangularView<Eigen::Upper>().solve(z.head(k));
      for (Eigen::Index i = 0; i < k; ++i) fit.coefficients(support[i]) = c(i);
    }
    fit.iterations = k;
    fit.rank = k;
    fit.support = support;
    fit.empirical_residual = residual.squaredNorm() / Scalar(n);
    return fit;
  };

  Eigen::Index k = 0;
  bool exhausted = residual.norm() <= tiny;
  while (k < max_iter && !exhausted) {
    const ComplexVectorT<Scalar> corr = a.adjoint() * residual;
    Eigen::Index best = -1;
    Scalar best_score = Scalar(0);
    for (Eigen::Index j = 0; j < atoms; ++j) {
      if (taken[j] || col_norms(j) == Scalar(0)) continue;
      const Scalar score = std::abs(corr(j)) / col_norms(j);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    if (best < 0) break;

    ComplexVectorT<Scalar> v = a.col(best);
    ComplexVectorT<Scalar> h = ComplexVectorT<Scalar>::Zero(k);
    for (int pass = 0; pass < 2 && k > 0; ++pass) {
      const ComplexVectorT<Scalar> hp = q.leftCols(k).adjoint() * v;
      v -= q.leftCols(k) * hp;
      h += hp;
    }
    const Scalar rho = v.norm();
    if (rho <= Scalar(1e-12) * col_norms(best)) break;  // dependent column
    q.col(k) = v / rho;
    r.col(k).head(k) = h;
    r(k, k) = Complex(rho);
    z(k) = q.col(k).dot(y);
    residual -= q.col(k) * q.col(k).dot(residual);
    taken[best] = 1;
    support.push_back(best);
    ++k;
    exhausted = residual.norm() <= tiny;
    while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == k) {
      out.push_back(snapshot(k));
      ++next_checkpoint;
    }
  }
  while (next_checkpoint < checkpoints.size()) {
    out.push_back(snapshot(k));
    ++next_checkpoint;
  }
  return out;
}

template <typename Scalar>
FitResultT<Scalar> omp_fit(const ComplexMatrixT<Scalar>& a, const ComplexVectorT<Scalar>& y,
                           Eigen::Index iterations) {
  return omp_path<Scalar>(a, y, {iterations}).front();
}

}  // namespace helmholtz

#endif  // HELMHOLTZ_ESTIMATORS_HPP
