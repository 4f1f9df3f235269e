#include <unsupported/Eigen/FFT>

#include <cmath>
#include <stdexcept>

#include "helmholtz/experiments.hpp"

namespace helmholtz {

double relative_l2_error(const DiskQuadrature& quad, const ComplexVector& u, const ComplexVector& u_hat) {
  const auto n = static_cast<Eigen::Index>(quad.size());
  if (u.size() != n || u_hat.size() != n) throw std::invalid_argument("relative_l2_error: size mismatch");
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    num += quad.weights[static_cast<std::size_t>(i)] * std::norm(u(i) - u_hat(i));
    den += quad.weights[static_cast<std::size_t>(i)] * std::norm(u(i));
  }
  if (!(den > 0.0)) throw std::domain_error("relative_l2_error: reference field has zero norm");
  return std::sqrt(num / den);
}

ErrorGrid::ErrorGrid(double lambda, int max_order, int n_r, int n_theta)
    : lambda_(lambda), max_order_(max_order), quad_(disk_quadrature(n_r, n_theta, 0.0, QuadratureMeasure::Area)) {
  if (max_order < 0 || max_order > kMaxBesselOrder) throw std::invalid_argument("ErrorGrid: max_order out of range");
  if (2 * max_order + 1 > n_theta) throw std::invalid_argument("ErrorGrid: n_theta too small for max_order");
  bessel_.resize(n_r, 2 * max_order + 1);
  for (int i = 0; i < n_r; ++i) {
    const auto seq = bessel_j_sequence(max_order, lambda * quad_.radii[static_cast<std::size_t>(i)]);
    for (int q = -max_order; q <= max_order; ++q) {
      const int n = std::abs(q);
      bessel_(i, q + max_order) = (q < 0 && (n & 1)) ? -seq[n] : seq[n];
    }
  }
}

ComplexVector ErrorGrid::evaluate(const ComplexVector& coefficients) const {
  if (coefficients.size() % 2 == 0) throw std::invalid_argument("ErrorGrid::evaluate: need 2Q+1 coefficients");
  const int order = static_cast<int>(coefficients.size() / 2);
  if (order > max_order_) throw std::invalid_argument("ErrorGrid::evaluate: order above the cached table");
  const int n_theta = quad_.n_theta;
  const int n_r = quad_.n_r;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(n_theta)), ring;
  ComplexVector out(static_cast<Eigen::Index>(n_r) * n_theta);
  // theta_k = -pi + 2 pi k / N, so e^{iq theta_k} = (-1)^q e^{2 pi i q k / N}.
  for (int i = 0; i < n_r; ++i) {
    std::fill(spectrum.begin(), spectrum.end(), std::complex<double>(0.0));
    for (int q = -order; q <= order; ++q) {
      const double sign = (q & 1) ? -1.0 : 1.0;
      const auto slot = static_cast<std::size_t>(((q % n_theta) + n_theta) % n_theta);
      spectrum[slot] += sign * bessel_(i, q + max_order_) * coefficients(q + order);
    }
    fft.inv(ring, spectrum);
    for (int k = 0; k < n_theta; ++k) out(static_cast<Eigen::Index>(i) * n_theta + k) = ring[static_cast<std::size_t>(k)];
  }
  return out;
}

ComplexVector ErrorGrid::evaluate(const HelmholtzField& field) const {
  return evaluate(field.fourier_bessel_coefficients(max_order_));
}

SquareFourierGram::SquareFourierGram(int order, double scale) : order_(order), scale_(scale) {
  if (order < 0) throw std::invalid_argument("SquareFourierGram: negative order");
  const int span = 2 * order;
  cache_.resize(static_cast<std::size_t>(2 * span * span + 1));
  cache_[0] = M_PI;
  for (std::size_t s = 1; s < cache_.size(); ++s) {
    const double d = scale * std::sqrt(static_cast<double>(s));
    cache_[s] = 2.0 * M_PI * std::cyl_bessel_j(1.0, d) / d;
  }
}

double SquareFourierGram::kernel(int dx, int dy) const {
  return cache_.at(static_cast<std::size_t>(dx * dx + dy * dy));
}

double SquareFourierGram::cross(double ax, double ay, double kx, double ky) {
  const double d = std::hypot(ax - kx, ay - ky);
  if (d < 1e-14) return M_PI;
  return 2.0 * M_PI * std::cyl_bessel_j(1.0, d) / d;
}

double SquareFourierGram::relative_error(const HelmholtzField& truth, const ComplexVector& coefficients) const {
  if (truth.has_fourier_bessel_part())
    throw std::invalid_argument("SquareFourierGram: exact route needs a plane-wave field");
  const int side = 2 * order_ + 1;
  if (coefficients.size() != static_cast<Eigen::Index>(side) * side)
    throw std::invalid_argument("SquareFourierGram: coefficient count mismatch");
  const double lambda = truth.lambda();
  const auto& terms = truth.terms();

  double u_norm_sq = 0.0;
  for (const auto& a : terms)
    for (const auto& b : terms)
      u_norm_sq += (std::conj(a.coefficient) * b.coefficient).real() *
                   cross(lambda * std::cos(a.direction), lambda * std::sin(a.direction),
                         lambda * std::cos(b.direction), lambda * std::sin(b.direction));
  if (!(u_norm_sq > 0.0)) throw std::domain_error("SquareFourierGram: reference field has zero norm");

  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < coefficients.size(); ++i)
    if (coefficients(i) != std::complex<double>(0.0)) support.push_back(i);

  std::complex<double> cross_term(0.0);
  double est_norm_sq = 0.0;
  for (Eigen::Index ia : support) {
    const auto [ax, ay] = square_mode(order_, ia);
    std::complex<double> proj(0.0);  // <e_a, u>
    for (const auto& t : terms)
      proj += t.coefficient * cross(scale_ * ax, scale_ * ay, lambda * std::cos(t.direction),
                                    lambda * std::sin(t.direction));
    cross_term += std::conj(coefficients(ia)) * proj;
    std::complex<double> row(0.0);
    for (Eigen::Index ib : support) {
      const auto [bx, by] = square_mode(order_, ib);
      row += kernel(ax - bx, ay - by) * coefficients(ib);
    }
    est_norm_sq += (std::conj(coefficients(ia)) * row).real();
  }
  const double err_sq = u_norm_sq - 2.0 * cross_term.real() + est_norm_sq;
  return std::sqrt(std::max(err_sq, 0.0) / u_norm_sq);
}

ComplexVector estimate_values(const Estimate& estimate, const ErrorGrid& grid) {
  const auto& spec = estimate.spec;
  ComplexVector values;
  if (spec.kind == DictionaryKind::FourierBessel) {
    values = grid.evaluate(estimate.coefficients);
  } else if (spec.kind == DictionaryKind::SquareFourier) {
    const auto& quad = grid.quadrature();
    const int side = 2 * spec.order + 1;
    // coefficient (kx, ky) sits at kx * side + ky
    const Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> c(
        estimate.coefficients.data(), side, side);
    values.resize(static_cast<Eigen::Index>(quad.size()));
    Eigen::VectorXcd ex(side), ey(side);
    for (std::size_t i = 0; i < quad.size(); ++i) {
      const auto& p = quad.nodes[i];
      for (int k = -spec.order; k <= spec.order; ++k) {
        ex(k + spec.order) = std::polar(1.0, spec.square_scale * k * p.x);
        ey(k + spec.order) = std::polar(1.0, spec.square_scale * k * p.y);
      }
      values(static_cast<Eigen::Index>(i)) = ex.transpose() * c * ey;
    }
  } else {
    values = grid.evaluate(HelmholtzField::from_dictionary(spec, estimate.coefficients));
  }
  if (estimate.truncation_bound) values = truncate_field(values, *estimate.truncation_bound);
  return values;
}

double estimate_error(const Estimate& estimate, const HelmholtzField& truth, const ErrorGrid& grid,
                      const ComplexVector& truth_values) {
  if (estimate.spec.kind == DictionaryKind::SquareFourier && !estimate.truncation_bound &&
      !truth.has_fourier_bessel_part()) {
    return SquareFourierGram(estimate.spec.order, estimate.spec.square_scale).relative_error(truth, estimate.coefficients);
  }
  return relative_l2_error(grid.quadrature(), truth_values, estimate_values(estimate, grid));
}

double best_approximation_error(const HelmholtzField& u, const DictionarySpec& spec, const DiskQuadrature& quad) {
  const auto frame = orthonormal_frame(spec, 0.0, quad);
  const Eigen::Index dim = frame.dimension();
  // The frame is orthogonal under any rotation-invariant rule, so only the
  // diagonal of its Gram matrix in this quadrature is needed.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXcd proj = Eigen::VectorXcd::Zero(dim);
  ComplexVector u_values(static_cast<Eigen::Index>(quad.size()));
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const Eigen::VectorXcd l = frame.evaluate(quad.nodes[i]);
    const std::complex<double> ui = u(quad.nodes[i]);
    u_values(static_cast<Eigen::Index>(i)) = ui;
    diag += quad.weights[i] * l.cwiseAbs2();
    proj += quad.weights[i] * l.conjugate() * ui;
  }
  const Eigen::VectorXcd c = proj.cwiseQuotient(diag.cast<std::complex<double>>());
  double residual = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const std::complex<double> v = frame.evaluate(quad.nodes[i]).transpose() * c;
    residual += quad.weights[i] * std::norm(u_values(static_cast<Eigen::Index>(i)) - v);
  }
  return std::sqrt(residual);
}

}  // namespace helmholtz
