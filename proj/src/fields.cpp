#include <cmath>
#include <stdexcept>

#include "helmholtz/experiments.hpp"
#include "helmholtz/random.hpp"

namespace helmholtz {

HelmholtzField HelmholtzField::plane_waves(double lambda, std::vector<PlaneWaveTerm> terms) {
  HelmholtzField f(lambda);
  f.terms_ = std::move(terms);
  return f;
}

HelmholtzField HelmholtzField::from_dictionary(const DictionarySpec& spec, const ComplexVector& coefficients) {
  spec.validate();
  if (coefficients.size() != spec.dimension())
    throw std::invalid_argument("HelmholtzField::from_dictionary: coefficient count mismatch");
  const int m = spec.order;
  HelmholtzField f(spec.lambda);
  switch (spec.kind) {
    case DictionaryKind::FourierBessel:
      f.fb_order_ = m;
      f.fb_coefficients_ = coefficients;
      break;
    case DictionaryKind::PlaneWave:
      for (int j = -m; j <= m; ++j) f.terms_.push_back({grid_angle<double>(j, m), coefficients(j + m)});
      break;
    case DictionaryKind::AliasedPlaneWave:
      // b^m_j = (1 / ((2m+1) i^j)) sum_l e^{i j phi_l} w_l
      for (int l = -m; l <= m; ++l) {
        const double phi = grid_angle<double>(l, m);
        std::complex<double> c(0.0);
        for (int j = -m; j <= m; ++j)
          c += coefficients(j + m) * std::polar(1.0, j * phi) / (static_cast<double>(2 * m + 1) * i_pow<double>(j));
        f.terms_.push_back({phi, c});
      }
      break;
    case DictionaryKind::SquareFourier:
      throw std::invalid_argument("HelmholtzField::from_dictionary: square Fourier modes are not Helmholtz solutions");
  }
  return f;
}

std::complex<double> HelmholtzField::operator()(const Point2d& x) const {
  std::complex<double> sum(0.0);
  for (const auto& t : terms_) sum += t.coefficient * eval_plane_wave_dir(lambda_, t.direction, x);
  if (fb_order_ >= 0) {
    const auto seq = bessel_j_sequence(fb_order_, lambda_ * x.radius());
    const double theta = x.angle();
    for (int q = -fb_order_; q <= fb_order_; ++q) {
      const int n = std::abs(q);
      const double jq = (q < 0 && (n & 1)) ? -seq[n] : seq[n];
      sum += fb_coefficients_(q + fb_order_) * std::polar(jq, q * theta);
    }
  }
  return sum;
}

ComplexVector HelmholtzField::fourier_bessel_coefficients(int max_order) const {
  if (max_order < 0) throw std::invalid_argument("fourier_bessel_coefficients: negative order");
  if (fb_order_ > max_order)
    throw std::invalid_argument("fourier_bessel_coefficients: field has orders above max_order");
  ComplexVector d = ComplexVector::Zero(2 * max_order + 1);
  for (const auto& t : terms_) {
    // e^{i k.x} = sum_q i^q J_q(lambda r) e^{i q (theta - phi)}
    const std::complex<double> step = std::polar(1.0, -t.direction);
    std::complex<double> phase = std::polar(1.0, max_order * t.direction);
    for (int q = -max_order; q <= max_order; ++q, phase *= step) d(q + max_order) += t.coefficient * i_pow<double>(q) * phase;
  }
  for (int q = -fb_order_; q <= fb_order_ && fb_order_ >= 0; ++q) d(q + max_order) += fb_coefficients_(q + fb_order_);
  return d;
}

HelmholtzField HelmholtzField::operator+(const HelmholtzField& other) const {
  if (lambda_ != other.lambda_) throw std::invalid_argument("HelmholtzField: wave numbers differ");
  HelmholtzField sum(lambda_);
  sum.terms_ = terms_;
  sum.terms_.insert(sum.terms_.end(), other.terms_.begin(), other.terms_.end());
  const int order = std::max(fb_order_, other.fb_order_);
  if (order >= 0) {
    sum.fb_order_ = order;
    sum.fb_coefficients_ = ComplexVector::Zero(2 * order + 1);
    if (fb_order_ >= 0) sum.fb_coefficients_.segment(order - fb_order_, 2 * fb_order_ + 1) += fb_coefficients_;
    if (other.fb_order_ >= 0)
      sum.fb_coefficients_.segment(order - other.fb_order_, 2 * other.fb_order_ + 1) += other.fb_coefficients_;
  }
  return sum;
}

HelmholtzField synth_solution(const GroundTruthSpec& spec) {
  if (!(spec.lambda > 0.0)) throw std::invalid_argument("synth_solution: lambda must be positive");
  if (spec.kind == GroundTruthSpec::Kind::Coefficients) {
    DictionarySpec dict = spec.dictionary;
    dict.lambda = spec.lambda;
    return HelmholtzField::from_dictionary(dict, spec.coefficients);
  }
  if (spec.count < 1) throw std::invalid_argument("synth_solution: need at least one plane wave");
  Rng rng(spec.seed);
  std::vector<PlaneWaveTerm> terms;
  const double s = 1.0 / std::sqrt(2.0);
  for (int t = 0; t < spec.count; ++t) {
    const double phi = 2.0 * M_PI * rng.uniform() - M_PI;
    const double re = rng.normal();
    const double im = rng.normal();
    terms.push_back({phi, {s * re, s * im}});
  }
  return HelmholtzField::plane_waves(spec.lambda, std::move(terms));
}

}  // namespace helmholtz
