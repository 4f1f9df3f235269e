#include "helmholtz/stability.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

namespace helmholtz {

namespace {

using Complex = std::complex<double>;

constexpr double kGolden = 0.6180339887498949;

// Orders past ceil(lambda) + 40 contribute below 1e-28 on the unit disk.
int alias_cutoff(int m, double lambda) {
  return std::max(m, static_cast<int>(std::ceil(lambda)) + 40);
}

int residue(int q, int m) {
  const int period = 2 * m + 1;
  return ((q + m) % period + period) % period - m;
}

// Maximises f on [lo, hi] by golden-section search.
template <typename F>
std::pair<double, double> golden_max(F f, double lo, double hi, int iterations = 60) {
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iterations && b - a > 1e-14; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

double fb_christoffel(const OrthonormalFrame& frame, double r) {
  const int m = frame.spec.order;
  const auto seq = bessel_j_sequence(m, frame.spec.lambda * r);
  double sum = seq[0] * seq[0] / (frame.norms(m) * frame.norms(m));
  for (int j = 1; j <= m; ++j) {
    const double v = seq[j] * seq[j];
    sum += v / (frame.norms(m + j) * frame.norms(m + j)) + v / (frame.norms(m - j) * frame.norms(m - j));
  }
  return sum;
}

// sum_j |b^m_j(r, theta)|^2 / ||b^m_j||^2 with b^m_j from its alias series.
double alias_christoffel(const OrthonormalFrame& frame, double r, double theta) {
  const int m = frame.spec.order;
  const int qmax = alias_cutoff(m, frame.spec.lambda);
  const auto seq = bessel_j_sequence(qmax, frame.spec.lambda * r);
  std::vector<Complex> acc(static_cast<std::size_t>(2 * m + 1), Complex(0.0));
  const Complex step = std::polar(1.0, theta);
  Complex phase = std::polar(1.0, -qmax * theta);
  for (int q = -qmax; q <= qmax; ++q, phase *= step) {
    const int n = std::abs(q);
    const double jq = (q < 0 && (n & 1)) ? -seq[n] : seq[n];
    const int j = residue(q, m);
    acc[j + m] += i_pow<double>(q - j) * jq * phase;
  }
  double sum = 0.0;
  for (int j = -m; j <= m; ++j) sum += std::norm(acc[j + m]) / (frame.norms(j + m) * frame.norms(j + m));
  return sum;
}

bool is_alias_frame(const OrthonormalFrame& frame) {
  return frame.construction == FrameConstruction::AliasedDft ||
         (frame.construction == FrameConstruction::Diagonal &&
          frame.spec.kind == DictionaryKind::AliasedPlaneWave);
}

OrthonormalFrame gram_frame(const DictionarySpec& spec, double alpha, const DiskQuadrature& quad) {
  OrthonormalFrame frame;
  frame.spec = spec;
  frame.alpha = alpha;
  frame.construction = FrameConstruction::Gram;
  const Eigen::Index dim = spec.dimension();

  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const Eigen::RowVectorXcd row = eval_atoms(spec, quad.nodes[i]);
    gram.noalias() += quad.weights[i] * (row.adjoint() * row);
  }
  frame.norms = gram.diagonal().real().cwiseSqrt();

  Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
  const Eigen::VectorXd d = ldlt.vectorD().real();
  Eigen::VectorXi order = Eigen::VectorXi::LinSpaced(dim, 0, static_cast<int>(dim) - 1);
  order = ldlt.transpositionsP() * order;
  const double dmax = d.maxCoeff();
  for (Eigen::Index k = 0; k < dim; ++k) {
    if (!(d(k) > kGramPivotTolerance * dmax)) {
      const Eigen::Index atom = order(k);
      throw RankDeficientError("orthonormal_frame: Gram matrix numerically singular at atom " +
                                   std::to_string(atom) + " (order " +
                                   std::to_string(static_cast<int>(atom) - spec.order) + ")",
                               atom);
    }
  }
  const Eigen::VectorXcd inv_sqrt_d = d.cwiseSqrt().cwiseInverse().cast<Complex>();
  Eigen::MatrixXcd y = inv_sqrt_d.asDiagonal();
  y = ldlt.matrixU().solve(y);
  frame.coefficients = ldlt.transpositionsP().transpose() * y;

  frame.search_nodes = quad.nodes;
  for (int k = 0; k < std::max(quad.n_theta, 2); ++k)
    frame.search_nodes.push_back(Point2d::from_polar(1.0, -M_PI + 2.0 * M_PI * k / std::max(quad.n_theta, 2)));
  return frame;
}

}  // namespace

double aliased_norm_sq(int j, int m, double lambda, double alpha) {
  const int qmax = alias_cutoff(m, lambda);
  const int period = 2 * m + 1;
  double sum = 0.0;
  for (int q = j - ((j + qmax) / period) * period; q <= qmax; q += period) {
    if (std::abs(q) <= qmax) sum += fb_norm_sq(q, lambda, alpha);
  }
  return sum;
}

Eigen::VectorXcd OrthonormalFrame::evaluate(const Point2d& x) const {
  return (eval_atoms(spec, x) * coefficients).transpose();
}

OrthonormalFrame orthonormal_frame(const DictionarySpec& spec, double alpha) {
  spec.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("orthonormal_frame: alpha must lie in [0, 1]");
  const int m = spec.order;
  const Eigen::Index dim = spec.dimension();
  OrthonormalFrame frame;
  frame.spec = spec;
  frame.alpha = alpha;
  frame.norms.resize(dim);
  frame.coefficients = Eigen::MatrixXcd::Zero(dim, dim);

  switch (spec.kind) {
    case DictionaryKind::FourierBessel:
      frame.construction = FrameConstruction::Diagonal;
      for (int j = -m; j <= m; ++j) frame.norms(j + m) = std::sqrt(fb_norm_sq(j, spec.lambda, alpha));
      break;
    case DictionaryKind::AliasedPlaneWave:
      frame.construction = FrameConstruction::Diagonal;
      for (int j = -m; j <= m; ++j) frame.norms(j + m) = std::sqrt(aliased_norm_sq(j, m, spec.lambda, alpha));
      break;
    case DictionaryKind::PlaneWave: {
      frame.construction = FrameConstruction::AliasedDft;
      for (int j = -m; j <= m; ++j) frame.norms(j + m) = std::sqrt(aliased_norm_sq(j, m, spec.lambda, alpha));
      for (int l = -m; l <= m; ++l)
        for (int j = -m; j <= m; ++j)
          frame.coefficients(l + m, j + m) = std::polar(1.0, j * grid_angle<double>(l, m)) /
                                             (static_cast<double>(2 * m + 1) * i_pow<double>(j) * frame.norms(j + m));
      return frame;
    }
    case DictionaryKind::SquareFourier:
      throw std::invalid_argument("orthonormal_frame: square Fourier modes need the Gram route");
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (!(frame.norms(i) > 0.0))
      throw RankDeficientError("orthonormal_frame: zero-norm atom " + std::to_string(i), i);
    frame.coefficients(i, i) = 1.0 / frame.norms(i);
  }
  return frame;
}

OrthonormalFrame orthonormal_frame(const DictionarySpec& spec, double alpha, const DiskQuadrature& quad,
                                   FrameRoute route) {
  spec.validate();
  if (route == FrameRoute::Gram || spec.kind == DictionaryKind::SquareFourier)
    return gram_frame(spec, alpha, quad);
  return orthonormal_frame(spec, alpha);
}

double christoffel_sum(const OrthonormalFrame& frame, const Point2d& x) {
  if (frame.construction == FrameConstruction::Diagonal && frame.spec.kind == DictionaryKind::FourierBessel)
    return fb_christoffel(frame, x.radius());
  if (is_alias_frame(frame)) return alias_christoffel(frame, x.radius(), x.angle());
  return frame.evaluate(x).squaredNorm();
}

KValue compute_K(const OrthonormalFrame& frame, const KSearch& search) {
  if (search.r_grid < 2) throw std::invalid_argument("compute_K: r_grid must be at least 2");
  KValue best;
  best.value = -1.0;

  if (frame.construction == FrameConstruction::Gram) {
    for (const auto& x : frame.search_nodes) {
      const double v = christoffel_sum(frame, x);
      if (v > best.value) best = {v, x.radius(), x.angle()};
    }
    return best;
  }

  const double dr = 1.0 / (search.r_grid - 1);
  if (!is_alias_frame(frame)) {
    int best_i = 0;
    for (int i = 0; i < search.r_grid; ++i) {
      const double r = i * dr;
      const double v = fb_christoffel(frame, r);
      if (v > best.value) {
        best = {v, r, 0.0};
        best_i = i;
      }
    }
    if (search.refine) {
      const double lo = std::max(0, best_i - 1) * dr;
      const double hi = std::min(search.r_grid - 1, best_i + 1) * dr;
      const auto [r, v] = golden_max([&](double rr) { return fb_christoffel(frame, rr); }, lo, hi);
      if (v > best.value) best = {v, r, 0.0};
    }
    return best;
  }

  // The plane-wave space is invariant under rotation by 2 pi / (2m+1) and
  // under reflection in the x axis, so one cell [0, pi / (2m+1)] suffices.
  const int m = frame.spec.order;
  const double cell = M_PI / (2 * m + 1);
  const int nt = std::max(search.theta_samples, 1);
  const double dt = nt > 1 ? cell / (nt - 1) : 0.0;
  int best_i = 0, best_t = 0;
  for (int i = 0; i < search.r_grid; ++i) {
    const double r = i * dr;
    for (int t = 0; t < nt; ++t) {
      const double v = alias_christoffel(frame, r, t * dt);
      if (v > best.value) {
        best = {v, r, t * dt};
        best_i = i;
        best_t = t;
      }
      if (i == 0) break;  // angle irrelevant at the origin
    }
  }
  if (search.refine) {
    const double lo = std::max(0, best_i - 1) * dr;
    const double hi = std::min(search.r_grid - 1, best_i + 1) * dr;
    const double theta0 = best.theta_star;
    const auto [r, v] = golden_max([&](double rr) { return alias_christoffel(frame, rr, theta0); }, lo, hi);
    if (v > best.value) best = {v, r, theta0};
    if (nt > 1) {
      const double tlo = std::max(0, best_t - 1) * dt;
      const double thi = std::min(nt - 1, best_t + 1) * dt;
      const double r0 = best.r_star;
      const auto [t, vt] = golden_max([&](double tt) { return alias_christoffel(frame, r0, tt); }, tlo, thi);
      if (vt > best.value) best = {vt, r0, t};
    }
  }
  return best;
}

double stability_kappa(double r_exponent) {
  if (!(r_exponent > 0.0)) throw std::invalid_argument("stability_kappa: r must be positive");
  return (1.0 - std::log(2.0)) / (2.0 + 2.0 * r_exponent);
}

AdmissibleDimension max_admissible_dim(std::span<const KPoint> profile, std::size_t n, double r_exponent) {
  if (n < 2) throw std::invalid_argument("max_admissible_dim: n must be at least 2");
  AdmissibleDimension out;
  out.kappa = stability_kappa(r_exponent);
  out.threshold = out.kappa * static_cast<double>(n) / std::log(static_cast<double>(n));
  for (const auto& p : profile) {
    if (p.K <= out.threshold && p.dimension > out.dimension) {
      out.dimension = p.dimension;
      out.order = p.order;
      out.none_admissible = false;
    }
  }
  return out;
}

GrowthFit fit_growth(std::span<const double> m_values, std::span<const double> k_values) {
  if (m_values.size() != k_values.size()) throw std::invalid_argument("fit_growth: size mismatch");
  std::vector<double> ms, ks;
  for (std::size_t i = 0; i < m_values.size(); ++i) {
    if (m_values[i] > 0.0 && k_values[i] > 0.0) {
      ms.push_back(m_values[i]);
      ks.push_back(k_values[i]);
    }
  }
  if (ms.size() < 3) throw std::invalid_argument("fit_growth: need at least three points with m > 0");
  const auto count = static_cast<Eigen::Index>(ms.size());
  GrowthFit fit;

  {
    Eigen::MatrixXd design(count, 2);
    Eigen::VectorXd rhs(count);
    for (Eigen::Index i = 0; i < count; ++i) {
      design(i, 0) = std::log(ms[i]);
      design(i, 1) = 1.0;
      rhs(i) = std::log(ks[i]);
    }
    const Eigen::Vector2d sol = design.colPivHouseholderQr().solve(rhs);
    fit.raw_slope = sol(0);
    fit.raw_intercept = sol(1);
  }

  // For fixed exponent the model is linear in (offset, scale); residuals are
  // relative so small and large K weigh alike.
  auto solve_for = [&](double p, double& offset, double& scale) {
    Eigen::MatrixXd design(count, 2);
    Eigen::VectorXd rhs(count);
    for (Eigen::Index i = 0; i < count; ++i) {
      design(i, 0) = 1.0 / ks[i];
      design(i, 1) = std::pow(ms[i], p) / ks[i];
      rhs(i) = 1.0;
    }
    const Eigen::Vector2d sol = design.colPivHouseholderQr().solve(rhs);
    offset = sol(0);
    scale = sol(1);
    return (design * sol - rhs).squaredNorm();
  };
  double best_p = 0.05, best_err = std::numeric_limits<double>::infinity(), c0 = 0.0, c1 = 0.0;
  for (double p = 0.05; p <= 6.0 + 1e-12; p += 0.01) {
    const double err = solve_for(p, c0, c1);
    if (err < best_err) {
      best_err = err;
      best_p = p;
    }
  }
  const auto [p, neg_err] = golden_max([&](double pp) { return -solve_for(pp, c0, c1); },
                                       std::max(0.01, best_p - 0.01), best_p + 0.01, 80);
  fit.exponent = -neg_err <= best_err ? p : best_p;
  solve_for(fit.exponent, fit.offset, fit.scale);
  return fit;
}

StabilityReport stability_sweep(const DictionarySpec& base, double alpha, int m_min, int m_max, std::size_t n,
                                double r_exponent, const KSearch& search) {
  if (m_min < 0 || m_max < m_min) throw std::invalid_argument("stability_sweep: bad m range");
  StabilityReport report;
  report.base = base;
  report.alpha = alpha;
  report.r_exponent = r_exponent;
  report.n = n;

  std::optional<DiskQuadrature> quad;
  if (base.kind == DictionaryKind::SquareFourier)
    quad = disk_quadrature(kErrorQuadratureRadial, kErrorQuadratureAngular, alpha);

  std::vector<double> ms, ks;
  for (int m = m_min; m <= m_max; ++m) {
    const auto spec = base.with_order(m);
    const auto frame = quad ? orthonormal_frame(spec, alpha, *quad) : orthonormal_frame(spec, alpha);
    const auto k = compute_K(frame, search);
    report.profile.push_back({m, spec.dimension(), k.value});
    report.r_star.push_back(k.r_star);
    ms.push_back(m);
    ks.push_back(k.value);
  }
  if (std::count_if(ms.begin(), ms.end(), [](double m) { return m > 0; }) >= 3) report.growth = fit_growth(ms, ks);
  report.admissible = max_admissible_dim(report.profile, std::max<std::size_t>(n, 2), r_exponent);
  return report;
}

}  // namespace helmholtz
