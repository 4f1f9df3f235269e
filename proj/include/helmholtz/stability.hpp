// Orthonormal frames under nu_alpha and the stability functional
//   K(V, nu) = sup_x sum_k |L_k(x)|^2
// for an L2(nu)-orthonormal basis (L_k) of V, together with the admissible
// dimension rule K <= kappa n / log n, kappa = (1 - log 2) / (2 + 2 r).

#ifndef HELMHOLTZ_STABILITY_HPP
#define HELMHOLTZ_STABILITY_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "helmholtz/dictionaries.hpp"
#include "helmholtz/geometry.hpp"

namespace helmholtz {

/// How the frame was orthonormalised.
enum class FrameConstruction {
  Diagonal,    // atoms already orthogonal under nu_alpha; divide by their norms
  AliasedDft,  // plane waves: circulant Gram, diagonalised by the DFT
  Gram         // numerical Gram matrix on a quadrature, pivoted LDL^H
};

enum class FrameRoute { Auto, Gram };

class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(const std::string& what, Eigen::Index atom)
      : std::runtime_error(what), atom_(atom) {}
  Eigen::Index atom() const { return atom_; }

 private:
  Eigen::Index atom_;
};

/// Relative pivot below which the Gram route reports rank deficiency.
inline constexpr double kGramPivotTolerance = 1e-12;

struct OrthonormalFrame {
  DictionarySpec spec;
  double alpha = 0.0;
  FrameConstruction construction = FrameConstruction::Diagonal;
  /// L_k = sum_i coefficients(i, k) * atom_i.
  Eigen::MatrixXcd coefficients;
  /// nu_alpha norms: of the raw atoms (Diagonal, Gram) or of the aliased
  /// atoms b^m_j (AliasedDft).
  Eigen::VectorXd norms;
  /// Candidate maximisers for K on the Gram route.
  std::vector<Point2d> search_nodes;

  Eigen::Index dimension() const { return coefficients.cols(); }

  /// (L_1(x), ..., L_dim(x)).
  Eigen::VectorXcd evaluate(const Point2d& x) const;
};

/// Orthonormal basis of span(spec) in L2(nu_alpha). FourierBessel and
/// AliasedPlaneWave atoms are orthogonal for any rotation-invariant measure,
/// plane waves go through their aliased DFT combination, and anything else
/// (or FrameRoute::Gram) uses the Gram matrix on `quad`.
OrthonormalFrame orthonormal_frame(const DictionarySpec& spec, double alpha, const DiskQuadrature& quad,
                                   FrameRoute route = FrameRoute::Auto);

/// Same, for the analytic constructions that need no quadrature.
OrthonormalFrame orthonormal_frame(const DictionarySpec& spec, double alpha);

/// Alias-class norm ||b^m_j||^2 = sum_p ||b_{j + p(2m+1)}||^2 under nu_alpha.
double aliased_norm_sq(int j, int m, double lambda, double alpha);

struct KSearch {
  int r_grid = 4096;       // points on [0, 1]
  int theta_samples = 16;  // per symmetry cell, AliasedDft only
  bool refine = true;      // golden-section polish around the best grid point
};

struct KValue {
  double value = 0.0;
  double r_star = 0.0;
  double theta_star = 0.0;
};

/// Lower bound on K from a grid search (plus refinement). Rotation-invariant
/// frames search r only; the plane-wave frame also searches theta over one
/// symmetry cell; Gram frames search their quadrature and boundary nodes.
KValue compute_K(const OrthonormalFrame& frame, const KSearch& search = {});

/// sum_k |L_k(x)|^2 for the frame.
double christoffel_sum(const OrthonormalFrame& frame, const Point2d& x);

/// kappa = (1 - log 2) / (2 + 2 r).
double stability_kappa(double r_exponent);

struct KPoint {
  int order = 0;
  Eigen::Index dimension = 0;
  double K = 0.0;
};

struct AdmissibleDimension {
  Eigen::Index dimension = 0;  // 0 when nothing is admissible
  int order = -1;
  double kappa = 0.0;
  double threshold = 0.0;      // kappa n / log n
  bool none_admissible = true;
};

/// Largest dimension in the profile with K <= kappa n / log n.
AdmissibleDimension max_admissible_dim(std::span<const KPoint> profile, std::size_t n, double r_exponent = 1.0);

/// Growth of K with m. The raw fit is log K = slope log m + intercept. The
/// offset fit is K = offset + scale * m^exponent, which removes the additive
/// constant that biases the raw slope over a finite window.
struct GrowthFit {
  double raw_slope = 0.0;
  double raw_intercept = 0.0;
  double exponent = 0.0;
  double offset = 0.0;
  double scale = 0.0;
};

GrowthFit fit_growth(std::span<const double> m_values, std::span<const double> k_values);

struct StabilityReport {
  DictionarySpec base;
  double alpha = 0.0;
  std::vector<KPoint> profile;
  std::vector<double> r_star;
  GrowthFit growth;
  AdmissibleDimension admissible;
  double r_exponent = 1.0;
  std::size_t n = 0;
};

/// K(m) for m in [m_min, m_max], growth fit, and m*(n, r).
StabilityReport stability_sweep(const DictionarySpec& base, double alpha, int m_min, int m_max, std::size_t n,
                                double r_exponent = 1.0, const KSearch& search = {});

}  // namespace helmholtz

#endif  // HELMHOLTZ_STABILITY_HPP
