#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "rimpute/error.hpp"
#include "rimpute/rng.hpp"

namespace rimpute {

inline double sample_normal(double mean, double variance, RngStream& rng) {
  detail::require(std::isfinite(mean) && std::isfinite(variance) && variance >= 0.0,
                  ErrorKind::invalid_parameter,
                  "sample_normal needs finite mean and variance >= 0");
  if (variance == 0.0) return mean;
  return mean + std::sqrt(variance) * rng.standard_normal();
}

/// Gamma(shape, 1) by Marsaglia & Tsang (2000); shapes below one use the
/// U^(1/shape) boost.
inline double sample_gamma(double shape, RngStream& rng) {
  detail::require(std::isfinite(shape) && shape > 0.0, ErrorKind::invalid_parameter,
                  "sample_gamma needs shape > 0");
  if (shape < 1.0) {
    const double boost = std::pow(rng.uniform_open(), 1.0 / shape);
    return sample_gamma(shape + 1.0, rng) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = rng.standard_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline double sample_chi2(double df, RngStream& rng) { return 2.0 * sample_gamma(0.5 * df, rng); }

/// Scaled inverse chi-square: scale * df / chi2(df).
inline double sample_scaled_inv_chi2(double df, double scale, RngStream& rng) {
  detail::require(std::isfinite(df) && df > 0.0, ErrorKind::invalid_parameter,
                  "scaled inverse chi-square needs df > 0");
  detail::require(std::isfinite(scale) && scale >= 0.0, ErrorKind::invalid_parameter,
                  "scaled inverse chi-square needs scale >= 0");
  if (scale == 0.0) return 0.0;
  return scale * df / sample_chi2(df, rng);
}

inline int sample_bernoulli(double p, RngStream& rng) {
  detail::require(p >= 0.0 && p <= 1.0, ErrorKind::invalid_parameter,
                  "sample_bernoulli needs p in [0, 1]");
  // uniform() lies in [0, 1): p == 0 never fires, p == 1 always does.
  return rng.uniform() < p ? 1 : 0;
}

/// Multivariate normal draw. The covariance only has to be positive
/// semidefinite; a pivoted LDL^T factorization handles zero directions.
inline Eigen::VectorXd sample_mvnormal(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance,
                                       RngStream& rng) {
  const Eigen::Index dim = mean.size();
  detail::require(covariance.rows() == dim && covariance.cols() == dim,
                  ErrorKind::dimension_mismatch, "covariance must be square and match the mean");
  detail::require(mean.allFinite() && covariance.allFinite(), ErrorKind::invalid_parameter,
                  "sample_mvnormal needs finite parameters");
  Eigen::VectorXd z(dim);
  for (Eigen::Index i = 0; i < dim; ++i) z[i] = rng.standard_normal();
  if (covariance.isZero(0.0)) return mean;

  const double scale = std::max(covariance.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(covariance);
  const Eigen::VectorXd d = ldlt.vectorD();
  for (Eigen::Index i = 0; i < dim; ++i) {
    detail::require(d[i] >= -1e-10 * scale, ErrorKind::invalid_parameter,
                    "covariance is not positive semidefinite");
  }
  // cov = P^T L D L^T P, so P^T L sqrt(D) z has the right covariance.
  Eigen::VectorXd y = d.cwiseMax(0.0).cwiseSqrt().cwiseProduct(z);
  y = ldlt.matrixL() * y;
  y = ldlt.transpositionsP().transpose() * y;
  return mean + y;
}

}  // namespace rimpute
