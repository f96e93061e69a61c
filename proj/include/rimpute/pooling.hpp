#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "rimpute/error.hpp"
#include "rimpute/imputation.hpp"
#include "rimpute/regression.hpp"

namespace rimpute {

/// OLS fit of the analysis model (target on an intercept plus covariates).
struct AnalysisFit {
  Eigen::VectorXd beta_hat;
  /// Squared standard errors.
  Eigen::VectorXd variances;
  Eigen::Index n = 0;

  Eigen::Index residual_df() const { return n - beta_hat.size(); }
};

inline AnalysisFit fit_analysis(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& target) {
  detail::require(covariates.rows() == target.size(), ErrorKind::dimension_mismatch,
                  "covariates and target differ in row count");
  detail::require(target.size() > covariates.cols() + 1, ErrorKind::too_few_rows,
                  "analysis model needs more rows than parameters");
  OlsOptions options;
  options.strict = true;
  const LinearFit fit = ols_fit(with_intercept(covariates), target, options);
  AnalysisFit out;
  out.beta_hat = fit.coefficients;
  out.variances = fit.residual_variance * fit.gram_inverse.diagonal();
  out.n = fit.n_rows;
  return out;
}

enum class DfRule {
  /// (m - 1) (1 + u / ((1 + 1/m) b))^2
  rubin1987,
  /// Barnard & Rubin (1999) small-sample adjustment.
  barnard_rubin,
};

struct PooledEstimate {
  Eigen::VectorXd q_bar;
  Eigen::VectorXd u_bar;
  Eigen::VectorXd b;
  Eigen::VectorXd t;
  /// +infinity where b == 0.
  Eigen::VectorXd df;
  Eigen::VectorXd ci_low;
  Eigen::VectorXd ci_high;
  int m = 0;

  Eigen::VectorXd se() const { return t.cwiseSqrt(); }
};

/// Two-sided 95% critical value; infinite df falls back to the normal.
inline double critical_value_95(double df) {
  if (!std::isfinite(df)) return boost::math::quantile(boost::math::normal_distribution<double>(), 0.975);
  detail::require(df > 0.0, ErrorKind::invalid_parameter, "degrees of freedom must be positive");
  return boost::math::quantile(boost::math::students_t_distribution<double>(df), 0.975);
}

namespace detail {

inline void fill_interval(PooledEstimate& pooled) {
  const Eigen::Index k = pooled.q_bar.size();
  pooled.ci_low.resize(k);
  pooled.ci_high.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double half = critical_value_95(pooled.df[j]) * std::sqrt(pooled.t[j]);
    pooled.ci_low[j] = pooled.q_bar[j] - half;
    pooled.ci_high[j] = pooled.q_bar[j] + half;
  }
}

}  // namespace detail

/// Rubin's rules for m >= 2 completed-data fits.
inline PooledEstimate rubin_pool(std::span<const AnalysisFit> fits, DfRule rule = DfRule::rubin1987) {
  const auto m = static_cast<Eigen::Index>(fits.size());
  detail::require(m >= 2, ErrorKind::invalid_parameter, "rubin_pool needs at least two fits");
  const Eigen::Index k = fits[0].beta_hat.size();
  for (const auto& fit : fits) {
    detail::require(fit.beta_hat.size() == k && fit.variances.size() == k,
                    ErrorKind::dimension_mismatch, "fits differ in coefficient dimension");
  }
  const double md = static_cast<double>(m);

  PooledEstimate pooled;
  pooled.m = static_cast<int>(m);
  pooled.q_bar = Eigen::VectorXd::Zero(k);
  pooled.u_bar = Eigen::VectorXd::Zero(k);
  for (const auto& fit : fits) {
    pooled.q_bar += fit.beta_hat;
    pooled.u_bar += fit.variances;
  }
  pooled.q_bar /= md;
  pooled.u_bar /= md;
  pooled.b = Eigen::VectorXd::Zero(k);
  for (const auto& fit : fits) pooled.b += (fit.beta_hat - pooled.q_bar).array().square().matrix();
  pooled.b /= md - 1.0;
  pooled.t = pooled.u_bar + (1.0 + 1.0 / md) * pooled.b;

  pooled.df.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double between = (1.0 + 1.0 / md) * pooled.b[j];
    if (pooled.b[j] == 0.0) {
      pooled.df[j] = std::numeric_limits<double>::infinity();
      continue;
    }
    const double ratio = 1.0 + pooled.u_bar[j] / between;
    const double df_old = (md - 1.0) * ratio * ratio;
    if (rule == DfRule::rubin1987) {
      pooled.df[j] = df_old;
    } else {
      const double df_com = static_cast<double>(fits[0].residual_df());
      const double lambda = between / pooled.t[j];
      const double df_obs = (df_com + 1.0) / (df_com + 3.0) * df_com * (1.0 - lambda);
      pooled.df[j] = df_old * df_obs / (df_old + df_obs);
    }
  }
  detail::fill_interval(pooled);
  return pooled;
}

/// Wraps one fit (complete-case analysis) in the pooled layout with the
/// residual-df t interval.
inline PooledEstimate single_fit_estimate(const AnalysisFit& fit) {
  PooledEstimate pooled;
  pooled.m = 1;
  pooled.q_bar = fit.beta_hat;
  pooled.u_bar = fit.variances;
  pooled.b = Eigen::VectorXd::Zero(fit.beta_hat.size());
  pooled.t = fit.variances;
  pooled.df = Eigen::VectorXd::Constant(fit.beta_hat.size(), static_cast<double>(fit.residual_df()));
  detail::fill_interval(pooled);
  return pooled;
}

inline std::vector<int> coverage(const PooledEstimate& pooled, const Eigen::VectorXd& truth) {
  detail::require(truth.size() == pooled.q_bar.size(), ErrorKind::dimension_mismatch,
                  "truth has " + std::to_string(truth.size()) + " entries, estimate has " +
                      std::to_string(pooled.q_bar.size()));
  std::vector<int> covered(static_cast<std::size_t>(truth.size()));
  for (Eigen::Index j = 0; j < truth.size(); ++j) {
    covered[static_cast<std::size_t>(j)] =
        pooled.ci_low[j] <= truth[j] && truth[j] <= pooled.ci_high[j] ? 1 : 0;
  }
  return covered;
}

/// Analyses each completed target against the same covariates and pools.
inline PooledEstimate analyse_and_pool(const Eigen::MatrixXd& covariates,
                                       std::span<const Eigen::VectorXd> completed,
                                       DfRule rule = DfRule::rubin1987) {
  std::vector<AnalysisFit> fits;
  fits.reserve(completed.size());
  for (const auto& target : completed) fits.push_back(fit_analysis(covariates, target));
  return rubin_pool(fits, rule);
}

}  // namespace rimpute
