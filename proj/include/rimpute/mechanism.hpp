#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rimpute/error.hpp"
#include "rimpute/regression.hpp"
#include "rimpute/rng.hpp"
#include "rimpute/samplers.hpp"

namespace rimpute {

/// Logistic selection model for the probability that the target is observed:
///   logit P(R = 1 | x1, z) = psi0 + psi1 * x1 + psi_z' z
/// psi1 == 0 is MAR; psi_z == 0 with psi1 != 0 is selection on x1 alone.
struct NonresponseParams {
  double psi0 = 0.0;
  double psi1 = 0.0;
  Eigen::VectorXd psi_z;

  bool is_mar() const { return psi1 == 0.0; }

  bool all_finite() const {
    return std::isfinite(psi0) && std::isfinite(psi1) && psi_z.allFinite();
  }
};

/// 1 = observed, 0 = missing.
class ResponseIndicator {
 public:
  ResponseIndicator() = default;
  explicit ResponseIndicator(std::vector<int> values) : values_(std::move(values)) {
    for (int v : values_) {
      detail::require(v == 0 || v == 1, ErrorKind::invalid_parameter,
                      "response indicator must be binary");
    }
  }

  static ResponseIndicator all_observed(std::size_t n) {
    return ResponseIndicator(std::vector<int>(n, 1));
  }

  std::size_t size() const { return values_.size(); }
  int operator[](std::size_t i) const { return values_[i]; }
  std::span<const int> values() const { return values_; }

  std::size_t observed_count() const {
    std::size_t count = 0;
    for (int v : values_) count += static_cast<std::size_t>(v);
    return count;
  }
  std::size_t missing_count() const { return size() - observed_count(); }
  double missing_fraction() const {
    return size() == 0 ? 0.0 : static_cast<double>(missing_count()) / static_cast<double>(size());
  }

  friend bool operator==(const ResponseIndicator&, const ResponseIndicator&) = default;

 private:
  std::vector<int> values_;
};

inline double response_probability(const NonresponseParams& params, double x1,
                                   const Eigen::Ref<const Eigen::VectorXd>& z) {
  detail::require(z.size() == params.psi_z.size(), ErrorKind::dimension_mismatch,
                  "covariate vector has " + std::to_string(z.size()) + " entries, psi_z has " +
                      std::to_string(params.psi_z.size()));
  const double eta = params.psi0 + params.psi1 * x1 + params.psi_z.dot(z);
  return detail::inv_logit(eta);
}

/// Draws R_i ~ Bernoulli(response_probability(x1_i, z_i)) row by row.
inline ResponseIndicator generate_missingness(const Eigen::VectorXd& target,
                                              const Eigen::MatrixXd& covariates,
                                              const NonresponseParams& params, RngStream& rng) {
  detail::require(covariates.rows() == target.size(), ErrorKind::dimension_mismatch,
                  "target and covariates differ in row count");
  detail::require(covariates.cols() == params.psi_z.size(), ErrorKind::dimension_mismatch,
                  "covariates have " + std::to_string(covariates.cols()) +
                      " columns, psi_z has " + std::to_string(params.psi_z.size()));
  detail::require(target.allFinite(), ErrorKind::invalid_parameter,
                  "generate_missingness needs a fully observed target");
  std::vector<int> r(static_cast<std::size_t>(target.size()));
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    const double p = response_probability(params, target[i], covariates.row(i).transpose());
    r[static_cast<std::size_t>(i)] = sample_bernoulli(p, rng);
  }
  return ResponseIndicator(std::move(r));
}

/// Mean shift between observed and missing parts implied by a logistic
/// selection model with normal residual variance sigma2: delta = psi1 * sigma2.
inline double delta_from_psi(double psi1, double sigma2) {
  detail::require(std::isfinite(sigma2) && sigma2 > 0.0, ErrorKind::invalid_parameter,
                  "sigma2 must be positive");
  return psi1 * sigma2;
}

}  // namespace rimpute
