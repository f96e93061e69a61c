#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rimpute/error.hpp"
#include "rimpute/mechanism.hpp"
#include "rimpute/regression.hpp"
#include "rimpute/rng.hpp"
#include "rimpute/samplers.hpp"

namespace rimpute {

/// One incomplete target column (NaN marks a missing cell) plus fully observed
/// covariates. The covariates used by the fitted selection model default to the
/// imputation covariates and can be replaced.
class IncompleteDataset {
 public:
  IncompleteDataset(Eigen::VectorXd target, Eigen::MatrixXd covariates,
                    std::vector<std::string> names = {})
      : target_(std::move(target)), covariates_(std::move(covariates)), names_(std::move(names)) {
    detail::require(covariates_.rows() == target_.size(), ErrorKind::dimension_mismatch,
                    "target has " + std::to_string(target_.size()) + " rows, covariates have " +
                        std::to_string(covariates_.rows()));
    detail::require(covariates_.allFinite(), ErrorKind::input_error,
                    "covariates must be fully observed");
    detail::require(names_.empty() || names_.size() == static_cast<std::size_t>(covariates_.cols()) + 1,
                    ErrorKind::dimension_mismatch, "need one name per column (target first)");
    std::vector<int> r(static_cast<std::size_t>(target_.size()));
    for (Eigen::Index i = 0; i < target_.size(); ++i) {
      detail::require(!std::isinf(target_[i]), ErrorKind::input_error, "target contains infinity");
      r[static_cast<std::size_t>(i)] = std::isnan(target_[i]) ? 0 : 1;
    }
    response_ = ResponseIndicator(std::move(r));
  }

  /// Masks `complete` where `r` is 0.
  static IncompleteDataset from_complete(const Eigen::VectorXd& complete, Eigen::MatrixXd covariates,
                                         const ResponseIndicator& r) {
    detail::require(r.size() == static_cast<std::size_t>(complete.size()),
                    ErrorKind::dimension_mismatch, "indicator length does not match target");
    Eigen::VectorXd masked = complete;
    for (Eigen::Index i = 0; i < masked.size(); ++i) {
      if (r[static_cast<std::size_t>(i)] == 0) masked[i] = std::numeric_limits<double>::quiet_NaN();
    }
    return IncompleteDataset(std::move(masked), std::move(covariates));
  }

  IncompleteDataset& set_selection_covariates(Eigen::MatrixXd selection) {
    detail::require(selection.rows() == target_.size(), ErrorKind::dimension_mismatch,
                    "selection covariates differ in row count");
    detail::require(selection.allFinite(), ErrorKind::input_error,
                    "selection covariates must be fully observed");
    selection_ = std::move(selection);
    return *this;
  }

  const Eigen::VectorXd& target() const { return target_; }
  const Eigen::MatrixXd& covariates() const { return covariates_; }
  const Eigen::MatrixXd& selection_covariates() const {
    return selection_ ? *selection_ : covariates_;
  }
  const ResponseIndicator& response() const { return response_; }
  const std::vector<std::string>& names() const { return names_; }

  Eigen::Index rows() const { return target_.size(); }
  std::size_t observed_count() const { return response_.observed_count(); }
  std::size_t missing_count() const { return response_.missing_count(); }

 private:
  Eigen::VectorXd target_;
  Eigen::MatrixXd covariates_;
  std::optional<Eigen::MatrixXd> selection_;
  std::vector<std::string> names_;
  ResponseIndicator response_;
};

/// phi includes the intercept; delta_adj is the observed-vs-missing mean shift.
struct ImputationParams {
  Eigen::VectorXd phi;
  double sigma2 = 0.0;
  double delta_adj = 0.0;
};

struct RiConfig {
  int iterations = 10;
  int num_imputations = 5;
  int max_rdot_redraws = 5;
  std::uint64_t seed = 0;
};

/// Means of the target in the four (R, R-dot) cells, indexed [r][rdot].
struct CellMeans {
  std::array<std::array<double, 2>, 2> mean{};
  std::array<std::array<std::size_t, 2>, 2> count{};

  bool empty(int r, int rdot) const { return count[r][rdot] == 0; }
  double mu11() const { return mean[1][1]; }
  double mu10() const { return mean[1][0]; }
  double mu01() const { return mean[0][1]; }
  double mu00() const { return mean[0][0]; }
  /// NaN when either cell is empty.
  double delta_r() const { return mu11() - mu10(); }
  double delta_nr() const { return mu01() - mu00(); }
  std::size_t total() const { return count[0][0] + count[0][1] + count[1][0] + count[1][1]; }
};

inline Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& covariates) {
  Eigen::MatrixXd design(covariates.rows(), covariates.cols() + 1);
  design.col(0).setOnes();
  design.rightCols(covariates.cols()) = covariates;
  return design;
}

namespace detail {

inline std::vector<Eigen::Index> rows_where(std::span<const int> mask, int value) {
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] == value) rows.push_back(static_cast<Eigen::Index>(i));
  }
  return rows;
}

inline void check_rows(const Eigen::VectorXd& target, const Eigen::MatrixXd& covariates,
                       const ResponseIndicator& r) {
  require(covariates.rows() == target.size() && r.size() == static_cast<std::size_t>(target.size()),
          ErrorKind::dimension_mismatch, "target, covariates and indicator differ in length");
}

inline void require_observed_rows(std::size_t observed, Eigen::Index n_params) {
  require(observed >= static_cast<std::size_t>(n_params) + 2, ErrorKind::too_few_rows,
          "need at least " + std::to_string(n_params + 2) + " observed rows, have " +
              std::to_string(observed));
}

/// Posterior draw for a Gaussian linear model under the noninformative prior:
/// sigma2 ~ scaled-inv-chi2(n - p, s^2), coefficients ~ N(hat, sigma2 (X'X)^-1).
inline std::pair<Eigen::VectorXd, double> draw_linear_posterior(const LinearFit& fit, RngStream& rng) {
  require(fit.residual_df() >= 1, ErrorKind::too_few_rows,
          "posterior draw needs at least one residual degree of freedom");
  const double sigma2 = sample_scaled_inv_chi2(static_cast<double>(fit.residual_df()),
                                               fit.residual_variance, rng);
  Eigen::VectorXd coef = sample_mvnormal(fit.coefficients, sigma2 * fit.gram_inverse, rng);
  return {std::move(coef), sigma2};
}

}  // namespace detail

struct AdjustmentFit {
  LinearFit fit;
  ImputationParams params;
};

/// Regresses the observed target on [1, Z, (rdot - 1)]. The last coefficient
/// is the adjustment delta_adj; the rest are phi.
inline AdjustmentFit estimate_adjustment(const Eigen::VectorXd& target,
                                         const Eigen::MatrixXd& covariates,
                                         const ResponseIndicator& r, const ResponseIndicator& rdot) {
  detail::check_rows(target, covariates, r);
  detail::require(rdot.size() == r.size(), ErrorKind::dimension_mismatch,
                  "pseudo indicator length does not match");
  const auto observed = detail::rows_where(r.values(), 1);
  const Eigen::Index q = covariates.cols() + 2;
  detail::require_observed_rows(observed.size(), q);

  std::size_t rdot_ones = 0;
  for (auto i : observed) rdot_ones += static_cast<std::size_t>(rdot[static_cast<std::size_t>(i)]);
  detail::require(rdot_ones > 0 && rdot_ones < observed.size(), ErrorKind::degenerate_rdot,
                  "pseudo indicator is constant among observed rows");

  const auto n_obs = static_cast<Eigen::Index>(observed.size());
  Eigen::MatrixXd design(n_obs, q);
  Eigen::VectorXd response(n_obs);
  for (Eigen::Index k = 0; k < n_obs; ++k) {
    const Eigen::Index i = observed[static_cast<std::size_t>(k)];
    design(k, 0) = 1.0;
    design.row(k).segment(1, covariates.cols()) = covariates.row(i);
    design(k, q - 1) = rdot[static_cast<std::size_t>(i)] - 1.0;
    response[k] = target[i];
  }

  AdjustmentFit out;
  out.fit = ols_fit(design, response);
  out.params.phi = out.fit.coefficients.head(q - 1);
  out.params.delta_adj = out.fit.coefficients[q - 1];
  out.params.sigma2 = out.fit.residual_variance;
  return out;
}

inline AdjustmentFit estimate_adjustment(const IncompleteDataset& data, const ResponseIndicator& r,
                                         const ResponseIndicator& rdot) {
  return estimate_adjustment(data.target(), data.covariates(), r, rdot);
}

/// Everything one Algorithm-1 step produced, for callers that need more than
/// the completed vector.
struct AdjustedDraw {
  Eigen::VectorXd completed;
  /// Pre-noise conditional means for missing rows; NaN on observed rows.
  Eigen::VectorXd predicted;
  ImputationParams estimate;
  Eigen::VectorXd phi_draw;
  double sigma2_draw = 0.0;
};

/// Imputes missing rows for a given pseudo indicator: draw (phi, sigma2) from
/// the posterior of the adjustment regression, predict Z phi + delta (rdot - 2)
/// with the plug-in delta estimate, then add N(0, sigma2) noise.
/// `delta_override` replaces the estimated delta (used to check the MAR reduction).
inline AdjustedDraw impute_given_rdot_detailed(const Eigen::VectorXd& target,
                                               const Eigen::MatrixXd& covariates,
                                               const ResponseIndicator& r,
                                               const ResponseIndicator& rdot, RngStream& rng,
                                               std::optional<double> delta_override = std::nullopt) {
  AdjustmentFit adj = estimate_adjustment(target, covariates, r, rdot);
  auto [coef_draw, sigma2_draw] = detail::draw_linear_posterior(adj.fit, rng);
  const Eigen::Index p = covariates.cols() + 1;
  const double delta = delta_override.value_or(adj.params.delta_adj);

  AdjustedDraw out;
  out.phi_draw = coef_draw.head(p);
  out.sigma2_draw = sigma2_draw;
  out.estimate = std::move(adj.params);
  out.completed = target;
  out.predicted = Eigen::VectorXd::Constant(target.size(), std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    if (r[static_cast<std::size_t>(i)] == 1) continue;
    const double mean = out.phi_draw[0] + covariates.row(i).dot(out.phi_draw.tail(p - 1)) +
                        delta * (rdot[static_cast<std::size_t>(i)] - 2.0);
    out.predicted[i] = mean;
    out.completed[i] = sample_normal(mean, sigma2_draw, rng);
  }
  return out;
}

inline Eigen::VectorXd impute_given_rdot(const IncompleteDataset& data, const ResponseIndicator& r,
                                         const ResponseIndicator& rdot, RngStream& rng) {
  return impute_given_rdot_detailed(data.target(), data.covariates(), r, rdot, rng).completed;
}

/// One draw of the selection-model coefficients from the normal approximation
/// to the posterior (flat prior) centred at the MLE.
inline NonresponseParams draw_psi_from_fit(const LogisticFit& fit, RngStream& rng) {
  detail::require(fit.coefficients.size() >= 2, ErrorKind::dimension_mismatch,
                  "selection model needs intercept and target coefficients");
  const Eigen::VectorXd draw = sample_mvnormal(fit.coefficients, fit.covariance, rng);
  NonresponseParams psi;
  psi.psi0 = draw[0];
  psi.psi1 = draw[1];
  psi.psi_z = draw.tail(draw.size() - 2);
  return psi;
}

inline Eigen::MatrixXd selection_design(const Eigen::VectorXd& completed,
                                        const Eigen::MatrixXd& covariates) {
  Eigen::MatrixXd design(completed.size(), covariates.cols() + 2);
  design.col(0).setOnes();
  design.col(1) = completed;
  design.rightCols(covariates.cols()) = covariates;
  return design;
}

/// Fits logit P(R = 1) on [1, completed target, covariates] and draws psi.
inline NonresponseParams draw_psi_posterior(const Eigen::VectorXd& completed,
                                            const Eigen::MatrixXd& covariates,
                                            const ResponseIndicator& r, RngStream& rng) {
  detail::check_rows(completed, covariates, r);
  detail::require(completed.allFinite(), ErrorKind::invalid_parameter,
                  "draw_psi_posterior needs a completed target");
  const LogisticFit fit = logistic_fit(selection_design(completed, covariates), r.values());
  return draw_psi_from_fit(fit, rng);
}

inline ResponseIndicator draw_rdot(const Eigen::VectorXd& completed, const Eigen::MatrixXd& covariates,
                                   const NonresponseParams& psi, RngStream& rng) {
  return generate_missingness(completed, covariates, psi, rng);
}

inline CellMeans cell_means(const Eigen::VectorXd& target, const ResponseIndicator& r,
                            const ResponseIndicator& rdot) {
  detail::require(r.size() == static_cast<std::size_t>(target.size()) && rdot.size() == r.size(),
                  ErrorKind::dimension_mismatch, "cell_means inputs differ in length");
  detail::require(target.allFinite(), ErrorKind::invalid_parameter,
                  "cell_means needs a fully known target");
  CellMeans cells;
  std::array<std::array<double, 2>, 2> sum{};
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    const int a = r[static_cast<std::size_t>(i)];
    const int b = rdot[static_cast<std::size_t>(i)];
    sum[a][b] += target[i];
    ++cells.count[a][b];
  }
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      cells.mean[a][b] = cells.count[a][b] == 0 ? std::numeric_limits<double>::quiet_NaN()
                                                : sum[a][b] / static_cast<double>(cells.count[a][b]);
    }
  }
  return cells;
}

struct RiChain {
  Eigen::VectorXd completed;
  /// delta_adj estimate used in each sweep (0 for fallback sweeps).
  std::vector<double> delta_trace;
  std::vector<NonresponseParams> psi_trace;
  int fallback_sweeps = 0;
};

struct RiResult {
  std::vector<Eigen::VectorXd> imputations;
  std::vector<RiChain> chains;
  std::vector<std::string> warnings;
};

namespace detail {

/// Bayesian linear-regression imputation of missing rows under MAR.
inline Eigen::VectorXd mar_draw(const Eigen::VectorXd& target, const Eigen::MatrixXd& covariates,
                                const ResponseIndicator& r, const LinearFit& fit, RngStream& rng) {
  auto [phi, sigma2] = draw_linear_posterior(fit, rng);
  Eigen::VectorXd completed = target;
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    if (r[static_cast<std::size_t>(i)] == 1) continue;
    const double mean = phi[0] + covariates.row(i).dot(phi.tail(phi.size() - 1));
    completed[i] = sample_normal(mean, sigma2, rng);
  }
  return completed;
}

inline LinearFit fit_observed(const Eigen::VectorXd& target, const Eigen::MatrixXd& covariates,
                              const ResponseIndicator& r, bool strict) {
  const auto observed = rows_where(r.values(), 1);
  const auto n_obs = static_cast<Eigen::Index>(observed.size());
  Eigen::MatrixXd design(n_obs, covariates.cols() + 1);
  Eigen::VectorXd response(n_obs);
  for (Eigen::Index k = 0; k < n_obs; ++k) {
    const Eigen::Index i = observed[static_cast<std::size_t>(k)];
    design(k, 0) = 1.0;
    design.row(k).tail(covariates.cols()) = covariates.row(i);
    response[k] = target[i];
  }
  OlsOptions options;
  options.strict = strict;
  return ols_fit(design, response, options);
}

}  // namespace detail

/// Runs one RI chain. Chain k draws from RngStream(config.seed, k), so chains
/// can be evaluated in any order or in parallel.
inline RiChain ri_chain(const IncompleteDataset& data, const RiConfig& config, int chain_index,
                        std::vector<std::string>* warnings = nullptr) {
  const ResponseIndicator& r = data.response();
  const Eigen::VectorXd& target = data.target();
  const Eigen::MatrixXd& z = data.covariates();
  const Eigen::MatrixXd& selection = data.selection_covariates();
  RngStream rng(config.seed, static_cast<std::uint64_t>(chain_index));

  RiChain chain;
  chain.completed = target;
  const auto observed = detail::rows_where(r.values(), 1);
  if (observed.size() == r.size()) return chain;

  for (Eigen::Index i = 0; i < target.size(); ++i) {
    if (r[static_cast<std::size_t>(i)] == 1) continue;
    const auto pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(observed.size()));
    chain.completed[i] = target[observed[std::min(pick, observed.size() - 1)]];
  }

  for (int sweep = 0; sweep < config.iterations; ++sweep) {
    NonresponseParams psi = draw_psi_posterior(chain.completed, selection, r, rng);
    std::optional<ResponseIndicator> rdot;
    for (int attempt = 0; attempt <= config.max_rdot_redraws; ++attempt) {
      ResponseIndicator candidate = draw_rdot(chain.completed, selection, psi, rng);
      std::size_t ones = 0;
      for (auto i : observed) ones += static_cast<std::size_t>(candidate[static_cast<std::size_t>(i)]);
      if (ones > 0 && ones < observed.size()) {
        rdot = std::move(candidate);
        break;
      }
    }
    chain.psi_trace.push_back(psi);
    if (rdot) {
      AdjustedDraw step = impute_given_rdot_detailed(target, z, r, *rdot, rng);
      chain.completed = std::move(step.completed);
      chain.delta_trace.push_back(step.estimate.delta_adj);
    } else {
      const LinearFit fit = detail::fit_observed(target, z, r, false);
      chain.completed = detail::mar_draw(target, z, r, fit, rng);
      chain.delta_trace.push_back(0.0);
      ++chain.fallback_sweeps;
      if (warnings != nullptr) {
        warnings->push_back("chain " + std::to_string(chain_index) + " sweep " +
                            std::to_string(sweep + 1) +
                            ": pseudo indicator constant among observed rows after " +
                            std::to_string(config.max_rdot_redraws) +
                            " redraws; used delta_adj = 0");
      }
    }
  }
  return chain;
}

/// Random-indicator multiple imputation: m independent chains, each started
/// from a resample of the observed values and iterated `iterations` times over
/// (draw psi, draw pseudo indicator, impute given the pseudo indicator).
inline RiResult ri_impute(const IncompleteDataset& data, const RiConfig& config) {
  detail::require(config.iterations >= 1 && config.num_imputations >= 1 &&
                      config.max_rdot_redraws >= 0,
                  ErrorKind::invalid_parameter, "iterations and num_imputations must be >= 1");
  RiResult result;
  if (data.missing_count() > 0) {
    detail::require_observed_rows(data.observed_count(), data.covariates().cols() + 2);
  } else {
    result.warnings.push_back("target has no missing values; returning copies of the input");
  }
  for (int k = 0; k < config.num_imputations; ++k) {
    result.chains.push_back(ri_chain(data, config, k, &result.warnings));
    result.imputations.push_back(result.chains.back().completed);
  }
  return result;
}

/// Conventional MAR multiple imputation (Bayesian linear regression draws).
inline std::vector<Eigen::VectorXd> mar_impute(const IncompleteDataset& data, int m, RngStream& rng) {
  detail::require(m >= 1, ErrorKind::invalid_parameter, "m must be >= 1");
  if (data.missing_count() == 0) return std::vector<Eigen::VectorXd>(static_cast<std::size_t>(m), data.target());
  detail::require_observed_rows(data.observed_count(), data.covariates().cols() + 1);
  const LinearFit fit = detail::fit_observed(data.target(), data.covariates(), data.response(), true);
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    out.push_back(detail::mar_draw(data.target(), data.covariates(), data.response(), fit, rng));
  }
  return out;
}

struct CompleteCases {
  Eigen::MatrixXd covariates;
  Eigen::VectorXd target;
};

inline CompleteCases complete_case(const IncompleteDataset& data) {
  detail::require_observed_rows(data.observed_count(), data.covariates().cols() + 1);
  const auto observed = detail::rows_where(data.response().values(), 1);
  CompleteCases cc;
  cc.covariates.resize(static_cast<Eigen::Index>(observed.size()), data.covariates().cols());
  cc.target.resize(static_cast<Eigen::Index>(observed.size()));
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    cc.covariates.row(row) = data.covariates().row(observed[k]);
    cc.target[row] = data.target()[observed[k]];
  }
  return cc;
}

}  // namespace rimpute
