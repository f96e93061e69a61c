#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rimpute/error.hpp"

namespace rimpute {

struct LinearFit {
  Eigen::VectorXd coefficients;
  double residual_variance = 0.0;
  Eigen::MatrixXd gram_inverse;
  Eigen::Index n_rows = 0;
  Eigen::Index n_params = 0;
  /// Set when the design was rank deficient and a ridge term was added.
  bool ridge_applied = false;

  Eigen::Index residual_df() const { return n_rows - n_params; }
};

struct OlsOptions {
  /// Throw RankDeficient instead of falling back to a ridge solve.
  bool strict = false;
  double rank_tolerance = 1e-10;
  double ridge_factor = 1e-8;
};

/// Least squares via Householder QR. A design whose smallest singular value is
/// below rank_tolerance times the largest is either rejected (strict) or solved
/// with ridge_factor * trace(X'X) / p added to the diagonal of X'X.
inline LinearFit ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                         const OlsOptions& options = {}) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  detail::require(response.size() == n, ErrorKind::dimension_mismatch,
                  "design has " + std::to_string(n) + " rows but response has " +
                      std::to_string(response.size()));
  detail::require(p >= 1, ErrorKind::dimension_mismatch, "design has no columns");
  detail::require(n >= p, ErrorKind::too_few_rows,
                  "need at least as many rows as parameters (" + std::to_string(n) + " < " +
                      std::to_string(p) + ")");
  detail::require(design.allFinite() && response.allFinite(), ErrorKind::invalid_parameter,
                  "ols_fit input contains non-finite values");

  LinearFit fit;
  fit.n_rows = n;
  fit.n_params = p;

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(design);
  const Eigen::VectorXd sv = svd.singularValues();
  const bool deficient = sv[p - 1] < options.rank_tolerance * sv[0] || sv[0] == 0.0;

  if (!deficient) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(design);
    fit.coefficients = qr.solve(response);
    const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    fit.gram_inverse = r_inv * r_inv.transpose();
  } else {
    if (options.strict) {
      detail::fail(ErrorKind::rank_deficient,
                   "design is rank deficient (condition ratio " + std::to_string(sv[p - 1] / sv[0]) +
                       ")");
    }
    Eigen::MatrixXd gram = design.transpose() * design;
    double ridge = options.ridge_factor * gram.trace() / static_cast<double>(p);
    if (ridge <= 0.0) ridge = options.ridge_factor;
    gram.diagonal().array() += ridge;
    const Eigen::LLT<Eigen::MatrixXd> llt(gram);
    fit.coefficients = llt.solve(design.transpose() * response);
    fit.gram_inverse = llt.solve(Eigen::MatrixXd::Identity(p, p));
    fit.ridge_applied = true;
  }
  fit.gram_inverse = 0.5 * (fit.gram_inverse + fit.gram_inverse.transpose());

  const double rss = (response - design * fit.coefficients).squaredNorm();
  fit.residual_variance = n > p ? rss / static_cast<double>(n - p) : 0.0;
  return fit;
}

struct LogisticFit {
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd covariance;
  bool converged = false;
  int iterations = 0;
  double log_likelihood = 0.0;
  /// Max-norm of the score at the returned coefficients.
  double gradient_norm = 0.0;
  /// Log-likelihood after each accepted IRLS step, starting from the zero vector.
  std::vector<double> log_likelihood_trace;
};

struct IrlsOptions {
  double tolerance = 1e-8;
  int max_iterations = 25;
  double coefficient_cap = 15.0;
};

namespace detail {

/// log(1 + exp(eta)) without overflow.
inline double log1p_exp(double eta) {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

inline double inv_logit(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

inline double logistic_log_likelihood(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                      const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = design * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y[i] * eta[i] - log1p_exp(eta[i]);
  return ll;
}

}  // namespace detail

/// Logistic regression MLE by iteratively reweighted least squares (Newton
/// steps with step halving so the log-likelihood never decreases).
/// Covariance is the inverse Fisher information at the returned estimate.
inline LogisticFit logistic_fit(const Eigen::MatrixXd& design, std::span<const int> indicator,
                                const IrlsOptions& options = {}) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  detail::require(static_cast<Eigen::Index>(indicator.size()) == n, ErrorKind::dimension_mismatch,
                  "indicator length does not match design rows");
  detail::require(design.allFinite(), ErrorKind::invalid_parameter,
                  "logistic_fit design contains non-finite values");
  Eigen::VectorXd y(n);
  Eigen::Index ones = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int v = indicator[static_cast<std::size_t>(i)];
    detail::require(v == 0 || v == 1, ErrorKind::invalid_parameter, "indicator must be binary");
    y[i] = v;
    ones += v;
  }
  detail::require(ones > 0 && ones < n, ErrorKind::invalid_parameter,
                  "indicator needs at least one 0 and one 1");

  LogisticFit fit;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double ll = detail::logistic_log_likelihood(design, y, beta);
  fit.log_likelihood_trace.push_back(ll);

  Eigen::VectorXd prob(n);
  Eigen::MatrixXd info(p, p);
  Eigen::VectorXd score(p);
  const auto evaluate = [&](const Eigen::VectorXd& b) {
    const Eigen::VectorXd eta = design * b;
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      prob[i] = detail::inv_logit(eta[i]);
      w[i] = prob[i] * (1.0 - prob[i]);
    }
    score = design.transpose() * (y - prob);
    info = design.transpose() * w.asDiagonal() * design;
  };

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    evaluate(beta);
    const Eigen::VectorXd step = info.ldlt().solve(score);
    detail::require(step.allFinite(), ErrorKind::non_convergence,
                    "Fisher information is singular");
    double scale = 1.0;
    Eigen::VectorXd candidate = beta + step;
    double candidate_ll = detail::logistic_log_likelihood(design, y, candidate);
    for (int halving = 0; halving < 40 && !(candidate_ll >= ll - 1e-12 * std::abs(ll)); ++halving) {
      scale *= 0.5;
      candidate = beta + scale * step;
      candidate_ll = detail::logistic_log_likelihood(design, y, candidate);
    }
    const double change = (scale * step).cwiseAbs().maxCoeff();
    beta = candidate;
    ll = std::max(candidate_ll, ll);
    fit.log_likelihood_trace.push_back(candidate_ll);
    fit.iterations = iter;

    if (change < options.tolerance) {
      fit.converged = true;
      break;
    }
    if (beta.cwiseAbs().maxCoeff() > options.coefficient_cap) {
      detail::fail(ErrorKind::separation,
                   "coefficient magnitude exceeded " + std::to_string(options.coefficient_cap) +
                       " before convergence (quasi-separation)");
    }
  }
  if (!fit.converged) {
    detail::fail(ErrorKind::non_convergence, "IRLS did not converge in " +
                                                 std::to_string(options.max_iterations) +
                                                 " iterations");
  }

  evaluate(beta);
  fit.coefficients = beta;
  fit.log_likelihood = detail::logistic_log_likelihood(design, y, beta);
  fit.gradient_norm = score.cwiseAbs().maxCoeff();
  Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  fit.covariance = 0.5 * (cov + cov.transpose());
  return fit;
}

}  // namespace rimpute
