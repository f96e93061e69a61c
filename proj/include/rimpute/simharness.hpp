#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "rimpute/error.hpp"
#include "rimpute/imputation.hpp"
#include "rimpute/mechanism.hpp"
#include "rimpute/pooling.hpp"
#include "rimpute/rng.hpp"

namespace rimpute {

enum class Method { cc, mi, ri };
inline constexpr std::array<Method, 3> kMethods{Method::cc, Method::mi, Method::ri};

inline std::string to_string(Method method) {
  switch (method) {
    case Method::cc: return "CC";
    case Method::mi: return "MI";
    case Method::ri: return "RI";
  }
  return "?";
}

/// One cell of the simulation design: X2 ~ N(2, 4), X3 ~ N(-1, 1),
/// X1 = beta1 + beta2 X2 + beta3 X3 + N(0, 1), and a logistic selection model
/// whose psi_z entries apply to the leading covariates (X2 first).
struct ScenarioConfig {
  std::array<double, 3> beta{1.0, 0.5, 1.0};
  NonresponseParams psi;
  int n = 1000;
  int replications = 1000;
  std::string mechanism_label;
  int m = 5;
  int iterations = 10;
  std::uint64_t master_seed = 0;

  void validate() const {
    detail::require(n >= 50, ErrorKind::invalid_parameter, "scenario needs n >= 50");
    detail::require(replications >= 1, ErrorKind::invalid_parameter, "replications must be >= 1");
    detail::require(m >= 2, ErrorKind::invalid_parameter, "pooling needs m >= 2");
    detail::require(iterations >= 1, ErrorKind::invalid_parameter, "iterations must be >= 1");
    detail::require(psi.psi_z.size() >= 0 && psi.psi_z.size() <= 2, ErrorKind::invalid_parameter,
                    "psi_z may address X2 and X3 only");
    detail::require(psi.all_finite(), ErrorKind::invalid_parameter, "psi must be finite");
  }
};

enum class BetaSet { strong, moderate };

inline std::array<double, 3> beta_values(BetaSet set) {
  return set == BetaSet::strong ? std::array<double, 3>{1.0, 0.5, 1.0}
                                : std::array<double, 3>{3.0, -0.25, 0.5};
}

/// The five selection models of the simulation design (psi_z applies to X2).
inline std::optional<NonresponseParams> builtin_mechanism(const std::string& name) {
  auto make = [](double psi0, double psi1, double psi2) {
    NonresponseParams p;
    p.psi0 = psi0;
    p.psi1 = psi1;
    p.psi_z = Eigen::VectorXd::Constant(1, psi2);
    return p;
  };
  if (name == "mcar") return make(-0.75, 0.0, 0.0);
  if (name == "mar") return make(-2.0, 0.0, 0.5);
  if (name == "mnar1") return make(-0.5, 0.5, 0.25);
  if (name == "mnar2") return make(-1.0, 0.75, -0.5);
  if (name == "mnar3") return make(-2.0, 1.5, 0.0);
  return std::nullopt;
}

inline const std::array<std::string, 5>& builtin_mechanism_names() {
  static const std::array<std::string, 5> names{"mcar", "mar", "mnar1", "mnar2", "mnar3"};
  return names;
}

inline ScenarioConfig builtin_scenario(const std::string& mechanism, BetaSet set, int n,
                                       int replications, std::uint64_t seed) {
  const auto psi = builtin_mechanism(mechanism);
  detail::require(psi.has_value(), ErrorKind::input_error, "unknown scenario '" + mechanism + "'");
  ScenarioConfig config;
  config.beta = beta_values(set);
  config.psi = *psi;
  config.n = n;
  config.replications = replications;
  config.mechanism_label = mechanism;
  config.master_seed = seed;
  return config;
}

struct CompleteData {
  Eigen::VectorXd target;
  /// Columns X2, X3.
  Eigen::MatrixXd covariates;
};

inline CompleteData generate_complete_data(const std::array<double, 3>& beta, int n, RngStream& rng) {
  detail::require(n >= 1, ErrorKind::invalid_parameter, "n must be >= 1");
  CompleteData data;
  data.target.resize(n);
  data.covariates.resize(n, 2);
  for (int i = 0; i < n; ++i) {
    const double x2 = 2.0 + 2.0 * rng.standard_normal();
    const double x3 = -1.0 + rng.standard_normal();
    const double eps = rng.standard_normal();
    data.covariates(i, 0) = x2;
    data.covariates(i, 1) = x3;
    data.target[i] = beta[0] + beta[1] * x2 + beta[2] * x3 + eps;
  }
  return data;
}

/// Per-replication stream id: hash of the scenario identity and the index.
inline std::uint64_t replication_stream_id(const ScenarioConfig& config, std::uint64_t index) {
  std::string key = config.mechanism_label;
  char buf[32];
  for (double b : config.beta) {
    const auto res = std::to_chars(buf, buf + sizeof buf, b);
    key.push_back('|');
    key.append(buf, res.ptr);
  }
  key += "|n=" + std::to_string(config.n);
  return mix64(fnv1a64(key) ^ mix64(index));
}

struct MethodOutcome {
  std::optional<PooledEstimate> estimate;
  std::string error;
};

struct ReplicationOutcome {
  std::size_t index = 0;
  double missing_fraction = 0.0;
  std::array<MethodOutcome, 3> methods;

  const MethodOutcome& at(Method m) const { return methods[static_cast<std::size_t>(m)]; }
};

inline ReplicationOutcome run_replication(const ScenarioConfig& config, std::size_t index) {
  RngStream rng(config.master_seed, replication_stream_id(config, index));
  const CompleteData full = generate_complete_data(config.beta, config.n, rng);
  const auto nz = config.psi.psi_z.size();
  const ResponseIndicator r =
      generate_missingness(full.target, full.covariates.leftCols(nz), config.psi, rng);
  IncompleteDataset data = IncompleteDataset::from_complete(full.target, full.covariates, r);
  // RI's fitted selection model takes the same covariates as the generating one.
  data.set_selection_covariates(full.covariates.leftCols(nz));
  const std::uint64_t mi_seed = rng.next_u64();
  const std::uint64_t ri_seed = rng.next_u64();

  ReplicationOutcome out;
  out.index = index;
  out.missing_fraction = r.missing_fraction();

  auto guarded = [](MethodOutcome& slot, auto&& body) {
    try {
      slot.estimate = body();
    } catch (const Error& e) {
      slot.error = e.what();
    }
  };
  guarded(out.methods[0], [&] {
    const CompleteCases cc = complete_case(data);
    return single_fit_estimate(fit_analysis(cc.covariates, cc.target));
  });
  guarded(out.methods[1], [&] {
    RngStream mi_rng(mi_seed, 0);
    const auto imputations = mar_impute(data, config.m, mi_rng);
    return analyse_and_pool(full.covariates, imputations);
  });
  guarded(out.methods[2], [&] {
    RiConfig ri;
    ri.iterations = config.iterations;
    ri.num_imputations = config.m;
    ri.seed = ri_seed;
    const RiResult result = ri_impute(data, ri);
    return analyse_and_pool(full.covariates, result.imputations);
  });
  return out;
}

struct MethodSummary {
  Method method = Method::cc;
  Eigen::Vector3d mean_estimate = Eigen::Vector3d::Zero();
  Eigen::Vector3d coverage_rate = Eigen::Vector3d::Zero();
  /// sd of the per-replication estimates / sqrt(successful replications).
  Eigen::Vector3d monte_carlo_se = Eigen::Vector3d::Zero();
  /// Mean pooled standard error across replications.
  Eigen::Vector3d mean_se = Eigen::Vector3d::Zero();
  int successes = 0;
  int failures = 0;
  std::string first_error;
};

struct ScenarioResult {
  ScenarioConfig config;
  double mean_missing_fraction = 0.0;
  std::array<MethodSummary, 3> methods;

  const MethodSummary& at(Method m) const { return methods[static_cast<std::size_t>(m)]; }
};

/// Deterministic reduction in replication-index order.
inline ScenarioResult summarize(const ScenarioConfig& config,
                                const std::vector<ReplicationOutcome>& outcomes) {
  ScenarioResult result;
  result.config = config;
  const Eigen::Vector3d truth(config.beta[0], config.beta[1], config.beta[2]);
  double missing = 0.0;
  for (const auto& o : outcomes) missing += o.missing_fraction;
  result.mean_missing_fraction = outcomes.empty() ? 0.0 : missing / static_cast<double>(outcomes.size());

  for (Method method : kMethods) {
    MethodSummary& s = result.methods[static_cast<std::size_t>(method)];
    s.method = method;
    std::vector<Eigen::Vector3d> estimates;
    for (const auto& o : outcomes) {
      const MethodOutcome& mo = o.at(method);
      if (!mo.estimate) {
        ++s.failures;
        if (s.first_error.empty()) s.first_error = mo.error;
        continue;
      }
      estimates.emplace_back(mo.estimate->q_bar);
      const auto covered = coverage(*mo.estimate, truth);
      for (int j = 0; j < 3; ++j) s.coverage_rate[j] += covered[static_cast<std::size_t>(j)];
      s.mean_se += mo.estimate->se();
    }
    s.successes = static_cast<int>(estimates.size());
    if (s.successes == 0) continue;
    const double count = s.successes;
    for (const auto& e : estimates) s.mean_estimate += e;
    s.mean_estimate /= count;
    s.coverage_rate /= count;
    s.mean_se /= count;
    if (s.successes > 1) {
      Eigen::Vector3d ss = Eigen::Vector3d::Zero();
      for (const auto& e : estimates) ss += (e - s.mean_estimate).array().square().matrix();
      s.monte_carlo_se = (ss / (count - 1.0)).cwiseSqrt() / std::sqrt(count);
    }
  }
  return result;
}

inline std::vector<ReplicationOutcome> run_replications(const ScenarioConfig& config, int threads = 1) {
  config.validate();
  const auto total = static_cast<std::size_t>(config.replications);
  std::vector<ReplicationOutcome> outcomes(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
      outcomes[i] = run_replication(config, i);
    }
  };
  const int workers = std::max(1, std::min<int>(threads, config.replications));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  return outcomes;
}

/// Runs every replication and aggregates. Throws when more than 5% of the
/// replications fail for any method.
inline ScenarioResult run_scenario(const ScenarioConfig& config, int threads = 1) {
  const auto outcomes = run_replications(config, threads);
  ScenarioResult result = summarize(config, outcomes);
  for (const auto& s : result.methods) {
    if (s.failures * 20 > config.replications) {
      detail::fail(ErrorKind::non_convergence,
                   to_string(s.method) + " failed in " + std::to_string(s.failures) + " of " +
                       std::to_string(config.replications) + " replications (" + s.first_error + ")");
    }
  }
  return result;
}

namespace detail {

inline std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline void write_results_header(std::ostream& os) {
  os << "mechanism,method,coefficient,true,mean_estimate,coverage,mc_se,missing_rate\n";
}

/// Rows of the results table; numbers use the shortest round-trip format.
inline void write_results_rows(std::ostream& os, const ScenarioResult& result) {
  static const std::array<const char*, 3> coef_names{"beta1", "beta2", "beta3"};
  for (const auto& s : result.methods) {
    for (int j = 0; j < 3; ++j) {
      os << result.config.mechanism_label << ',' << to_string(s.method) << ','
         << coef_names[static_cast<std::size_t>(j)] << ','
         << detail::format_number(result.config.beta[static_cast<std::size_t>(j)]) << ','
         << detail::format_number(s.mean_estimate[j]) << ','
         << detail::format_number(s.coverage_rate[j]) << ','
         << detail::format_number(s.monte_carlo_se[j]) << ','
         << detail::format_number(result.mean_missing_fraction) << '\n';
    }
  }
}

}  // namespace rimpute
