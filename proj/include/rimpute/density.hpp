#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rimpute/error.hpp"

namespace rimpute {

struct DensitySummary {
  std::string group_label;
  Eigen::VectorXd grid;
  Eigen::VectorXd density;
  double bandwidth = 0.0;
};

/// Two densities evaluated on one shared grid (e.g. observed vs imputed).
struct DensityComparison {
  std::string group_label;
  Eigen::VectorXd grid;
  Eigen::VectorXd observed_density;
  Eigen::VectorXd reference_density;
};

inline constexpr Eigen::Index kDensityGridSize = 512;

namespace detail {

/// Type-7 (linear interpolation) sample quantile of sorted data.
inline double sorted_quantile(const std::vector<double>& sorted, double prob) {
  const double pos = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline std::vector<double> sorted_copy(const Eigen::VectorXd& values) {
  std::vector<double> sorted(values.data(), values.data() + values.size());
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

inline void require_nondegenerate(const std::vector<double>& sorted) {
  require(sorted.size() >= 2 && sorted.front() < sorted.back(), ErrorKind::degenerate_sample,
          "density estimation needs at least two distinct values");
  for (double v : sorted) require(std::isfinite(v), ErrorKind::invalid_parameter, "non-finite value");
}

/// Gaussian-kernel density at each grid point; kernels are truncated at 8h.
inline Eigen::VectorXd kernel_density(const std::vector<double>& sorted, const Eigen::VectorXd& grid,
                                      double h) {
  const double norm = 1.0 / (static_cast<double>(sorted.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  Eigen::VectorXd density(grid.size());
  for (Eigen::Index g = 0; g < grid.size(); ++g) {
    const double x = grid[g];
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x - 8.0 * h);
    const auto end = std::upper_bound(it, sorted.end(), x + 8.0 * h);
    double sum = 0.0;
    for (; it != end; ++it) {
      const double u = (x - *it) / h;
      sum += std::exp(-0.5 * u * u);
    }
    density[g] = sum * norm;
  }
  return density;
}

}  // namespace detail

/// Silverman's rule of thumb, 0.9 min(sd, IQR/1.34) n^(-1/5). Falls back to
/// the sd when the IQR is zero.
inline double silverman_bandwidth(const Eigen::VectorXd& values) {
  const auto sorted = detail::sorted_copy(values);
  detail::require_nondegenerate(sorted);
  const double n = static_cast<double>(values.size());
  const double mean = values.mean();
  const double sd = std::sqrt((values.array() - mean).square().sum() / (n - 1.0));
  const double iqr = detail::sorted_quantile(sorted, 0.75) - detail::sorted_quantile(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(n, -0.2);
}

inline Eigen::VectorXd density_grid(double lo, double hi) {
  return Eigen::VectorXd::LinSpaced(kDensityGridSize, lo, hi);
}

/// Kernel density on a 512-point grid spanning [min - 3h, max + 3h].
inline DensitySummary density_summary(const Eigen::VectorXd& values, const std::string& group) {
  const auto sorted = detail::sorted_copy(values);
  detail::require_nondegenerate(sorted);
  DensitySummary out;
  out.group_label = group;
  out.bandwidth = silverman_bandwidth(values);
  out.grid = density_grid(sorted.front() - 3.0 * out.bandwidth, sorted.back() + 3.0 * out.bandwidth);
  out.density = detail::kernel_density(sorted, out.grid, out.bandwidth);
  return out;
}

inline DensityComparison compare_densities(const Eigen::VectorXd& observed,
                                           const Eigen::VectorXd& reference,
                                           const std::string& group) {
  const auto obs = detail::sorted_copy(observed);
  const auto ref = detail::sorted_copy(reference);
  detail::require_nondegenerate(obs);
  detail::require_nondegenerate(ref);
  const double h_obs = silverman_bandwidth(observed);
  const double h_ref = silverman_bandwidth(reference);
  const double h = std::max(h_obs, h_ref);
  DensityComparison out;
  out.group_label = group;
  out.grid = density_grid(std::min(obs.front(), ref.front()) - 3.0 * h,
                          std::max(obs.back(), ref.back()) + 3.0 * h);
  out.observed_density = detail::kernel_density(obs, out.grid, h_obs);
  out.reference_density = detail::kernel_density(ref, out.grid, h_ref);
  return out;
}

inline double trapezoid(const Eigen::VectorXd& grid, const Eigen::VectorXd& f) {
  double total = 0.0;
  for (Eigen::Index i = 1; i < grid.size(); ++i) total += 0.5 * (f[i] + f[i - 1]) * (grid[i] - grid[i - 1]);
  return total;
}

/// First moment of a gridded density.
inline double density_center(const Eigen::VectorXd& grid, const Eigen::VectorXd& f) {
  return trapezoid(grid, grid.cwiseProduct(f)) / trapezoid(grid, f);
}

}  // namespace rimpute
