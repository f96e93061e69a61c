#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rimpute/mechanism.hpp"
#include "rimpute/simharness.hpp"

using namespace rimpute;

namespace {

NonresponseParams make_psi(double psi0, double psi1, std::initializer_list<double> z) {
  NonresponseParams p;
  p.psi0 = psi0;
  p.psi1 = psi1;
  p.psi_z = Eigen::VectorXd(static_cast<Eigen::Index>(z.size()));
  Eigen::Index j = 0;
  for (double v : z) p.psi_z[j++] = v;
  return p;
}

double simulated_missing_fraction(const std::string& mechanism, BetaSet set) {
  RngStream rng(404, set == BetaSet::strong ? 1 : 2);
  const CompleteData data = generate_complete_data(beta_values(set), 100000, rng);
  const NonresponseParams psi = *builtin_mechanism(mechanism);
  const ResponseIndicator r =
      generate_missingness(data.target, data.covariates.leftCols(psi.psi_z.size()), psi, rng);
  return r.missing_fraction();
}

}  // namespace

TEST(ResponseProbability, ZeroPredictorIsHalf) {
  const auto psi = make_psi(0, 0, {});
  EXPECT_DOUBLE_EQ(response_probability(psi, 123.0, Eigen::VectorXd()), 0.5);
}

TEST(ResponseProbability, McarValue) {
  const auto psi = make_psi(-0.75, 0, {0});
  const double p = response_probability(psi, 5.0, Eigen::VectorXd::Constant(1, 2.0));
  EXPECT_NEAR(p, 1.0 / (1.0 + std::exp(0.75)), 1e-15);
  EXPECT_NEAR(1.0 - p, 0.68, 0.005);
}

TEST(ResponseProbability, DimensionMismatch) {
  const auto psi = make_psi(0, 1, {0.5});
  try {
    response_probability(psi, 1.0, Eigen::VectorXd::Zero(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dimension_mismatch);
  }
}

TEST(ResponseProbability, MonotoneInTarget) {
  const Eigen::VectorXd z = Eigen::VectorXd::Constant(1, 0.3);
  for (double psi1 : {-1.0, 0.0, 0.75}) {
    const auto psi = make_psi(-0.5, psi1, {0.25});
    double prev = response_probability(psi, -5.0, z);
    for (double x = -4.9; x < 5.0; x += 0.1) {
      const double p = response_probability(psi, x, z);
      if (psi1 > 0) {
        EXPECT_GT(p, prev);
      }
      if (psi1 < 0) {
        EXPECT_LT(p, prev);
      }
      if (psi1 == 0) {
        EXPECT_EQ(p, prev);
      }
      prev = p;
    }
  }
}

TEST(GenerateMissingness, CertainResponseGivesAllOnes) {
  RngStream rng(1, 1);
  const auto psi = make_psi(50, 0, {0});
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(100, -1, 1);
  const ResponseIndicator r = generate_missingness(x, Eigen::MatrixXd::Zero(100, 1), psi, rng);
  EXPECT_EQ(r, ResponseIndicator::all_observed(100));
}

TEST(GenerateMissingness, RejectsBadShapes) {
  RngStream rng(1, 1);
  const auto psi = make_psi(0, 0, {0});
  EXPECT_THROW(generate_missingness(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Zero(3, 2), psi, rng),
               Error);
  EXPECT_THROW(generate_missingness(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Zero(4, 1), psi, rng),
               Error);
}

TEST(GenerateMissingness, MarStrongRate) {
  EXPECT_NEAR(simulated_missing_fraction("mar", BetaSet::strong), 0.70, 0.01);
}

TEST(GenerateMissingness, Mnar2ModerateRate) {
  EXPECT_NEAR(simulated_missing_fraction("mnar2", BetaSet::moderate), 0.58, 0.01);
}

TEST(GenerateMissingness, Mnar3StrongRate) {
  EXPECT_NEAR(simulated_missing_fraction("mnar3", BetaSet::strong), 0.57, 0.01);
}

TEST(GenerateMissingness, Reproducible) {
  const auto psi = make_psi(0.2, 0.5, {});
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(1000, -2, 2);
  RngStream a(9, 9);
  RngStream b(9, 9);
  EXPECT_EQ(generate_missingness(x, Eigen::MatrixXd(1000, 0), psi, a),
            generate_missingness(x, Eigen::MatrixXd(1000, 0), psi, b));
}

TEST(ResponseIndicatorType, CountsAndValidation) {
  const ResponseIndicator r(std::vector<int>{1, 0, 1, 1});
  EXPECT_EQ(r.observed_count(), 3u);
  EXPECT_EQ(r.missing_count(), 1u);
  EXPECT_DOUBLE_EQ(r.missing_fraction(), 0.25);
  EXPECT_THROW(ResponseIndicator(std::vector<int>{0, 2}), Error);
}

TEST(DeltaFromPsi, Examples) {
  EXPECT_EQ(delta_from_psi(0.0, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(delta_from_psi(1.5, 1.0), 1.5);
  EXPECT_DOUBLE_EQ(delta_from_psi(0.5, 4.0), 2.0);
  EXPECT_THROW(delta_from_psi(1.0, 0.0), Error);
  EXPECT_THROW(delta_from_psi(1.0, -1.0), Error);
}

TEST(NonresponseParamsType, Flags) {
  EXPECT_TRUE(make_psi(1, 0, {2}).is_mar());
  EXPECT_FALSE(make_psi(1, 0.1, {}).is_mar());
  EXPECT_FALSE(make_psi(1, std::nan(""), {}).all_finite());
}

// Smaller-sample version of the selection-shift property; the 1e6-row check
// lives in the acceptance suite.
TEST(SelectionShift, MissingPartShiftedByPsi1Sigma2) {
  const double sigma2 = 1.0;
  const double psi1 = 1.0;
  const auto s = oracle::selection_sample(200000, -0.5, psi1, 0.3, sigma2, 1, 77);
  std::vector<double> shift;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (s.r[i] == 0) shift.push_back(s.x[i] - s.mu[i]);
  }
  const auto est = oracle::mean_se(shift);
  EXPECT_LT(std::abs(est.mean + delta_from_psi(psi1, sigma2)), 4.0 * est.se);

  // The observed part is centred on mu.
  std::vector<double> obs;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (s.r[i] == 1) obs.push_back(s.x[i] - s.mu[i]);
  }
  const auto o = oracle::mean_se(obs);
  EXPECT_LT(std::abs(o.mean), 4.0 * o.se);
}
