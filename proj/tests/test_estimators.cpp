#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "squeezest/estimators.hpp"
#include "squeezest/scaling.hpp"

using namespace squeezest;

namespace {

std::vector<GaussianPureState> standard_states() {
  return {GaussianPureState::vacuum(),
          GaussianPureState::coherent({1.0, 0.0}),
          GaussianPureState::coherent({2.0, 0.0}),
          GaussianPureState::coherent({4.0, 0.0}),
          {{1.0, 0.0}, 0.5},
          {{1.0, 0.0}, -0.5}};
}

ShiftDistribution optimal_for(const GaussianPureState& s) { return optimal_distribution(spectral_density(s)); }

// max_i |p(t_i) - p(-t_i)| on a grid symmetric about 0
double reflection_asymmetry(const ShiftDistribution& d) {
  double sup = 0.0;
  for (std::size_t i = 0; i < d.grid().n; ++i) {
    const double t = d.grid().at(i);
    if (!d.grid().contains(-t)) continue;
    sup = std::max(sup, std::abs(d.values()[i] - d.nearest_value(-t)));
  }
  return sup;
}

const double kVacuumLnxMean = std::log(0.5) - (std::numbers::egamma + std::log(2.0)) / 2.0;

}  // namespace

TEST(ShiftDistribution, GaussianFixture) {
  const GridSpec g = symmetric_grid(8.0, 4001);
  const double s = 0.7, m = 0.25;
  std::vector<double> p(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double d = g.at(i) - m;
    p[i] = std::exp(-d * d / (2 * s * s)) / (s * std::sqrt(2 * std::numbers::pi));
  }
  const ShiftDistribution dist(g, p, Frame::error);
  EXPECT_NEAR(dist.summary().captured, 1.0, 1e-10);
  EXPECT_NEAR(dist.summary().mean, m, 1e-10);
  EXPECT_NEAR(dist.summary().rmse, std::sqrt(s * s + m * m), 1e-8);
  EXPECT_NEAR(dist.summary().mode, m, g.step());
}

TEST(ShiftDistribution, ModeTieBreaksTowardReference) {
  const GridSpec g{-2.0, 2.0, 5};
  const ShiftDistribution flat(g, std::vector<double>(5, 0.25), Frame::error);
  EXPECT_EQ(flat.summary().mode, 0.0);
  const ShiftDistribution shifted(g, std::vector<double>(5, 0.25), Frame::absolute, 1.2);
  EXPECT_EQ(shifted.summary().mode, 1.0);
}

TEST(ShiftDistribution, WindowTooNarrow) {
  const auto g = spectral_density(GaussianPureState::vacuum());
  EXPECT_THROW(optimal_distribution(g, symmetric_grid(0.5, 201)), WindowError);
}

TEST(ShiftDistribution, ErrorFrameConversion) {
  const auto psi = wavefunction(GaussianPureState::vacuum());
  const auto abs = lnx_distribution(psi, 0.4);
  ASSERT_EQ(abs.frame(), Frame::absolute);
  EXPECT_EQ(abs.reference(), 0.4);
  const auto err = abs.to_error_frame();
  EXPECT_EQ(err.frame(), Frame::error);
  EXPECT_NEAR(err.summary().mean, abs.summary().mean - 0.4, 1e-12);
  EXPECT_NEAR(err.summary().rmse, abs.summary().rmse, 1e-12);
}

TEST(OptimalDistribution, NormalizedAndUnbiasedOnStandardSet) {
  for (const auto& s : standard_states()) {
    const auto d = optimal_for(s);
    EXPECT_NEAR(d.summary().captured, 1.0, 1e-3) << "alpha=" << s.alpha << " z=" << s.z;
    EXPECT_LT(std::abs(d.summary().mean), 1e-3);
    EXPECT_LE(std::abs(d.summary().mode), d.grid().step());
  }
}

TEST(OptimalDistribution, VacuumSymmetric) {
  const auto d = optimal_for(GaussianPureState::vacuum());
  EXPECT_LT(reflection_asymmetry(d), 1e-6);
}

TEST(OptimalDistribution, PeakGrowsWithAmplitude) {
  double prev = optimal_for(GaussianPureState::vacuum()).nearest_value(0.0);
  for (double a : {1.0, 2.0, 4.0}) {
    const double p0 = optimal_for(GaussianPureState::coherent({a, 0.0})).nearest_value(0.0);
    EXPECT_GT(p0, prev) << "alpha = " << a;
    prev = p0;
  }
}

TEST(OptimalDistribution, ApproachesGaussianForLargeAmplitude) {
  const double a = 6.0;
  const auto d = optimal_for(GaussianPureState::coherent({a, 0.0}));
  const double peak = std::sqrt(2 * a * a / std::numbers::pi);
  double sup = 0.0;
  for (std::size_t i = 0; i < d.grid().n; ++i) {
    const double t = d.grid().at(i);
    sup = std::max(sup, std::abs(d.values()[i] - peak * std::exp(-2 * a * a * t * t)));
  }
  EXPECT_LE(sup, 0.05 * peak);
  EXPECT_NEAR(d.summary().rmse, 1.0 / (2 * a), 0.03 / (2 * a));
}

// Squeezing the input by r0 leaves the error-frame distribution unchanged.
TEST(OptimalDistribution, CovariantUnderSqueezing) {
  const auto s = GaussianPureState::coherent({1.0, 0.0});
  const GridSpec wide{-8.0, 10.0, 16384};
  const auto psi = wavefunction(s, wide);
  const auto reference = spectral_density(s);
  const auto base = optimal_distribution(spectral_density_via_mellin(psi, reference.grid()));
  for (double r0 : {-0.5, 0.3}) {
    const auto moved =
        optimal_distribution(spectral_density_via_mellin(apply_squeeze(psi, r0), reference.grid()));
    double sup = 0.0;
    for (std::size_t i = 0; i < base.grid().n; ++i)
      sup = std::max(sup, std::abs(base.values()[i] - moved.values()[i]));
    EXPECT_LT(sup, 1e-6) << "r0 = " << r0;
  }
}

TEST(LnxDistribution, VacuumMeanMatchesClosedForm) {
  const auto d = lnx_distribution(wavefunction(GaussianPureState::vacuum()), 0.0);
  EXPECT_NEAR(d.summary().captured, 1.0, 1e-4);
  EXPECT_NEAR(d.summary().mean, kVacuumLnxMean, 1e-3);
  EXPECT_GT(reflection_asymmetry(d), 0.1);
}

// Sampling check of the closed form itself: X ~ N(0, 1/4) for the vacuum.
TEST(LnxDistribution, ClosedFormAgreesWithSampling) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> x(0.0, 0.5);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += std::log(std::abs(x(rng)));
  EXPECT_NEAR(sum / n, kVacuumLnxMean, 5e-3);
}

TEST(LnxDistribution, NormalizedOnStandardSet) {
  for (const auto& s : standard_states()) {
    const auto d = lnx_distribution(wavefunction(s), 0.0);
    EXPECT_NEAR(d.summary().captured, 1.0, 1e-3) << "alpha=" << s.alpha << " z=" << s.z;
  }
}

TEST(LnxDistribution, ShiftsWithTrueValue) {
  for (const GaussianPureState s : {GaussianPureState::vacuum(), GaussianPureState::coherent({1.0, 0.0})}) {
    const auto psi = wavefunction(s);
    const auto base = lnx_distribution(psi, 0.0);
    for (double r0 : {-0.5, 0.3}) {
      const auto moved = lnx_distribution(psi, r0);
      ASSERT_EQ(moved.grid().n, base.grid().n);
      EXPECT_NEAR(moved.grid().lo, base.grid().lo + r0, 1e-12);
      double sup = 0.0;
      for (std::size_t i = 0; i < base.grid().n; ++i)
        sup = std::max(sup, std::abs(base.values()[i] - moved.values()[i]));
      EXPECT_LT(sup, 1e-6) << "r0 = " << r0;
      EXPECT_NEAR(moved.summary().mean, base.summary().mean + r0, 1e-6);
    }
  }
}

TEST(LnxDistribution, OptimalBeatsLnxForAlpha4) {
  const auto s = GaussianPureState::coherent({4.0, 0.0});
  const double opt = optimal_for(s).summary().rmse;
  const double lnx = lnx_distribution(wavefunction(s), 0.0).summary().rmse;
  EXPECT_LT(opt, 0.95 * lnx);
}

TEST(HomodyneMc, CoherentRmse) {
  const auto r = homodyne_mc(GaussianPureState::coherent({4.0, 0.0}), 0.0, 100000, 1);
  EXPECT_NEAR(r.rmse, 1.0 / 8.0, 0.1 / 8.0);
  EXPECT_EQ(r.n_samples, 100000u);
  EXPECT_EQ(r.seed, 1u);
}

TEST(HomodyneMc, AllocatedStateReachesHeisenbergScale) {
  const auto alloc = optimal_allocation(64.0);
  const auto r = homodyne_mc(alloc.state, 0.0, 100000, 2);
  EXPECT_NEAR(r.rmse, 1.0 / 128.0, 0.1 / 128.0);
}

TEST(HomodyneMc, TrueValueShiftsEstimate) {
  const auto s = GaussianPureState::coherent({4.0, 0.0});
  const auto a = homodyne_mc(s, 0.0, 20000, 9);
  const auto b = homodyne_mc(s, 0.3, 20000, 9);
  EXPECT_NEAR(b.mean_estimate - a.mean_estimate, 0.3, 1e-12);
  EXPECT_NEAR(a.rmse, b.rmse, 1e-12);
}

TEST(HomodyneMc, DeterministicPerSeedAndStream) {
  const auto s = GaussianPureState::coherent({2.0, 0.0});
  const auto a = homodyne_mc(s, 0.1, 5000, 42, 3);
  const auto b = homodyne_mc(s, 0.1, 5000, 42, 3);
  const auto c = homodyne_mc(s, 0.1, 5000, 42, 4);
  EXPECT_EQ(a.rmse, b.rmse);
  EXPECT_EQ(a.bias, b.bias);
  EXPECT_NE(a.rmse, c.rmse);
}

TEST(HomodyneMc, Rejections) {
  EXPECT_THROW(homodyne_mc(GaussianPureState::vacuum(), 0.0, 100, 0), ValidationError);
  EXPECT_THROW(homodyne_mc(GaussianPureState::coherent({0.0, 1.0}), 0.0, 100, 0), ValidationError);
  EXPECT_THROW(homodyne_mc(GaussianPureState::coherent({1.0, 0.0}), 0.0, 0, 0), ValidationError);
  EXPECT_THROW(homodyne_mc(GaussianPureState::coherent({1.0, 0.0}), NAN, 10, 0), ValidationError);
}
