#pragma once

// Outcome distributions of the three estimation strategies:
//  * the optimal covariant measurement, p(t) = (1/2pi) |int dmu e^{-i t mu} sqrt(g(mu))|^2;
//  * the state-independent ln|X| measurement;
//  * homodyne sampling of X with the plug-in estimate ln|x / Re alpha| (Monte Carlo).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "squeezest/errors.hpp"
#include "squeezest/grid.hpp"
#include "squeezest/spectral.hpp"
#include "squeezest/states.hpp"

namespace squeezest {

inline constexpr double kMinCapturedProbability = 0.999;
inline constexpr std::size_t kDefaultErrorWindowPoints = 8193;
inline constexpr double kDefaultErrorHalfWidth = 8.0;
inline constexpr std::size_t kDefaultLnxWindowPoints = 16385;
inline constexpr double kDefaultLnxLowerTail = -20.0;

// Error frame: t = rhat - r. Absolute frame: rhat itself, with the true value
// kept as `reference`.
enum class Frame { error, absolute };

inline const char* to_string(Frame f) { return f == Frame::error ? "error" : "absolute"; }

struct DistributionSummary {
  double mean = 0.0;
  double mode = 0.0;
  // About the true value (0 in the error frame), not about the mean.
  double rmse = 0.0;
  double captured = 0.0;
};

class ShiftDistribution {
 public:
  ShiftDistribution(GridSpec grid, std::vector<double> p, Frame frame, double reference = 0.0)
      : grid_(grid), p_(std::move(p)), frame_(frame), reference_(frame == Frame::error ? 0.0 : reference) {
    grid_.validate("ShiftDistribution");
    if (p_.size() != grid_.n)
      throw ValidationError("ShiftDistribution: density count does not match grid size");
    for (double v : p_)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw NumericalError("ShiftDistribution: density must be finite and nonnegative");
    summary_ = compute_summary();
    if (summary_.captured < kMinCapturedProbability)
      throw WindowError("ShiftDistribution: window [" + std::to_string(grid_.lo) + ", " +
                        std::to_string(grid_.hi) + "] captures only " +
                        std::to_string(summary_.captured) + " of the probability");
  }

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& values() const { return p_; }
  Frame frame() const { return frame_; }
  double reference() const { return reference_; }
  const DistributionSummary& summary() const { return summary_; }

  // Density at the grid point nearest x.
  double nearest_value(double x) const { return p_[grid_.nearest(x)]; }

  ShiftDistribution to_error_frame() const {
    if (frame_ == Frame::error) return *this;
    return ShiftDistribution({grid_.lo - reference_, grid_.hi - reference_, grid_.n}, p_,
                             Frame::error);
  }

 private:
  DistributionSummary compute_summary() const {
    const double h = grid_.step();
    std::vector<double> m0(p_.size()), m1(p_.size()), m2(p_.size());
    for (std::size_t i = 0; i < p_.size(); ++i) {
      const double t = grid_.at(i);
      const double d = t - reference_;
      m0[i] = p_[i];
      m1[i] = p_[i] * t;
      m2[i] = p_[i] * d * d;
    }
    DistributionSummary s;
    s.captured = trapezoid(m0, h);
    const double mass = s.captured > 0.0 ? s.captured : 1.0;
    s.mean = trapezoid(m1, h) / mass;
    s.rmse = std::sqrt(trapezoid(m2, h) / mass);
    std::size_t best = 0;
    for (std::size_t i = 1; i < p_.size(); ++i) {
      if (p_[i] > p_[best] ||
          (p_[i] == p_[best] &&
           std::abs(grid_.at(i) - reference_) < std::abs(grid_.at(best) - reference_)))
        best = i;
    }
    s.mode = grid_.at(best);
    return s;
  }

  GridSpec grid_;
  std::vector<double> p_;
  Frame frame_;
  double reference_;
  DistributionSummary summary_;
};

inline DistributionSummary summarize(const ShiftDistribution& dist) { return dist.summary(); }

// [-8, 8] for moderate states; for |a'| >= 4 the window shrinks to
// +-12 / (2|a'|) so the grid keeps resolving the narrowing peak. The optimal
// distribution is symmetric about 0, so the window is too.
inline GridSpec default_error_window(const SpectralDensity& g) {
  const double a = g.effective_amplitude();
  const double half = a >= 4.0 ? 12.0 / (2.0 * a) : kDefaultErrorHalfWidth;
  return symmetric_grid(half, kDefaultErrorWindowPoints);
}

inline ShiftDistribution optimal_distribution(const SpectralDensity& g,
                                              std::optional<GridSpec> t_grid = std::nullopt) {
  const GridSpec tg = t_grid.value_or(default_error_window(g));
  tg.validate("optimal_distribution");
  const GridSpec& mg = g.grid();
  std::vector<double> mu;
  std::vector<double> root;
  for (std::size_t k = 0; k < mg.n; ++k) {
    if (g.values()[k] > 0.0) {
      mu.push_back(mg.at(k));
      root.push_back(std::sqrt(g.values()[k]));
    }
  }
  const double dmu = mg.step();
  std::vector<double> p(tg.n);
  for (std::size_t i = 0; i < tg.n; ++i) {
    const double t = tg.at(i);
    complex amp{0.0, 0.0};
    for (std::size_t k = 0; k < mu.size(); ++k) amp += root[k] * std::polar(1.0, -t * mu[k]);
    amp *= dmu;
    p[i] = std::norm(amp) / (2.0 * std::numbers::pi);
  }
  return ShiftDistribution(tg, std::move(p), Frame::error);
}

// Error-frame window [-20, ln max|x| + 1] of the ln|X| estimate; the lower
// tail of e^t |psi(e^t)|^2 decays only like e^t.
inline GridSpec default_lnx_window(const WavefunctionGrid& psi) {
  const double xmax = std::max(std::abs(psi.grid().lo), std::abs(psi.grid().hi));
  return {kDefaultLnxLowerTail, std::log(xmax) + 1.0, kDefaultLnxWindowPoints};
}

// Density of rhat = ln|X| measured on S(r_true)|psi>:
//   p(rhat) = e^rhat (|phi(e^rhat)|^2 + |phi(-e^rhat)|^2),  phi = S(r_true) psi.
// Absolute frame; the default grid is default_lnx_window shifted by r_true.
inline ShiftDistribution lnx_distribution(const WavefunctionGrid& psi, double r_true,
                                          std::optional<GridSpec> rhat_grid = std::nullopt) {
  if (!std::isfinite(r_true)) throw ValidationError("lnx_distribution: r_true must be finite");
  GridSpec rg;
  if (rhat_grid) {
    rg = *rhat_grid;
  } else {
    const GridSpec w = default_lnx_window(psi);
    rg = {w.lo + r_true, w.hi + r_true, w.n};
  }
  rg.validate("lnx_distribution");
  std::vector<double> p(rg.n);
  for (std::size_t i = 0; i < rg.n; ++i) {
    const double rhat = rg.at(i);
    const double x = std::exp(rhat);
    p[i] = x * (std::norm(squeezed_amplitude(psi, r_true, x)) +
                std::norm(squeezed_amplitude(psi, r_true, -x)));
  }
  return ShiftDistribution(rg, std::move(p), Frame::absolute, r_true);
}

struct McSummary {
  double bias = 0.0;  // mean(rhat) - r_true
  double rmse = 0.0;  // about r_true
  double mean_estimate = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

// Independent stream `stream` derived from a user seed.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

// X measured on S(r_true)|alpha, z> is normal with mean e^r Re(alpha) and
// standard deviation e^(r + z) / 2.
inline McSummary homodyne_mc(const GaussianPureState& state, double r_true,
                             std::size_t n_samples, std::uint64_t seed,
                             std::uint64_t stream = 0) {
  state.validate();
  if (!std::isfinite(r_true)) throw ValidationError("homodyne_mc: r_true must be finite");
  if (n_samples < 1) throw ValidationError("homodyne_mc: n_samples must be >= 1");
  const double re = state.alpha.real();
  if (re == 0.0)
    throw ValidationError("homodyne_mc: Re(alpha) = 0, the plug-in estimate ln|x/alpha| is undefined");
  auto rng = make_stream(seed, stream);
  std::normal_distribution<double> normal(std::exp(r_true) * re,
                                          0.5 * std::exp(r_true + state.z));
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double err = std::log(std::abs(normal(rng) / re)) - r_true;
    sum += err;
    sum_sq += err * err;
  }
  const double n = static_cast<double>(n_samples);
  McSummary out;
  out.bias = sum / n;
  out.rmse = std::sqrt(sum_sq / n);
  out.mean_estimate = r_true + out.bias;
  out.n_samples = n_samples;
  out.seed = seed;
  return out;
}

}  // namespace squeezest
