#pragma once

// Spectral density g(mu) = <psi|Pi_mu|psi> of the squeezing generator
// K = i (a^dag^2 - a^2) / 2, by two independent routes:
//
//  * characteristic function: g(mu) = (1/2pi) int dl e^{i l mu} chi(l),
//    evaluated as one DFT over a truncated uniform lambda grid;
//  * Mellin: g(mu) = sum_{s=+-1} |a_s(mu)|^2 with
//    a_s(mu) = (2pi)^{-1/2} int_0^inf dx x^{-i mu - 1/2} psi(s x),
//    evaluated as a Fourier integral in u = ln x.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "squeezest/errors.hpp"
#include "squeezest/fft.hpp"
#include "squeezest/grid.hpp"
#include "squeezest/states.hpp"

namespace squeezest {

inline constexpr double kSpectralNormTolerance = 1e-4;
inline constexpr double kMaxImaginaryResidue = 1e-6;
inline constexpr double kNegativeClampThreshold = -1e-8;

template <typename F>
concept CharacteristicFunction = std::invocable<F&, double> &&
    std::convertible_to<std::invoke_result_t<F&, double>, complex>;

struct SpectralMetadata {
  std::string route;
  // Lambda truncation half-width; NaN for the Mellin route.
  double lambda_halfwidth = std::numeric_limits<double>::quiet_NaN();
  std::size_t n_lambda = 0;
  std::size_t clamped = 0;
  double max_imag_residue = 0.0;
  // Values below this were treated as transform noise and zeroed.
  double noise_floor = 0.0;
  double normalization = 1.0;
};

class SpectralDensity {
 public:
  SpectralDensity(GridSpec mu, std::vector<double> g, SpectralMetadata meta)
      : mu_(mu), g_(std::move(g)), meta_(std::move(meta)) {
    mu_.validate("SpectralDensity");
    if (g_.size() != mu_.n)
      throw ValidationError("SpectralDensity: density count does not match grid size");
    for (double v : g_)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw NumericalError("SpectralDensity: density must be finite and nonnegative");
    if (!(meta_.max_imag_residue < kMaxImaginaryResidue))
      throw NumericalError("SpectralDensity: imaginary residue " +
                           std::to_string(meta_.max_imag_residue) + " exceeds 1e-6");
    meta_.normalization = trapezoid(g_, mu_.step());
    if (std::abs(meta_.normalization - 1.0) > kSpectralNormTolerance)
      throw NormalizationError("SpectralDensity: completeness violated, integral of g = " +
                               std::to_string(meta_.normalization));
  }

  const GridSpec& grid() const { return mu_; }
  const std::vector<double>& values() const { return g_; }
  const SpectralMetadata& metadata() const { return meta_; }
  double normalization() const { return meta_.normalization; }

  double moment(int k) const {
    std::vector<double> w(g_.size());
    for (std::size_t i = 0; i < g_.size(); ++i) w[i] = g_[i] * std::pow(mu_.at(i), k);
    return trapezoid(w, mu_.step()) / meta_.normalization;
  }
  double mean() const { return moment(1); }
  double variance() const {
    const double m = mean();
    return moment(2) - m * m;
  }

  // For real-parameter Gaussian states Var K = |a'|^2 + 1/2, which gives a
  // state-independent handle on the width of the optimal distribution.
  double effective_amplitude() const { return std::sqrt(std::max(0.0, variance() - 0.5)); }

 private:
  GridSpec mu_;
  std::vector<double> g_;
  SpectralMetadata meta_;
};

struct CharFnOptions {
  // Unset: smallest lambda with |chi| < truncation_tolerance beyond it.
  std::optional<double> lambda_halfwidth;
  std::size_t n_lambda = std::size_t{1} << 14;
  double truncation_tolerance = 1e-8;
  double lambda_cap = 60.0;
};

// Smallest half-width beyond which |chi(+-lambda)| stays below `tolerance`,
// located by a scan from `cap` downwards in steps of cap / 6000.
template <CharacteristicFunction Chi>
double adaptive_lambda_halfwidth(Chi&& chi, double tolerance = 1e-8, double cap = 60.0) {
  if (!(tolerance > 0.0) || !(cap > 0.0))
    throw ValidationError("adaptive_lambda_halfwidth: tolerance and cap must be positive");
  constexpr int kSteps = 6000;
  const double step = cap / kSteps;
  for (int k = kSteps; k >= 0; --k) {
    const double l = k * step;
    const double mag = std::max(std::abs(complex(chi(l))), std::abs(complex(chi(-l))));
    if (mag >= tolerance) {
      if (k == kSteps)
        throw TruncationError("adaptive_lambda_halfwidth: |chi(" + std::to_string(cap) +
                              ")| = " + std::to_string(mag) + " has not decayed below " +
                              std::to_string(tolerance));
      return (k + 1) * step;
    }
  }
  return step;
}

template <CharacteristicFunction Chi>
SpectralDensity spectral_density_from_charfn(Chi&& chi, const CharFnOptions& opts = {}) {
  const std::size_t n = opts.n_lambda;
  if (!is_power_of_two(n) || n < 4)
    throw ValidationError("spectral_density_from_charfn: n_lambda must be a power of two >= 4");
  double half = 0.0;
  if (opts.lambda_halfwidth) {
    half = *opts.lambda_halfwidth;
    if (!(half > 0.0) || !std::isfinite(half))
      throw ValidationError("spectral_density_from_charfn: lambda half-width must be positive");
    const double edge =
        std::max(std::abs(complex(chi(half))), std::abs(complex(chi(-half))));
    if (!(edge < opts.truncation_tolerance))
      throw TruncationError("spectral_density_from_charfn: |chi(+-" + std::to_string(half) +
                            ")| = " + std::to_string(edge) + " exceeds truncation tolerance");
  } else {
    half = adaptive_lambda_halfwidth(chi, opts.truncation_tolerance, opts.lambda_cap);
  }

  // lambda_j = -L + j dl, mu_k = (k - n/2) dmu with dl dmu = 2pi/n, so
  // exp(i lambda_j mu_k) = (-1)^j (-1)^(k - n/2) exp(2 pi i j k / n).
  const double dl = 2.0 * half / static_cast<double>(n);
  const double dmu = std::numbers::pi / half;
  std::vector<complex> buf(n);
  for (std::size_t j = 0; j < n; ++j) {
    const complex c = chi(-half + static_cast<double>(j) * dl);
    buf[j] = (j % 2 == 0) ? c : -c;
  }
  fft::transform(buf, fft::Sign::positive);

  SpectralMetadata meta;
  meta.route = "charfn";
  meta.lambda_halfwidth = half;
  meta.n_lambda = n;
  std::vector<double> g(n);
  double most_negative = 0.0;
  const double scale = dl / (2.0 * std::numbers::pi);
  for (std::size_t k = 0; k < n; ++k) {
    const complex v = buf[k] * (((k + n / 2) % 2 == 0) ? scale : -scale);
    meta.max_imag_residue = std::max(meta.max_imag_residue, std::abs(v.imag()));
    g[k] = v.real();
    most_negative = std::min(most_negative, g[k]);
  }
  if (most_negative < kNegativeClampThreshold)
    throw NumericalError("spectral_density_from_charfn: density reaches " +
                         std::to_string(most_negative) +
                         " (aliasing; increase n_lambda or the lambda half-width)");
  // Negative values expose the transform noise level; positive values of the
  // same size are indistinguishable from it and would be amplified by sqrt(g).
  meta.noise_floor = -2.0 * most_negative;
  for (double& v : g) {
    if (v < meta.noise_floor || v <= 0.0) {
      if (v != 0.0) ++meta.clamped;
      v = 0.0;
    }
  }
  const GridSpec mu{-static_cast<double>(n / 2) * dmu, static_cast<double>(n / 2 - 1) * dmu, n};
  return SpectralDensity(mu, std::move(g), std::move(meta));
}

// Spectral density of a Gaussian state from its closed-form characteristic function.
inline SpectralDensity spectral_density(const GaussianPureState& state,
                                        const CharFnOptions& opts = {}) {
  state.validate();
  return spectral_density_from_charfn(
      [&state](double l) { return char_fn_analytic(state, l); }, opts);
}

struct MellinOptions {
  // Bound on the neglected |x|^(-1/2) tail near x = 0, per amplitude.
  double tail_tolerance = 1e-10;
};

struct MellinAmplitudes {
  GridSpec mu;
  std::vector<complex> plus;   // s = +1, support x > 0
  std::vector<complex> minus;  // s = -1, support x < 0
};

namespace detail {

// a_s(mu) on the target grid for one branch s.
inline std::vector<complex> mellin_branch(const WavefunctionGrid& psi, int s, const GridSpec& mu,
                                          const MellinOptions& opts) {
  const GridSpec& xg = psi.grid();
  std::vector<complex> out(mu.n, complex{});
  // Branch coordinate y = s x >= 0.
  const double y_near = std::max(0.0, s > 0 ? xg.lo : -xg.hi);
  const double y_far = s > 0 ? xg.hi : -xg.lo;
  if (!(y_far > y_near)) return out;

  const auto value = [&](double y) { return psi(s * y); };
  const double u_max = std::log(y_far);
  double u_min = 0.0;
  if (y_near > 0.0) {
    u_min = std::log(y_near);
  } else {
    // Running maximum of |psi| on [0, y] over grid points, ordered by y.
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < xg.n; ++i) {
      const double y = s * xg.at(i);
      if (y >= 0.0) pts.emplace_back(y, std::abs(psi.values()[i]));
    }
    std::sort(pts.begin(), pts.end());
    double running = std::abs(value(0.0));
    for (auto& p : pts) {
      running = std::max(running, p.second);
      p.second = running;
    }
    const auto max_up_to = [&](double y) {
      auto it = std::upper_bound(pts.begin(), pts.end(), std::make_pair(y, 0.0));
      // Include the next node too: the interpolant on [y_i, y_{i+1}] is bounded by both.
      if (it != pts.end()) return it->second;
      return pts.empty() ? std::abs(value(0.0)) : pts.back().second;
    };
    u_min = u_max;
    constexpr double kScanStep = 0.05;
    while (2.0 * std::exp(0.5 * u_min) * max_up_to(std::exp(u_min)) > opts.tail_tolerance) {
      u_min -= kScanStep;
      if (u_min < -700.0)
        throw LogGridUnderflowError(
            "spectral_density_via_mellin: |x|^(-1/2) tail does not decay before the log grid "
            "underflows (wavefunction too singular at x = 0)");
    }
  }
  const double range = u_max - u_min;
  if (!(range > 0.0)) return out;

  // Resolution: at least as fine in x as the wavefunction grid at the far end.
  const double du_max = xg.step() / y_far;
  const double dmu_target = mu.step();
  std::size_t refine = 1;
  while (2.0 * std::numbers::pi * static_cast<double>(refine) / dmu_target < 1.01 * range)
    refine <<= 1;
  const double dmu = dmu_target / static_cast<double>(refine);
  const auto min_m = static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi / (dmu * du_max)));
  const std::size_t m = next_power_of_two(std::max(refine * mu.n, min_m));
  const double du = 2.0 * std::numbers::pi / (static_cast<double>(m) * dmu);
  const auto samples = std::min(m, static_cast<std::size_t>(std::floor(range / du)) + 1);

  const double mu_lo = mu.lo;
  std::vector<complex> buf(m, complex{});
  for (std::size_t j = 0; j < samples; ++j) {
    const double u = u_min + static_cast<double>(j) * du;
    const double w = (j == 0 || j + 1 == samples) ? 0.5 : 1.0;
    const complex f = w * std::exp(0.5 * u) * value(std::exp(u));
    buf[j] = f * std::polar(1.0, -mu_lo * static_cast<double>(j) * du);
  }
  fft::transform(buf, fft::Sign::negative);
  const double norm = du / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < mu.n; ++i) {
    const std::size_t k = i * refine;
    const double phase = -(mu_lo + static_cast<double>(k) * dmu) * u_min;
    out[i] = norm * buf[k] * std::polar(1.0, phase);
  }
  return out;
}

}  // namespace detail

inline MellinAmplitudes mellin_amplitudes(const WavefunctionGrid& psi, const GridSpec& mu,
                                          const MellinOptions& opts = {}) {
  mu.validate("mellin_amplitudes");
  return {mu, detail::mellin_branch(psi, +1, mu, opts), detail::mellin_branch(psi, -1, mu, opts)};
}

inline SpectralDensity spectral_density_via_mellin(const WavefunctionGrid& psi,
                                                   const GridSpec& mu,
                                                   const MellinOptions& opts = {}) {
  const auto amps = mellin_amplitudes(psi, mu, opts);
  std::vector<double> g(mu.n);
  for (std::size_t i = 0; i < mu.n; ++i) g[i] = std::norm(amps.plus[i]) + std::norm(amps.minus[i]);
  SpectralMetadata meta;
  meta.route = "mellin";
  return SpectralDensity(mu, std::move(g), std::move(meta));
}

}  // namespace squeezest
