#pragma once

// Pure single-mode input states in the quadrature picture, X = (a + a^dag)/2.
//
// Squeezing S(r) = exp[r (a^dag^2 - a^2) / 2] acts on wavefunctions as
//   psi(x) -> exp(-r/2) psi(exp(-r) x),
// so S(r)^dag X S(r) = e^r X. The characteristic function
// chi(lambda) = <psi|S(lambda)|psi> is the only state-dependent input the
// spectral machinery needs.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "squeezest/errors.hpp"
#include "squeezest/grid.hpp"

namespace squeezest {

inline constexpr double kBoundaryDecay = 1e-10;
inline constexpr double kWavefunctionNormTolerance = 1e-8;
inline constexpr std::size_t kDefaultWavefunctionPoints = 4096;
inline constexpr double kDefaultWavefunctionHalfWidthSigmas = 10.0;

// Displaced squeezed state D(alpha) S(z) |0>. Vacuum, coherent and squeezed
// vacuum are the special cases z = 0 and/or alpha = 0.
struct GaussianPureState {
  complex alpha{0.0, 0.0};
  double z = 0.0;

  static GaussianPureState vacuum() { return {}; }
  static GaussianPureState coherent(complex a) { return {a, 0.0}; }
  static GaussianPureState squeezed_vacuum(double z) { return {{0.0, 0.0}, z}; }

  void validate() const {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()) || !std::isfinite(z))
      throw ValidationError("GaussianPureState: alpha and z must be finite");
    const double s = std::sinh(z);
    if (!std::isfinite(std::norm(alpha) + s * s))
      throw ValidationError("GaussianPureState: mean photon number overflows");
  }

  // Amplitude a' with D(alpha) S(z) = S(z) D(a'), so that
  // <alpha,z|S(l)|alpha,z> = <a'|S(l)|a'>. Real and imaginary parts scale
  // oppositely because S(z) stretches X and compresses the conjugate quadrature.
  complex effective_amplitude() const {
    return {alpha.real() * std::exp(-z), alpha.imag() * std::exp(z)};
  }

  double quadrature_mean() const { return alpha.real(); }
  double quadrature_stddev() const { return 0.5 * std::exp(z); }

  // The same physical state after S(r): S(r) D(alpha) S(z) = D(alpha') S(z + r)
  // with Re alpha' = e^r Re alpha, Im alpha' = e^-r Im alpha.
  GaussianPureState squeezed_by(double r) const {
    return {{alpha.real() * std::exp(r), alpha.imag() * std::exp(-r)}, z + r};
  }

  friend bool operator==(const GaussianPureState&, const GaussianPureState&) = default;
};

inline double mean_photon_number(const GaussianPureState& state) {
  state.validate();
  const double s = std::sinh(state.z);
  return std::norm(state.alpha) + s * s;
}

// Sampled quadrature wavefunction on a uniform grid.
class WavefunctionGrid {
 public:
  WavefunctionGrid(GridSpec grid, std::vector<complex> values)
      : grid_(grid), values_(std::move(values)) {
    grid_.validate("WavefunctionGrid");
    if (values_.size() != grid_.n)
      throw ValidationError("WavefunctionGrid: value count does not match grid size");
    for (const auto& v : values_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw ValidationError("WavefunctionGrid: non-finite amplitude");
    const double peak = max_abs();
    if (!(peak > 0.0)) throw ValidationError("WavefunctionGrid: wavefunction is identically zero");
    if (std::abs(values_.front()) >= kBoundaryDecay * peak ||
        std::abs(values_.back()) >= kBoundaryDecay * peak)
      throw GridTooSmallError(
          "WavefunctionGrid: boundary decay violated (support not contained in grid)");
    const double norm = norm_squared();
    if (std::abs(norm - 1.0) > kWavefunctionNormTolerance)
      throw ValidationError("WavefunctionGrid: L2 norm " + std::to_string(norm) +
                            " differs from 1");
  }

  const GridSpec& grid() const { return grid_; }
  std::span<const complex> values() const { return values_; }

  complex operator()(double x) const {
    return cubic_interpolate(grid_, std::span<const complex>(values_), x);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  double norm_squared() const { return trapezoid(density(), grid_.step()); }

  double mean_x() const {
    auto d = density();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] *= grid_.at(i);
    return trapezoid(d, grid_.step());
  }

  double variance_x() const {
    const double m = mean_x();
    auto d = density();
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double dx = grid_.at(i) - m;
      d[i] *= dx * dx;
    }
    return trapezoid(d, grid_.step());
  }

  std::vector<double> density() const {
    std::vector<double> d(values_.size());
    std::transform(values_.begin(), values_.end(), d.begin(),
                   [](const complex& v) { return std::norm(v); });
    return d;
  }

 private:
  GridSpec grid_;
  std::vector<complex> values_;
};

// [mean - 10 sigma, mean + 10 sigma] with 4096 points.
inline GridSpec default_wavefunction_grid(const GaussianPureState& state) {
  state.validate();
  const double half = kDefaultWavefunctionHalfWidthSigmas * state.quadrature_stddev();
  return {state.quadrature_mean() - half, state.quadrature_mean() + half,
          kDefaultWavefunctionPoints};
}

// psi(x) = (2/pi)^(1/4) e^(-z/2) exp(-e^(-2z) (x - Re a)^2 + 2i Im(a) x - i Re(a) Im(a))
inline complex gaussian_amplitude(const GaussianPureState& state, double x) {
  const double re = state.alpha.real();
  const double im = state.alpha.imag();
  const double dx = x - re;
  const double envelope = std::pow(2.0 / std::numbers::pi, 0.25) * std::exp(-0.5 * state.z) *
                          std::exp(-std::exp(-2.0 * state.z) * dx * dx);
  return std::polar(envelope, 2.0 * im * x - re * im);
}

inline WavefunctionGrid wavefunction(const GaussianPureState& state, const GridSpec& grid) {
  state.validate();
  grid.validate("wavefunction");
  std::vector<complex> values(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) values[i] = gaussian_amplitude(state, grid.at(i));
  const double peak = std::pow(2.0 / std::numbers::pi, 0.25) * std::exp(-0.5 * state.z);
  if (std::abs(values.front()) >= kBoundaryDecay * peak ||
      std::abs(values.back()) >= kBoundaryDecay * peak)
    throw GridTooSmallError("wavefunction: grid [" + std::to_string(grid.lo) + ", " +
                            std::to_string(grid.hi) + "] does not contain the state's support");
  return WavefunctionGrid(grid, std::move(values));
}

inline WavefunctionGrid wavefunction(const GaussianPureState& state) {
  return wavefunction(state, default_wavefunction_grid(state));
}

// e^(-r/2) psi(e^(-r) x), interpolating psi.
inline complex squeezed_amplitude(const WavefunctionGrid& psi, double r, double x) {
  return std::exp(-0.5 * r) * psi(std::exp(-r) * x);
}

// S(r) psi sampled on `out` (defaults to the input grid). Throws
// SupportOverflowError when the squeezed support no longer fits.
inline WavefunctionGrid apply_squeeze(const WavefunctionGrid& psi, double r,
                                      std::optional<GridSpec> out = std::nullopt) {
  if (!std::isfinite(r)) throw ValidationError("apply_squeeze: r must be finite");
  const GridSpec grid = out.value_or(psi.grid());
  grid.validate("apply_squeeze");
  std::vector<complex> values(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) values[i] = squeezed_amplitude(psi, r, grid.at(i));
  double peak = 0.0;
  for (const auto& v : values) peak = std::max(peak, std::abs(v));
  if (std::abs(values.front()) >= kBoundaryDecay * peak ||
      std::abs(values.back()) >= kBoundaryDecay * peak)
    throw SupportOverflowError("apply_squeeze: squeezed support exceeds the grid for r = " +
                               std::to_string(r));
  return WavefunctionGrid(grid, std::move(values));
}

// chi(lambda) = <a'| S(lambda) |a'> with a' the effective amplitude:
//   (cosh l)^(-1/2) exp(-|a'|^2 (1 - 1/cosh l)) exp(tanh(l) (a'*^2 - a'^2) / 2)
inline complex char_fn_analytic(const GaussianPureState& state, double lambda) {
  const complex a = state.effective_amplitude();
  const double c = std::cosh(lambda);
  // 1 - 1/cosh l, written to stay accurate for small l.
  const double sh = std::sinh(0.5 * lambda);
  const double one_minus_sech = 2.0 * sh * sh / c;
  const complex cross = std::conj(a) * std::conj(a) - a * a;  // purely imaginary
  const double modulus = std::exp(-std::norm(a) * one_minus_sech) / std::sqrt(c);
  return std::polar(modulus, 0.5 * std::tanh(lambda) * cross.imag());
}

// Trapezoidal <psi|S(lambda)|psi>. The stretched factor is always the one
// interpolated: negative lambda goes through chi(-l) = conj(chi(l)).
inline complex char_fn_numeric(const WavefunctionGrid& psi, double lambda) {
  if (!std::isfinite(lambda)) throw ValidationError("char_fn_numeric: lambda must be finite");
  const double l = std::abs(lambda);
  const GridSpec& g = psi.grid();
  const auto values = psi.values();
  const double scale = std::exp(-l);
  const double weight = std::exp(-0.5 * l);
  complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < g.n; ++i) {
    const double w = (i == 0 || i + 1 == g.n) ? 0.5 : 1.0;
    sum += w * std::conj(values[i]) * psi(scale * g.at(i));
  }
  const complex chi = weight * g.step() * sum;
  return lambda < 0.0 ? std::conj(chi) : chi;
}

}  // namespace squeezest
