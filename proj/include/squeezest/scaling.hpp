#pragma once

// Error scaling with the mean photon number: 1/(2 sqrt(n)) for coherent
// inputs, 1/(2 n) for displaced squeezed inputs with the allocation
// alpha = sqrt(n/2), z = -ln(2n)/2.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "squeezest/errors.hpp"
#include "squeezest/estimators.hpp"
#include "squeezest/spectral.hpp"
#include "squeezest/states.hpp"

namespace squeezest {

enum class Family { coherent, displaced_squeezed_optimal };
enum class Method { optimal_povm, homodyne_mc };

inline const char* to_string(Family f) {
  return f == Family::coherent ? "coherent" : "displaced-squeezed-optimal";
}
inline const char* to_string(Method m) {
  return m == Method::optimal_povm ? "optimal-povm" : "homodyne-mc";
}

struct Allocation {
  GaussianPureState state;
  double nominal_nbar = 0.0;
  // |alpha|^2 + sinh^2 z; approaches the nominal value only asymptotically.
  double exact_nbar = 0.0;
};

inline Allocation optimal_allocation(double nbar) {
  if (!std::isfinite(nbar) || nbar < 0.5)
    throw ValidationError("optimal_allocation: nbar must be >= 1/2");
  Allocation out;
  out.state = {{std::sqrt(0.5 * nbar), 0.0}, -0.5 * std::log(2.0 * nbar)};
  out.nominal_nbar = nbar;
  out.exact_nbar = mean_photon_number(out.state);
  return out;
}

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_sigma = 0.0;
  std::size_t points_used = 0;
  bool excluded_smallest = false;
};

namespace detail {
inline LogLogFit least_squares(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LogLogFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  f.points_used = x.size();
  if (x.size() > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (f.intercept + f.slope * x[i]);
      ssr += r * r;
    }
    f.residual_sigma = std::sqrt(ssr / (n - 2.0));
  }
  return f;
}
}  // namespace detail

// Fits ln(rmse) = intercept + slope ln(nbar). The smallest-nbar point is
// dropped when its residual against the fit of the remaining points exceeds
// 3 sigma of that fit. Judging it against a fit that includes it would
// never trigger for four points, since the outlier inflates sigma.
inline LogLogFit fit_loglog(std::span<const double> nbar, std::span<const double> rmse) {
  if (nbar.size() != rmse.size() || nbar.size() < 2)
    throw ValidationError("fit_loglog: need at least two (nbar, rmse) pairs");
  std::vector<double> x(nbar.size()), y(rmse.size());
  std::size_t smallest = 0;
  for (std::size_t i = 0; i < nbar.size(); ++i) {
    if (!(nbar[i] > 0.0) || !(rmse[i] > 0.0))
      throw ValidationError("fit_loglog: values must be positive");
    x[i] = std::log(nbar[i]);
    y[i] = std::log(rmse[i]);
    if (nbar[i] < nbar[smallest]) smallest = i;
  }
  if (x.size() >= 4) {
    std::vector<double> xr = x, yr = y;
    xr.erase(xr.begin() + static_cast<std::ptrdiff_t>(smallest));
    yr.erase(yr.begin() + static_cast<std::ptrdiff_t>(smallest));
    LogLogFit rest = detail::least_squares(xr, yr);
    const double r = y[smallest] - (rest.intercept + rest.slope * x[smallest]);
    if (std::abs(r) > 3.0 * rest.residual_sigma) {
      rest.excluded_smallest = true;
      return rest;
    }
  }
  return detail::least_squares(x, y);
}

struct SweepOptions {
  std::size_t n_samples = 100000;
  std::uint64_t seed = 0;
  double r_true = 0.0;
  CharFnOptions spectral;
};

struct SweepPoint {
  double nbar = 0.0;
  double exact_nbar = 0.0;
  double rmse = 0.0;
  GaussianPureState state;
};

struct SweepResult {
  Family family = Family::coherent;
  Method method = Method::optimal_povm;
  std::vector<SweepPoint> points;
  LogLogFit fit;
  bool strictly_decreasing = false;
};

inline GaussianPureState family_state(Family family, double nbar) {
  if (family == Family::coherent) {
    if (!std::isfinite(nbar) || nbar < 1.0)
      throw ValidationError("family_state: coherent sweep needs nbar >= 1");
    return GaussianPureState::coherent({std::sqrt(nbar), 0.0});
  }
  return optimal_allocation(nbar).state;
}

// Each point uses its own random stream (index in `nbars`), so results do not
// depend on evaluation order.
inline SweepResult rmse_sweep(Family family, std::span<const double> nbars, Method method,
                              const SweepOptions& opts = {}) {
  if (nbars.size() < 2) throw ValidationError("rmse_sweep: need at least two nbar values");
  for (std::size_t i = 1; i < nbars.size(); ++i)
    if (!(nbars[i] > nbars[i - 1]))
      throw ValidationError("rmse_sweep: nbar values must be sorted ascending");
  SweepResult out;
  out.family = family;
  out.method = method;
  for (std::size_t i = 0; i < nbars.size(); ++i) {
    const double nbar = nbars[i];
    try {
      SweepPoint pt;
      pt.nbar = nbar;
      pt.state = family_state(family, nbar);
      pt.exact_nbar = mean_photon_number(pt.state);
      if (method == Method::optimal_povm) {
        const auto g = spectral_density(pt.state, opts.spectral);
        pt.rmse = optimal_distribution(g).summary().rmse;
      } else {
        pt.rmse = homodyne_mc(pt.state, opts.r_true, opts.n_samples, opts.seed, i).rmse;
      }
      out.points.push_back(pt);
    } catch (const ValidationError& e) {
      throw ValidationError("rmse_sweep: point nbar = " + std::to_string(nbar) + " failed: " + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError("rmse_sweep: point nbar = " + std::to_string(nbar) + " failed: " + e.what());
    }
  }
  std::vector<double> x, y;
  out.strictly_decreasing = true;
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    x.push_back(out.points[i].nbar);
    y.push_back(out.points[i].rmse);
    if (i > 0 && !(out.points[i].rmse < out.points[i - 1].rmse)) out.strictly_decreasing = false;
  }
  out.fit = fit_loglog(x, y);
  return out;
}

}  // namespace squeezest
