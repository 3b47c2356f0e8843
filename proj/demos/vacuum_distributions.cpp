// Optimal versus ln|X| estimation on the vacuum: prints both error-frame
// densities on a coarse grid, followed by their summaries.

#include <cstdio>

#include "squeezest/squeezest.hpp"

int main() {
  using namespace squeezest;
  const auto state = GaussianPureState::vacuum();
  const auto optimal = optimal_distribution(spectral_density(state));
  const auto lnx = lnx_distribution(wavefunction(state), 0.0).to_error_frame();

  std::printf("%8s %12s %12s\n", "t", "optimal", "ln|X|");
  for (double t = -4.0; t <= 3.0 + 1e-12; t += 0.25)
    std::printf("%8.2f %12.6f %12.6f\n", t, optimal.nearest_value(t), lnx.nearest_value(t));

  for (const auto* d : {&optimal, &lnx}) {
    const auto s = d->summary();
    std::printf("%-8s mean %+.5f  mode %+.5f  rmse %.5f\n", d == &optimal ? "optimal" : "ln|X|",
                s.mean, s.mode, s.rmse);
  }
}
