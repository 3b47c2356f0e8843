// Peak height and RMSE of the optimal distribution for coherent inputs,
// against the large-amplitude value 1/(2 alpha).

#include <cstdio>

#include "squeezest/squeezest.hpp"

int main() {
  using namespace squeezest;
  std::printf("%6s %10s %10s %10s\n", "alpha", "p(0)", "rmse", "1/(2a)");
  for (double a : {1.0, 2.0, 4.0, 6.0, 8.0}) {
    const auto d = optimal_distribution(spectral_density(GaussianPureState::coherent({a, 0.0})));
    std::printf("%6.1f %10.5f %10.5f %10.5f\n", a, d.nearest_value(0.0), d.summary().rmse, 0.5 / a);
  }
}
