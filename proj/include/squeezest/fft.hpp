#pragma once

#include <fftw3.h>

#include <complex>
#include <memory>
#include <mutex>
#include <vector>

#include "squeezest/errors.hpp"

namespace squeezest::fft {

enum class Sign { negative = FFTW_FORWARD, positive = FFTW_BACKWARD };

namespace detail {
// The FFTW planner is not re-entrant; plan execution is.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
}  // namespace detail

// Unnormalized in-place DFT: out_k = sum_j in_j exp(sign * 2 pi i j k / N).
inline void transform(std::vector<std::complex<double>>& data, Sign sign) {
  if (data.empty()) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  std::unique_ptr<fftw_plan_s, detail::PlanDeleter> plan;
  {
    std::lock_guard lock(detail::planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf,
                                static_cast<int>(sign), FFTW_ESTIMATE));
  }
  if (!plan) throw NumericalError("fft: failed to create FFTW plan");
  fftw_execute(plan.get());
}

}  // namespace squeezest::fft
