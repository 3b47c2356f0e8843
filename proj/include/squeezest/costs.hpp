#pragma once

// Expected costs for the class c(t) = int_0^inf dmu a(mu) cos(mu t), a(mu) <= 0.
// Covariant strategies have an expected cost independent of the true value,
// so the minimax cost is a single integral over the error-frame distribution.

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "squeezest/errors.hpp"
#include "squeezest/estimators.hpp"
#include "squeezest/grid.hpp"

namespace squeezest {

struct HolevoTable {
  GridSpec mu;  // mu.lo >= 0
  std::vector<double> a;
};

class CostFunction {
 public:
  enum class Kind { max_likelihood, fidelity, holevo_table };

  static CostFunction max_likelihood() { return CostFunction(Kind::max_likelihood, {}); }
  static CostFunction fidelity() { return CostFunction(Kind::fidelity, {}); }
  static CostFunction holevo(HolevoTable table) {
    table.mu.validate("CostFunction");
    if (table.mu.lo < 0.0)
      throw ValidationError("CostFunction: coefficient grid must lie in mu >= 0");
    if (table.a.size() != table.mu.n)
      throw ValidationError("CostFunction: coefficient count does not match grid size");
    for (std::size_t i = 0; i < table.a.size(); ++i) {
      if (!std::isfinite(table.a[i]))
        throw ValidationError("CostFunction: non-finite coefficient");
      if (table.mu.at(i) > 0.0 && table.a[i] > 0.0)
        throw ValidationError("CostFunction: coefficient a(" + std::to_string(table.mu.at(i)) +
                              ") > 0 violates the sign constraint");
    }
    return CostFunction(Kind::holevo_table, std::move(table));
  }

  Kind kind() const { return kind_; }
  const HolevoTable& table() const { return table_; }

  // c(t) for the tabulated kind.
  double table_cost(double t) const {
    std::vector<double> w(table_.a.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = table_.a[i] * std::cos(table_.mu.at(i) * t);
    return trapezoid(w, table_.mu.step());
  }

 private:
  CostFunction(Kind k, HolevoTable t) : kind_(k), table_(std::move(t)) {}
  Kind kind_;
  HolevoTable table_;
};

inline const char* to_string(CostFunction::Kind k) {
  switch (k) {
    case CostFunction::Kind::max_likelihood: return "max-likelihood";
    case CostFunction::Kind::fidelity: return "fidelity";
    case CostFunction::Kind::holevo_table: return "holevo-table";
  }
  return "?";
}

using CharFn = std::function<complex(double)>;

// `chi` is the input state's characteristic function; only the fidelity cost
// 1 - |chi(t)|^2 uses it.
inline double expected_cost(const ShiftDistribution& dist, const CostFunction& cost,
                            const CharFn& chi = {}) {
  if (dist.frame() != Frame::error)
    throw FrameError("expected_cost: distribution must be in the error frame");
  const GridSpec& g = dist.grid();
  const auto& p = dist.values();
  switch (cost.kind()) {
    case CostFunction::Kind::max_likelihood: {
      if (!g.contains(0.0))
        throw ValidationError("expected_cost: max-likelihood needs t = 0 inside the window");
      return -dist.nearest_value(0.0);
    }
    case CostFunction::Kind::fidelity: {
      if (!chi) throw ValidationError("expected_cost: fidelity cost needs the characteristic function");
      std::vector<double> w(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) w[i] = p[i] * (1.0 - std::norm(chi(g.at(i))));
      return trapezoid(w, g.step());
    }
    case CostFunction::Kind::holevo_table: {
      std::vector<double> w(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) w[i] = p[i] * cost.table_cost(g.at(i));
      return trapezoid(w, g.step());
    }
  }
  return 0.0;
}

}  // namespace squeezest
