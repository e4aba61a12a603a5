#include "perception/cost.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "perception/errors.hpp"

namespace perception {

CostFunction CostFunction::linear(double c) {
  if (!std::isfinite(c)) throw Error(ErrorKind::kSchema, "linear cost slope must be finite");
  return CostFunction(LinearCost{c});
}

CostFunction CostFunction::quadratic() { return CostFunction(QuadraticCost{}); }

CostFunction CostFunction::tabulated(std::vector<double> values) {
  if (values.size() < 2) throw Error(ErrorKind::kSchema, "tabulated cost needs at least 2 levels");
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kSchema, "tabulated cost values must be finite");
  }
  return CostFunction(TabulatedCost{std::move(values)});
}

CostKind CostFunction::kind() const {
  return static_cast<CostKind>(spec_.index());
}

double CostFunction::slope() const {
  if (const auto* lin = std::get_if<LinearCost>(&spec_)) return lin->c;
  throw Error(ErrorKind::kSchema, "slope() on a non-linear cost");
}

double CostFunction::operator()(double x) const {
  return std::visit(
      [x](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LinearCost>) {
          return s.c * x;
        } else if constexpr (std::is_same_v<T, QuadraticCost>) {
          return 0.5 * x * x;
        } else {
          const std::size_t m = s.values.size() - 1;
          const double pos = std::clamp(x, 0.0, 1.0) * static_cast<double>(m);
          const std::size_t l = std::min(static_cast<std::size_t>(pos), m - 1);
          const double frac = pos - static_cast<double>(l);
          return s.values[l] + frac * (s.values[l + 1] - s.values[l]);
        }
      },
      spec_);
}

double CostFunction::best_response(double v) const {
  if (const auto* lin = std::get_if<LinearCost>(&spec_)) return v > lin->c ? 1.0 : 0.0;
  if (std::holds_alternative<QuadraticCost>(spec_)) return std::clamp(v, 0.0, 1.0);
  // Tabulated: 2001 candidates plus the breakpoints, smallest argmax wins.
  const auto& vals = std::get<TabulatedCost>(spec_).values;
  const std::size_t m = vals.size() - 1;
  double best_x = 0.0;
  double best = -vals[0];
  auto consider = [&](double x) {
    const double s = v * x - (*this)(x);
    if (s > best || (s == best && x < best_x)) {
      best = s;
      best_x = x;
    }
  };
  for (int k = 0; k <= 2000; ++k) consider(k / 2000.0);
  for (std::size_t l = 0; l <= m; ++l) consider(static_cast<double>(l) / static_cast<double>(m));
  return best_x;
}

}  // namespace perception
