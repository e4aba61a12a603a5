#pragma once

#include <variant>
#include <vector>

namespace perception {

struct LinearCost {
  double c = 0.0;
};
struct QuadraticCost {};
// Piecewise-linear through values[l] at x = l/(M-1).
struct TabulatedCost {
  std::vector<double> values;
};

enum class CostKind { kLinear, kQuadratic, kTabulated };

class CostFunction {
 public:
  using Spec = std::variant<LinearCost, QuadraticCost, TabulatedCost>;

  static CostFunction linear(double c);
  static CostFunction quadratic();
  static CostFunction tabulated(std::vector<double> values);

  CostKind kind() const;
  const Spec& spec() const { return spec_; }
  double slope() const;  // Linear only

  double operator()(double x) const;

  // Smallest x in argmax { v x - C(x) }.
  double best_response(double v) const;
  double max_surplus(double v) const { const double x = best_response(v); return v * x - (*this)(x); }

 private:
  explicit CostFunction(Spec spec) : spec_(std::move(spec)) {}
  Spec spec_;
};

}  // namespace perception
