#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace pdmp {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  std::size_t max_evaluations = 1'000'000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

// Globally adaptive Gauss-Kronrod (G7/K15) integration of g over [a, b] to an
// absolute error target. Breakpoints strictly inside (a, b) start as segment
// boundaries. Throws Error{QuadratureFailure} when the evaluation budget runs out.
QuadratureResult integrate_adaptive(const std::function<double(double)>& g, double a, double b,
                                    const QuadratureOptions& opts = {},
                                    std::span<const double> breakpoints = {});

// Same over [a, +inf), mapped onto [0, 1) by z = a + s / (1 - s).
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& g, double a,
                                         const QuadratureOptions& opts = {});

}  // namespace pdmp
