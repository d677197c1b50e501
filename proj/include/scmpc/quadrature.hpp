#pragma once

#include <functional>

namespace scmpc {

// Adaptive Simpson integration of f over [a, b] to an absolute tolerance.
// Error control is the classic (S_fine - S_coarse)/15 estimate with
// Richardson extrapolation of accepted panels. Throws NumericalError if the
// recursion depth limit is reached before the local tolerance is met.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 60);

}  // namespace scmpc
