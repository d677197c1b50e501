#include "scmpc/quadrature.hpp"

#include <cmath>
#include <string>

#include "scmpc/errors.hpp"

namespace scmpc {

namespace {

double simpson(double h, double fa, double fm, double fb) {
  return (fa + 4.0 * fm + fb) * (h / 6.0);
}

// Panels are accepted only below kMinDepth: the (S2 - S1)/15 estimate can
// cancel accidentally on coarse panels of sharply decaying integrands.
constexpr int kMinDepth = 6;

double simpson_recurse(const std::function<double(double)>& f, double a, double m, double b,
                       double fa, double fm, double fb, double whole, double tol, int depth,
                       int max_depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(m - a, fa, flm, fm);
  const double right = simpson(b - m, fm, frm, fb);
  const double err = (left + right - whole) / 15.0;
  if (depth >= kMinDepth && std::abs(err) <= tol) return left + right + err;
  if (depth >= max_depth) {
    throw NumericalError("adaptive_simpson: depth limit " + std::to_string(max_depth) +
                         " reached on [" + std::to_string(a) + ", " + std::to_string(b) +
                         "], local error estimate " + std::to_string(std::abs(err)) +
                         " > tolerance " + std::to_string(tol));
  }
  // Halving tolerance per split keeps the summed error within abs_tol.
  return simpson_recurse(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
         simpson_recurse(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
  if (!(abs_tol > 0.0)) throw UsageError("adaptive_simpson: tolerance must be positive");
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = simpson(b - a, fa, fm, fb);
  return simpson_recurse(f, a, m, b, fa, fm, fb, whole, abs_tol, 0, max_depth);
}

}  // namespace scmpc
