#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

namespace gsepp::detail {

// Grid scan of [lo, hi] seeding a golden-section search around the best
// grid point. Returns (argmax, max).
template <class F>
std::pair<double, double> maximize_1d(F f, double lo, double hi, int grid = 200, double tol = 1e-10) {
  double best_x = lo, best = f(lo);
  for (int i = 1; i <= grid; ++i) {
    const double x = lo + (hi - lo) * i / grid;
    const double v = f(x);
    if (v > best) best = v, best_x = x;
  }
  const double h = (hi - lo) / grid;
  double a = std::max(lo, best_x - h), b = std::min(hi, best_x + h);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1, x1 = x2, f1 = f2, x2 = a + g * (b - a), f2 = f(x2);
    } else {
      b = x2, x2 = x1, f2 = f1, x1 = b - g * (b - a), f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b), fm = f(xm);
  return fm > best ? std::pair{xm, fm} : std::pair{best_x, best};
}

}  // namespace gsepp::detail
