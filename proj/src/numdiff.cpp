#include "fla/numdiff.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fla {

namespace {

Point shifted(const Point& p, Var v, double dh) {
  Point q = p;
  auto& coords = v.kind == VarKind::base ? q.x : q.y;
  coords[static_cast<std::size_t>(v.index)] += dh;
  return q;
}

double central(const PointFn& f, const Point& p, Var v, int order, double h) {
  switch (order) {
    case 1:
      return (f(shifted(p, v, h)) - f(shifted(p, v, -h))) / (2.0 * h);
    case 2:
      return (f(shifted(p, v, h)) - 2.0 * f(p) + f(shifted(p, v, -h))) / (h * h);
    case 3:
      return (f(shifted(p, v, 2.0 * h)) - 2.0 * f(shifted(p, v, h)) +
              2.0 * f(shifted(p, v, -h)) - f(shifted(p, v, -2.0 * h))) /
             (2.0 * h * h * h);
    default:
      throw std::invalid_argument("fd_oracle supports orders 1..3 per call");
  }
}

// Central differences have error O(h^2), so one Richardson step with h and
// h/2 cancels the leading term: (4 D(h/2) - D(h)) / 3.
double richardson(const PointFn& f, const Point& p, Var v, int order, double h) {
  const double coarse = central(f, p, v, order, h);
  const double fine = central(f, p, v, order, h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

double fd_oracle(const PointFn& f, const Point& p, Var v, int order) {
  // Adaptive ladder: each estimate's error is judged by its disagreement
  // with the next-finer step, and the larger step of the best-agreeing pair
  // wins. Small steps amplify rounding noise by h^-order, so they only take
  // over when they genuinely improve agreement.
  const double steps[] = {1e-3, 1e-4, 1e-5};
  double ests[3];
  int count = 0;
  for (double h : steps) {
    const double est = richardson(f, p, v, order, h);
    if (std::isfinite(est)) ests[count++] = est;
  }
  if (count == 0) return std::numeric_limits<double>::quiet_NaN();
  if (count == 1) return ests[0];
  double best = ests[0];
  double best_err = std::abs(ests[1] - ests[0]);
  for (int i = 1; i + 1 < count; ++i) {
    const double err = std::abs(ests[i + 1] - ests[i]);
    if (err < best_err) {
      best_err = err;
      best = ests[i];
    }
  }
  return best;
}

double fd_oracle(const Expr& e, const Point& p, Var v, int order) {
  return fd_oracle([&e](const Point& q) { return e.eval(q); }, p, v, order);
}

double fd_oracle(const Field& f, const Point& p, Var v, int order) {
  return fd_oracle([&f](const Point& q) { return f(q); }, p, v, order);
}

}  // namespace fla
