#ifndef FLA_NUMDIFF_HPP
#define FLA_NUMDIFF_HPP

#include <functional>

#include "fla/expr.hpp"
#include "fla/field.hpp"

namespace fla {

using PointFn = std::function<double(const Point&)>;

/// Central-difference estimate of a single-variable partial of order 1..3,
/// with Richardson extrapolation over an adaptive step ladder
/// h in {1e-3, 1e-4, 1e-5}. Intended as an independent oracle for tests;
/// never used by the symbolic machinery it checks.
double fd_oracle(const PointFn& f, const Point& p, Var v, int order);

double fd_oracle(const Expr& e, const Point& p, Var v, int order);
double fd_oracle(const Field& f, const Point& p, Var v, int order);

}  // namespace fla

#endif  // FLA_NUMDIFF_HPP
