#ifndef FLA_FIELD_HPP
#define FLA_FIELD_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fla/expr.hpp"

namespace fla {

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class FieldImpl;
using FieldImplPtr = std::shared_ptr<const FieldImpl>;

/// Numeric scalar field on (x, y) that can report its value and exact partial
/// derivatives of any order at a point.
///
/// Symbolic entries differentiate symbolically; entries of an inverse matrix
/// differentiate through d(G^-1) = -G^-1 (dG) G^-1, with higher orders by the
/// product rule. Derivatives are memoized per node, so a field and all fields
/// derived from it form an immutable DAG that is cheap to re-differentiate.
class Field {
 public:
  Field();  // zero
  Field(double c);           // NOLINT: implicit by design
  Field(const Expr& e);      // NOLINT: implicit by design
  explicit Field(FieldImplPtr impl);

  double operator()(const Point& p) const;
  Field d(Var v) const;
  bool is_zero() const;  // structural zero

  const FieldImplPtr& impl() const { return impl_; }

 private:
  FieldImplPtr impl_;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(const Field& a, const Field& b);
Field operator/(const Field& a, const Field& b);
Field operator-(const Field& a);

using VecF = std::vector<Field>;
using MatF = std::vector<VecF>;
using Ten3F = std::vector<MatF>;
using Ten4F = std::vector<Ten3F>;

VecF zero_vec(int n);
MatF zero_mat(int r, int c);
MatF identity_mat(int n);
Ten3F zero_ten3(int a, int b, int c);
Ten4F zero_ten4(int a, int b, int c, int d);

MatF mat_mul(const MatF& a, const MatF& b);
MatF mat_add(const MatF& a, const MatF& b);
MatF mat_sub(const MatF& a, const MatF& b);
MatF mat_scale(const Field& s, const MatF& a);
VecF mat_apply(const MatF& a, const VecF& v);
VecF vec_add(const VecF& a, const VecF& b);
VecF vec_sub(const VecF& a, const VecF& b);
VecF vec_scale(const Field& s, const VecF& v);

/// Inverse-of-square-matrix field. Entries evaluate by LU decomposition at
/// the point; evaluation throws SingularMatrixError when the estimated
/// condition number exceeds `cond_limit`. Entry derivatives follow the
/// inverse rule and remain Fields, so any order of partials is available.
MatF matrix_inverse(const MatF& g, double cond_limit = 1e12);

/// Determinant of a small matrix of fields, expanded symbolically in the
/// field algebra (sizes up to 4).
Field matrix_det(const MatF& g);

double eval_field(const Field& f, const Point& p);

/// Value of a mixed partial: multi_index lists the variables to apply, in
/// order (repetitions allowed).
double eval_with_partials(const Field& f, const Point& p, const std::vector<Var>& multi_index);

}  // namespace fla

#endif  // FLA_FIELD_HPP
