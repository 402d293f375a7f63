#ifndef FLA_ALGEBROID_HPP
#define FLA_ALGEBROID_HPP

#include <string>
#include <vector>

#include "fla/expr.hpp"
#include "fla/field.hpp"

namespace fla {

/// Local data of a Lie algebroid of rank n over an m-dimensional base:
/// anchor components rho^i_alpha(x) and structure functions L^gamma_{alpha
/// beta}(x), stored with L[gamma][alpha][beta].
struct LieAlgebroid {
  int m{0};
  int n{0};
  std::vector<std::vector<Expr>> rho;            // [i][alpha]
  std::vector<std::vector<std::vector<Expr>>> L; // [gamma][alpha][beta]

  Field rho_f(int i, int alpha) const { return Field(rho[i][alpha]); }
  Field L_f(int gamma, int alpha, int beta) const { return Field(L[gamma][alpha][beta]); }
};

struct AlgebroidValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Builds the algebroid and validates expression well-formedness (base
/// dependence only). With `strict`, antisymmetry of L is enforced at sample
/// points and violations beyond `antisym_tol` are rejected rather than
/// corrected.
LieAlgebroid make_algebroid(int m, int n,
                            std::vector<std::vector<Expr>> rho,
                            std::vector<std::vector<std::vector<Expr>>> L,
                            bool strict = true, double antisym_tol = 1e-12);

LieAlgebroid tangent_like_algebroid(int n);  // rho = identity, L = 0, m = n

struct StructureReport {
  double max_anchor_residual{0.0};     // structure equation (i)
  double max_jacobi_residual{0.0};     // structure equation (ii)
  double max_antisymmetry_residual{0.0};
  bool pass(double tol) const {
    return max_anchor_residual <= tol && max_jacobi_residual <= tol &&
           max_antisymmetry_residual <= tol;
  }
};

/// Per-point residuals of the structure equations and of antisymmetry of L.
StructureReport verify_algebroid(const LieAlgebroid& A, const std::vector<Point>& base_points);

/// Section of E with x-only components.
using SectionE = std::vector<Expr>;

/// [X, Y]_E in components:
///   X^alpha rho^i_alpha dY^gamma/dx^i - Y^beta rho^i_beta dX^gamma/dx^i
///   + X^alpha Y^beta L^gamma_{alpha beta}.
SectionE bracket_e(const LieAlgebroid& A, const SectionE& X, const SectionE& Y);

enum class LiftKind { vertical, complete };

/// Lift of f in C^inf(M): vertical is f itself reinterpreted on E, complete
/// is y^alpha rho^i_alpha df/dx^i. Rejects fiber-dependent input.
Expr lift_function(const LieAlgebroid& A, const Expr& f, LiftKind kind);

/// Lift of a section to the prolongation, as 2n components in the frame
/// {X_alpha, V_alpha}.
VecF lift_section(const LieAlgebroid& A, const SectionE& X, LiftKind kind);

/// d^E f as the n covector components rho^i_alpha df/dx^i.
VecF d_e_function(const LieAlgebroid& A, const Expr& f);

/// d^E of a one-form omega = omega_gamma e^gamma: the full antisymmetric
/// matrix (d^E omega)(e_beta, e_gamma).
MatF d_e_oneform(const LieAlgebroid& A, const std::vector<Expr>& omega);

/// Vector field rho(X) applied to f (x-only data).
Expr anchor_apply(const LieAlgebroid& A, const SectionE& X, const Expr& f);

}  // namespace fla

#endif  // FLA_ALGEBROID_HPP
