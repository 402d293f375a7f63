#ifndef FLA_PROLONGATION_HPP
#define FLA_PROLONGATION_HPP

#include <vector>

#include "fla/algebroid.hpp"
#include "fla/field.hpp"

namespace fla {

// Sections and tensors on the prolongation are stored in the frame
// {X_alpha, V_alpha}: indices 0..n-1 are X_alpha, n..2n-1 are V_alpha.
// A (1,1) tensor K acts by (K s)^a = K[a][b] s^b; a (1,2) tensor T stores
// T[c][a][b] with T(E_a, E_b) = T[c][a][b] E_c and is antisymmetric in (a,b).

/// rho_prolong(section)(f): the anchor of the prolongation applied to a
/// function on E, with rho(X_alpha) = rho^i_alpha d/dx^i and
/// rho(V_alpha) = d/dy^alpha.
Field rho_prolong(const LieAlgebroid& A, const VecF& sec, const Field& f);

/// Bracket of prolongation sections: bilinear Leibniz extension of
/// [X_a, X_b] = L^g_{ab} X_g, [X_a, V_b] = [V_a, V_b] = 0.
VecF bracket_prolong(const LieAlgebroid& A, const VecF& X, const VecF& Y);

/// J = V_alpha (x) X^alpha.
MatF vertical_endomorphism(int n);

/// C = y^alpha V_alpha.
VecF liouville(int n);

/// Frame section: E_a for a in 0..2n-1.
VecF frame_section(int n, int a);

/// y^alpha X_alpha + S^alpha V_alpha from the n fiber components.
VecF semispray_from_components(int n, const VecF& s_components);

struct SemisprayResiduals {
  double semispray{0.0};  // max |J(S) - C|
  double spray{0.0};      // max |2 S^b - y^a dS^b/dy^a|
};

SemisprayResiduals semispray_residual(const LieAlgebroid& A, const VecF& S,
                                      const std::vector<Point>& pts);

/// Homogeneity residual of a function: max |y^a df/dy^a - r f|.
double homogeneity_residual(const Field& f, double r, const std::vector<Point>& pts);

/// Homogeneity residual of a section (both component conditions).
double homogeneity_residual(const VecF& sec, double r, const std::vector<Point>& pts);

/// S + ftilde * C.
VecF projective_change(const VecF& S, const Field& ftilde, int n);

struct LieSymmetryResiduals {
  double condition{0.0};   // V-coefficient of [S, X^C]
  double x_coefficient{0.0};  // X-coefficient, asserted to vanish identically
  double bracket_crosscheck{0.0};  // formula vs bracket_prolong
};

LieSymmetryResiduals lie_symmetry_residual(const LieAlgebroid& A, const VecF& S,
                                           const SectionE& X, const std::vector<Point>& pts);

struct DynamicalSymmetryResiduals {
  double first{0.0};   // X-coefficient condition
  double second{0.0};  // V-coefficient condition
};

DynamicalSymmetryResiduals dynamical_symmetry_residual(const LieAlgebroid& A, const VecF& S,
                                                       const VecF& Xt,
                                                       const std::vector<Point>& pts);

/// [K, Z]^{F-N}(X) = [K X, Z] - K [X, Z], assembled on frame sections.
MatF fn_bracket_section(const LieAlgebroid& A, const MatF& K, const VecF& Z);

/// [K, L]^{F-N}(X, Y) on frame pairs (both arguments (1,1) tensors).
Ten3F fn_bracket_tensor(const LieAlgebroid& A, const MatF& K, const MatF& L2);

/// i_S T for a (1,2) tensor: (i_S T)(X) = T(S, X).
MatF insert_section(const Ten3F& T, const VecF& S);

/// T(U, W) for a (1,2) tensor and section arguments.
VecF apply_ten3(const Ten3F& T, const VecF& U, const VecF& W);

// Evaluation helpers: max |entry| over sample points.
double max_abs(const Field& f, const std::vector<Point>& pts);
double max_abs(const VecF& v, const std::vector<Point>& pts);
double max_abs(const MatF& m, const std::vector<Point>& pts);
double max_abs(const Ten3F& t, const std::vector<Point>& pts);
double max_abs(const Ten4F& t, const std::vector<Point>& pts);

}  // namespace fla

#endif  // FLA_PROLONGATION_HPP
