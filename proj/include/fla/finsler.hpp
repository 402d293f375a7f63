#ifndef FLA_FINSLER_HPP
#define FLA_FINSLER_HPP

#include <vector>

#include "fla/connections.hpp"
#include "fla/tolerances.hpp"

namespace fla {

/// Finsler structure: energy function F(x, y), metric tensor
/// G_{ab} = d^2 F / dy^a dy^b and its inverse (an inverse-matrix node, so all
/// derivatives of G^{ab} propagate exactly).
struct FinslerStructure {
  Expr F_expr;
  Field F;
  MatF G;
  MatF Ginv;
  int n{0};
};

FinslerStructure make_finsler(const Expr& F, const LieAlgebroid& A,
                              double cond_limit = 1e12);

struct FinslerReport {
  double homogeneity{0.0};      // max |y dF/dy - 2F|
  double min_F{0.0};            // positivity margin over sample points
  double min_abs_det{0.0};      // regularity margin
  double det_threshold{0.0};    // 1e-10 * (mean |G| entry)^n
  double i_j_omega{0.0};        // residuals of the fundamental-form identities
  double lie_c_omega{0.0};
  double i_c_omega{0.0};
  double gcc_minus_2f{0.0};     // metric(C, C) - 2F
  bool positivity_ok{false};
  bool regularity_ok{false};
  bool pass(double tol) const {
    return homogeneity <= tol && positivity_ok && regularity_ok && i_j_omega <= tol &&
           lie_c_omega <= tol && i_c_omega <= tol && gcc_minus_2f <= tol;
  }
};

FinslerReport verify_finsler(const FinslerStructure& FS, const LieAlgebroid& A,
                             const std::vector<Point>& pts, const Tolerances& tol);

/// Fundamental form as the full antisymmetric 2n x 2n matrix of values
/// omega(E_a, E_b) in the frame {X_alpha, V_alpha}:
///   omega(X_a, X_b) = rho_a(dF/dy^b) - rho_b(dF/dy^a) - dF/dy^g L^g_{ab},
///   omega(X_a, V_b) = -G_{ab},  omega(V_a, V_b) = 0.
MatF fundamental_form(const FinslerStructure& FS, const LieAlgebroid& A);

/// Prolonged metric in the adapted frame of h (block diagonal G, G)...
MatF prolonged_metric_adapted(const FinslerStructure& FS);
/// ...and its components on the frame {X_alpha, V_alpha}.
MatF prolonged_metric_xv(const FinslerStructure& FS, const HorizontalEndo& h);

/// Kaehler form K_h(E_a, E_b) = metric(E_a, J E_b) - metric(J E_a, E_b).
MatF kaehler_form(const FinslerStructure& FS, const HorizontalEndo& h);

/// The section sharp(beta) with i_{sharp(beta)} omega = beta, for a one-form
/// given by its 2n frame values beta_a = beta(E_a).
VecF sharp(const FinslerStructure& FS, const LieAlgebroid& A, const VecF& beta);

/// d^pounds of a function on E, as the 2n frame values rho_£(E_a)(f).
VecF d_prolong(const LieAlgebroid& A, const Field& f);

/// grad(phi) characterized by d^pounds phi = i_{grad phi} omega.
VecF gradient(const FinslerStructure& FS, const LieAlgebroid& A, const Field& phi);

/// Canonical spray S0 = y^a X_a + S0^a V_a with
/// S0^a = G^{ab} ( rho_b(F) + y^g ( dF/dy^l L^l_{gb} - rho_g(dF/dy^b) ) ).
VecF canonical_spray(const FinslerStructure& FS, const LieAlgebroid& A);

/// Barthel endomorphism: the horizontal endomorphism generated by S0.
HorizontalEndo barthel(const FinslerStructure& FS, const LieAlgebroid& A);

/// max_a | rho_a(F) + B^b_a dF/dy^b | over the sample points.
double conservativity_residual(const HorizontalEndo& h, const FinslerStructure& FS,
                               const LieAlgebroid& A, const std::vector<Point>& pts);

struct CartanTensors {
  Ten3F first;       // C^g_{ab}
  Ten3F first_low;   // C_{abg}
  Ten3F second;      // Ctilde^g_{ab}
  Ten3F second_low;  // Ctilde_{abg}
};

CartanTensors cartan_tensors(const FinslerStructure& FS, const HorizontalEndo& h,
                             const LieAlgebroid& A);

enum class FinslerConnectionKind { berwald, cartan, chern_rund, hashiguchi };

/// The four distinguished connections, built on the Barthel endomorphism.
DConnection distinguished_connection(const FinslerStructure& FS, const LieAlgebroid& A,
                                     FinslerConnectionKind kind);

/// Same coefficient constructions on an explicitly supplied h (used by the
/// generalized Berwald machinery, where h = h_nabla).
DConnection distinguished_connection_on(const FinslerStructure& FS, const LieAlgebroid& A,
                                        const HorizontalEndo& h, FinslerConnectionKind kind);

struct SprayDifferenceReport {
  double identity_residual{0.0};      // i_{S-S0} omega = d_{i_S t} F
  double decomposition_residual{0.0}; // h = h0 + i_S t / 2 + [J, sharp]/2
};

SprayDifferenceReport spray_difference_check(const FinslerStructure& FS,
                                             const HorizontalEndo& h, const LieAlgebroid& A,
                                             const std::vector<Point>& pts);

}  // namespace fla

#endif  // FLA_FINSLER_HPP
