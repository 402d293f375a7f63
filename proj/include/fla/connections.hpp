#ifndef FLA_CONNECTIONS_HPP
#define FLA_CONNECTIONS_HPP

#include <vector>

#include "fla/algebroid.hpp"
#include "fla/horizontal.hpp"
#include "fla/prolongation.hpp"

namespace fla {

/// Distinguished connection relative to a horizontal endomorphism, stored by
/// its adapted-frame coefficients:
///   D_{delta_a} V_b = F^g_{ab} V_g,   D_{V_a} V_b = C^g_{ab} V_g,
/// and the same coefficients on delta_b.
struct DConnection {
  HorizontalEndo h;
  Ten3F F;  // F[g][a][b]
  Ten3F C;  // C[g][a][b]

  int n() const { return h.n(); }
};

/// D_X Y for sections given in the frame {X_alpha, V_alpha}; result in the
/// same frame. Leibniz extension of the adapted-frame rules.
VecF covariant_derivative(const LieAlgebroid& A, const DConnection& D, const VecF& X,
                          const VecF& Y);

/// Torsion T(X, Y) = D_X Y - D_Y X - [X, Y] evaluated on all frame pairs,
/// as a (1,2) tensor in {X_alpha, V_alpha}.
Ten3F torsion_definitional(const LieAlgebroid& A, const DConnection& D);

/// The five torsion components, as n x n x n coefficient arrays:
///   A^g_{ab} = F^g_{ab} - F^g_{ba} - L^g_{ab}        (h-horizontal)
///   B^g_{ab} = -C^g_{ab}                             (h-mixed)
///   R1^g_{ab} = -R^g_{ab}                            (v-horizontal)
///   P1^g_{ab} = F^g_{ab} + dB^g_a/dy^b               (v-mixed)
///   S1^g_{ab} = C^g_{ab} - C^g_{ba}                  (v-vertical)
struct TorsionComponents {
  Ten3F A;
  Ten3F B;
  Ten3F R1;
  Ten3F P1;
  Ten3F S1;  // the component display labels this block Q1; same object
};

TorsionComponents torsion_components(const LieAlgebroid& A, const DConnection& D);

/// Curvature coefficient tensors indexed [lambda][alpha][beta][gamma].
struct CurvatureComponents {
  Ten4F R;  // horizontal
  Ten4F P;  // mixed
  Ten4F S;  // vertical
};

CurvatureComponents curvature_components(const LieAlgebroid& A, const DConnection& D);

/// Definitional curvature K(U, W) Z = D_U D_W Z - D_W D_U Z - D_{[U,W]} Z for
/// sections in {X_alpha, V_alpha}.
VecF curvature_definitional(const LieAlgebroid& A, const DConnection& D, const VecF& U,
                            const VecF& W, const VecF& Z);

/// Mixed Ricci tensor P_{ag} = P^l_{alg} (trace over the middle slot).
MatF mixed_ricci(const LieAlgebroid& A, const DConnection& D);
MatF mixed_ricci_from(const Ten4F& P);

/// h-deflection coefficients (B^g_a + y^b F^g_{ab}) and v-deflection
/// coefficients (delta^g_a + y^b C^g_{ab}), as n x n arrays [g][a].
MatF h_deflection(const DConnection& D);
MatF v_deflection(const DConnection& D);

/// Berwald-type connection of h: F = -dB^g_a/dy^b, C = 0.
DConnection berwald_type(const HorizontalEndo& h);

/// Yano-type connection of h (canonical choice omega = P_ric/(n+1), U = C):
/// F^g_{ab} = y^g d^2B^l_a/(dy^l dy^b) / (n+1) - dB^g_a/dy^b, C = 0.
DConnection yano_type(const HorizontalEndo& h);

/// Douglas tensor coefficients D^l_{abg} of a Berwald endomorphism.
Ten4F douglas_tensor(const HorizontalEndo& h);

/// The associated d-connection: F unchanged, C dropped.
DConnection associated_dconnection(const DConnection& D);

/// Covariant derivative of a (1,1) tensor: out[a][c][b] = component c of
/// (D_{E_a} K)(E_b), frame sections E in {X_alpha, V_alpha}.
Ten3F cov_deriv_tensor11(const LieAlgebroid& A, const DConnection& D, const MatF& K);

/// Covariant derivative of a (0,2) tensor (metric) along the given direction
/// sections: out[d][b][c] = (D_{dir_d} G)(E_b, E_c).
Ten3F cov_deriv_metric(const LieAlgebroid& A, const DConnection& D, const MatF& G2,
                       const std::vector<VecF>& directions);

/// Covariant derivative of a (1,2) tensor along a direction section:
/// (D_U T)(E_a, E_b).
Ten3F cov_deriv_tensor12(const LieAlgebroid& A, const DConnection& D, const Ten3F& T,
                         const VecF& U);

// ---------------------------------------------------------------------------
// Covariant derivatives on the pullback bundle
// ---------------------------------------------------------------------------

/// Derivative on sections of the pullback bundle with adapted-frame rules
/// D_{delta_a} e^_b = coefH[g][a][b] e^_g, D_{V_a} e^_b = coefV[g][a][b] e^_g.
struct PullbackDerivative {
  HorizontalEndo h;
  Ten3F coefH;
  Ten3F coefV;

  int n() const { return h.n(); }
};

/// Berwald derivative generated by h: coefH = -dB^g_a/dy^b, coefV = 0.
PullbackDerivative berwald_derivative(const HorizontalEndo& h);

/// Yano derivative induced by h:
/// coefH[g][a][b] = y^g d^2 B^l_a/(dy^l dy^b)/(n+1) - dB^g_a/dy^b.
PullbackDerivative yano_derivative(const HorizontalEndo& h);

/// D_X Ybar for X a prolongation section in {X_alpha, V_alpha} and Ybar an
/// n-component pullback section.
VecF pullback_apply(const LieAlgebroid& A, const PullbackDerivative& P, const VecF& X,
                    const VecF& Ybar);

/// Projections of a prolongation section to pullback sections: jbar keeps
/// the adapted horizontal components, vbar the adapted vertical ones.
VecF jbar(const HorizontalEndo& h, const VecF& sec_xv);
VecF vbar(const HorizontalEndo& h, const VecF& sec_xv);

/// The five partial torsions of a pullback derivative, as n x n x n
/// coefficient arrays [g][a][b].
struct PullbackTorsions {
  Ten3F A;
  Ten3F B;
  Ten3F R1;
  Ten3F P1;
  Ten3F Q1;
};

PullbackTorsions pullback_torsions(const LieAlgebroid& A, const PullbackDerivative& P);

/// Curvatures of a pullback derivative, indexed [l][a][b][g].
struct PullbackCurvatures {
  Ten4F R;
  Ten4F P;
  Ten4F Q;
};

PullbackCurvatures pullback_curvatures(const LieAlgebroid& A, const PullbackDerivative& P);

/// Hessian of a function through the canonical v-covariant differential:
/// (grad^v grad^v f)(e^_a, e^_b) = d^2 f / dy^a dy^b.
MatF vv_hessian(int n, const Field& f);

/// grad^v_delta f = y^a df/dy^a (Liouville derivative of a function).
Field v_delta(int n, const Field& f);

}  // namespace fla

#endif  // FLA_CONNECTIONS_HPP
