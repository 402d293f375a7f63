#ifndef FLA_HORIZONTAL_HPP
#define FLA_HORIZONTAL_HPP

#include <vector>

#include "fla/algebroid.hpp"
#include "fla/prolongation.hpp"

namespace fla {

/// Horizontal endomorphism h = (X_beta + B^alpha_beta V_alpha) (x) X^beta,
/// stored by its n x n coefficient block B[alpha][beta] = B^alpha_beta.
struct HorizontalEndo {
  MatF B;  // B[upper][lower]

  int n() const { return static_cast<int>(B.size()); }
};

/// Full 2n x 2n matrix of h in the frame {X_alpha, V_alpha}.
MatF endo_matrix(const HorizontalEndo& h);

/// v = Id - h.
MatF vertical_projector(const HorizontalEndo& h);

/// Tension H = (B^a_b - y^g dB^a_b/dy^g) V_a (x) X^b, as a full (1,1) matrix.
MatF tension(const HorizontalEndo& h);

/// Weak torsion coefficients t^g_{ab} = dB^g_b/dy^a - dB^g_a/dy^b - L^g_{ab}.
Ten3F weak_torsion_coeffs(const HorizontalEndo& h, const LieAlgebroid& A);

/// Weak torsion as a full (1,2) tensor in {X_alpha, V_alpha}.
Ten3F weak_torsion(const HorizontalEndo& h, const LieAlgebroid& A);

/// Strong torsion T = (B^a_b - y^g dB^a_g/dy^b - y^g L^a_{gb}) V_a (x) X^b.
MatF strong_torsion(const HorizontalEndo& h, const LieAlgebroid& A);

/// Curvature coefficients R^g_{ab} of h.
Ten3F curvature_coeffs(const HorizontalEndo& h, const LieAlgebroid& A);

/// Curvature as a full (1,2) tensor: Omega(X_a, X_b) = -R^g_{ab} V_g.
Ten3F curvature(const HorizontalEndo& h, const LieAlgebroid& A);

/// hS for any semispray S: y^a X_a + y^b B^a_b V_a.
VecF associated_semispray(const HorizontalEndo& h);

/// Almost complex structure induced by h; squares to -Id.
MatF almost_complex(const HorizontalEndo& h);

/// Horizontal endomorphism generated by a semispray:
/// B^g_a = (dS^g/dy^a - y^b L^g_{ab}) / 2.
HorizontalEndo from_semispray(const VecF& S, const LieAlgebroid& A);

/// Change of basis between {X_a, V_a} and the adapted frame {delta_a, V_a}.
/// `from_adapted` has the adapted frame vectors as columns; `to_adapted` is
/// its inverse.
struct AdaptedFrame {
  MatF from_adapted;
  MatF to_adapted;
};

AdaptedFrame adapted_frame(const HorizontalEndo& h);

VecF to_adapted(const AdaptedFrame& fr, const VecF& sec_xv);
VecF from_adapted(const AdaptedFrame& fr, const VecF& sec_adapted);
MatF tensor11_to_adapted(const AdaptedFrame& fr, const MatF& K);
Ten3F tensor12_to_adapted(const AdaptedFrame& fr, const Ten3F& T);

/// X^h = (X^a o pi)(X_a + B^b_a V_b).
VecF horizontal_lift(const HorizontalEndo& h, const SectionE& X);

}  // namespace fla

#endif  // FLA_HORIZONTAL_HPP
