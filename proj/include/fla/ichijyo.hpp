#ifndef FLA_ICHIJYO_HPP
#define FLA_ICHIJYO_HPP

#include <vector>

#include "fla/finsler.hpp"

namespace fla {

/// Linear connection on E: nabla_{e_a} e_b = Gamma^g_{ab} e_g with x-only
/// coefficients, stored Gamma[g][a][b].
struct LinearConnectionE {
  std::vector<std::vector<std::vector<Expr>>> Gamma;

  int n() const { return static_cast<int>(Gamma.size()); }
  Field G_f(int g, int a, int b) const { return Field(Gamma[g][a][b]); }
};

LinearConnectionE make_linear_connection(int n,
                                         std::vector<std::vector<std::vector<Expr>>> Gamma);

/// Horizontal endomorphism generated by nabla: B^b_a = -y^g Gamma^b_{ag}.
HorizontalEndo h_from_nabla(const LinearConnectionE& nabla, const LieAlgebroid& A);

/// Curvature coefficients of nabla:
/// K^l_{abg} = rho_a(Gamma^l_{bg}) - rho_b(Gamma^l_{ag})
///             + Gamma^mu_{bg} Gamma^l_{a mu} - Gamma^mu_{ag} Gamma^l_{b mu}
///             - L^mu_{ab} Gamma^l_{mu g}.
Ten4F nabla_curvature(const LinearConnectionE& nabla, const LieAlgebroid& A);

/// Residual of y^g K^l_{abg} = -R^l_{ab} for the curvature of h_nabla.
double nabla_curvature_relation(const LinearConnectionE& nabla, const LieAlgebroid& A,
                                const std::vector<Point>& pts);

/// Torsion components of nabla: T^g_{ab} = Gamma^g_{ab} - Gamma^g_{ba} - L^g_{ab}.
Ten3F nabla_torsion(const LinearConnectionE& nabla, const LieAlgebroid& A);

/// Ichijyo connection: F = Gamma o pi, C = first Cartan tensor, on h_nabla.
DConnection ichijyo_connection(const FinslerStructure& FS, const LinearConnectionE& nabla,
                               const LieAlgebroid& A);

struct HBasicResult {
  double residual{0.0};  // max |dF^l_{ag}/dy^b| -- mixed curvature of the
                         // associated d-connection
  bool h_basic{false};
  Ten3F extracted;       // base coefficients (the F fields; x-only when h_basic)
};

HBasicResult is_h_basic(const LieAlgebroid& A, const DConnection& D,
                        const std::vector<Point>& pts, double tol);

struct GeneralizedBerwaldReport {
  double conservativity{0.0};    // of h_nabla
  double second_cartan{0.0};     // of h_nabla
  double h_metricity{0.0};       // of the Ichijyo connection
  bool coherent(double tol) const {
    const bool a = conservativity <= tol, b = second_cartan <= tol, c = h_metricity <= tol;
    return a == b && b == c;
  }
  bool pass(double tol) const {
    return conservativity <= tol && second_cartan <= tol && h_metricity <= tol;
  }
};

GeneralizedBerwaldReport generalized_berwald_report(const FinslerStructure& FS,
                                                    const LinearConnectionE& nabla,
                                                    const LieAlgebroid& A,
                                                    const std::vector<Point>& pts);

struct WagnerReport {
  double torsion_shape{0.0};      // (b) T_nabla(X,Y) = d^E f(X) Y - d^E f(Y) X
  double a_torsion{0.0};          // (a) A = d f^v wedge h_nabla
  double decomposition{0.0};      // (c) h_nabla = h0 + f^c J - F [J, grad f^v]
                                  //     - d_J F (x) grad f^v
  double spray_relation{0.0};     // (d) S_nabla = S0 + f^c C - 2F grad f^v
};

WagnerReport wagner_report(const FinslerStructure& FS, const LinearConnectionE& nabla,
                           const Expr& f, const LieAlgebroid& A,
                           const std::vector<Point>& pts);

/// Deformation by f in C^inf(M): hbar with
/// B^b_a = -( y^b rho_a(f) + y^l Gamma^b_{al} ) and the linear connection it
/// generates, Gammabar^g_{ab} = delta^g_b rho_a(f) + Gamma^g_{ab}.
struct HbarDeformation {
  HorizontalEndo hbar;
  LinearConnectionE gammabar;
};

HbarDeformation hbar_deformation(const LinearConnectionE& nabla, const Expr& f,
                                 const LieAlgebroid& A);

}  // namespace fla

#endif  // FLA_ICHIJYO_HPP
