#include "fla/ichijyo.hpp"

#include <cmath>

namespace fla {

namespace {

Field yvar(int a) { return Field(Expr::variable(fy(a))); }

Expr rho_apply_expr(const LieAlgebroid& A, int alpha, const Expr& f) {
  Expr acc;
  for (int i = 0; i < A.m; ++i) acc = acc + A.rho[i][alpha] * f.diff(bx(i));
  return acc.simplified();
}

}  // namespace

LinearConnectionE make_linear_connection(int n,
                                         std::vector<std::vector<std::vector<Expr>>> Gamma) {
  if (static_cast<int>(Gamma.size()) != n)
    throw AlgebroidValidationError("linear connection coefficients must be n x n x n");
  for (const auto& mat : Gamma) {
    if (static_cast<int>(mat.size()) != n)
      throw AlgebroidValidationError("linear connection coefficients must be n x n x n");
    for (const auto& row : mat) {
      if (static_cast<int>(row.size()) != n)
        throw AlgebroidValidationError("linear connection coefficients must be n x n x n");
      for (const auto& e : row)
        if (e.depends_on_fiber())
          throw AlgebroidValidationError("linear connection coefficients must depend on x only");
    }
  }
  return LinearConnectionE{std::move(Gamma)};
}

HorizontalEndo h_from_nabla(const LinearConnectionE& nabla, const LieAlgebroid& A) {
  const int n = A.n;
  HorizontalEndo h;
  h.B = zero_mat(n, n);
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) {
      Field acc;
      for (int g = 0; g < n; ++g) acc = acc - yvar(g) * nabla.G_f(b, a, g);
      h.B[b][a] = acc;
    }
  return h;
}

Ten4F nabla_curvature(const LinearConnectionE& nabla, const LieAlgebroid& A) {
  const int n = A.n;
  Ten4F K = zero_ten4(n, n, n, n);
  for (int l = 0; l < n; ++l)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int g = 0; g < n; ++g) {
          Expr acc = rho_apply_expr(A, a, nabla.Gamma[l][b][g]) -
                     rho_apply_expr(A, b, nabla.Gamma[l][a][g]);
          for (int mu = 0; mu < n; ++mu) {
            acc = acc + nabla.Gamma[mu][b][g] * nabla.Gamma[l][a][mu] -
                  nabla.Gamma[mu][a][g] * nabla.Gamma[l][b][mu];
            acc = acc - A.L[mu][a][b] * nabla.Gamma[l][mu][g];
          }
          K[l][a][b][g] = Field(acc.simplified());
        }
  return K;
}

double nabla_curvature_relation(const LinearConnectionE& nabla, const LieAlgebroid& A,
                                const std::vector<Point>& pts) {
  const int n = A.n;
  const Ten4F K = nabla_curvature(nabla, A);
  const HorizontalEndo h = h_from_nabla(nabla, A);
  const Ten3F R = curvature_coeffs(h, A);
  double res = 0.0;
  for (int l = 0; l < n; ++l)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Field acc = R[l][a][b];
        for (int g = 0; g < n; ++g) acc = acc + yvar(g) * K[l][a][b][g];
        res = std::max(res, max_abs(acc, pts));
      }
  return res;
}

Ten3F nabla_torsion(const LinearConnectionE& nabla, const LieAlgebroid& A) {
  const int n = A.n;
  Ten3F T = zero_ten3(n, n, n);
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        T[g][a][b] =
            Field((nabla.Gamma[g][a][b] - nabla.Gamma[g][b][a] - A.L[g][a][b]).simplified());
  return T;
}

DConnection ichijyo_connection(const FinslerStructure& FS, const LinearConnectionE& nabla,
                               const LieAlgebroid& A) {
  const int n = A.n;
  DConnection D{h_from_nabla(nabla, A), zero_ten3(n, n, n), zero_ten3(n, n, n)};
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) D.F[g][a][b] = nabla.G_f(g, a, b);
  D.C = cartan_tensors(FS, D.h, A).first;
  return D;
}

HBasicResult is_h_basic(const LieAlgebroid& A, const DConnection& D,
                        const std::vector<Point>& pts, double tol) {
  (void)A;
  const int n = D.n();
  HBasicResult out;
  for (int l = 0; l < n; ++l)
    for (int a = 0; a < n; ++a)
      for (int g = 0; g < n; ++g)
        for (int b = 0; b < n; ++b)
          out.residual = std::max(out.residual, max_abs(D.F[l][a][g].d(fy(b)), pts));
  out.h_basic = out.residual <= tol;
  if (out.h_basic) out.extracted = D.F;
  return out;
}

GeneralizedBerwaldReport generalized_berwald_report(const FinslerStructure& FS,
                                                    const LinearConnectionE& nabla,
                                                    const LieAlgebroid& A,
                                                    const std::vector<Point>& pts) {
  GeneralizedBerwaldReport rep;
  const HorizontalEndo h = h_from_nabla(nabla, A);
  rep.conservativity = conservativity_residual(h, FS, A, pts);
  rep.second_cartan = max_abs(cartan_tensors(FS, h, A).second, pts);

  const DConnection D = ichijyo_connection(FS, nabla, A);
  const MatF gt = prolonged_metric_xv(FS, h);
  std::vector<VecF> dirs;
  const AdaptedFrame fr = adapted_frame(h);
  for (int a = 0; a < A.n; ++a) {
    VecF ad = zero_vec(2 * A.n);
    ad[static_cast<std::size_t>(a)] = Field(1.0);
    dirs.push_back(from_adapted(fr, ad));
  }
  rep.h_metricity = max_abs(cov_deriv_metric(A, D, gt, dirs), pts);
  return rep;
}

WagnerReport wagner_report(const FinslerStructure& FS, const LinearConnectionE& nabla,
                           const Expr& f, const LieAlgebroid& A,
                           const std::vector<Point>& pts) {
  if (f.depends_on_fiber())
    throw AlgebroidValidationError("wagner_report: f must be a base function");
  const int n = A.n;
  WagnerReport rep;

  // d^E f components rho_a(f).
  std::vector<Expr> df(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) df[static_cast<std::size_t>(a)] = rho_apply_expr(A, a, f);

  // (b) torsion shape on E.
  const Ten3F T = nabla_torsion(nabla, A);
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Expr rhs;
        if (g == b) rhs = rhs + df[static_cast<std::size_t>(a)];
        if (g == a) rhs = rhs - df[static_cast<std::size_t>(b)];
        rep.torsion_shape = std::max(rep.torsion_shape, max_abs(T[g][a][b] - Field(rhs), pts));
      }

  // (a) h-horizontal torsion of the Ichijyo connection equals d f^v wedge h.
  const DConnection D = ichijyo_connection(FS, nabla, A);
  const TorsionComponents tc = torsion_components(A, D);
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Expr rhs;
        if (g == b) rhs = rhs + df[static_cast<std::size_t>(a)];
        if (g == a) rhs = rhs - df[static_cast<std::size_t>(b)];
        rep.a_torsion = std::max(rep.a_torsion, max_abs(tc.A[g][a][b] - Field(rhs), pts));
      }

  // (c) decomposition of h_nabla through the Barthel endomorphism.
  const HorizontalEndo hn = h_from_nabla(nabla, A);
  const HorizontalEndo h0 = barthel(FS, A);
  const Field fc = Field(lift_function(A, f, LiftKind::complete));
  const VecF grad_fv = gradient(FS, A, Field(f));
  const MatF J = vertical_endomorphism(n);
  const MatF jbracket = fn_bracket_section(A, J, grad_fv);

  MatF rhs_mat = mat_add(endo_matrix(h0), mat_scale(fc, J));
  rhs_mat = mat_sub(rhs_mat, mat_scale(FS.F, jbracket));
  // d_J F (x) grad f^v: column a (X_alpha slot) carries dF/dy^a.
  MatF outer = zero_mat(2 * n, 2 * n);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < 2 * n; ++c)
      outer[c][a] = FS.F.d(fy(a)) * grad_fv[static_cast<std::size_t>(c)];
  rhs_mat = mat_sub(rhs_mat, outer);
  rep.decomposition = max_abs(mat_sub(endo_matrix(hn), rhs_mat), pts);

  // (d) spray relation.
  const VecF Sn = associated_semispray(hn);
  const VecF S0 = canonical_spray(FS, A);
  VecF rhs_spray = vec_add(S0, vec_scale(fc, liouville(n)));
  rhs_spray = vec_sub(rhs_spray, vec_scale(Field(2.0) * FS.F, grad_fv));
  rep.spray_relation = max_abs(vec_sub(Sn, rhs_spray), pts);

  return rep;
}

HbarDeformation hbar_deformation(const LinearConnectionE& nabla, const Expr& f,
                                 const LieAlgebroid& A) {
  if (f.depends_on_fiber())
    throw AlgebroidValidationError("hbar_deformation: f must be a base function");
  const int n = A.n;
  HbarDeformation out;
  out.hbar.B = zero_mat(n, n);
  std::vector<Expr> df(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) df[static_cast<std::size_t>(a)] = rho_apply_expr(A, a, f);

  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) {
      Field acc = -(yvar(b) * Field(df[static_cast<std::size_t>(a)]));
      for (int l = 0; l < n; ++l) acc = acc - yvar(l) * nabla.G_f(b, a, l);
      out.hbar.B[b][a] = acc;
    }

  std::vector<std::vector<std::vector<Expr>>> gbar(
      static_cast<std::size_t>(n),
      std::vector<std::vector<Expr>>(static_cast<std::size_t>(n),
                                     std::vector<Expr>(static_cast<std::size_t>(n))));
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Expr acc = nabla.Gamma[g][a][b];
        if (g == b) acc = acc + df[static_cast<std::size_t>(a)];
        gbar[g][a][b] = acc.simplified();
      }
  out.gammabar = make_linear_connection(n, std::move(gbar));
  return out;
}

}  // namespace fla
