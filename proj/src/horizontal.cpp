#include "fla/horizontal.hpp"

namespace fla {

namespace {

Field yvar(int a) { return Field(Expr::variable(fy(a))); }

}  // namespace

MatF endo_matrix(const HorizontalEndo& h) {
  const int n = h.n();
  MatF out = zero_mat(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    out[a][a] = Field(1.0);
    for (int b = 0; b < n; ++b) out[n + b][a] = h.B[b][a];
  }
  return out;
}

MatF vertical_projector(const HorizontalEndo& h) {
  return mat_sub(identity_mat(2 * h.n()), endo_matrix(h));
}

MatF tension(const HorizontalEndo& h) {
  const int n = h.n();
  MatF out = zero_mat(2 * n, 2 * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Field acc = h.B[a][b];
      for (int g = 0; g < n; ++g) acc = acc - yvar(g) * h.B[a][b].d(fy(g));
      out[n + a][b] = acc;
    }
  return out;
}

Ten3F weak_torsion_coeffs(const HorizontalEndo& h, const LieAlgebroid& A) {
  const int n = h.n();
  Ten3F t = zero_ten3(n, n, n);
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        t[g][a][b] = h.B[g][b].d(fy(a)) - h.B[g][a].d(fy(b)) - A.L_f(g, a, b);
  return t;
}

Ten3F weak_torsion(const HorizontalEndo& h, const LieAlgebroid& A) {
  const int n = h.n();
  const Ten3F coeff = weak_torsion_coeffs(h, A);
  Ten3F t = zero_ten3(2 * n, 2 * n, 2 * n);
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) t[n + g][a][b] = coeff[g][a][b];
  return t;
}

MatF strong_torsion(const HorizontalEndo& h, const LieAlgebroid& A) {
  const int n = h.n();
  MatF out = zero_mat(2 * n, 2 * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Field acc = h.B[a][b];
      for (int g = 0; g < n; ++g)
        acc = acc - yvar(g) * h.B[a][g].d(fy(b)) - yvar(g) * A.L_f(a, g, b);
      out[n + a][b] = acc;
    }
  return out;
}

Ten3F curvature_coeffs(const HorizontalEndo& h, const LieAlgebroid& A) {
  const int n = h.n();
  const int m = A.m;
  Ten3F R = zero_ten3(n, n, n);
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Field acc;
        for (int i = 0; i < m; ++i)
          acc = acc + A.rho_f(i, a) * h.B[g][b].d(bx(i)) - A.rho_f(i, b) * h.B[g][a].d(bx(i));
        for (int l = 0; l < n; ++l)
          acc = acc + h.B[l][a] * h.B[g][b].d(fy(l)) - h.B[l][b] * h.B[g][a].d(fy(l));
        for (int l = 0; l < n; ++l) acc = acc + A.L_f(l, b, a) * h.B[g][l];
        R[g][a][b] = acc;
      }
  return R;
}

Ten3F curvature(const HorizontalEndo& h, const LieAlgebroid& A) {
  const int n = h.n();
  const Ten3F R = curvature_coeffs(h, A);
  Ten3F omega = zero_ten3(2 * n, 2 * n, 2 * n);
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) omega[n + g][a][b] = -R[g][a][b];
  return omega;
}

VecF associated_semispray(const HorizontalEndo& h) {
  const int n = h.n();
  VecF S = zero_vec(2 * n);
  for (int a = 0; a < n; ++a) {
    S[static_cast<std::size_t>(a)] = yvar(a);
    Field acc;
    for (int b = 0; b < n; ++b) acc = acc + yvar(b) * h.B[a][b];
    S[static_cast<std::size_t>(n + a)] = acc;
  }
  return S;
}

MatF almost_complex(const HorizontalEndo& h) {
  const int n = h.n();
  MatF F = zero_mat(2 * n, 2 * n);
  // F(X_a) = -B^g_a (X_g + B^b_g V_b) - V_a,  F(V_a) = X_a + B^b_a V_b.
  for (int a = 0; a < n; ++a) {
    for (int g = 0; g < n; ++g) F[g][a] = -h.B[g][a];
    for (int b = 0; b < n; ++b) {
      Field acc;
      for (int g = 0; g < n; ++g) acc = acc + h.B[b][g] * h.B[g][a];
      F[n + b][a] = -acc - (b == a ? Field(1.0) : Field());
    }
    F[a][n + a] = Field(1.0);
    for (int b = 0; b < n; ++b) F[n + b][n + a] = h.B[b][a];
  }
  return F;
}

HorizontalEndo from_semispray(const VecF& S, const LieAlgebroid& A) {
  const int n = A.n;
  HorizontalEndo h;
  h.B = zero_mat(n, n);
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a) {
      Field acc = S[static_cast<std::size_t>(n + g)].d(fy(a));
      for (int b = 0; b < n; ++b) acc = acc - yvar(b) * A.L_f(g, a, b);
      h.B[g][a] = Field(0.5) * acc;
    }
  return h;
}

AdaptedFrame adapted_frame(const HorizontalEndo& h) {
  const int n = h.n();
  AdaptedFrame fr;
  fr.from_adapted = identity_mat(2 * n);
  fr.to_adapted = identity_mat(2 * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      fr.from_adapted[n + b][a] = h.B[b][a];
      fr.to_adapted[n + b][a] = -h.B[b][a];
    }
  return fr;
}

VecF to_adapted(const AdaptedFrame& fr, const VecF& sec_xv) {
  return mat_apply(fr.to_adapted, sec_xv);
}

VecF from_adapted(const AdaptedFrame& fr, const VecF& sec_adapted) {
  return mat_apply(fr.from_adapted, sec_adapted);
}

MatF tensor11_to_adapted(const AdaptedFrame& fr, const MatF& K) {
  return mat_mul(fr.to_adapted, mat_mul(K, fr.from_adapted));
}

Ten3F tensor12_to_adapted(const AdaptedFrame& fr, const Ten3F& T) {
  const int n2 = static_cast<int>(T.size());
  // Contract one index at a time to keep the field DAG small.
  Ten3F up = zero_ten3(n2, n2, n2);
  for (int c2 = 0; c2 < n2; ++c2)
    for (int a = 0; a < n2; ++a)
      for (int b = 0; b < n2; ++b) {
        Field acc;
        for (int c = 0; c < n2; ++c) acc = acc + fr.to_adapted[c2][c] * T[c][a][b];
        up[c2][a][b] = acc;
      }
  Ten3F mid = zero_ten3(n2, n2, n2);
  for (int c2 = 0; c2 < n2; ++c2)
    for (int a2 = 0; a2 < n2; ++a2)
      for (int b = 0; b < n2; ++b) {
        Field acc;
        for (int a = 0; a < n2; ++a) acc = acc + up[c2][a][b] * fr.from_adapted[a][a2];
        mid[c2][a2][b] = acc;
      }
  Ten3F out = zero_ten3(n2, n2, n2);
  for (int c2 = 0; c2 < n2; ++c2)
    for (int a2 = 0; a2 < n2; ++a2)
      for (int b2 = 0; b2 < n2; ++b2) {
        Field acc;
        for (int b = 0; b < n2; ++b) acc = acc + mid[c2][a2][b] * fr.from_adapted[b][b2];
        out[c2][a2][b2] = acc;
      }
  return out;
}

VecF horizontal_lift(const HorizontalEndo& h, const SectionE& X) {
  const int n = h.n();
  VecF out = zero_vec(2 * n);
  for (int a = 0; a < n; ++a) out[static_cast<std::size_t>(a)] = Field(X[a]);
  for (int b = 0; b < n; ++b) {
    Field acc;
    for (int a = 0; a < n; ++a) acc = acc + Field(X[a]) * h.B[b][a];
    out[static_cast<std::size_t>(n + b)] = acc;
  }
  return out;
}

}  // namespace fla
