#include "fla/algebroid.hpp"

#include <cmath>

namespace fla {

LieAlgebroid make_algebroid(int m, int n,
                            std::vector<std::vector<Expr>> rho,
                            std::vector<std::vector<std::vector<Expr>>> L,
                            bool strict, double antisym_tol) {
  if (static_cast<int>(rho.size()) != m)
    throw AlgebroidValidationError("anchor matrix must have m rows");
  for (const auto& row : rho) {
    if (static_cast<int>(row.size()) != n)
      throw AlgebroidValidationError("anchor matrix must have n columns");
    for (const auto& e : row)
      if (e.depends_on_fiber())
        throw AlgebroidValidationError("anchor components must depend on x only");
  }
  if (static_cast<int>(L.size()) != n)
    throw AlgebroidValidationError("structure functions must be n x n x n");
  for (const auto& mat : L) {
    if (static_cast<int>(mat.size()) != n)
      throw AlgebroidValidationError("structure functions must be n x n x n");
    for (const auto& row : mat) {
      if (static_cast<int>(row.size()) != n)
        throw AlgebroidValidationError("structure functions must be n x n x n");
      for (const auto& e : row)
        if (e.depends_on_fiber())
          throw AlgebroidValidationError("structure functions must depend on x only");
    }
  }

  LieAlgebroid A{m, n, std::move(rho), std::move(L)};

  if (strict) {
    Point probe;
    probe.x.assign(static_cast<std::size_t>(m), 0.3);
    for (int g = 0; g < n; ++g)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const Expr sym = A.L[g][a][b] + A.L[g][b][a];
          if (std::abs(sym.eval(probe)) > antisym_tol)
            throw AlgebroidValidationError(
                "structure functions violate antisymmetry beyond tolerance");
        }
  }
  return A;
}

LieAlgebroid tangent_like_algebroid(int n) {
  std::vector<std::vector<Expr>> rho(static_cast<std::size_t>(n),
                                     std::vector<Expr>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) rho[i][i] = Expr::constant(1.0);
  std::vector<std::vector<std::vector<Expr>>> L(
      static_cast<std::size_t>(n),
      std::vector<std::vector<Expr>>(static_cast<std::size_t>(n),
                                     std::vector<Expr>(static_cast<std::size_t>(n))));
  return make_algebroid(n, n, std::move(rho), std::move(L));
}

StructureReport verify_algebroid(const LieAlgebroid& A, const std::vector<Point>& base_points) {
  StructureReport rep;
  const int m = A.m, n = A.n;

  for (const Point& p : base_points) {
    // Antisymmetry of L.
    for (int g = 0; g < n; ++g)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const double r = std::abs((A.L[g][a][b] + A.L[g][b][a]).eval(p));
          rep.max_antisymmetry_residual = std::max(rep.max_antisymmetry_residual, r);
        }

    // (i): rho^j_a d(rho^i_b)/dx^j - rho^j_b d(rho^i_a)/dx^j = rho^i_g L^g_{ab}.
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int i = 0; i < m; ++i) {
          double lhs = 0.0;
          for (int j = 0; j < m; ++j)
            lhs += A.rho[j][a].eval(p) * A.rho[i][b].diff(bx(j)).eval(p) -
                   A.rho[j][b].eval(p) * A.rho[i][a].diff(bx(j)).eval(p);
          double rhs = 0.0;
          for (int g = 0; g < n; ++g) rhs += A.rho[i][g].eval(p) * A.L[g][a][b].eval(p);
          rep.max_anchor_residual = std::max(rep.max_anchor_residual, std::abs(lhs - rhs));
        }

    // (ii): cyclic sum over (a, b, g) of
    //   rho^i_a dL^nu_{bg}/dx^i + L^nu_{a mu} L^mu_{bg} = 0.
    for (int nu = 0; nu < n; ++nu)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int g = 0; g < n; ++g) {
            double total = 0.0;
            const int cyc[3][3] = {{a, b, g}, {b, g, a}, {g, a, b}};
            for (const auto& idx : cyc) {
              const int ca = idx[0], cb = idx[1], cg = idx[2];
              for (int i = 0; i < m; ++i)
                total += A.rho[i][ca].eval(p) * A.L[nu][cb][cg].diff(bx(i)).eval(p);
              for (int mu = 0; mu < n; ++mu)
                total += A.L[nu][ca][mu].eval(p) * A.L[mu][cb][cg].eval(p);
            }
            rep.max_jacobi_residual = std::max(rep.max_jacobi_residual, std::abs(total));
          }
  }
  return rep;
}

SectionE bracket_e(const LieAlgebroid& A, const SectionE& X, const SectionE& Y) {
  const int m = A.m, n = A.n;
  SectionE out(static_cast<std::size_t>(n));
  for (int g = 0; g < n; ++g) {
    Expr acc;
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < m; ++i)
        acc = acc + X[a] * A.rho[i][a] * Y[g].diff(bx(i)) - Y[a] * A.rho[i][a] * X[g].diff(bx(i));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) acc = acc + X[a] * Y[b] * A.L[g][a][b];
    out[g] = acc.simplified();
  }
  return out;
}

Expr lift_function(const LieAlgebroid& A, const Expr& f, LiftKind kind) {
  if (f.depends_on_fiber())
    throw AlgebroidValidationError("lift_function: input must depend on x only");
  if (kind == LiftKind::vertical) return f;
  Expr out;
  for (int a = 0; a < A.n; ++a)
    for (int i = 0; i < A.m; ++i)
      out = out + Expr::variable(fy(a)) * A.rho[i][a] * f.diff(bx(i));
  return out.simplified();
}

VecF lift_section(const LieAlgebroid& A, const SectionE& X, LiftKind kind) {
  const int n = A.n;
  VecF out = zero_vec(2 * n);
  for (const auto& comp : X)
    if (comp.depends_on_fiber())
      throw AlgebroidValidationError("sections of E must depend on x only");
  if (kind == LiftKind::vertical) {
    for (int a = 0; a < n; ++a) out[static_cast<std::size_t>(n + a)] = Field(X[a]);
    return out;
  }
  for (int a = 0; a < n; ++a) out[static_cast<std::size_t>(a)] = Field(X[a]);
  for (int a = 0; a < n; ++a) {
    Expr acc;
    for (int b = 0; b < n; ++b) {
      Expr coef;
      for (int j = 0; j < A.m; ++j) coef = coef + A.rho[j][b] * X[a].diff(bx(j));
      for (int g = 0; g < n; ++g) coef = coef - X[g] * A.L[a][g][b];
      acc = acc + Expr::variable(fy(b)) * coef;
    }
    out[static_cast<std::size_t>(n + a)] = Field(acc.simplified());
  }
  return out;
}

VecF d_e_function(const LieAlgebroid& A, const Expr& f) {
  if (f.depends_on_fiber())
    throw AlgebroidValidationError("d_e_function: input must depend on x only");
  VecF out = zero_vec(A.n);
  for (int a = 0; a < A.n; ++a) {
    Expr acc;
    for (int i = 0; i < A.m; ++i) acc = acc + A.rho[i][a] * f.diff(bx(i));
    out[static_cast<std::size_t>(a)] = Field(acc.simplified());
  }
  return out;
}

MatF d_e_oneform(const LieAlgebroid& A, const std::vector<Expr>& omega) {
  const int n = A.n;
  for (const auto& w : omega)
    if (w.depends_on_fiber())
      throw AlgebroidValidationError("one-form components must depend on x only");
  // (d^E omega)(e_b, e_g) = rho^i_b dw_g/dx^i - rho^i_g dw_b/dx^i - w_a L^a_{bg}.
  MatF out = zero_mat(n, n);
  for (int b = 0; b < n; ++b)
    for (int g = 0; g < n; ++g) {
      Expr acc;
      for (int i = 0; i < A.m; ++i)
        acc = acc + A.rho[i][b] * omega[g].diff(bx(i)) - A.rho[i][g] * omega[b].diff(bx(i));
      for (int a = 0; a < n; ++a) acc = acc - omega[a] * A.L[a][b][g];
      out[b][g] = Field(acc.simplified());
    }
  return out;
}

Expr anchor_apply(const LieAlgebroid& A, const SectionE& X, const Expr& f) {
  Expr acc;
  for (int a = 0; a < A.n; ++a)
    for (int i = 0; i < A.m; ++i) acc = acc + X[a] * A.rho[i][a] * f.diff(bx(i));
  return acc.simplified();
}

}  // namespace fla
