#include "fla/finsler.hpp"

#include <cmath>

namespace fla {

namespace {

Field yvar(int a) { return Field(Expr::variable(fy(a))); }

// rho_alpha applied to a field: rho^i_alpha d/dx^i.
Field rho_apply(const LieAlgebroid& A, int alpha, const Field& f) {
  Field out;
  for (int i = 0; i < A.m; ++i) out = out + A.rho_f(i, alpha) * f.d(bx(i));
  return out;
}

}  // namespace

FinslerStructure make_finsler(const Expr& F, const LieAlgebroid& A, double cond_limit) {
  FinslerStructure fs;
  fs.F_expr = F;
  fs.F = Field(F);
  fs.n = A.n;
  fs.G = zero_mat(A.n, A.n);
  for (int a = 0; a < A.n; ++a)
    for (int b = 0; b < A.n; ++b) fs.G[a][b] = Field(F.diff(fy(a)).diff(fy(b)));
  fs.Ginv = matrix_inverse(fs.G, cond_limit);
  return fs;
}

MatF fundamental_form(const FinslerStructure& FS, const LieAlgebroid& A) {
  const int n = FS.n;
  MatF w = zero_mat(2 * n, 2 * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Field xx = rho_apply(A, a, FS.F.d(fy(b))) - rho_apply(A, b, FS.F.d(fy(a)));
      for (int g = 0; g < n; ++g) xx = xx - FS.F.d(fy(g)) * A.L_f(g, a, b);
      w[a][b] = xx;
      w[a][n + b] = -FS.G[a][b];
      w[n + a][b] = FS.G[a][b];
    }
  return w;
}

MatF prolonged_metric_adapted(const FinslerStructure& FS) {
  const int n = FS.n;
  MatF g = zero_mat(2 * n, 2 * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      g[a][b] = FS.G[a][b];
      g[n + a][n + b] = FS.G[a][b];
    }
  return g;
}

MatF prolonged_metric_xv(const FinslerStructure& FS, const HorizontalEndo& h) {
  const MatF ad = prolonged_metric_adapted(FS);
  const AdaptedFrame fr = adapted_frame(h);
  // (0,2) components transform with the inverse frame matrix on both slots.
  const int n2 = 2 * FS.n;
  MatF out = zero_mat(n2, n2);
  for (int a = 0; a < n2; ++a)
    for (int b = 0; b < n2; ++b) {
      Field acc;
      for (int c = 0; c < n2; ++c)
        for (int d = 0; d < n2; ++d)
          acc = acc + fr.to_adapted[c][a] * fr.to_adapted[d][b] * ad[c][d];
      out[a][b] = acc;
    }
  return out;
}

MatF kaehler_form(const FinslerStructure& FS, const HorizontalEndo& h) {
  const int n = FS.n;
  const MatF gt = prolonged_metric_xv(FS, h);
  const MatF J = vertical_endomorphism(n);
  MatF out = zero_mat(2 * n, 2 * n);
  for (int a = 0; a < 2 * n; ++a)
    for (int b = 0; b < 2 * n; ++b) {
      Field acc;
      for (int c = 0; c < 2 * n; ++c)
        acc = acc + gt[a][c] * J[c][b] - J[c][a] * gt[c][b];
      out[a][b] = acc;
    }
  return out;
}

FinslerReport verify_finsler(const FinslerStructure& FS, const LieAlgebroid& A,
                             const std::vector<Point>& pts, const Tolerances& tol) {
  const int n = FS.n;
  FinslerReport rep;

  rep.homogeneity = max_abs(v_delta(n, FS.F) - Field(2.0) * FS.F, pts);

  rep.min_F = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) rep.min_F = std::min(rep.min_F, FS.F(p));
  rep.positivity_ok = rep.min_F > 0.0;

  const Field det = matrix_det(FS.G);
  rep.min_abs_det = std::numeric_limits<double>::infinity();
  double mean_entry = 0.0;
  for (const auto& p : pts) {
    rep.min_abs_det = std::min(rep.min_abs_det, std::abs(det(p)));
    double s = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) s += std::abs(FS.G[a][b](p));
    mean_entry = std::max(mean_entry, s / (n * n));
  }
  rep.det_threshold = tol.det_floor * std::pow(mean_entry, n);
  rep.regularity_ok = rep.min_abs_det >= rep.det_threshold;

  const MatF w = fundamental_form(FS, A);
  const MatF J = vertical_endomorphism(n);
  const VecF C = liouville(n);

  // i_J omega = J^T omega + omega J.
  for (int a = 0; a < 2 * n; ++a)
    for (int b = 0; b < 2 * n; ++b) {
      Field acc;
      for (int c = 0; c < 2 * n; ++c) acc = acc + J[c][a] * w[c][b] + w[a][c] * J[c][b];
      rep.i_j_omega = std::max(rep.i_j_omega, max_abs(acc, pts));
    }

  // Lie derivative of omega along C on frame pairs.
  for (int a = 0; a < 2 * n; ++a) {
    const VecF Ea = frame_section(n, a);
    const VecF CEa = bracket_prolong(A, C, Ea);
    for (int b = 0; b < 2 * n; ++b) {
      const VecF Eb = frame_section(n, b);
      const VecF CEb = bracket_prolong(A, C, Eb);
      Field acc = rho_prolong(A, C, w[a][b]);
      for (int c = 0; c < 2 * n; ++c)
        acc = acc - CEa[static_cast<std::size_t>(c)] * w[c][b] -
              CEb[static_cast<std::size_t>(c)] * w[a][c];
      rep.lie_c_omega = std::max(rep.lie_c_omega, max_abs(acc - w[a][b], pts));
    }
  }

  // i_C omega = d_J F.
  for (int a = 0; a < 2 * n; ++a) {
    Field lhs;
    for (int c = 0; c < 2 * n; ++c) lhs = lhs + C[static_cast<std::size_t>(c)] * w[c][a];
    Field rhs = a < n ? FS.F.d(fy(a)) : Field();
    rep.i_c_omega = std::max(rep.i_c_omega, max_abs(lhs - rhs, pts));
  }

  // metric(C, C) = 2F.
  Field gcc;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) gcc = gcc + yvar(a) * yvar(b) * FS.G[a][b];
  rep.gcc_minus_2f = max_abs(gcc - Field(2.0) * FS.F, pts);

  return rep;
}

VecF d_prolong(const LieAlgebroid& A, const Field& f) {
  const int n = A.n;
  VecF out = zero_vec(2 * n);
  for (int a = 0; a < n; ++a) {
    out[static_cast<std::size_t>(a)] = rho_apply(A, a, f);
    out[static_cast<std::size_t>(n + a)] = f.d(fy(a));
  }
  return out;
}

VecF sharp(const FinslerStructure& FS, const LieAlgebroid& A, const VecF& beta) {
  const int n = FS.n;
  const MatF w = fundamental_form(FS, A);
  VecF out = zero_vec(2 * n);
  // Horizontal components from omega(sharp, V_b) = -Z^a G_{ab}.
  for (int a = 0; a < n; ++a) {
    Field acc;
    for (int b = 0; b < n; ++b)
      acc = acc - FS.Ginv[a][b] * beta[static_cast<std::size_t>(n + b)];
    out[static_cast<std::size_t>(a)] = acc;
  }
  // Vertical components from omega(sharp, X_b) = Z^l omega_XX(l, b) + W^a G_{ab}.
  for (int a = 0; a < n; ++a) {
    Field acc;
    for (int b = 0; b < n; ++b) {
      Field inner = beta[static_cast<std::size_t>(b)];
      for (int l = 0; l < n; ++l) inner = inner - out[static_cast<std::size_t>(l)] * w[l][b];
      acc = acc + FS.Ginv[a][b] * inner;
    }
    out[static_cast<std::size_t>(n + a)] = acc;
  }
  return out;
}

VecF gradient(const FinslerStructure& FS, const LieAlgebroid& A, const Field& phi) {
  return sharp(FS, A, d_prolong(A, phi));
}

VecF canonical_spray(const FinslerStructure& FS, const LieAlgebroid& A) {
  const int n = FS.n;
  VecF s_comp = zero_vec(n);
  for (int a = 0; a < n; ++a) {
    Field acc;
    for (int b = 0; b < n; ++b) {
      Field inner = rho_apply(A, b, FS.F);
      for (int g = 0; g < n; ++g) {
        Field term;
        for (int l = 0; l < n; ++l) term = term + FS.F.d(fy(l)) * A.L_f(l, g, b);
        term = term - rho_apply(A, g, FS.F.d(fy(b)));
        inner = inner + yvar(g) * term;
      }
      acc = acc + FS.Ginv[a][b] * inner;
    }
    s_comp[static_cast<std::size_t>(a)] = acc;
  }
  return semispray_from_components(n, s_comp);
}

HorizontalEndo barthel(const FinslerStructure& FS, const LieAlgebroid& A) {
  return from_semispray(canonical_spray(FS, A), A);
}

double conservativity_residual(const HorizontalEndo& h, const FinslerStructure& FS,
                               const LieAlgebroid& A, const std::vector<Point>& pts) {
  const int n = FS.n;
  double res = 0.0;
  for (int a = 0; a < n; ++a) {
    Field acc = rho_apply(A, a, FS.F);
    for (int b = 0; b < n; ++b) acc = acc + h.B[b][a] * FS.F.d(fy(b));
    res = std::max(res, max_abs(acc, pts));
  }
  return res;
}

CartanTensors cartan_tensors(const FinslerStructure& FS, const HorizontalEndo& h,
                             const LieAlgebroid& A) {
  const int n = FS.n;
  CartanTensors out{zero_ten3(n, n, n), zero_ten3(n, n, n), zero_ten3(n, n, n),
                    zero_ten3(n, n, n)};

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int g = 0; g < n; ++g)
        out.first_low[a][b][g] = Field(0.5) * FS.G[a][b].d(fy(g));

  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Field acc;
        for (int l = 0; l < n; ++l) acc = acc + out.first_low[a][b][l] * FS.Ginv[g][l];
        out.first[g][a][b] = acc;
      }

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int g = 0; g < n; ++g) {
        Field acc = rho_apply(A, a, FS.G[b][g]);
        for (int l = 0; l < n; ++l) {
          acc = acc + h.B[l][a] * FS.G[b][g].d(fy(l));
          acc = acc + h.B[l][a].d(fy(b)) * FS.G[l][g];
          acc = acc + h.B[l][a].d(fy(g)) * FS.G[b][l];
        }
        out.second_low[a][b][g] = Field(0.5) * acc;
      }

  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Field acc;
        for (int l = 0; l < n; ++l) acc = acc + out.second_low[a][b][l] * FS.Ginv[g][l];
        out.second[g][a][b] = acc;
      }
  return out;
}

DConnection distinguished_connection_on(const FinslerStructure& FS, const LieAlgebroid& A,
                                        const HorizontalEndo& h, FinslerConnectionKind kind) {
  const int n = FS.n;
  DConnection D{h, zero_ten3(n, n, n), zero_ten3(n, n, n)};

  const bool metric_f =
      kind == FinslerConnectionKind::cartan || kind == FinslerConnectionKind::chern_rund;
  const bool cartan_c =
      kind == FinslerConnectionKind::cartan || kind == FinslerConnectionKind::hashiguchi;

  if (metric_f) {
    for (int mu = 0; mu < n; ++mu)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Field acc;
          for (int g = 0; g < n; ++g) {
            Field inner = rho_apply(A, a, FS.G[b][g]);
            for (int l = 0; l < n; ++l) {
              inner = inner + h.B[l][a] * FS.G[b][g].d(fy(l));
              inner = inner - h.B[l][a].d(fy(b)) * FS.G[l][g];
              inner = inner + h.B[l][a].d(fy(g)) * FS.G[l][b];
            }
            acc = acc + FS.Ginv[mu][g] * inner;
          }
          D.F[mu][a][b] = Field(0.5) * acc;
        }
  } else {
    for (int g = 0; g < n; ++g)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) D.F[g][a][b] = -h.B[g][a].d(fy(b));
  }

  if (cartan_c) D.C = cartan_tensors(FS, h, A).first;
  return D;
}

DConnection distinguished_connection(const FinslerStructure& FS, const LieAlgebroid& A,
                                     FinslerConnectionKind kind) {
  return distinguished_connection_on(FS, A, barthel(FS, A), kind);
}

SprayDifferenceReport spray_difference_check(const FinslerStructure& FS,
                                             const HorizontalEndo& h, const LieAlgebroid& A,
                                             const std::vector<Point>& pts) {
  const int n = FS.n;
  SprayDifferenceReport rep;

  const VecF S = associated_semispray(h);
  const VecF S0 = canonical_spray(FS, A);
  const VecF diff = vec_sub(S, S0);
  const MatF w = fundamental_form(FS, A);
  const Ten3F t = weak_torsion(h, A);
  const MatF ist = insert_section(t, S);
  const VecF dF = d_prolong(A, FS.F);

  // One-form identity i_{S-S0} omega = d_{i_S t} F on the frame.
  for (int a = 0; a < 2 * n; ++a) {
    Field lhs;
    for (int c = 0; c < 2 * n; ++c) lhs = lhs + diff[static_cast<std::size_t>(c)] * w[c][a];
    Field rhs;
    for (int c = 0; c < 2 * n; ++c) rhs = rhs + ist[c][a] * dF[static_cast<std::size_t>(c)];
    rep.identity_residual = std::max(rep.identity_residual, max_abs(lhs - rhs, pts));
  }

  // Decomposition h = h0 + i_S t / 2 + [J, sharp(d_{i_S t} F)] / 2 for
  // conservative homogeneous h.
  VecF one_form = zero_vec(2 * n);
  for (int a = 0; a < 2 * n; ++a) {
    Field acc;
    for (int c = 0; c < 2 * n; ++c) acc = acc + ist[c][a] * dF[static_cast<std::size_t>(c)];
    one_form[static_cast<std::size_t>(a)] = acc;
  }
  const VecF sh = sharp(FS, A, one_form);
  const MatF bracket = fn_bracket_section(A, vertical_endomorphism(n), sh);
  const HorizontalEndo h0 = barthel(FS, A);
  MatF rhs = mat_add(endo_matrix(h0),
                     mat_add(mat_scale(Field(0.5), ist), mat_scale(Field(0.5), bracket)));
  rep.decomposition_residual = max_abs(mat_sub(endo_matrix(h), rhs), pts);
  return rep;
}

}  // namespace fla
