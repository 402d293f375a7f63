#include "fla/connections.hpp"

namespace fla {

namespace {

Field yvar(int a) { return Field(Expr::variable(fy(a))); }

// rho of the adapted horizontal frame vector delta_a applied to f.
Field rho_delta(const LieAlgebroid& A, const HorizontalEndo& h, int a, const Field& f) {
  Field out;
  for (int i = 0; i < A.m; ++i) out = out + A.rho_f(i, a) * f.d(bx(i));
  for (int g = 0; g < h.n(); ++g) out = out + h.B[g][a] * f.d(fy(g));
  return out;
}

VecF delta_section(const HorizontalEndo& h, int a) {
  const int n = h.n();
  VecF d = zero_vec(2 * n);
  d[static_cast<std::size_t>(a)] = Field(1.0);
  for (int b = 0; b < n; ++b) d[static_cast<std::size_t>(n + b)] = h.B[b][a];
  return d;
}

}  // namespace

VecF covariant_derivative(const LieAlgebroid& A, const DConnection& D, const VecF& X,
                          const VecF& Y) {
  const int n = D.n();
  const AdaptedFrame fr = adapted_frame(D.h);
  const VecF Xa = to_adapted(fr, X);
  const VecF Ya = to_adapted(fr, Y);

  VecF out_ad = zero_vec(2 * n);
  for (int g = 0; g < n; ++g) {
    Field hpart = rho_prolong(A, X, Ya[static_cast<std::size_t>(g)]);
    Field vpart = rho_prolong(A, X, Ya[static_cast<std::size_t>(n + g)]);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const Field wf = Xa[static_cast<std::size_t>(a)] * D.F[g][a][b];
        const Field wc = Xa[static_cast<std::size_t>(n + a)] * D.C[g][a][b];
        hpart = hpart + (wf + wc) * Ya[static_cast<std::size_t>(b)];
        vpart = vpart + (wf + wc) * Ya[static_cast<std::size_t>(n + b)];
      }
    out_ad[static_cast<std::size_t>(g)] = hpart;
    out_ad[static_cast<std::size_t>(n + g)] = vpart;
  }
  return from_adapted(fr, out_ad);
}

Ten3F torsion_definitional(const LieAlgebroid& A, const DConnection& D) {
  const int n2 = 2 * D.n();
  const int n = D.n();
  Ten3F T = zero_ten3(n2, n2, n2);
  for (int a = 0; a < n2; ++a) {
    const VecF Ea = frame_section(n, a);
    for (int b = a + 1; b < n2; ++b) {
      const VecF Eb = frame_section(n, b);
      VecF val = vec_sub(covariant_derivative(A, D, Ea, Eb),
                         covariant_derivative(A, D, Eb, Ea));
      val = vec_sub(val, bracket_prolong(A, Ea, Eb));
      for (int c = 0; c < n2; ++c) {
        T[c][a][b] = val[static_cast<std::size_t>(c)];
        T[c][b][a] = -val[static_cast<std::size_t>(c)];
      }
    }
  }
  return T;
}

TorsionComponents torsion_components(const LieAlgebroid& A, const DConnection& D) {
  const int n = D.n();
  TorsionComponents out{zero_ten3(n, n, n), zero_ten3(n, n, n), zero_ten3(n, n, n),
                        zero_ten3(n, n, n), zero_ten3(n, n, n)};
  const Ten3F R = curvature_coeffs(D.h, A);
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        out.A[g][a][b] = D.F[g][a][b] - D.F[g][b][a] - A.L_f(g, a, b);
        out.B[g][a][b] = -D.C[g][a][b];
        out.R1[g][a][b] = -R[g][a][b];
        out.P1[g][a][b] = D.F[g][a][b] + D.h.B[g][a].d(fy(b));
        out.S1[g][a][b] = D.C[g][a][b] - D.C[g][b][a];
      }
  return out;
}

CurvatureComponents curvature_components(const LieAlgebroid& A, const DConnection& D) {
  const int n = D.n();
  CurvatureComponents out{zero_ten4(n, n, n, n), zero_ten4(n, n, n, n), zero_ten4(n, n, n, n)};
  const Ten3F Rh = curvature_coeffs(D.h, A);

  for (int l = 0; l < n; ++l)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int g = 0; g < n; ++g) {
          // Horizontal block.
          Field r = rho_delta(A, D.h, a, D.F[l][b][g]) - rho_delta(A, D.h, b, D.F[l][a][g]);
          for (int mu = 0; mu < n; ++mu) {
            r = r + D.F[mu][b][g] * D.F[l][a][mu] - D.F[mu][a][g] * D.F[l][b][mu];
            r = r - A.L_f(mu, a, b) * D.F[l][mu][g];
            r = r - Rh[mu][a][b] * D.C[l][mu][g];
          }
          out.R[l][a][b][g] = r;

          // Mixed block.
          Field p = rho_delta(A, D.h, a, D.C[l][b][g]) - D.F[l][a][g].d(fy(b));
          for (int mu = 0; mu < n; ++mu) {
            p = p + D.C[mu][b][g] * D.F[l][a][mu] - D.F[mu][a][g] * D.C[l][b][mu];
            p = p + D.h.B[mu][a].d(fy(b)) * D.C[l][mu][g];
          }
          out.P[l][a][b][g] = p;

          // Vertical block.
          Field s = D.C[l][b][g].d(fy(a)) - D.C[l][a][g].d(fy(b));
          for (int mu = 0; mu < n; ++mu)
            s = s + D.C[mu][b][g] * D.C[l][a][mu] - D.C[mu][a][g] * D.C[l][b][mu];
          out.S[l][a][b][g] = s;
        }
  return out;
}

VecF curvature_definitional(const LieAlgebroid& A, const DConnection& D, const VecF& U,
                            const VecF& W, const VecF& Z) {
  VecF term1 = covariant_derivative(A, D, U, covariant_derivative(A, D, W, Z));
  VecF term2 = covariant_derivative(A, D, W, covariant_derivative(A, D, U, Z));
  VecF term3 = covariant_derivative(A, D, bracket_prolong(A, U, W), Z);
  return vec_sub(vec_sub(term1, term2), term3);
}

MatF mixed_ricci_from(const Ten4F& P) {
  const int n = static_cast<int>(P.size());
  MatF out = zero_mat(n, n);
  for (int a = 0; a < n; ++a)
    for (int g = 0; g < n; ++g) {
      Field acc;
      for (int l = 0; l < n; ++l) acc = acc + P[l][a][l][g];
      out[a][g] = acc;
    }
  return out;
}

MatF mixed_ricci(const LieAlgebroid& A, const DConnection& D) {
  return mixed_ricci_from(curvature_components(A, D).P);
}

MatF h_deflection(const DConnection& D) {
  const int n = D.n();
  MatF out = zero_mat(n, n);
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a) {
      Field acc = D.h.B[g][a];
      for (int b = 0; b < n; ++b) acc = acc + yvar(b) * D.F[g][a][b];
      out[g][a] = acc;
    }
  return out;
}

MatF v_deflection(const DConnection& D) {
  const int n = D.n();
  MatF out = zero_mat(n, n);
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a) {
      Field acc = (g == a) ? Field(1.0) : Field();
      for (int b = 0; b < n; ++b) acc = acc + yvar(b) * D.C[g][a][b];
      out[g][a] = acc;
    }
  return out;
}

DConnection berwald_type(const HorizontalEndo& h) {
  const int n = h.n();
  DConnection D{h, zero_ten3(n, n, n), zero_ten3(n, n, n)};
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) D.F[g][a][b] = -h.B[g][a].d(fy(b));
  return D;
}

DConnection yano_type(const HorizontalEndo& h) {
  const int n = h.n();
  DConnection D{h, zero_ten3(n, n, n), zero_ten3(n, n, n)};
  const Field scale(1.0 / (n + 1.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Field trace;
      for (int l = 0; l < n; ++l) trace = trace + h.B[l][a].d(fy(l)).d(fy(b));
      for (int g = 0; g < n; ++g)
        D.F[g][a][b] = scale * yvar(g) * trace - h.B[g][a].d(fy(b));
    }
  return D;
}

Ten4F douglas_tensor(const HorizontalEndo& h) {
  const int n = h.n();
  Ten4F out = zero_ten4(n, n, n, n);
  const Field scale(1.0 / (n + 1.0));

  // Contracted second and third derivative blocks reused across entries.
  MatF q = zero_mat(n, n);  // q[a][g] = d^2 B^mu_a / (dy^mu dy^g), traced on mu
  for (int a = 0; a < n; ++a)
    for (int g = 0; g < n; ++g) {
      Field acc;
      for (int mu = 0; mu < n; ++mu) acc = acc + h.B[mu][a].d(fy(mu)).d(fy(g));
      q[a][g] = acc;
    }

  for (int l = 0; l < n; ++l)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int g = 0; g < n; ++g) {
          Field val = h.B[l][a].d(fy(b)).d(fy(g));
          Field corr;
          if (l == b) corr = corr + q[a][g];
          if (l == g) corr = corr + q[a][b];
          if (l == a) corr = corr + q[b][g];
          corr = corr + yvar(l) * q[b][g].d(fy(a));
          out[l][a][b][g] = val - scale * corr;
        }
  return out;
}

DConnection associated_dconnection(const DConnection& D) {
  DConnection out = D;
  const int n = D.n();
  out.C = zero_ten3(n, n, n);
  return out;
}

Ten3F cov_deriv_tensor11(const LieAlgebroid& A, const DConnection& D, const MatF& K) {
  const int n2 = static_cast<int>(K.size());
  const int n = n2 / 2;
  Ten3F out = zero_ten3(n2, n2, n2);
  for (int a = 0; a < n2; ++a) {
    const VecF Ea = frame_section(n, a);
    for (int b = 0; b < n2; ++b) {
      const VecF Eb = frame_section(n, b);
      const VecF KEb = mat_apply(K, Eb);
      const VecF val = vec_sub(covariant_derivative(A, D, Ea, KEb),
                               mat_apply(K, covariant_derivative(A, D, Ea, Eb)));
      for (int c = 0; c < n2; ++c) out[a][c][b] = val[static_cast<std::size_t>(c)];
    }
  }
  return out;
}

Ten3F cov_deriv_metric(const LieAlgebroid& A, const DConnection& D, const MatF& G2,
                       const std::vector<VecF>& directions) {
  const int n2 = static_cast<int>(G2.size());
  const int n = n2 / 2;
  Ten3F out = zero_ten3(static_cast<int>(directions.size()), n2, n2);
  auto pair_value = [&](const VecF& U, const VecF& W) {
    Field acc;
    for (int i = 0; i < n2; ++i)
      for (int j = 0; j < n2; ++j)
        acc = acc + G2[i][j] * U[static_cast<std::size_t>(i)] * W[static_cast<std::size_t>(j)];
    return acc;
  };
  for (std::size_t d = 0; d < directions.size(); ++d) {
    const VecF& dir = directions[d];
    for (int b = 0; b < n2; ++b) {
      const VecF Eb = frame_section(n, b);
      const VecF DEb = covariant_derivative(A, D, dir, Eb);
      for (int c = 0; c < n2; ++c) {
        const VecF Ec = frame_section(n, c);
        const VecF DEc = covariant_derivative(A, D, dir, Ec);
        Field val = rho_prolong(A, dir, G2[b][c]);
        val = val - pair_value(DEb, Ec) - pair_value(Eb, DEc);
        out[d][b][c] = val;
      }
    }
  }
  return out;
}

Ten3F cov_deriv_tensor12(const LieAlgebroid& A, const DConnection& D, const Ten3F& T,
                         const VecF& U) {
  const int n2 = static_cast<int>(T.size());
  const int n = n2 / 2;
  Ten3F out = zero_ten3(n2, n2, n2);
  for (int a = 0; a < n2; ++a) {
    const VecF Ea = frame_section(n, a);
    const VecF DEa = covariant_derivative(A, D, U, Ea);
    for (int b = 0; b < n2; ++b) {
      const VecF Eb = frame_section(n, b);
      const VecF DEb = covariant_derivative(A, D, U, Eb);
      VecF tab = zero_vec(n2);
      for (int c = 0; c < n2; ++c) tab[static_cast<std::size_t>(c)] = T[c][a][b];
      VecF val = covariant_derivative(A, D, U, tab);
      val = vec_sub(val, apply_ten3(T, DEa, Eb));
      val = vec_sub(val, apply_ten3(T, Ea, DEb));
      for (int c = 0; c < n2; ++c) out[c][a][b] = val[static_cast<std::size_t>(c)];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pullback-bundle derivatives
// ---------------------------------------------------------------------------

PullbackDerivative berwald_derivative(const HorizontalEndo& h) {
  const int n = h.n();
  PullbackDerivative P{h, zero_ten3(n, n, n), zero_ten3(n, n, n)};
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) P.coefH[g][a][b] = -h.B[g][a].d(fy(b));
  return P;
}

PullbackDerivative yano_derivative(const HorizontalEndo& h) {
  const int n = h.n();
  PullbackDerivative P{h, zero_ten3(n, n, n), zero_ten3(n, n, n)};
  const Field scale(1.0 / (n + 1.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Field trace;
      for (int l = 0; l < n; ++l) trace = trace + h.B[l][a].d(fy(l)).d(fy(b));
      for (int g = 0; g < n; ++g)
        P.coefH[g][a][b] = scale * yvar(g) * trace - h.B[g][a].d(fy(b));
    }
  return P;
}

VecF pullback_apply(const LieAlgebroid& A, const PullbackDerivative& P, const VecF& X,
                    const VecF& Ybar) {
  const int n = P.n();
  const AdaptedFrame fr = adapted_frame(P.h);
  const VecF Xa = to_adapted(fr, X);
  VecF out = zero_vec(n);
  for (int g = 0; g < n; ++g) {
    Field acc = rho_prolong(A, X, Ybar[static_cast<std::size_t>(g)]);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        acc = acc + Xa[static_cast<std::size_t>(a)] * P.coefH[g][a][b] *
                        Ybar[static_cast<std::size_t>(b)];
        acc = acc + Xa[static_cast<std::size_t>(n + a)] * P.coefV[g][a][b] *
                        Ybar[static_cast<std::size_t>(b)];
      }
    out[static_cast<std::size_t>(g)] = acc;
  }
  return out;
}

VecF jbar(const HorizontalEndo& h, const VecF& sec_xv) {
  const int n = h.n();
  const VecF ad = to_adapted(adapted_frame(h), sec_xv);
  VecF out = zero_vec(n);
  for (int a = 0; a < n; ++a) out[static_cast<std::size_t>(a)] = ad[static_cast<std::size_t>(a)];
  return out;
}

VecF vbar(const HorizontalEndo& h, const VecF& sec_xv) {
  const int n = h.n();
  const VecF ad = to_adapted(adapted_frame(h), sec_xv);
  VecF out = zero_vec(n);
  for (int a = 0; a < n; ++a)
    out[static_cast<std::size_t>(a)] = ad[static_cast<std::size_t>(n + a)];
  return out;
}

PullbackTorsions pullback_torsions(const LieAlgebroid& A, const PullbackDerivative& P) {
  const int n = P.n();
  PullbackTorsions out{zero_ten3(n, n, n), zero_ten3(n, n, n), zero_ten3(n, n, n),
                       zero_ten3(n, n, n), zero_ten3(n, n, n)};
  std::vector<VecF> deltas, verts;
  for (int a = 0; a < n; ++a) {
    deltas.push_back(delta_section(P.h, a));
    verts.push_back(frame_section(n, n + a));
  }
  std::vector<VecF> hats;
  for (int a = 0; a < n; ++a) hats.push_back(jbar(P.h, deltas[static_cast<std::size_t>(a)]));

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const VecF br_dd = bracket_prolong(A, deltas[a], deltas[b]);
      const VecF br_dv = bracket_prolong(A, deltas[a], verts[b]);
      const VecF br_vv = bracket_prolong(A, verts[a], verts[b]);

      VecF t_a = vec_sub(pullback_apply(A, P, deltas[a], hats[b]),
                         pullback_apply(A, P, deltas[b], hats[a]));
      t_a = vec_sub(t_a, jbar(P.h, br_dd));

      // B(e_a, e_b) = -D_{V_b} e^_a - jbar [delta_a, V_b].
      VecF t_b = vec_scale(Field(-1.0), pullback_apply(A, P, verts[b], hats[a]));
      t_b = vec_sub(t_b, jbar(P.h, br_dv));

      VecF t_r1 = vec_scale(Field(-1.0), vbar(P.h, br_dd));

      VecF t_p1 = vec_sub(pullback_apply(A, P, deltas[a], hats[b]), vbar(P.h, br_dv));

      VecF t_q1 = vec_sub(pullback_apply(A, P, verts[a], hats[b]),
                          pullback_apply(A, P, verts[b], hats[a]));
      t_q1 = vec_sub(t_q1, vbar(P.h, br_vv));

      for (int g = 0; g < n; ++g) {
        out.A[g][a][b] = t_a[static_cast<std::size_t>(g)];
        out.B[g][a][b] = t_b[static_cast<std::size_t>(g)];
        out.R1[g][a][b] = t_r1[static_cast<std::size_t>(g)];
        out.P1[g][a][b] = t_p1[static_cast<std::size_t>(g)];
        out.Q1[g][a][b] = t_q1[static_cast<std::size_t>(g)];
      }
    }
  return out;
}

PullbackCurvatures pullback_curvatures(const LieAlgebroid& A, const PullbackDerivative& P) {
  const int n = P.n();
  PullbackCurvatures out{zero_ten4(n, n, n, n), zero_ten4(n, n, n, n), zero_ten4(n, n, n, n)};
  std::vector<VecF> deltas, verts;
  for (int a = 0; a < n; ++a) {
    deltas.push_back(delta_section(P.h, a));
    verts.push_back(frame_section(n, n + a));
  }
  auto curv = [&](const VecF& U, const VecF& W, int g) {
    VecF hat = zero_vec(n);
    hat[static_cast<std::size_t>(g)] = Field(1.0);
    VecF t1 = pullback_apply(A, P, U, pullback_apply(A, P, W, hat));
    VecF t2 = pullback_apply(A, P, W, pullback_apply(A, P, U, hat));
    VecF t3 = pullback_apply(A, P, bracket_prolong(A, U, W), hat);
    return vec_sub(vec_sub(t1, t2), t3);
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int g = 0; g < n; ++g) {
        const VecF r = curv(deltas[a], deltas[b], g);
        const VecF p = curv(deltas[a], verts[b], g);
        const VecF q = curv(verts[a], verts[b], g);
        for (int l = 0; l < n; ++l) {
          out.R[l][a][b][g] = r[static_cast<std::size_t>(l)];
          out.P[l][a][b][g] = p[static_cast<std::size_t>(l)];
          out.Q[l][a][b][g] = q[static_cast<std::size_t>(l)];
        }
      }
  return out;
}

MatF vv_hessian(int n, const Field& f) {
  MatF out = zero_mat(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out[a][b] = f.d(fy(a)).d(fy(b));
  return out;
}

Field v_delta(int n, const Field& f) {
  Field out;
  for (int a = 0; a < n; ++a) out = out + yvar(a) * f.d(fy(a));
  return out;
}

}  // namespace fla
