#include "fla/runner.hpp"

#include <array>
#include <cmath>
#include <functional>

#include "fla/connections.hpp"
#include "fla/finsler.hpp"
#include "fla/ichijyo.hpp"
#include "fla/numdiff.hpp"
#include "fla/prolongation.hpp"

namespace fla {

namespace {

Field yvar(int a) { return Field(Expr::variable(fy(a))); }

struct Ctx {
  const Scenario& sc;
  std::vector<Point> pts;
  double tol;
  Report& rep;
  std::optional<FinslerStructure> fs;

  const LieAlgebroid& A() const { return sc.algebroid; }
  int n() const { return sc.dims.n; }
};

void add_check(Ctx& ctx, const std::string& id, const std::string& anchor, double residual,
               double tol = -1.0) {
  CheckRecord c;
  c.id = id;
  c.anchor = anchor;
  c.residual = residual;
  c.tolerance = tol < 0.0 ? ctx.tol : tol;
  c.pass = residual <= c.tolerance;
  ctx.rep.checks.push_back(std::move(c));
}

void dump_mat(Ctx& ctx, const std::string& id, const MatF& m) {
  TensorDump d;
  d.id = id;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j)
      d.labels.push_back(id + "." + std::to_string(i + 1) + "." + std::to_string(j + 1));
  for (const auto& p : ctx.pts) {
    std::vector<double> row;
    for (const auto& r : m)
      for (const auto& f : r) row.push_back(f(p));
    d.values.push_back(std::move(row));
  }
  ctx.rep.dumps.push_back(std::move(d));
}

void dump_vec(Ctx& ctx, const std::string& id, const VecF& v) {
  TensorDump d;
  d.id = id;
  for (std::size_t i = 0; i < v.size(); ++i)
    d.labels.push_back(id + "." + std::to_string(i + 1));
  for (const auto& p : ctx.pts) {
    std::vector<double> row;
    for (const auto& f : v) row.push_back(f(p));
    d.values.push_back(std::move(row));
  }
  ctx.rep.dumps.push_back(std::move(d));
}

void dump_ten3(Ctx& ctx, const std::string& id, const Ten3F& t) {
  TensorDump d;
  d.id = id;
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = 0; b < t[a].size(); ++b)
      for (std::size_t c = 0; c < t[a][b].size(); ++c)
        d.labels.push_back(id + "." + std::to_string(a + 1) + "." + std::to_string(b + 1) + "." +
                           std::to_string(c + 1));
  for (const auto& p : ctx.pts) {
    std::vector<double> row;
    for (const auto& m : t)
      for (const auto& r : m)
        for (const auto& f : r) row.push_back(f(p));
    d.values.push_back(std::move(row));
  }
  ctx.rep.dumps.push_back(std::move(d));
}

void dump_ten4(Ctx& ctx, const std::string& id, const Ten4F& t) {
  TensorDump d;
  d.id = id;
  const auto sz = [](std::size_t v) { return std::to_string(v + 1); };
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = 0; b < t[a].size(); ++b)
      for (std::size_t c = 0; c < t[a][b].size(); ++c)
        for (std::size_t e = 0; e < t[a][b][c].size(); ++e)
          d.labels.push_back(id + "." + sz(a) + "." + sz(b) + "." + sz(c) + "." + sz(e));
  for (const auto& p : ctx.pts) {
    std::vector<double> row;
    for (const auto& t3 : t)
      for (const auto& m : t3)
        for (const auto& r : m)
          for (const auto& f : r) row.push_back(f(p));
    d.values.push_back(std::move(row));
  }
  ctx.rep.dumps.push_back(std::move(d));
}

const FinslerStructure& need_finsler(Ctx& ctx) {
  if (!ctx.fs) throw ScenarioError("scenario has no [finsler] block, required by this command");
  return *ctx.fs;
}

VecF scenario_spray(Ctx& ctx) {
  if (ctx.sc.has_semispray) {
    VecF comps = zero_vec(ctx.n());
    for (int a = 0; a < ctx.n(); ++a) comps[static_cast<std::size_t>(a)] = Field(ctx.sc.semispray[a]);
    return semispray_from_components(ctx.n(), comps);
  }
  return canonical_spray(need_finsler(ctx), ctx.A());
}

// Source order for the working endomorphism: explicit [horizontal] block,
// then the endomorphism generated by a stored semispray, then Barthel.
HorizontalEndo scenario_endo(Ctx& ctx) {
  if (ctx.sc.has_horizontal) {
    HorizontalEndo h;
    h.B = zero_mat(ctx.n(), ctx.n());
    for (int b = 0; b < ctx.n(); ++b)
      for (int a = 0; a < ctx.n(); ++a) h.B[b][a] = Field(ctx.sc.horizontal[b][a]);
    return h;
  }
  if (ctx.sc.has_semispray) return from_semispray(scenario_spray(ctx), ctx.A());
  return barthel(need_finsler(ctx), ctx.A());
}

const LinearConnectionE& need_gamma(Ctx& ctx) {
  if (!ctx.sc.gamma)
    throw ScenarioError("scenario has no [connection] block, required by this command");
  return *ctx.sc.gamma;
}

const Expr& need_scalar(Ctx& ctx, const std::string& name) {
  auto it = ctx.sc.scalars.find(name);
  if (it == ctx.sc.scalars.end())
    throw ScenarioError("scenario has no scalar '" + name + "', required by this command");
  return it->second;
}

// Deterministic degree-1 polynomial sections of E derived from the seed.
std::vector<SectionE> seeded_sections(Ctx& ctx, int count) {
  SampleRng rng(ctx.sc.sampling.seed ^ 0x5ec7105eedULL);
  std::vector<SectionE> out;
  for (int k = 0; k < count; ++k) {
    SectionE s;
    for (int a = 0; a < ctx.n(); ++a) {
      Expr e = Expr::constant(rng.uniform(-1, 1));
      for (int i = 0; i < ctx.sc.dims.m; ++i)
        e = e + Expr::constant(rng.uniform(-1, 1)) * Expr::variable(bx(i));
      s.push_back(e);
    }
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Check groups
// ---------------------------------------------------------------------------

void checks_algebroid(Ctx& ctx) {
  const auto rep = verify_algebroid(ctx.A(), ctx.pts);
  add_check(ctx, "alg-antisymmetry", "antisymmetry of the structure functions",
            rep.max_antisymmetry_residual);
  add_check(ctx, "alg-structure-i", "anchor compatibility equation", rep.max_anchor_residual);
  add_check(ctx, "alg-structure-ii", "Jacobi identity of the structure functions",
            rep.max_jacobi_residual);
}

void checks_prolongation(Ctx& ctx) {
  const int n = ctx.n();
  const auto& A = ctx.A();
  const MatF J = vertical_endomorphism(n);
  const VecF C = liouville(n);

  add_check(ctx, "prol-j-squared", "J o J = 0", max_abs(mat_mul(J, J), ctx.pts), 0.0);
  int nonzero = 0;
  for (const auto& row : J)
    for (const auto& e : row)
      if (!e.is_zero()) ++nonzero;
  add_check(ctx, "prol-j-rank", "rank of the vertical endomorphism equals n",
            std::abs(nonzero - n), 0.0);
  add_check(ctx, "prol-jc-zero", "J applied to the Liouville section vanishes",
            max_abs(mat_apply(J, C), ctx.pts), 0.0);
  add_check(ctx, "prol-fn-jc", "[J, C] = J",
            max_abs(mat_sub(fn_bracket_section(A, J, C), J), ctx.pts));
  add_check(ctx, "prol-fn-jj", "vanishing Nijenhuis tensor of J",
            max_abs(fn_bracket_tensor(A, J, J), ctx.pts));

  const auto sections = seeded_sections(ctx, 6);
  double cc = 0.0, cv = 0.0, vv = 0.0, anti = 0.0, jac = 0.0, lio = 0.0;
  for (int k = 0; k + 1 < static_cast<int>(sections.size()); k += 2) {
    const SectionE& X = sections[static_cast<std::size_t>(k)];
    const SectionE& Y = sections[static_cast<std::size_t>(k + 1)];
    const VecF XC = lift_section(A, X, LiftKind::complete);
    const VecF YC = lift_section(A, Y, LiftKind::complete);
    const VecF XV = lift_section(A, X, LiftKind::vertical);
    const VecF YV = lift_section(A, Y, LiftKind::vertical);
    const SectionE XY = bracket_e(A, X, Y);
    cc = std::max(cc, max_abs(vec_sub(bracket_prolong(A, XC, YC),
                                      lift_section(A, XY, LiftKind::complete)),
                              ctx.pts));
    cv = std::max(cv, max_abs(vec_sub(bracket_prolong(A, XC, YV),
                                      lift_section(A, XY, LiftKind::vertical)),
                              ctx.pts));
    vv = std::max(vv, max_abs(bracket_prolong(A, XV, YV), ctx.pts));
    lio = std::max(lio, max_abs(vec_sub(bracket_prolong(A, XV, C), XV), ctx.pts));
    anti = std::max(anti,
                    max_abs(vec_add(bracket_prolong(A, XC, YC), bracket_prolong(A, YC, XC)),
                            ctx.pts));
    VecF j = bracket_prolong(A, XC, bracket_prolong(A, YC, XV));
    j = vec_add(j, bracket_prolong(A, YC, bracket_prolong(A, XV, XC)));
    j = vec_add(j, bracket_prolong(A, XV, bracket_prolong(A, XC, YC)));
    jac = std::max(jac, max_abs(j, ctx.pts));
  }
  add_check(ctx, "prol-lift-cc", "complete lifts intertwine the brackets", cc);
  add_check(ctx, "prol-lift-cv", "mixed lift bracket equals the lifted bracket", cv);
  add_check(ctx, "prol-lift-vv", "vertical lifts commute", vv);
  add_check(ctx, "prol-liouville-vertical", "[X^V, C] = X^V", lio);
  add_check(ctx, "prol-bracket-antisym", "prolongation bracket is antisymmetric", anti);
  add_check(ctx, "prol-bracket-jacobi", "prolongation bracket satisfies Jacobi", jac,
            std::max(ctx.tol, 1e-8));
}

void checks_finsler(Ctx& ctx) {
  const auto& fs = need_finsler(ctx);
  const auto rep = verify_finsler(fs, ctx.A(), ctx.pts, ctx.sc.tol);
  add_check(ctx, "fin-homogeneity", "energy is homogeneous of degree 2", rep.homogeneity);
  add_check(ctx, "fin-positivity", "energy is positive off the zero section",
            std::max(0.0, -rep.min_F), 0.0);
  add_check(ctx, "fin-regularity", "metric tensor is nondegenerate",
            std::max(0.0, rep.det_threshold - rep.min_abs_det), 0.0);
  add_check(ctx, "fin-ij-omega", "fundamental form is killed by J", rep.i_j_omega);
  add_check(ctx, "fin-lie-c-omega", "fundamental form is Liouville-homogeneous",
            rep.lie_c_omega);
  add_check(ctx, "fin-ic-omega", "Liouville insertion recovers the fiber differential",
            rep.i_c_omega);
  add_check(ctx, "fin-gcc", "metric(C, C) = 2F", rep.gcc_minus_2f);
  dump_mat(ctx, "G", fs.G);
}

void checks_spray(Ctx& ctx) {
  const auto& fs = need_finsler(ctx);
  const VecF S0 = canonical_spray(fs, ctx.A());
  const auto res = semispray_residual(ctx.A(), S0, ctx.pts);
  add_check(ctx, "spray-section", "J(S0) equals the Liouville section", res.semispray);
  add_check(ctx, "spray-homogeneity", "canonical spray is 2-homogeneous", res.spray,
            std::max(ctx.tol, 1e-8));

  const MatF w = fundamental_form(fs, ctx.A());
  const VecF dF = d_prolong(ctx.A(), fs.F);
  double defres = 0.0;
  for (int a = 0; a < 2 * ctx.n(); ++a) {
    Field acc;
    for (int c = 0; c < 2 * ctx.n(); ++c) acc = acc + S0[static_cast<std::size_t>(c)] * w[c][a];
    defres = std::max(defres, max_abs(acc + dF[static_cast<std::size_t>(a)], ctx.pts));
  }
  add_check(ctx, "spray-defining", "spray insertion into the fundamental form equals -dF",
            defres, std::max(ctx.tol, 1e-8));

  VecF coeffs = zero_vec(ctx.n());
  for (int a = 0; a < ctx.n(); ++a)
    coeffs[static_cast<std::size_t>(a)] = S0[static_cast<std::size_t>(ctx.n() + a)];
  dump_vec(ctx, "S0", coeffs);
}

void checks_barthel(Ctx& ctx) {
  const auto& fs = need_finsler(ctx);
  const HorizontalEndo h = barthel(fs, ctx.A());
  add_check(ctx, "barthel-homogeneity", "Barthel endomorphism has zero tension",
            max_abs(tension(h), ctx.pts), std::max(ctx.tol, 1e-10));
  add_check(ctx, "barthel-weak-torsion", "Barthel endomorphism is torsion free",
            max_abs(weak_torsion_coeffs(h, ctx.A()), ctx.pts), std::max(ctx.tol, 1e-10));
  add_check(ctx, "barthel-conservative", "Barthel endomorphism is conservative",
            conservativity_residual(h, fs, ctx.A(), ctx.pts), std::max(ctx.tol, 1e-8));
  add_check(ctx, "barthel-strong-torsion", "strong torsion of the Barthel endomorphism vanishes",
            max_abs(strong_torsion(h, ctx.A()), ctx.pts), std::max(ctx.tol, 1e-8));
  dump_mat(ctx, "B", h.B);
}

void checks_endo(Ctx& ctx, const HorizontalEndo& h) {
  const auto& A = ctx.A();
  const int n = ctx.n();
  const MatF H = endo_matrix(h);
  const MatF V = vertical_projector(h);
  const MatF J = vertical_endomorphism(n);

  double proj = max_abs(mat_sub(mat_mul(H, H), H), ctx.pts);
  proj = std::max(proj, max_abs(mat_mul(H, J), ctx.pts));
  proj = std::max(proj, max_abs(mat_sub(mat_mul(J, H), J), ctx.pts));
  proj = std::max(proj, max_abs(mat_sub(mat_mul(V, J), J), ctx.pts));
  proj = std::max(proj, max_abs(mat_mul(V, H), ctx.pts));
  proj = std::max(proj, max_abs(mat_sub(mat_mul(V, V), V), ctx.pts));
  add_check(ctx, "endo-projectors", "projector identities of h, v, J", proj,
            std::max(ctx.tol, 1e-10));

  add_check(ctx, "endo-associated-semispray", "hS is a semispray",
            semispray_residual(A, associated_semispray(h), ctx.pts).semispray, 0.0);

  // i_S contractions prefer the scenario's stored semispray when present.
  const VecF S = ctx.sc.has_semispray ? scenario_spray(ctx) : associated_semispray(h);
  const MatF lhs = strong_torsion(h, A);
  const MatF rhs = mat_add(insert_section(weak_torsion(h, A), S), tension(h));
  add_check(ctx, "endo-strong-torsion", "strong torsion decomposes as i_S t + H",
            max_abs(mat_sub(lhs, rhs), ctx.pts));

  // Curvature against the projected bracket on seeded constant sections.
  const Ten3F omega = curvature(h, A);
  SampleRng rng(ctx.sc.sampling.seed ^ 0xc0ffee);
  double curv = 0.0;
  for (int trial = 0; trial < 2; ++trial) {
    VecF X = zero_vec(2 * n), Y = zero_vec(2 * n);
    for (int c = 0; c < 2 * n; ++c) {
      X[static_cast<std::size_t>(c)] = Field(rng.uniform(-1, 1));
      Y[static_cast<std::size_t>(c)] = Field(rng.uniform(-1, 1));
    }
    const VecF a = apply_ten3(omega, X, Y);
    const VecF b = vec_scale(Field(-1.0),
                             mat_apply(V, bracket_prolong(A, mat_apply(H, X), mat_apply(H, Y))));
    curv = std::max(curv, max_abs(vec_sub(a, b), ctx.pts));
  }
  add_check(ctx, "endo-curvature-bracket", "curvature equals the projected bracket", curv,
            std::max(ctx.tol, 1e-8));

  const MatF F = almost_complex(h);
  add_check(ctx, "endo-almost-complex", "F o F = -Id",
            max_abs(mat_add(mat_mul(F, F), identity_mat(2 * n)), ctx.pts),
            std::max(ctx.tol, 1e-10));
  double im = max_abs(mat_sub(mat_mul(F, J), H), ctx.pts);
  im = std::max(im, max_abs(mat_add(mat_mul(F, H), J), ctx.pts));
  im = std::max(im, max_abs(mat_sub(mat_mul(J, F), V), ctx.pts));
  im = std::max(im, max_abs(mat_sub(mat_mul(F, V), mat_mul(H, F)), ctx.pts));
  add_check(ctx, "endo-almost-complex-relations",
            "F exchanges the horizontal and vertical splittings", im,
            std::max(ctx.tol, 1e-10));

  dump_mat(ctx, "endo-B", h.B);
  dump_mat(ctx, "tension", tension(h));
  dump_ten3(ctx, "weak-torsion", weak_torsion_coeffs(h, A));
  dump_ten3(ctx, "curvature", curvature_coeffs(h, A));
}

void connection_common_checks(Ctx& ctx, const DConnection& D) {
  const auto& A = ctx.A();
  add_check(ctx, "conn-reducible", "connection preserves h",
            max_abs(cov_deriv_tensor11(A, D, endo_matrix(D.h)), ctx.pts));
  add_check(ctx, "conn-almost-complex", "connection preserves the almost complex structure",
            max_abs(cov_deriv_tensor11(A, D, almost_complex(D.h)), ctx.pts));
  add_check(ctx, "conn-dj", "connection preserves J",
            max_abs(cov_deriv_tensor11(A, D, vertical_endomorphism(ctx.n())), ctx.pts));
}

void connection_optional_outputs(Ctx& ctx, const DConnection& D, const RunOptions& opt) {
  const auto& A = ctx.A();
  if (opt.torsion) {
    const TorsionComponents tc = torsion_components(A, D);
    const Ten3F Tdef = torsion_definitional(A, D);
    const Ten3F Tad = tensor12_to_adapted(adapted_frame(D.h), Tdef);
    const int n = ctx.n();
    double res = 0.0;
    for (int g = 0; g < n; ++g)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          res = std::max(res, max_abs(Tad[g][a][b] - tc.A[g][a][b], ctx.pts));
          res = std::max(res, max_abs(Tad[n + g][a][b] - tc.R1[g][a][b], ctx.pts));
          res = std::max(res, max_abs(Tad[g][a][n + b] - tc.B[g][b][a], ctx.pts));
          res = std::max(res, max_abs(Tad[n + g][a][n + b] - tc.P1[g][a][b], ctx.pts));
          res = std::max(res, max_abs(Tad[n + g][n + a][n + b] - tc.S1[g][a][b], ctx.pts));
        }
    add_check(ctx, "conn-torsion-definitional",
              "torsion components match the definitional torsion", res,
              std::max(ctx.tol, 1e-8));
    dump_ten3(ctx, "torsion-A", tc.A);
    dump_ten3(ctx, "torsion-B", tc.B);
    dump_ten3(ctx, "torsion-R1", tc.R1);
    dump_ten3(ctx, "torsion-P1", tc.P1);
    dump_ten3(ctx, "torsion-S1", tc.S1);
  }
  if (opt.curvature || opt.ricci) {
    const CurvatureComponents K = curvature_components(A, D);
    if (opt.curvature) {
      const AdaptedFrame fr = adapted_frame(D.h);
      const int n = ctx.n();
      auto delta = [&](int a) {
        VecF ad = zero_vec(2 * n);
        ad[static_cast<std::size_t>(a)] = Field(1.0);
        return from_adapted(fr, ad);
      };
      // All index triples for n <= 3; a seeded subset of 30 beyond that.
      std::vector<std::array<int, 3>> triples;
      if (n <= 3) {
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int g = 0; g < n; ++g) triples.push_back({a, b, g});
      } else {
        SampleRng rng(ctx.sc.sampling.seed ^ 0x7319);
        for (int k = 0; k < 30; ++k)
          triples.push_back({static_cast<int>(rng.uniform01() * n) % n,
                             static_cast<int>(rng.uniform01() * n) % n,
                             static_cast<int>(rng.uniform01() * n) % n});
      }
      double res = 0.0;
      for (const auto& tri : triples) {
        const int a = tri[0], b = tri[1], g = tri[2];
        const VecF r =
            curvature_definitional(A, D, delta(a), delta(b), frame_section(n, n + g));
        const VecF p = curvature_definitional(A, D, delta(a), frame_section(n, n + b),
                                              frame_section(n, n + g));
        const VecF s = curvature_definitional(A, D, frame_section(n, n + a),
                                              frame_section(n, n + b), frame_section(n, n + g));
        for (int l = 0; l < n; ++l) {
          res = std::max(
              res, max_abs(r[static_cast<std::size_t>(n + l)] - K.R[l][a][b][g], ctx.pts));
          res = std::max(
              res, max_abs(p[static_cast<std::size_t>(n + l)] - K.P[l][a][b][g], ctx.pts));
          res = std::max(
              res, max_abs(s[static_cast<std::size_t>(n + l)] - K.S[l][a][b][g], ctx.pts));
        }
      }
      add_check(ctx, "conn-curvature-definitional",
                "curvature coefficients match the definitional curvature", res,
                std::max(ctx.tol, 1e-7));
      dump_ten4(ctx, "curvature-R", K.R);
      dump_ten4(ctx, "curvature-P", K.P);
      dump_ten4(ctx, "curvature-S", K.S);
    }
    if (opt.ricci) dump_mat(ctx, "mixed-ricci", mixed_ricci_from(K.P));
  }
}

DConnection build_connection(Ctx& ctx, const std::string& kind) {
  if (kind == "berwald-type") return berwald_type(scenario_endo(ctx));
  if (kind == "yano-type") return yano_type(scenario_endo(ctx));
  if (kind == "berwald")
    return distinguished_connection(need_finsler(ctx), ctx.A(), FinslerConnectionKind::berwald);
  if (kind == "cartan")
    return distinguished_connection(need_finsler(ctx), ctx.A(), FinslerConnectionKind::cartan);
  if (kind == "chern-rund")
    return distinguished_connection(need_finsler(ctx), ctx.A(),
                                    FinslerConnectionKind::chern_rund);
  if (kind == "hashiguchi")
    return distinguished_connection(need_finsler(ctx), ctx.A(),
                                    FinslerConnectionKind::hashiguchi);
  if (kind == "ichijyo") return ichijyo_connection(need_finsler(ctx), need_gamma(ctx), ctx.A());
  throw ScenarioError("unknown connection kind: " + kind);
}

void checks_connection(Ctx& ctx, const RunOptions& opt) {
  const std::string kind = opt.kind.empty() ? "berwald-type" : opt.kind;
  const auto& A = ctx.A();
  const int n = ctx.n();
  const DConnection D = build_connection(ctx, kind);
  connection_common_checks(ctx, D);

  if (kind == "berwald-type") {
    const MatF defl = h_deflection(D);
    const MatF T = tension(D.h);
    double res = 0.0;
    for (int g = 0; g < n; ++g)
      for (int a = 0; a < n; ++a) res = std::max(res, max_abs(defl[g][a] - T[n + g][a], ctx.pts));
    add_check(ctx, "bt-deflection-tension", "h-deflection coincides with the tension", res);
    add_check(ctx, "bt-vertical-curvature", "vertical curvature block vanishes",
              max_abs(curvature_components(A, D).S, ctx.pts), 0.0);
  } else if (kind == "yano-type") {
    add_check(ctx, "yt-h-homogeneous", "underlying h is homogeneous",
              max_abs(tension(D.h), ctx.pts), std::max(ctx.tol, 1e-8));
    add_check(ctx, "yt-h-torsion-free", "underlying h is torsion free",
              max_abs(weak_torsion_coeffs(D.h, A), ctx.pts), std::max(ctx.tol, 1e-8));
    const MatF ric = mixed_ricci(A, berwald_type(D.h));
    double omega_cond = 0.0;
    for (int b = 0; b < n; ++b) {
      Field acc;
      for (int a = 0; a < n; ++a) acc = acc + yvar(a) * ric[a][b];
      omega_cond = std::max(omega_cond, max_abs(acc, ctx.pts));
    }
    add_check(ctx, "yt-omega-condition", "semispray insertion into the twist form vanishes",
              omega_cond, std::max(ctx.tol, 1e-8));
    add_check(ctx, "yt-vertical-curvature", "vertical curvature block vanishes",
              max_abs(curvature_components(A, D).S, ctx.pts), 0.0);
    const TorsionComponents tc = torsion_components(A, D);
    double p1 = 0.0;
    for (int g = 0; g < n; ++g)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          p1 = std::max(p1, max_abs(tc.P1[g][a][b] -
                                        Field(1.0 / (n + 1.0)) * ric[a][b] * yvar(g),
                                    ctx.pts));
    add_check(ctx, "yt-v-mixed-torsion", "v-mixed torsion is the scaled Ricci trace times C",
              p1, std::max(ctx.tol, 1e-8));
  } else if (kind == "berwald") {
    const TorsionComponents tc = torsion_components(A, D);
    add_check(ctx, "bf-v-mixed-torsion", "v-mixed torsion vanishes", max_abs(tc.P1, ctx.pts),
              std::max(ctx.tol, 1e-9));
    add_check(ctx, "bf-h-mixed-torsion", "h-mixed torsion vanishes", max_abs(tc.B, ctx.pts), 0.0);
    add_check(ctx, "bf-h-deflection", "h-deflection vanishes on the Barthel endomorphism",
              max_abs(h_deflection(D), ctx.pts), std::max(ctx.tol, 1e-9));
  } else if (kind == "cartan" || kind == "chern-rund" || kind == "hashiguchi" ||
             kind == "ichijyo") {
    const auto& fs = need_finsler(ctx);
    const MatF gt = prolonged_metric_xv(fs, D.h);
    const AdaptedFrame fr = adapted_frame(D.h);
    std::vector<VecF> hdirs, vdirs, all;
    for (int a = 0; a < n; ++a) {
      VecF ad = zero_vec(2 * n);
      ad[static_cast<std::size_t>(a)] = Field(1.0);
      hdirs.push_back(from_adapted(fr, ad));
      vdirs.push_back(frame_section(n, n + a));
      all.push_back(hdirs.back());
      all.push_back(vdirs.back());
    }
    const double mtol = std::max(ctx.tol, 1e-7);
    if (kind == "cartan") {
      add_check(ctx, "cf-metrical", "connection is fully metrical",
                max_abs(cov_deriv_metric(A, D, gt, all), ctx.pts), mtol);
      const TorsionComponents tc = torsion_components(A, D);
      add_check(ctx, "cf-h-horizontal-torsion", "h-horizontal torsion vanishes",
                max_abs(tc.A, ctx.pts), mtol);
      add_check(ctx, "cf-v-vertical-torsion", "v-vertical torsion vanishes",
                max_abs(tc.S1, ctx.pts), mtol);
    } else if (kind == "chern-rund") {
      add_check(ctx, "cr-h-metrical", "connection is h-metrical",
                max_abs(cov_deriv_metric(A, D, gt, hdirs), ctx.pts), mtol);
      add_check(ctx, "cr-vertical-coefficients", "vertical coefficients vanish",
                max_abs(D.C, ctx.pts), 0.0);
      add_check(ctx, "cr-h-horizontal-torsion", "h-horizontal torsion vanishes",
                max_abs(torsion_components(A, D).A, ctx.pts), mtol);
    } else if (kind == "hashiguchi") {
      add_check(ctx, "hg-v-metrical", "connection is v-metrical",
                max_abs(cov_deriv_metric(A, D, gt, vdirs), ctx.pts), mtol);
      const TorsionComponents tc = torsion_components(A, D);
      add_check(ctx, "hg-v-vertical-torsion", "v-vertical torsion vanishes",
                max_abs(tc.S1, ctx.pts), mtol);
      add_check(ctx, "hg-v-mixed-torsion", "v-mixed torsion vanishes", max_abs(tc.P1, ctx.pts),
                mtol);
    } else {  // ichijyo
      add_check(ctx, "ic-v-metrical", "connection is v-metrical",
                max_abs(cov_deriv_metric(A, D, gt, vdirs), ctx.pts), mtol);
      add_check(ctx, "ic-h-deflection", "h-deflection vanishes",
                max_abs(h_deflection(D), ctx.pts), std::max(ctx.tol, 1e-9));
      add_check(ctx, "ic-h-basic", "coefficients are basic (mixed curvature of the associate)",
                is_h_basic(A, D, ctx.pts, ctx.tol).residual, std::max(ctx.tol, 1e-9));
      const TorsionComponents tc = torsion_components(A, D);
      add_check(ctx, "ic-v-mixed-torsion", "v-mixed torsion vanishes", max_abs(tc.P1, ctx.pts),
                std::max(ctx.tol, 1e-9));
    }
  }

  connection_optional_outputs(ctx, D, opt);
  dump_ten3(ctx, "F-coefficients", D.F);
  dump_ten3(ctx, "C-coefficients", D.C);
}

void checks_douglas(Ctx& ctx, const RunOptions& opt) {
  const auto& A = ctx.A();
  const int n = ctx.n();
  const VecF S = scenario_spray(ctx);
  const auto sres = semispray_residual(A, S, ctx.pts);
  add_check(ctx, "douglas-source-spray", "source section is a spray",
            std::max(sres.semispray, sres.spray), std::max(ctx.tol, 1e-8));

  const HorizontalEndo h = from_semispray(S, A);
  const Ten4F D = douglas_tensor(h);

  double sym = 0.0;
  for (int l = 0; l < n; ++l)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int g = 0; g < n; ++g) {
          sym = std::max(sym, max_abs(D[l][a][b][g] - D[l][b][a][g], ctx.pts));
          sym = std::max(sym, max_abs(D[l][a][b][g] - D[l][g][b][a], ctx.pts));
        }
  add_check(ctx, "douglas-symmetry", "tensor is totally symmetric", sym,
            std::max(ctx.tol, 1e-8));

  double contr = 0.0, trace = 0.0;
  for (int l = 0; l < n; ++l)
    for (int a = 0; a < n; ++a)
      for (int g = 0; g < n; ++g) {
        Field acc;
        for (int b = 0; b < n; ++b) acc = acc + yvar(b) * D[l][a][b][g];
        contr = std::max(contr, max_abs(acc, ctx.pts));
      }
  for (int a = 0; a < n; ++a)
    for (int g = 0; g < n; ++g) {
      Field acc;
      for (int l = 0; l < n; ++l) acc = acc + D[l][a][l][g];
      trace = std::max(trace, max_abs(acc, ctx.pts));
    }
  add_check(ctx, "douglas-spray-contraction", "semispray insertion vanishes", contr);
  add_check(ctx, "douglas-trace", "Ricci trace vanishes", trace);

  if (opt.projective) {
    Expr ft;
    try {
      ft = parse_expr(*opt.projective, ctx.sc.dims);
    } catch (const ParseError& pe) {
      throw ScenarioError("--projective expression: " + std::string(pe.what()));
    }
    const Field ftf(ft);
    add_check(ctx, "douglas-projective-homogeneity", "projective factor is 1-homogeneous",
              homogeneity_residual(ftf, 1.0, ctx.pts), std::max(ctx.tol, 1e-8));
    const VecF S2 = projective_change(S, ftf, n);
    const Ten4F D2 = douglas_tensor(from_semispray(S2, A));
    double inv = 0.0;
    for (int l = 0; l < n; ++l)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int g = 0; g < n; ++g)
            inv = std::max(inv, max_abs(D[l][a][b][g] - D2[l][a][b][g], ctx.pts));
    add_check(ctx, "douglas-projective-invariance",
              "tensor is invariant under the projective change", inv, std::max(ctx.tol, 1e-6));
  }
  dump_ten4(ctx, "douglas", D);
}

void checks_berwald_derivative(Ctx& ctx) {
  const auto& A = ctx.A();
  const int n = ctx.n();
  const HorizontalEndo h = scenario_endo(ctx);
  const PullbackDerivative P = berwald_derivative(h);
  const PullbackTorsions pt_ = pullback_torsions(A, P);
  const Ten3F t = weak_torsion_coeffs(h, A);
  const Ten3F R = curvature_coeffs(h, A);

  double ta = 0.0, tr = 0.0;
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        ta = std::max(ta, max_abs(pt_.A[g][a][b] - t[g][a][b], ctx.pts));
        tr = std::max(tr, max_abs(pt_.R1[g][a][b] + R[g][a][b], ctx.pts));
      }
  add_check(ctx, "bd-a-torsion", "pullback torsion equals the weak torsion", ta);
  add_check(ctx, "bd-r1-torsion", "v-horizontal torsion equals the curvature", tr);
  add_check(ctx, "bd-b-torsion", "Finsler torsion vanishes", max_abs(pt_.B, ctx.pts),
            std::max(ctx.tol, 1e-10));
  add_check(ctx, "bd-p1-torsion", "v-mixed torsion vanishes", max_abs(pt_.P1, ctx.pts),
            std::max(ctx.tol, 1e-10));
  add_check(ctx, "bd-q1-torsion", "v-vertical torsion vanishes", max_abs(pt_.Q1, ctx.pts),
            std::max(ctx.tol, 1e-10));

  const PullbackCurvatures pc = pullback_curvatures(A, P);
  const CurvatureComponents K = curvature_components(A, berwald_type(h));
  double cr = 0.0, cp = 0.0, cs = 0.0;
  for (int l = 0; l < n; ++l)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int g = 0; g < n; ++g) {
          cr = std::max(cr, max_abs(pc.R[l][a][b][g] - K.R[l][a][b][g], ctx.pts));
          cp = std::max(cp, max_abs(pc.P[l][a][b][g] - K.P[l][a][b][g], ctx.pts));
          cs = std::max(cs, max_abs(pc.Q[l][a][b][g] - K.S[l][a][b][g], ctx.pts));
        }
  add_check(ctx, "bd-curvature-r", "horizontal curvature matches the connection block", cr);
  add_check(ctx, "bd-curvature-p", "mixed curvature matches the connection block", cp);
  add_check(ctx, "bd-curvature-s", "vertical curvature matches the connection block", cs);

  // Yano derivative: no vertical action and coefficients from the trace term.
  const PullbackDerivative Y = yano_derivative(h);
  add_check(ctx, "yd-vertical-action", "Yano derivative has no vertical coefficients",
            max_abs(Y.coefV, ctx.pts), 0.0);
  const DConnection yt = yano_type(h);
  double ycoef = 0.0;
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        ycoef = std::max(ycoef, max_abs(Y.coefH[g][a][b] - yt.F[g][a][b], ctx.pts));
  add_check(ctx, "yd-coefficients", "Yano derivative matches the Yano-type coefficients",
            ycoef, 0.0);
}

void checks_classify(Ctx& ctx, const RunOptions& opt) {
  const std::string kind = opt.kind.empty() ? "generalized-berwald" : opt.kind;
  const auto& A = ctx.A();
  const auto& fs = need_finsler(ctx);
  const auto& nabla = need_gamma(ctx);
  const double tol = std::max(ctx.tol, 1e-8);

  const auto rep = generalized_berwald_report(fs, nabla, A, ctx.pts);
  add_check(ctx, "gb-conservativity", "generated endomorphism is conservative",
            rep.conservativity, tol);
  add_check(ctx, "gb-second-cartan", "second Cartan tensor of the generated endomorphism",
            rep.second_cartan, tol);
  add_check(ctx, "gb-h-metricity", "induced connection is h-metrical", rep.h_metricity, tol);
  add_check(ctx, "gb-coherence", "the three characterizations agree",
            rep.coherent(tol) ? 0.0 : 1.0, 0.5);
  add_check(ctx, "gb-curvature-relation",
            "fiber contraction of the base curvature matches the endomorphism curvature",
            nabla_curvature_relation(nabla, A, ctx.pts), std::max(ctx.tol, 1e-9));

  if (kind == "berwald" || kind == "minkowski") {
    add_check(ctx, "bw-torsion-free", "base connection is torsion free",
              max_abs(nabla_torsion(nabla, A), ctx.pts), tol);
    const HorizontalEndo hn = h_from_nabla(nabla, A);
    add_check(ctx, "bw-barthel", "generated endomorphism is the Barthel endomorphism",
              max_abs(mat_sub(endo_matrix(hn), endo_matrix(barthel(fs, A))), ctx.pts), tol);
    if (kind == "minkowski")
      add_check(ctx, "mk-flat", "base connection is flat",
                max_abs(nabla_curvature(nabla, A), ctx.pts), tol);
  } else if (kind == "wagner") {
    const auto wrep = wagner_report(fs, nabla, need_scalar(ctx, "f"), A, ctx.pts);
    const double wtol = std::max(ctx.tol, 1e-7);
    add_check(ctx, "wag-torsion-shape", "torsion has the differential shape",
              wrep.torsion_shape, wtol);
    add_check(ctx, "wag-a-torsion", "h-horizontal torsion is the wedge with h",
              wrep.a_torsion, wtol);
    add_check(ctx, "wag-decomposition", "endomorphism decomposes through the Barthel one",
              wrep.decomposition, wtol);
    add_check(ctx, "wag-spray-relation", "spray splits through the gradient",
              wrep.spray_relation, wtol);
  } else if (kind != "generalized-berwald") {
    throw ScenarioError("unknown classify kind: " + kind);
  }
}

void checks_derivative_engine(Ctx& ctx) {
  // Symbolic derivatives against the finite-difference oracle on the
  // scenario's scalar fields, orders 1..3 directly, higher orders through
  // symbolic intermediates.
  std::vector<std::pair<std::string, Expr>> fields;
  if (ctx.sc.finsler_f) fields.push_back({"F", *ctx.sc.finsler_f});
  for (const auto& [name, e] : ctx.sc.scalars) fields.push_back({name, e});
  double res = 0.0;
  for (const auto& [name, e] : fields) {
    (void)name;
    for (int vi = 0; vi < ctx.sc.dims.m + ctx.n(); ++vi) {
      const Var v = vi < ctx.sc.dims.m ? bx(vi) : fy(vi - ctx.sc.dims.m);
      if (!e.depends_on(v)) continue;
      const Expr d3 = e.diff(v).diff(v).diff(v);
      for (const auto& p : ctx.pts) {
        for (int order = 1; order <= 3; ++order) {
          Expr sym = e;
          for (int k = 0; k < order; ++k) sym = sym.diff(v);
          const double sv = sym.eval(p);
          const double fd = fd_oracle(e, p, v, order);
          res = std::max(res, std::abs(sv - fd) / (1.0 + std::abs(sv)));
        }
        for (int extra = 1; extra <= 3; ++extra) {
          Expr sym = d3;
          for (int k = 0; k < extra; ++k) sym = sym.diff(v);
          const double sv = sym.eval(p);
          const double fd = fd_oracle(d3, p, v, extra);
          res = std::max(res, std::abs(sv - fd) / (1.0 + std::abs(sv)));
        }
      }
    }
  }
  add_check(ctx, "engine-symbolic-vs-fd",
            "symbolic partials to order 6 agree with finite differences", res, 1e-4);
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "verify-algebroid") return Command::verify_algebroid;
  if (name == "verify-finsler") return Command::verify_finsler;
  if (name == "spray") return Command::spray;
  if (name == "barthel") return Command::barthel;
  if (name == "endo-report") return Command::endo_report;
  if (name == "connection") return Command::connection;
  if (name == "douglas") return Command::douglas;
  if (name == "berwald-derivative") return Command::berwald_derivative;
  if (name == "classify") return Command::classify;
  if (name == "identity-suite") return Command::identity_suite;
  throw ScenarioError("unknown command: " + name);
}

std::string command_name(Command cmd) {
  switch (cmd) {
    case Command::verify_algebroid: return "verify-algebroid";
    case Command::verify_finsler: return "verify-finsler";
    case Command::spray: return "spray";
    case Command::barthel: return "barthel";
    case Command::endo_report: return "endo-report";
    case Command::connection: return "connection";
    case Command::douglas: return "douglas";
    case Command::berwald_derivative: return "berwald-derivative";
    case Command::classify: return "classify";
    case Command::identity_suite: return "identity-suite";
  }
  return "?";
}

Report run(Command cmd, const Scenario& sc, const RunOptions& opt) {
  Report rep;
  rep.scenario = sc.name;
  rep.command = command_name(cmd);

  SampleSpec spec = sc.sampling;
  if (opt.seed) spec.seed = *opt.seed;
  if (opt.points) spec.count = *opt.points;
  if (spec.count < 1) throw ScenarioError("at least one sample point is required");
  if (spec.y_min <= 0.0)
    throw ScenarioError("fiber norms must stay away from the zero section (y_min > 0)");
  rep.seed = spec.seed;

  Ctx ctx{sc, sample_points(sc.dims, spec),
          opt.tol ? *opt.tol : sc.tol.identity_abs, rep, std::nullopt};
  if (sc.finsler_f) ctx.fs = make_finsler(*sc.finsler_f, sc.algebroid, sc.tol.cond_limit);
  rep.points = ctx.pts;

  switch (cmd) {
    case Command::verify_algebroid:
      checks_algebroid(ctx);
      break;
    case Command::verify_finsler:
      checks_finsler(ctx);
      break;
    case Command::spray:
      checks_spray(ctx);
      break;
    case Command::barthel:
      checks_barthel(ctx);
      break;
    case Command::endo_report:
      checks_endo(ctx, scenario_endo(ctx));
      break;
    case Command::connection:
      checks_connection(ctx, opt);
      break;
    case Command::douglas:
      checks_douglas(ctx, opt);
      break;
    case Command::berwald_derivative:
      checks_berwald_derivative(ctx);
      break;
    case Command::classify:
      checks_classify(ctx, opt);
      break;
    case Command::identity_suite: {
      checks_algebroid(ctx);
      checks_prolongation(ctx);
      if (ctx.fs) {
        checks_finsler(ctx);
        checks_spray(ctx);
        checks_barthel(ctx);
      }
      if (ctx.fs || sc.has_horizontal || sc.has_semispray) {
        checks_endo(ctx, scenario_endo(ctx));
        RunOptions copt;
        copt.kind = "berwald-type";
        checks_connection(ctx, copt);
        checks_berwald_derivative(ctx);
      }
      if (ctx.fs) {
        RunOptions copt;
        copt.kind = "cartan";
        checks_connection(ctx, copt);
      }
      if (ctx.fs && sc.gamma) {
        RunOptions copt;
        checks_classify(ctx, copt);
      }
      checks_derivative_engine(ctx);
      break;
    }
  }
  return rep;
}

}  // namespace fla
