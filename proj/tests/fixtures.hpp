#ifndef FLA_TEST_FIXTURES_HPP
#define FLA_TEST_FIXTURES_HPP

#include <vector>

#include "fla/algebroid.hpp"
#include "fla/finsler.hpp"

namespace fla::testing {

inline std::vector<std::vector<std::vector<Expr>>> zero_l(int n) {
  return std::vector<std::vector<std::vector<Expr>>>(
      static_cast<std::size_t>(n),
      std::vector<std::vector<Expr>>(static_cast<std::size_t>(n),
                                     std::vector<Expr>(static_cast<std::size_t>(n))));
}

inline double levi_civita(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0.0;
  const int perm[3] = {a, b, c};
  int inversions = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 == 0 ? 1.0 : -1.0;
}

// Tangent-bundle case: m = n = 2, rho = identity, L = 0.
inline LieAlgebroid euclidean_tm() { return tangent_like_algebroid(2); }

// so(3)-type: m = 1, rho = 0, L^g_{ab} = epsilon_{abg}.
inline LieAlgebroid so3() {
  const int n = 3;
  std::vector<std::vector<Expr>> rho(1, std::vector<Expr>(n));
  auto L = zero_l(n);
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) L[g][a][b] = Expr::constant(levi_civita(a, b, g));
  return make_algebroid(1, n, std::move(rho), std::move(L));
}

inline FinslerStructure euclidean_finsler(const LieAlgebroid& A) {
  Expr F;
  for (int a = 0; a < A.n; ++a)
    F = F + Expr::constant(0.5) * Expr::variable(fy(a)) * Expr::variable(fy(a));
  return make_finsler(F, A);
}

// Conformal tangent-bundle case: F = exp(2 x1)(y1^2 + y2^2)/2 on rho = id.
inline Expr conformal_energy() {
  Dims d{2, 2};
  return parse_expr("0.5*exp(2*x1)*(y1^2+y2^2)", d);
}

inline Expr quartic_energy() {
  Dims d{2, 2};
  return parse_expr("0.5*sqrt(y1^4+y2^4) + 0.25*(y1^2+y2^2)", d);
}

}  // namespace fla::testing

#endif
