#ifndef FLA_TOLERANCES_HPP
#define FLA_TOLERANCES_HPP

namespace fla {

/// Central tolerance configuration. A check passes when
/// residual <= identity_abs + identity_rel * scale, with scale the magnitude
/// of the quantities compared (0 when no natural scale exists).
struct Tolerances {
  double identity_abs{1e-9};
  double identity_rel{1e-9};
  double sym_vs_fd_rel{1e-5};
  double cond_limit{1e12};
  double det_floor{1e-10};   // |det G| >= det_floor * scale^n
  double antisymmetry{1e-12};

  double bound(double scale = 0.0) const { return identity_abs + identity_rel * scale; }
};

}  // namespace fla

#endif  // FLA_TOLERANCES_HPP
