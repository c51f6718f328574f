#pragma once

// Bracket reversal. Swapping [D - f2][D - f1] u = 0 into [D - f1][D - f2] u = 0
// gives u'' - (u f2' + f1 + f2) u' + f1 f2 u = 0. On the compatible flow
// u' = f2 u the excess friction (f1' - f2') u u' becomes (f1' - f2') f2 u^2,
// which leaves the constant-gamma partner
//
//   u'' + gamma u' + u [f1 f2 + u (f1' - f2') f2] = 0.

#include <cmath>
#include <cstdint>
#include <string>

#include "kinkfact/factorizer.hpp"
#include "kinkfact/kinks.hpp"
#include "kinkfact/powerpoly.hpp"

namespace kinkfact {

struct PartnerResult {
  OdeSpec partner;
  PowerPoly compatible_phi;  ///< f2; partner kinks solve u' = f2 u
  FactorizationPair source;
};

inline PartnerResult reverse_partner(const FactorizationPair& pair) {
  if (friction_nonconstancy(pair) >= kConstancyTolerance)
    throw InconsistencyError("source pair does not satisfy the constant friction condition");
  const PowerPoly& f1 = pair.phi1;
  const PowerPoly& f2 = pair.phi2;
  const PowerPoly f_over_u = f1 * f2 + (f1.u_deriv() - f2.u_deriv()) * f2;
  return {OdeSpec{pair.gamma, f_over_u.shifted(Exponent(1))}, f2, pair};
}

/// The partner operator [D - f1][D - f2] u with the flow u u' -> f2 u^2
/// substituted symbolically. Returns F such that the reversed equation reads
/// u'' + gamma u' + F = 0; an independent route to reverse_partner().
inline PowerPoly expand_reversed_brackets(const FactorizationPair& pair) {
  const PowerPoly& f1 = pair.phi1;
  const PowerPoly& f2 = pair.phi2;
  // Split -(u f2' + f1 + f2) u' into gamma u' - (friction + gamma) u' and put
  // u' = f2 u into the second part.
  const PowerPoly friction = f2.u_deriv() + f1 + f2;
  const PowerPoly excess = friction - PowerPoly(-pair.gamma);  // friction + gamma
  return (f1 * f2 - excess * f2).shifted(Exponent(1));
}

/// Partner kink: the plus-branch solution of u' = f2 u.
inline KinkProfile partner_kink(const PartnerResult& r, double xi0) {
  return solve_binomial_flow(r.compatible_phi, r.source.gamma > 0.0 ? GammaSign::positive : GammaSign::negative,
                             xi0);
}

enum class ReversalStatus { solvable, obstructed };

struct ReversalReport {
  std::int64_t n = 0;
  ReversalStatus status = ReversalStatus::obstructed;
  /// (h^6 + 1) - (h^4 + h^2) with h^2 = n/2 + 1, i.e. n^2 (n + 4) / 8; zero
  /// exactly when the partner's gamma can be matched.
  double mismatch = 0.0;
  bool linear = false;        ///< n = 0
  bool milne_pinney = false;  ///< n = -4
  /// |a~| = h^3 and the gamma the second factorization would need; set for n > -2.
  double scale_required = 0.0;
  double gamma_required = 0.0;
  double gamma_partner = 0.0;
  std::string detail;
};

inline std::string to_string(ReversalStatus s) { return s == ReversalStatus::solvable ? "solvable" : "obstructed"; }

/// Can the partner of generalized Fisher(n) be factorized again with the
/// templates a~^{-1}(1 - h^4 u^{n/2}), a~ (1 + u^{n/2}) at the partner's gamma?
/// Coefficient matching gives a~^2 = h^6 and gamma~ = -+(h^3 + h^-3); equality
/// with h + h^-1 reduces to (t - 1)^2 (t + 1) = 0, t = h^2.
inline ReversalReport second_reversal_check(std::int64_t n) {
  ReversalReport r;
  r.n = n;
  // 8 (t - 1)^2 (t + 1) with t = (n + 2) / 2, kept in integers.
  const std::int64_t scaled = n * n * (n + 4);
  r.mismatch = static_cast<double>(scaled) / 8.0;
  r.linear = n == 0;
  r.milne_pinney = n == -4;
  r.status = scaled == 0 ? ReversalStatus::solvable : ReversalStatus::obstructed;

  const double t = 0.5 * static_cast<double>(n) + 1.0;
  if (t > 0.0) {
    const double h = std::sqrt(t);
    r.gamma_partner = h + 1.0 / h;
    if (n >= 1) {
      // Cross-check by running the scale condition on the actual templates.
      const Exponent m(n, 2);
      const FactorAnsatz ansatz{PowerPoly::canonicalize({{Exponent(0), 1.0}, {m, -t * t}}),
                                PowerPoly::canonicalize({{Exponent(0), 1.0}, {m, 1.0}})};
      const auto pairs = solve_scale_condition(ansatz);
      r.scale_required = 1.0 / std::abs(pairs.back().scale_a);
      r.gamma_required = std::abs(pairs.back().gamma);
    } else {
      r.scale_required = h * h * h;
      r.gamma_required = h * h * h + 1.0 / (h * h * h);
    }
  }
  if (r.milne_pinney)
    r.detail = "solvable at n = -4 (h^2 = -1); leads to a Milne-Pinney equation, no kink generated";
  else if (r.linear)
    r.detail = "solvable at n = 0; the equation is linear";
  else if (t <= 0.0)
    r.detail = "h^2 = " + detail::format_double(t) + " <= 0, templates degenerate or complex";
  else
    r.detail = "needs |gamma| = " + detail::format_double(r.gamma_required) + ", partner has " +
               detail::format_double(r.gamma_partner);
  return r;
}

}  // namespace kinkfact
