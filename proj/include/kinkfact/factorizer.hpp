#pragma once

// Grouping u'' - (u dphi1/du + phi1 + phi2) u' + phi1 phi2 u = 0 of the
// bracket product [D - phi2][D - phi1] u = 0, under the conditions
//
//   phi1 phi2 = F(u)/u,      u dphi1/du + phi1 + phi2 = -gamma.
//
// F(u)/u is split into two templates P, Q (phi1 = a P, phi2 = Q / a) and the
// second condition is solved for the scale a by coefficient matching.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "kinkfact/errors.hpp"
#include "kinkfact/powerpoly.hpp"

namespace kinkfact {

/// Tolerance on the non-constant part of u phi1' + phi1 + phi2.
inline constexpr double kConstancyTolerance = 1e-10;

/// Supported shapes of F(u)/u.
enum class Family {
  difference,  ///< c0 - c1 u^n, split as (sqrt c0 - sqrt c1 u^{n/2})(sqrt c0 + sqrt c1 u^{n/2})
  dto,         ///< A - u^{n-2}, same split with the DTO exponent n/2 - 1
  quadratic,   ///< c2 u^2 + c1 u + c0 with real roots, split into its linear factors
};

/// Sign of gamma for a solved pair; upper is the gamma > 0 family.
enum class Branch { upper, lower };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::difference: return "difference";
    case Family::dto: return "dto";
    case Family::quadratic: return "quadratic";
  }
  return "?";
}
inline std::string to_string(Branch b) { return b == Branch::upper ? "upper" : "lower"; }

struct FactorAnsatz {
  PowerPoly P;
  PowerPoly Q;
};

struct FactorizationPair {
  PowerPoly phi1;  ///< inner factor: compatible flow u' = phi1 u
  PowerPoly phi2;  ///< outer factor
  double scale_a = 1.0;
  double gamma = 0.0;
  Branch branch = Branch::upper;
};

/// u'' + gamma u' + F(u) = 0.
struct OdeSpec {
  double gamma = 0.0;
  PowerPoly F;

  /// Residual of the ODE for given (u, u', u'').
  double residual(double u, double du, double d2u) const { return d2u + gamma * du + F.eval(u); }
};

/// u dphi1/du + phi1 + phi2; constant (= -gamma) for a valid pair.
inline PowerPoly friction_poly(const PowerPoly& phi1, const PowerPoly& phi2) {
  return phi1.u_deriv() + phi1 + phi2;
}

namespace detail {

inline std::vector<FactorAnsatz> split_binomial_difference(const PowerPoly& f_over_u, const char* family) {
  const auto& t = f_over_u.terms();
  if (t.size() != 2 || !t[0].exponent.is_zero() || t[0].coeff <= 0.0 || t[1].coeff >= 0.0)
    throw UnsupportedError(std::string(family) + " family needs F/u = c0 - c1 u^e with c0, c1 > 0, got " +
                           f_over_u.to_string());
  const Exponent half(t[1].exponent.num(), 2 * t[1].exponent.den());
  const double r0 = std::sqrt(t[0].coeff);
  const double r1 = std::sqrt(-t[1].coeff);
  const PowerPoly minus = PowerPoly::canonicalize({{Exponent(0), r0}, {half, -r1}});
  const PowerPoly plus = PowerPoly::canonicalize({{Exponent(0), r0}, {half, r1}});
  return {{minus, plus}, {plus, minus}};
}

inline std::vector<FactorAnsatz> split_quadratic(const PowerPoly& f_over_u) {
  for (const auto& t : f_over_u.terms())
    if (!t.exponent.is_integer() || t.exponent.num() > 2)
      throw UnsupportedError("quadratic family needs integer exponents <= 2, got " + f_over_u.to_string());
  const double c2 = f_over_u.coefficient(Exponent(2));
  const double c1 = f_over_u.coefficient(Exponent(1));
  const double c0 = f_over_u.coefficient(Exponent(0));
  if (c2 == 0.0) throw UnsupportedError("quadratic family needs a u^2 term, got " + f_over_u.to_string());
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < -kStructuralTolerance)
    throw UnsupportedError("quadratic " + f_over_u.to_string() + " has no real roots");
  const double sq = std::sqrt(std::max(disc, 0.0));
  // Stable root pair.
  const double qv = -0.5 * (c1 + std::copysign(sq, c1 == 0.0 ? 1.0 : c1));
  double r1 = qv / c2;
  double r2 = qv != 0.0 ? c0 / qv : r1;
  if (r1 > r2) std::swap(r1, r2);
  const PowerPoly lo = PowerPoly::canonicalize({{Exponent(1), 1.0}, {Exponent(0), -r1}});
  const PowerPoly hi = PowerPoly::canonicalize({{Exponent(1), c2}, {Exponent(0), -c2 * r2}});
  if (approx_equal(lo * c2, hi)) return {{lo, hi}};
  return {{lo, hi}, {hi, lo}};
}

}  // namespace detail

/// Every supported ordered splitting of F/u for the given family, including
/// the swapped assignment of which factor carries the scale.
inline std::vector<FactorAnsatz> split_nonlinearity(const PowerPoly& f_over_u, Family hint) {
  switch (hint) {
    case Family::difference: return detail::split_binomial_difference(f_over_u, "difference");
    case Family::dto: return detail::split_binomial_difference(f_over_u, "dto");
    case Family::quadratic: return detail::split_quadratic(f_over_u);
  }
  throw UnsupportedError("unknown family");
}

/// Solves u d(aP)/du + aP + Q/a = -gamma for the scale a by requiring every
/// non-constant coefficient to vanish. Returns all real solutions sorted by a.
inline std::vector<FactorizationPair> solve_scale_condition(const FactorAnsatz& ansatz) {
  if (ansatz.P.size() > 2 || ansatz.Q.size() > 2)
    throw UnsupportedError("scale condition is solved for binomial templates only");
  if (ansatz.P.is_zero() || ansatz.Q.is_zero()) throw InfeasibleError("zero factor template");

  // Coefficient of u^e in a R + Q / a with R = u P' + P; vanishing gives
  // a^2 R_e + Q_e = 0.
  const PowerPoly R = ansatz.P.u_deriv() + ansatz.P;
  std::vector<Exponent> exps;
  for (const auto& t : R.terms()) exps.push_back(t.exponent);
  for (const auto& t : ansatz.Q.terms()) exps.push_back(t.exponent);
  std::sort(exps.begin(), exps.end());
  exps.erase(std::unique(exps.begin(), exps.end()), exps.end());

  bool have_a2 = false;
  double a2 = 0.0;
  for (const auto e : exps) {
    if (e.is_zero()) continue;
    const double re = R.coefficient(e);
    const double qe = ansatz.Q.coefficient(e);
    if (std::abs(re) < kStructuralTolerance) {
      if (std::abs(qe) >= kStructuralTolerance)
        throw InfeasibleError("u^{" + e.to_string() + "} coefficient cannot vanish for any scale");
      continue;
    }
    const double cand = -qe / re;
    if (!have_a2) {
      a2 = cand;
      have_a2 = true;
    } else if (std::abs(cand - a2) > kConstancyTolerance * std::max(1.0, std::abs(a2))) {
      throw InfeasibleError("non-constant coefficients demand incompatible scales");
    }
  }
  if (!have_a2) throw InfeasibleError("underdetermined: the scale is unconstrained");
  if (a2 <= 0.0) throw InfeasibleError("no real scale: a^2 = " + detail::format_double(a2));

  const double root = std::sqrt(a2);
  std::vector<FactorizationPair> out;
  for (const double a : {-root, root}) {
    FactorizationPair pair;
    pair.scale_a = a;
    pair.phi1 = ansatz.P * a;
    pair.phi2 = ansatz.Q * (1.0 / a);
    pair.gamma = -(a * R.constant_term() + ansatz.Q.constant_term() / a);
    pair.branch = pair.gamma > 0.0 ? Branch::upper : Branch::lower;
    out.push_back(std::move(pair));
  }
  return out;
}

/// Largest non-constant coefficient of u phi1' + phi1 + phi2.
inline double friction_nonconstancy(const FactorizationPair& pair) {
  const auto nc = friction_poly(pair.phi1, pair.phi2).non_constant_part();
  double worst = 0.0;
  for (const auto& t : nc.terms()) worst = std::max(worst, std::abs(t.coeff));
  return worst;
}

/// Multiplies the brackets back out: gamma stays, F = u phi1 phi2.
inline OdeSpec expand_grouping(const FactorizationPair& pair) {
  const PowerPoly fr = friction_poly(pair.phi1, pair.phi2);
  if (friction_nonconstancy(pair) >= kConstancyTolerance)
    throw InconsistencyError("u' coefficient is not constant: " + fr.to_string());
  if (std::abs(fr.constant_term() + pair.gamma) >= kConstancyTolerance * std::max(1.0, std::abs(pair.gamma)))
    throw InconsistencyError("u' coefficient " + detail::format_double(-fr.constant_term()) +
                             " disagrees with gamma " + detail::format_double(pair.gamma));
  return {pair.gamma, (pair.phi1 * pair.phi2).shifted(Exponent(1))};
}

struct BerkovichPair {
  PowerPoly f1b;
  PowerPoly f2b;
};

/// f1b = phi1, f2b = phi2 + u dphi1/du, so that f1b + f2b = -gamma.
inline BerkovichPair berkovich_convert(const FactorizationPair& pair) {
  return {pair.phi1, pair.phi2 + pair.phi1.u_deriv()};
}

/// Inverse of berkovich_convert: phi2 = f2b - u df1b/du.
inline FactorizationPair from_berkovich(const BerkovichPair& b, double scale_a, double gamma) {
  FactorizationPair pair;
  pair.phi1 = b.f1b;
  pair.phi2 = b.f2b - b.f1b.u_deriv();
  pair.scale_a = scale_a;
  pair.gamma = gamma;
  pair.branch = gamma > 0.0 ? Branch::upper : Branch::lower;
  return pair;
}

/// Travelling coordinate xi = k (x - v t): gamma -> gamma / k, F -> F / k^2.
inline OdeSpec rescale_frame(const OdeSpec& ode, double k) {
  if (!(k > 0.0)) throw DomainError("frame scale k must be positive, got " + detail::format_double(k));
  return {ode.gamma / k, ode.F * (1.0 / (k * k))};
}

}  // namespace kinkfact
