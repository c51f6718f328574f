#pragma once

// Closed-form kinks of the compatible first-order flow u' = phi(u) u for a
// binomial phi = beta (lambda - u^m). With w = u^m the flow is logistic,
// w' = beta lambda m w (1 - w / lambda), so
//
//   u(xi) = (lambda / (1 +- exp(r (xi - xi0))))^{1/m},   r = -beta lambda m.
//
// The integration constant is absorbed into xi0.

#include <cmath>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "kinkfact/errors.hpp"
#include "kinkfact/powerpoly.hpp"

namespace kinkfact {

/// Sign in the denominator 1 +- exp(...): plus is the tanh kink, minus the coth form.
enum class KinkBranch { plus, minus };
enum class GammaSign { positive, negative };

inline std::string to_string(KinkBranch b) { return b == KinkBranch::plus ? "plus" : "minus"; }
inline std::string to_string(GammaSign g) { return g == GammaSign::positive ? "positive" : "negative"; }

struct KinkProfile {
  double amplitude = 1.0;  ///< |lambda|
  double rate = 1.0;       ///< r, signed
  Exponent inv_exponent{1};
  double shift = 0.0;  ///< xi0
  KinkBranch branch = KinkBranch::plus;
  GammaSign gamma_sign = GammaSign::positive;
  /// -1 when the real profile is the negative root of a negative base
  /// (lambda < 0 with odd integer m); +1 otherwise.
  int orientation = 1;
  /// True when lambda < 0 has no real root and the positive magnitude form is
  /// reported instead. Such a profile does not solve its flow.
  bool canonicalized = false;
  std::string note;

  double width() const { return 1.0 / std::abs(rate); }
};

/// phi = beta (lambda - u^m).
struct BinomialFlow {
  double beta = 0.0;
  double lambda = 0.0;
  Exponent m{1};
};

inline BinomialFlow parse_binomial_flow(const PowerPoly& phi) {
  const auto& t = phi.terms();
  if (t.size() != 2 || !t[0].exponent.is_zero())
    throw UnsupportedError("flow factor must be beta (lambda - u^m), got " + phi.to_string());
  BinomialFlow f;
  f.m = t[1].exponent;
  f.beta = -t[1].coeff;
  f.lambda = t[0].coeff / f.beta;
  return f;
}

/// Fixed points bracketing the kink of u' = phi u, ordered (low, high).
inline std::pair<double, double> flow_fixed_interval(const PowerPoly& phi) {
  const auto f = parse_binomial_flow(phi);
  const double top = std::pow(std::abs(f.lambda), f.m.inverse().value());
  if (f.lambda > 0.0) return {0.0, top};
  if (f.m.is_integer() && f.m.num() % 2 == 1) return {-top, 0.0};
  throw UnsupportedError("flow " + phi.to_string() + " has no real kink");
}

inline KinkProfile solve_binomial_flow(const PowerPoly& phi, GammaSign gamma_sign, double xi0,
                                       KinkBranch branch = KinkBranch::plus) {
  const auto f = parse_binomial_flow(phi);
  if (f.lambda == 0.0) throw UnsupportedError("lambda = 0: no kink between distinct fixed points");
  KinkProfile k;
  k.amplitude = std::abs(f.lambda);
  k.rate = -f.beta * f.lambda * f.m.value();
  k.inv_exponent = f.m.inverse();
  k.shift = xi0;
  k.branch = branch;
  k.gamma_sign = gamma_sign;
  if (f.lambda < 0.0) {
    if (f.m.is_integer() && f.m.num() % 2 == 1) {
      k.orientation = -1;
      k.note = "negative real root of (lambda / (1 +- e))^{1/m}, lambda < 0";
    } else {
      k.canonicalized = true;
      k.note = "lambda < 0 and u^{" + f.m.to_string() +
               "} has no real negative branch; positive magnitude form shown, not a flow solution";
    }
  }
  return k;
}

struct KinkPoint {
  double u = 0.0;
  double du = 0.0;
  double d2u = 0.0;
};

/// u, u', u'' from the closed form; derivatives are analytic.
inline KinkPoint eval_kink(const KinkProfile& k, double xi) {
  const double x = k.rate * (xi - k.shift);
  const double s = k.inv_exponent.value();
  double q = 0.0;  // -w'/(r w)
  double u = 0.0;
  if (k.branch == KinkBranch::plus) {
    q = 1.0 / (1.0 + std::exp(-x));
    const double softplus = x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    u = std::exp(s * (std::log(k.amplitude) - softplus));
  } else {
    if (x == 0.0) throw DomainError("coth kink evaluated at its pole xi = xi0");
    q = -1.0 / std::expm1(-x);
    if (x < 0.0) {
      u = std::exp(s * (std::log(k.amplitude) - std::log(-std::expm1(x))));
    } else {
      if (!k.inv_exponent.is_integer())
        throw DomainError("coth kink with fractional power is not real on this side of xi0");
      u = std::pow(k.amplitude / (-std::expm1(x)), static_cast<double>(k.inv_exponent.num()));
    }
  }
  u *= k.orientation;
  const double du = -k.rate * s * q * u;
  const double d2u = -k.rate * k.rate * s * q * u * (1.0 - (1.0 + s) * q);
  return {u, du, d2u};
}

/// Limits of u at xi -> -inf and xi -> +inf (plus branch).
inline std::pair<double, double> asymptotes(const KinkProfile& k) {
  const double top = k.orientation * std::pow(k.amplitude, k.inv_exponent.value());
  return k.rate > 0.0 ? std::pair{top, 0.0} : std::pair{0.0, top};
}

/// Value at xi0 (plus branch), the level used to track the front.
inline double midpoint_value(const KinkProfile& k) {
  return k.orientation * std::pow(0.5 * k.amplitude, k.inv_exponent.value());
}

/// The gamma < 0 counterpart: same profile with xi - xi0 negated.
inline KinkProfile mirror(KinkProfile k) {
  k.rate = -k.rate;
  k.gamma_sign = k.gamma_sign == GammaSign::positive ? GammaSign::negative : GammaSign::positive;
  return k;
}

/// Same profile with orientation forced positive (the published figure form).
inline KinkProfile magnitude_form(KinkProfile k) {
  k.orientation = 1;
  return k;
}

enum class HyperbolicKind { tanh, coth };

/// u = prefactor * (1 - T(half_rate (xi - xi0)))^power with T = tanh or coth.
struct HyperbolicForm {
  double prefactor = 1.0;
  HyperbolicKind kind = HyperbolicKind::tanh;
  double half_rate = 0.5;
  Exponent power{1};
  double shift = 0.0;
};

inline HyperbolicForm to_hyperbolic(const KinkProfile& k) {
  HyperbolicForm h;
  h.prefactor = k.orientation * std::pow(0.5 * k.amplitude, k.inv_exponent.value());
  h.kind = k.branch == KinkBranch::plus ? HyperbolicKind::tanh : HyperbolicKind::coth;
  h.half_rate = 0.5 * k.rate;
  h.power = k.inv_exponent;
  h.shift = k.shift;
  return h;
}

inline double eval_hyperbolic(const HyperbolicForm& h, double xi) {
  const double arg = h.half_rate * (xi - h.shift);
  const double t = h.kind == HyperbolicKind::tanh ? std::tanh(arg) : 1.0 / std::tanh(arg);
  const double base = 1.0 - t;
  if (base < 0.0) {
    if (!h.power.is_integer()) throw DomainError("hyperbolic form is not real here");
    return h.prefactor * std::pow(base, static_cast<double>(h.power.num()));
  }
  return h.prefactor * std::pow(base, h.power.value());
}

inline std::string describe(const HyperbolicForm& h) {
  return detail::format_double(h.prefactor) + " (1 - " + (h.kind == HyperbolicKind::tanh ? "tanh" : "coth") + "[" +
         detail::format_double(h.half_rate) + " (xi - " + detail::format_double(h.shift) + ")])^{" +
         h.power.to_string() + "}";
}

struct KinkSample {
  double xi = 0.0;
  KinkPoint p;
};

/// count evenly spaced points over [xi_min, xi_max].
inline std::vector<KinkSample> sample_kink(const KinkProfile& k, double xi_min, double xi_max, std::size_t count) {
  if (count < 2) throw DomainError("kink sampling needs at least two points");
  std::vector<KinkSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double xi = xi_min + (xi_max - xi_min) * static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back({xi, eval_kink(k, xi)});
  }
  return out;
}

}  // namespace kinkfact
