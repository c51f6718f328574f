#pragma once

// Named equation families: generalized Fisher u(1 - u^n), the microtubule
// case n = 6, damped oscillators u(A - u^{n-2}), FitzHugh-Nagumo
// u(u - 1)(a - u) with either factor ordering, and Newell-Whitehead (a = -1).

#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kinkfact/errors.hpp"
#include "kinkfact/factorizer.hpp"
#include "kinkfact/kinks.hpp"
#include "kinkfact/powerpoly.hpp"

namespace kinkfact {

enum class PresetKind { fisher, mt6, dto, fhn, newell_whitehead };

struct Preset {
  PresetKind kind = PresetKind::fisher;
  std::int64_t n = 1;      ///< fisher, dto
  double A = 1.0;          ///< dto
  std::string A_text = "1";
  double a = 0.0;          ///< fhn
  std::string a_text = "0";
  int fhn_branch = 1;      ///< 1: phi1 ~ (u - 1), 2: phi1 ~ (a - u)

  static Preset fisher(std::int64_t n) {
    Preset p;
    p.kind = PresetKind::fisher;
    p.n = n;
    p.validate();
    return p;
  }
  static Preset mt6() {
    Preset p;
    p.kind = PresetKind::mt6;
    p.n = 6;
    return p;
  }
  static Preset dto(double A, std::int64_t n, std::string A_text = {}) {
    Preset p;
    p.kind = PresetKind::dto;
    p.A = A;
    p.A_text = A_text.empty() ? detail::format_double(A) : std::move(A_text);
    p.n = n;
    p.validate();
    return p;
  }
  static Preset fhn(double a, int branch, std::string a_text = {}) {
    Preset p;
    p.kind = PresetKind::fhn;
    p.a = a;
    p.a_text = a_text.empty() ? detail::format_double(a) : std::move(a_text);
    p.fhn_branch = branch;
    p.validate();
    return p;
  }
  static Preset newell_whitehead() {
    Preset p;
    p.kind = PresetKind::newell_whitehead;
    p.a = -1.0;
    p.a_text = "-1";
    p.fhn_branch = 1;
    return p;
  }

  void validate() const {
    switch (kind) {
      case PresetKind::fisher:
        if (n < 1) throw DomainError("fisher(n) needs integer n >= 1");
        break;
      case PresetKind::dto:
        if (!(A > 0.0)) throw DomainError("dto(A, n) needs A > 0");
        if (n < 4 || n % 2 != 0) throw DomainError("dto(A, n) needs even n >= 4");
        break;
      case PresetKind::fhn:
        if (!std::isfinite(a)) throw DomainError("fhn(a, branch) needs real a");
        if (fhn_branch != 1 && fhn_branch != 2) throw DomainError("fhn branch must be 1 or 2");
        break;
      default:
        break;
    }
  }

  std::string id() const {
    switch (kind) {
      case PresetKind::fisher: return "fisher(" + std::to_string(n) + ")";
      case PresetKind::mt6: return "mt6";
      case PresetKind::dto: return "dto(" + A_text + "," + std::to_string(n) + ")";
      case PresetKind::fhn: return "fhn(" + a_text + "," + std::to_string(fhn_branch) + ")";
      case PresetKind::newell_whitehead: return "newell_whitehead";
    }
    return "?";
  }

  /// File-name friendly id.
  std::string slug() const {
    std::string out;
    for (const char c : id()) {
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-')
        out += c;
      else if (c == '/')
        out += "over";
      else if (c == ',' || c == '(')
        out += '_';
    }
    return out;
  }

  /// Generalized Fisher exponent when the preset belongs to that family.
  bool is_fisher_family() const { return kind == PresetKind::fisher || kind == PresetKind::mt6; }
};

namespace detail {

inline double parse_real(std::string_view s) {
  const std::string str(s);
  const auto slash = str.find('/');
  std::size_t used = 0;
  try {
    if (slash == std::string::npos) {
      const double v = std::stod(str, &used);
      if (used != str.size()) throw DomainError("bad number: " + str);
      return v;
    }
    const double num = std::stod(str.substr(0, slash), &used);
    if (used != slash) throw DomainError("bad number: " + str);
    const std::string den_s = str.substr(slash + 1);
    const double den = std::stod(den_s, &used);
    if (used != den_s.size() || den == 0.0) throw DomainError("bad number: " + str);
    return num / den;
  } catch (const std::logic_error&) {
    throw DomainError("bad number: " + str);
  }
}

inline std::int64_t parse_int(std::string_view s) {
  const double v = parse_real(s);
  if (v != std::floor(v)) throw DomainError("expected an integer, got " + std::string(s));
  return static_cast<std::int64_t>(v);
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace detail

/// Accepts "fisher(1)", "fisher:1", "mt6", "dto(2/9,4)", "dto:2/9:4",
/// "fhn(3,1)", "fhn:3:1", "newell_whitehead" (or "nw").
inline Preset parse_preset(std::string_view text) {
  std::string s = detail::trim(text);
  std::string name;
  std::vector<std::string> args;
  const auto open = s.find_first_of("(:");
  name = detail::trim(s.substr(0, open));
  if (open != std::string::npos) {
    std::string rest = s.substr(open + 1);
    if (s[open] == '(') {
      if (rest.empty() || rest.back() != ')') throw DomainError("unbalanced parentheses in preset " + s);
      rest.pop_back();
    }
    const char sep = s[open] == '(' ? ',' : ':';
    std::size_t start = 0;
    while (true) {
      const auto pos = rest.find(sep, start);
      args.push_back(detail::trim(rest.substr(start, pos - start)));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  }
  for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto need = [&](std::size_t k) {
    if (args.size() != k)
      throw DomainError("preset " + name + " takes " + std::to_string(k) + " argument(s), got " +
                        std::to_string(args.size()));
  };
  if (name == "fisher") {
    need(1);
    return Preset::fisher(detail::parse_int(args[0]));
  }
  if (name == "mt6" || name == "microtubule") {
    need(0);
    return Preset::mt6();
  }
  if (name == "dto") {
    need(2);
    return Preset::dto(detail::parse_real(args[0]), detail::parse_int(args[1]), args[0]);
  }
  if (name == "fhn") {
    need(2);
    return Preset::fhn(detail::parse_real(args[0]), static_cast<int>(detail::parse_int(args[1])), args[0]);
  }
  if (name == "newell_whitehead" || name == "nw") {
    need(0);
    return Preset::newell_whitehead();
  }
  throw DomainError("unknown preset: " + s);
}

/// The source equation of a preset with its chosen ansatz.
struct PresetModel {
  Preset preset;
  Family family = Family::difference;
  PowerPoly f_over_u;
  std::vector<FactorAnsatz> ansatzes;
  std::size_t chosen = 0;  ///< index into ansatzes
};

inline PresetModel build_model(const Preset& p) {
  PresetModel m;
  m.preset = p;
  switch (p.kind) {
    case PresetKind::fisher:
    case PresetKind::mt6:
      m.family = Family::difference;
      m.f_over_u = PowerPoly::canonicalize({{Exponent(0), 1.0}, {Exponent(p.n), -1.0}});
      break;
    case PresetKind::dto:
      m.family = Family::dto;
      m.f_over_u = PowerPoly::canonicalize({{Exponent(0), p.A}, {Exponent(p.n - 2), -1.0}});
      break;
    case PresetKind::fhn:
    case PresetKind::newell_whitehead:
      m.family = Family::quadratic;
      // (u - 1)(a - u) = -u^2 + (1 + a) u - a
      m.f_over_u = PowerPoly::canonicalize({{Exponent(0), -p.a}, {Exponent(1), 1.0 + p.a}, {Exponent(2), -1.0}});
      break;
  }
  m.ansatzes = split_nonlinearity(m.f_over_u, m.family);
  if (m.family == Family::quadratic) {
    const double root = p.fhn_branch == 1 ? 1.0 : p.a;
    m.chosen = m.ansatzes.size();
    for (std::size_t i = 0; i < m.ansatzes.size(); ++i) {
      if (std::abs(m.ansatzes[i].P.eval(root)) < 1e-9) {
        m.chosen = i;
        break;
      }
    }
    if (m.chosen == m.ansatzes.size()) throw InfeasibleError("no ansatz with the requested FHN factor");
  }
  return m;
}

/// The pair on the requested gamma-sign branch.
inline FactorizationPair select_branch(const std::vector<FactorizationPair>& pairs, GammaSign sign) {
  if (pairs.empty()) throw InfeasibleError("no factorization pair");
  const FactorizationPair* best = &pairs.front();
  for (const auto& p : pairs) {
    const bool want_pos = sign == GammaSign::positive;
    if ((want_pos && p.gamma > best->gamma) || (!want_pos && p.gamma < best->gamma)) best = &p;
  }
  return *best;
}

inline GammaSign sign_of(double gamma) { return gamma > 0.0 ? GammaSign::positive : GammaSign::negative; }

}  // namespace kinkfact
