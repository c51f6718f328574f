#pragma once

// Generalized polynomials in u with exact non-negative rational exponents and
// double coefficients: p(u) = sum_i c_i u^{e_i}.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kinkfact/errors.hpp"

namespace kinkfact {

/// Coefficients below this magnitude are structural zeros; also the
/// tolerance used for structural equality of two polynomials.
inline constexpr double kStructuralTolerance = 1e-12;

/// Exact non-negative rational exponent, always stored in lowest terms.
class Exponent {
 public:
  constexpr Exponent() = default;
  constexpr Exponent(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw DomainError("exponent with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_ < 0) throw DomainError("negative exponent " + std::to_string(num_) + "/" + std::to_string(den_));
    const auto g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }
  constexpr bool is_zero() const { return num_ == 0; }
  constexpr bool is_integer() const { return den_ == 1; }
  constexpr double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Reciprocal; the zero exponent has none.
  constexpr Exponent inverse() const {
    if (num_ == 0) throw DomainError("reciprocal of zero exponent");
    return Exponent(den_, num_);
  }

  friend constexpr Exponent operator+(Exponent a, Exponent b) {
    return Exponent(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  /// Throws DomainError when the difference is negative.
  friend constexpr Exponent operator-(Exponent a, Exponent b) {
    return Exponent(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend constexpr bool operator==(Exponent a, Exponent b) = default;
  friend constexpr std::strong_ordering operator<=>(Exponent a, Exponent b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

  std::string to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

struct Term {
  Exponent exponent;
  double coeff = 0.0;
};

namespace detail {

inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) return std::to_string(x);
  return std::string(buf, end);
}

}  // namespace detail

class PowerPoly {
 public:
  /// The zero polynomial.
  PowerPoly() = default;

  /// Constant polynomial.
  explicit PowerPoly(double c) : PowerPoly(canonicalize({{Exponent(0), c}})) {}

  /// Merge equal exponents, sort ascending, drop structural zeros.
  static PowerPoly canonicalize(std::vector<Term> raw) {
    std::stable_sort(raw.begin(), raw.end(),
                     [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
    PowerPoly out;
    for (const auto& t : raw) {
      if (!out.terms_.empty() && out.terms_.back().exponent == t.exponent)
        out.terms_.back().coeff += t.coeff;
      else
        out.terms_.push_back(t);
    }
    std::erase_if(out.terms_, [](const Term& t) { return std::abs(t.coeff) < kStructuralTolerance; });
    return out;
  }

  static PowerPoly monomial(double c, Exponent e) { return canonicalize({{e, c}}); }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Coefficient of u^e (0 when absent).
  double coefficient(Exponent e) const {
    for (const auto& t : terms_)
      if (t.exponent == e) return t.coeff;
    return 0.0;
  }
  double constant_term() const { return coefficient(Exponent(0)); }

  /// Polynomial without its constant term.
  PowerPoly non_constant_part() const {
    PowerPoly out;
    for (const auto& t : terms_)
      if (!t.exponent.is_zero()) out.terms_.push_back(t);
    return out;
  }

  bool has_fractional_exponent() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) { return !t.exponent.is_integer(); });
  }

  /// Sum of c u^p. Negative u is only allowed when every exponent is an integer.
  double eval(double u) const {
    if (u < 0.0 && has_fractional_exponent())
      throw DomainError("evaluation at u = " + detail::format_double(u) + " < 0 with fractional exponent");
    double acc = 0.0;
    for (const auto& t : terms_) {
      if (t.exponent.is_zero())
        acc += t.coeff;
      else if (t.exponent.is_integer())
        acc += t.coeff * std::pow(u, static_cast<double>(t.exponent.num()));
      else
        acc += t.coeff * std::pow(u, t.exponent.value());
    }
    return acc;
  }

  /// Formal derivative. Terms with 0 < p < 1 would need a negative exponent
  /// and raise DomainError; use u_deriv() for those.
  PowerPoly deriv() const {
    std::vector<Term> raw;
    for (const auto& t : terms_) {
      if (t.exponent.is_zero()) continue;
      if (t.exponent < Exponent(1))
        throw DomainError("derivative of u^{" + t.exponent.to_string() + "} has a negative exponent");
      raw.push_back({t.exponent - Exponent(1), t.coeff * t.exponent.value()});
    }
    return canonicalize(std::move(raw));
  }

  /// u * dp/du, i.e. c p u^p per term. Always representable.
  PowerPoly u_deriv() const {
    std::vector<Term> raw;
    for (const auto& t : terms_)
      if (!t.exponent.is_zero()) raw.push_back({t.exponent, t.coeff * t.exponent.value()});
    return canonicalize(std::move(raw));
  }

  /// p(u) * u^e.
  PowerPoly shifted(Exponent e) const {
    std::vector<Term> raw;
    raw.reserve(terms_.size());
    for (const auto& t : terms_) raw.push_back({t.exponent + e, t.coeff});
    return canonicalize(std::move(raw));
  }

  /// p(u) / u^e; every exponent must be at least e.
  PowerPoly divided_by_power(Exponent e) const {
    std::vector<Term> raw;
    raw.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (t.exponent < e) throw DomainError("u^{" + t.exponent.to_string() + "} is not divisible by u^{" + e.to_string() + "}");
      raw.push_back({t.exponent - e, t.coeff});
    }
    return canonicalize(std::move(raw));
  }

  friend PowerPoly operator+(const PowerPoly& p, const PowerPoly& q) {
    std::vector<Term> raw = p.terms_;
    raw.insert(raw.end(), q.terms_.begin(), q.terms_.end());
    return canonicalize(std::move(raw));
  }
  friend PowerPoly operator-(const PowerPoly& p) { return p * -1.0; }
  friend PowerPoly operator-(const PowerPoly& p, const PowerPoly& q) { return p + (-q); }

  friend PowerPoly operator*(const PowerPoly& p, const PowerPoly& q) {
    std::vector<Term> raw;
    raw.reserve(p.size() * q.size());
    for (const auto& a : p.terms_)
      for (const auto& b : q.terms_) raw.push_back({a.exponent + b.exponent, a.coeff * b.coeff});
    return canonicalize(std::move(raw));
  }
  friend PowerPoly operator*(const PowerPoly& p, double s) {
    std::vector<Term> raw = p.terms_;
    for (auto& t : raw) t.coeff *= s;
    return canonicalize(std::move(raw));
  }
  friend PowerPoly operator*(double s, const PowerPoly& p) { return p * s; }

  /// Largest coefficient magnitude of p - q.
  friend double max_coeff_diff(const PowerPoly& p, const PowerPoly& q) {
    // Differences are taken before dropping small terms.
    std::vector<Term> raw = p.terms_;
    for (const auto& t : q.terms_) raw.push_back({t.exponent, -t.coeff});
    std::stable_sort(raw.begin(), raw.end(),
                     [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
    double worst = 0.0;
    for (std::size_t i = 0; i < raw.size();) {
      double sum = 0.0;
      std::size_t j = i;
      for (; j < raw.size() && raw[j].exponent == raw[i].exponent; ++j) sum += raw[j].coeff;
      worst = std::max(worst, std::abs(sum));
      i = j;
    }
    return worst;
  }

  /// Structural equality: identical exponents, coefficients within tol.
  friend bool approx_equal(const PowerPoly& p, const PowerPoly& q, double tol = kStructuralTolerance) {
    return max_coeff_diff(p, q) < tol;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms_) {
      const bool neg = t.coeff < 0.0;
      const double mag = std::abs(t.coeff);
      if (first)
        out += neg ? "-" : "";
      else
        out += neg ? " - " : " + ";
      if (t.exponent.is_zero()) {
        out += detail::format_double(mag);
      } else {
        if (mag != 1.0) out += detail::format_double(mag) + " ";
        out += "u";
        if (t.exponent != Exponent(1)) out += "^{" + t.exponent.to_string() + "}";
      }
      first = false;
    }
    return out;
  }

  /// Parses the grammar produced by to_string(). Also accepts '*', fractional
  /// coefficients ("5/4 u"), and unbraced exponents ("u^3", "u^1/2").
  static PowerPoly parse(std::string_view text);

  friend std::ostream& operator<<(std::ostream& os, const PowerPoly& p) { return os << p.to_string(); }

 private:
  std::vector<Term> terms_;
};

namespace detail {

class PolyParser {
 public:
  explicit PolyParser(std::string_view s) : s_(s) {}

  PowerPoly parse() {
    std::vector<Term> raw;
    skip_ws();
    if (at_end()) fail("empty polynomial");
    bool first = true;
    while (true) {
      skip_ws();
      if (at_end()) break;
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = get() == '-' ? -1.0 : 1.0;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      raw.push_back(term(sign));
      first = false;
    }
    return PowerPoly::canonicalize(std::move(raw));
  }

 private:
  Term term(double sign) {
    double coeff = 1.0;
    bool have_coeff = false;
    if (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) {
      coeff = number();
      skip_ws();
      if (!at_end() && peek() == '/') {
        get();
        skip_ws();
        const double den = number();
        if (den == 0.0) fail("zero denominator");
        coeff /= den;
      }
      have_coeff = true;
      skip_ws();
      if (!at_end() && peek() == '*') {
        get();
        skip_ws();
        if (at_end() || peek() != 'u') fail("expected 'u' after '*'");
      }
    }
    if (!at_end() && peek() == 'u') {
      get();
      skip_ws();
      Exponent e(1);
      if (!at_end() && peek() == '^') {
        get();
        skip_ws();
        const bool braced = !at_end() && peek() == '{';
        if (braced) get();
        e = rational();
        if (braced) {
          skip_ws();
          if (at_end() || get() != '}') fail("expected '}'");
        }
      }
      return {e, sign * coeff};
    }
    if (!have_coeff) fail("expected coefficient or 'u'");
    return {Exponent(0), sign * coeff};
  }

  Exponent rational() {
    skip_ws();
    const auto num = integer();
    skip_ws();
    std::int64_t den = 1;
    if (!at_end() && peek() == '/') {
      get();
      skip_ws();
      den = integer();
    }
    return Exponent(num, den);
  }

  std::int64_t integer() {
    bool neg = false;
    if (!at_end() && peek() == '-') {
      neg = true;
      get();
    }
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc{}) fail("expected integer");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return neg ? -v : v;
  }

  double number() {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc{}) fail("expected number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  char get() { return s_[pos_++]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("polynomial parse error at column " + std::to_string(pos_) + ": " + what + " in \"" +
                      std::string(s_) + "\"");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline PowerPoly PowerPoly::parse(std::string_view text) { return detail::PolyParser(text).parse(); }

}  // namespace kinkfact
