#include <catch_amalgamated.hpp>

#include <cmath>

#include "kinkfact/factorizer.hpp"
#include "kinkfact/kinks.hpp"
#include "kinkfact/susy.hpp"
#include "kinkfact/verify.hpp"

using namespace kinkfact;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

PowerPoly P(std::initializer_list<Term> t) { return PowerPoly::canonicalize(t); }

FactorizationPair fisher_pair(int n, GammaSign sign = GammaSign::positive) {
  const auto ans = split_nonlinearity(P({{Exponent(0), 1.0}, {Exponent(n), -1.0}}), Family::difference);
  const auto pairs = solve_scale_condition(ans[0]);
  return sign == GammaSign::positive ? pairs[0] : pairs[1];
}

FactorizationPair dto_pair(double A, int n) {
  const auto ans = split_nonlinearity(P({{Exponent(0), A}, {Exponent(n - 2), -1.0}}), Family::dto);
  return solve_scale_condition(ans[0])[0];
}

double h(int n) { return std::sqrt(n / 2.0 + 1.0); }

double flow_error(const PowerPoly& phi, const KinkProfile& k, const Grid1D& g) {
  double worst = 0.0;
  for (std::size_t i = 0; i < g.count; ++i) {
    const auto p = eval_kink(k, g.at(i));
    worst = std::max(worst, std::abs(p.du - phi.eval(p.u) * p.u));
  }
  return worst;
}

}  // namespace

TEST_CASE("solve_binomial_flow: rates", "[kinks]") {
  for (int n = 1; n <= 10; ++n) {
    const auto k = solve_binomial_flow(fisher_pair(n).phi1, GammaSign::positive, 0.0);
    CHECK_THAT(k.rate, WithinAbs(h(n) - 1.0 / h(n), 1e-13));
    CHECK(k.amplitude == 1.0);
    CHECK(k.inv_exponent == Exponent(2, n));
    CHECK_FALSE(k.canonicalized);
    CHECK(k.orientation == 1);
  }
  for (const double A : {2.0 / 9.0, 0.5, 3.0}) {
    for (int n : {4, 6, 8}) {
      const auto k = solve_binomial_flow(dto_pair(A, n).phi1, GammaSign::positive, 0.0);
      const double g = std::sqrt(n / 2.0);
      CHECK_THAT(k.rate, WithinAbs(std::sqrt(A) * (g - 1.0 / g), 1e-13));
      CHECK_THAT(k.amplitude, WithinRel(std::sqrt(A), 1e-14));
    }
  }
  // partner flow u' = f2 u of Fisher(n)
  for (int n = 1; n <= 10; ++n) {
    const auto k = solve_binomial_flow(fisher_pair(n).phi2, GammaSign::positive, 0.0);
    const double hn = h(n);
    CHECK_THAT(k.rate, WithinAbs(hn * hn * hn - hn, 1e-12));
  }
}

TEST_CASE("solve_binomial_flow: unsupported factors", "[kinks]") {
  CHECK_THROWS_AS(solve_binomial_flow(P({{Exponent(2), -1.0}}), GammaSign::positive, 0.0), UnsupportedError);
  CHECK_THROWS_AS(solve_binomial_flow(P({{Exponent(0), 1.0}, {Exponent(1), 1.0}, {Exponent(2), 1.0}}),
                                      GammaSign::positive, 0.0),
                  UnsupportedError);
  CHECK_THROWS_AS(solve_binomial_flow(P({{Exponent(1), 1.0}, {Exponent(2), 1.0}}), GammaSign::positive, 0.0),
                  UnsupportedError);
  CHECK_THROWS_AS(flow_fixed_interval(fisher_pair(1).phi2), UnsupportedError);
}

TEST_CASE("negative lambda", "[kinks]") {
  // n = 2: m = 1, the negative real root exists
  const auto odd = solve_binomial_flow(fisher_pair(2).phi2, GammaSign::positive, 0.0);
  CHECK(odd.orientation == -1);
  CHECK_FALSE(odd.canonicalized);
  CHECK(eval_kink(odd, 0.0).u == -0.5);
  CHECK(asymptotes(odd) == std::pair{-1.0, 0.0});
  const auto [lo, hi] = flow_fixed_interval(fisher_pair(2).phi2);
  CHECK(lo == -1.0);
  CHECK(hi == 0.0);
  CHECK(flow_error(fisher_pair(2).phi2, odd, natural_grid(odd)) < 1e-10);

  // n = 1: m = 1/2, no real negative branch
  const auto frac = solve_binomial_flow(fisher_pair(1).phi2, GammaSign::positive, 0.0);
  CHECK(frac.canonicalized);
  CHECK(frac.orientation == 1);
  CHECK_FALSE(frac.note.empty());
  CHECK(eval_kink(frac, 0.0).u > 0.0);
}

TEST_CASE("eval_kink: values and asymptotics", "[kinks]") {
  const auto f1 = solve_binomial_flow(fisher_pair(1).phi1, GammaSign::positive, 0.0);
  CHECK_THAT(eval_kink(f1, 0.0).u, WithinAbs(0.25, 1e-15));
  CHECK_THAT(eval_kink(f1, -60.0 / f1.rate).u, WithinAbs(1.0, 1e-15));
  CHECK_THAT(eval_kink(f1, 60.0 / f1.rate).u, WithinAbs(0.0, 1e-15));
  CHECK(asymptotes(f1) == std::pair{1.0, 0.0});
  CHECK(midpoint_value(f1) == 0.25);

  const auto mt = solve_binomial_flow(fisher_pair(6).phi1, GammaSign::positive, 1.5);
  CHECK_THAT(eval_kink(mt, 1.5).u, WithinAbs(std::pow(2.0, -1.0 / 3.0), 1e-15));
  CHECK_THAT(mt.rate, WithinAbs(1.5, 1e-14));

  // far tails stay finite
  for (const double xi : {-1e4, 1e4}) {
    const auto p = eval_kink(f1, xi);
    CHECK(std::isfinite(p.u));
    CHECK(std::isfinite(p.du));
    CHECK(std::isfinite(p.d2u));
  }
}

TEST_CASE("hyperbolic form agrees with the logistic form", "[kinks]") {
  const auto f1 = solve_binomial_flow(fisher_pair(1).phi1, GammaSign::positive, 0.3);
  const auto h1 = to_hyperbolic(f1);
  CHECK_THAT(h1.half_rate, WithinAbs((h(1) - 1.0 / h(1)) / 2.0, 1e-15));
  CHECK_THAT(h1.prefactor, WithinAbs(0.25, 1e-15));
  CHECK(h1.power == Exponent(2));
  CHECK(h1.kind == HyperbolicKind::tanh);
  CHECK(describe(h1).find("tanh") != std::string::npos);

  const auto dto = solve_binomial_flow(dto_pair(2.0 / 9.0, 4).phi1, GammaSign::positive, 0.0);
  CHECK_THAT(to_hyperbolic(dto).half_rate, WithinAbs(std::sqrt(2.0 / 9.0) * (std::sqrt(2.0) - 1.0 / std::sqrt(2.0)) / 2.0, 1e-15));
  const auto mt = solve_binomial_flow(fisher_pair(6).phi1, GammaSign::positive, 0.0);
  CHECK_THAT(to_hyperbolic(mt).half_rate, WithinAbs(0.75, 1e-14));
  const auto mtp = solve_binomial_flow(fisher_pair(6).phi2, GammaSign::positive, 0.0);
  CHECK_THAT(to_hyperbolic(mtp).half_rate, WithinAbs(3.0, 1e-13));

  for (const auto& k : {f1, dto, mt, mtp}) {
    const auto hf = to_hyperbolic(k);
    for (int i = -200; i <= 200; ++i) {
      const double xi = k.shift + 2.0 * k.width() * i / 200.0;
      const double a = eval_kink(k, xi).u;
      CHECK_THAT(eval_hyperbolic(hf, xi), WithinRel(a, 1e-13));
    }
    for (int i = -100; i <= 100; ++i) {
      const double xi = k.shift + 10.0 * k.width() * i / 100.0;
      CHECK_THAT(eval_hyperbolic(hf, xi), WithinRel(eval_kink(k, xi).u, 1e-10));
    }
  }
}

TEST_CASE("analytic derivatives match finite differences", "[kinks]") {
  std::vector<KinkProfile> ks;
  for (int n : {1, 2, 3, 6}) {
    ks.push_back(solve_binomial_flow(fisher_pair(n).phi1, GammaSign::positive, 0.0));
    ks.push_back(solve_binomial_flow(fisher_pair(n).phi2, GammaSign::positive, 0.0));
  }
  ks.push_back(solve_binomial_flow(fisher_pair(1).phi1, GammaSign::positive, 0.0, KinkBranch::minus));
  for (const auto& k : ks) {
    const double d = 1e-4 * k.width();
    for (int i = -40; i <= 40; ++i) {
      if (i == 0 && k.branch == KinkBranch::minus) continue;
      const double xi = k.shift + 0.25 * k.width() * i + 0.01 * k.width();
      if (k.branch == KinkBranch::minus && std::abs(xi - k.shift) < 0.5 * k.width()) continue;
      if (k.branch == KinkBranch::minus && xi > k.shift && !k.inv_exponent.is_integer()) continue;
      const auto p = eval_kink(k, xi);
      const auto m = eval_kink(k, xi - d), q = eval_kink(k, xi + d);
      const double scale = std::max(1.0, std::abs(p.u)) * std::max(1.0, k.rate * k.rate);
      CHECK(std::abs((q.u - m.u) / (2 * d) - p.du) < 1e-6 * scale);
      CHECK(std::abs((q.du - m.du) / (2 * d) - p.d2u) < 1e-6 * scale);
    }
  }
}

TEST_CASE("minus branch", "[kinks]") {
  const auto phi = fisher_pair(2).phi1;  // m = 1, integer power
  const auto k = solve_binomial_flow(phi, GammaSign::positive, 0.0, KinkBranch::minus);
  CHECK_THROWS_AS(eval_kink(k, 0.0), DomainError);
  CHECK(eval_kink(k, -1.0).u > 1.0);
  CHECK(eval_kink(k, 1.0).u < 0.0);
  const Grid1D left{-10.0, -0.5, 200}, right{0.5, 10.0, 200};
  CHECK(flow_error(phi, k, left) < 1e-10);
  CHECK(flow_error(phi, k, right) < 1e-10);
  CHECK(to_hyperbolic(k).kind == HyperbolicKind::coth);
  CHECK_THAT(eval_hyperbolic(to_hyperbolic(k), -1.0), WithinRel(eval_kink(k, -1.0).u, 1e-13));

  // n = 3: power 2/3
  const auto frac = solve_binomial_flow(fisher_pair(3).phi1, GammaSign::positive, 0.0, KinkBranch::minus);
  CHECK_NOTHROW(eval_kink(frac, -1.0));
  CHECK_THROWS_AS(eval_kink(frac, 1.0), DomainError);
}

TEST_CASE("kinks solve their compatible flow", "[kinks][property]") {
  std::vector<std::pair<PowerPoly, KinkProfile>> cases;
  for (int n = 1; n <= 10; ++n) {
    for (const auto s : {GammaSign::positive, GammaSign::negative}) {
      const auto p = fisher_pair(n, s);
      cases.push_back({p.phi1, solve_binomial_flow(p.phi1, s, 0.7)});
    }
  }
  for (const double A : {2.0 / 9.0, 1.0, 2.0})
    for (int n : {4, 6}) cases.push_back({dto_pair(A, n).phi1, solve_binomial_flow(dto_pair(A, n).phi1, GammaSign::positive, -2.0)});
  for (const auto& [phi, k] : cases) CHECK(flow_error(phi, k, natural_grid(k)) < 1e-10);
}

TEST_CASE("mirror", "[kinks][property]") {
  for (int n = 1; n <= 10; ++n) {
    const auto up = fisher_pair(n, GammaSign::positive);
    const auto down = fisher_pair(n, GammaSign::negative);
    const auto k = solve_binomial_flow(up.phi1, GammaSign::positive, 0.4);
    const auto m = mirror(k);
    CHECK(m.gamma_sign == GammaSign::negative);
    const auto direct = solve_binomial_flow(down.phi1, GammaSign::negative, 0.4);
    CHECK_THAT(m.rate, WithinAbs(direct.rate, 1e-14));
    for (const double d : {-3.0, -0.5, 0.0, 1.0, 4.0}) CHECK_THAT(eval_kink(m, 0.4 + d).u, WithinRel(eval_kink(k, 0.4 - d).u, 1e-13));
    CHECK(residual_max(expand_grouping(down), m, natural_grid(m)).max_abs_residual < 1e-9);
    CHECK(residual_max(expand_grouping(up), k, natural_grid(k)).max_abs_residual < 1e-9);
  }
}

TEST_CASE("partner rate ratios", "[kinks]") {
  const auto ratio = [](const FactorizationPair& p) {
    return solve_binomial_flow(p.phi2, GammaSign::positive, 0.0).rate /
           solve_binomial_flow(p.phi1, GammaSign::positive, 0.0).rate;
  };
  CHECK_THAT(ratio(fisher_pair(1)), WithinAbs(1.5, 1e-12));
  CHECK_THAT(ratio(fisher_pair(6)), WithinAbs(4.0, 1e-12));
  for (int n = 1; n <= 10; ++n) CHECK_THAT(ratio(fisher_pair(n)), WithinAbs(n / 2.0 + 1.0, 1e-12));
  CHECK_THAT(ratio(dto_pair(2.0 / 9.0, 4)), WithinAbs(2.0, 1e-12));
  // DTO: g^2 = n / 2
  for (int n : {4, 6, 8}) CHECK_THAT(ratio(dto_pair(0.7, n)), WithinAbs(n / 2.0, 1e-12));
}

TEST_CASE("sample_kink", "[kinks]") {
  const auto k = solve_binomial_flow(fisher_pair(1).phi1, GammaSign::positive, 0.0);
  const auto s = sample_kink(k, -5.0, 5.0, 11);
  REQUIRE(s.size() == 11);
  CHECK(s.front().xi == -5.0);
  CHECK(s.back().xi == 5.0);
  CHECK(s[5].xi == 0.0);
  CHECK(s[5].p.u == eval_kink(k, 0.0).u);
  CHECK_THROWS_AS(sample_kink(k, 0.0, 1.0, 1), DomainError);
}
