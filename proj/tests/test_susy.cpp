#include <catch_amalgamated.hpp>

#include <cmath>

#include "kinkfact/presets.hpp"
#include "kinkfact/susy.hpp"
#include "kinkfact/verify.hpp"

using namespace kinkfact;
using Catch::Matchers::WithinAbs;

namespace {

PowerPoly P(std::initializer_list<Term> t) { return PowerPoly::canonicalize(t); }

FactorizationPair pair_for(const Preset& p, GammaSign sign = GammaSign::positive) {
  const auto m = build_model(p);
  return select_branch(solve_scale_condition(m.ansatzes[m.chosen]), sign);
}

std::vector<Preset> all_presets() {
  std::vector<Preset> out;
  for (int n = 1; n <= 10; ++n) out.push_back(Preset::fisher(n));
  out.push_back(Preset::mt6());
  for (const double A : {2.0 / 9.0, 3.0 / 16.0, 0.5, 2.0})
    for (int n : {4, 6, 8}) out.push_back(Preset::dto(A, n));
  for (const double a : {-0.5, 0.25, 3.0})
    for (int b : {1, 2}) out.push_back(Preset::fhn(a, b));
  out.push_back(Preset::newell_whitehead());
  return out;
}

double max_residual(const OdeSpec& ode, const KinkProfile& k) {
  return residual_max(ode, k, natural_grid(k)).max_abs_residual;
}

}  // namespace

TEST_CASE("reverse_partner: published partner forms", "[susy]") {
  const auto f1 = reverse_partner(pair_for(Preset::fisher(1)));
  CHECK(approx_equal(f1.partner.F.divided_by_power(Exponent(1)),
                     P({{Exponent(0), 1.0}, {Exponent(1, 2), -1.25}, {Exponent(1), -2.25}})));
  CHECK(f1.partner.gamma == pair_for(Preset::fisher(1)).gamma);

  const auto mt = reverse_partner(pair_for(Preset::mt6()));
  CHECK(approx_equal(mt.partner.F, P({{Exponent(1), 1.0}, {Exponent(4), -15.0}, {Exponent(7), -16.0}})));
  CHECK_THAT(mt.partner.gamma, WithinAbs(2.5, 1e-12));

  for (int n = 1; n <= 10; ++n) {
    const double h4 = std::pow(n / 2.0 + 1.0, 2);
    const Exponent m(n, 2);
    const auto expected = P({{Exponent(0), 1.0}, {m, 1.0}}) * P({{Exponent(0), 1.0}, {m, -h4}});
    CHECK(approx_equal(reverse_partner(pair_for(Preset::fisher(n))).partner.F.divided_by_power(Exponent(1)), expected));
  }

  for (const double A : {2.0 / 9.0, 3.0 / 16.0, 1.0}) {
    for (int n : {4, 6, 8}) {
      const Exponent k(n - 2, 2);
      const double r = std::sqrt(A);
      const auto expected = P({{Exponent(0), r}, {k, 1.0}}) * P({{Exponent(0), r}, {k, -n * n / 4.0}});
      const auto got = reverse_partner(pair_for(Preset::dto(A, n))).partner.F.divided_by_power(Exponent(1));
      CHECK(approx_equal(got, expected));
    }
  }

  for (const double a : {-1.0, 0.25, 3.0}) {
    const auto lin = [](double c0, double c1) { return P({{Exponent(0), c0}, {Exponent(1), c1}}); };
    const auto b1 = reverse_partner(pair_for(Preset::fhn(a, 1))).partner.F.divided_by_power(Exponent(1));
    CHECK(approx_equal(b1, lin(-1.0, 4.0) * lin(a, -1.0)));
    const auto b2 = reverse_partner(pair_for(Preset::fhn(a, 2))).partner.F.divided_by_power(Exponent(1));
    CHECK(approx_equal(b2, lin(-1.0, 1.0) * lin(a, -4.0)));
  }
}

TEST_CASE("partner gamma is independent of the branch", "[susy]") {
  for (const auto& p : all_presets()) {
    for (const auto s : {GammaSign::positive, GammaSign::negative}) {
      const auto pair = pair_for(p, s);
      CHECK(reverse_partner(pair).partner.gamma == pair.gamma);
      CHECK(approx_equal(reverse_partner(pair).compatible_phi, pair.phi2));
    }
  }
}

TEST_CASE("two independent expansions of the reversed brackets agree", "[susy][property]") {
  for (const auto& p : all_presets()) {
    for (const auto s : {GammaSign::positive, GammaSign::negative}) {
      const auto pair = pair_for(p, s);
      CHECK(max_coeff_diff(reverse_partner(pair).partner.F, expand_reversed_brackets(pair)) < 1e-11);
    }
  }
}

TEST_CASE("real partner kinks solve the partner equation", "[susy][property]") {
  int checked = 0;
  for (const auto& p : all_presets()) {
    for (const auto s : {GammaSign::positive, GammaSign::negative}) {
      const auto r = reverse_partner(pair_for(p, s));
      const auto k = partner_kink(r, 0.25);
      if (k.canonicalized) continue;
      ++checked;
      INFO(p.id() << " " << to_string(s));
      CHECK(max_residual(r.partner, k) < 1e-9);
    }
  }
  CHECK(checked >= 30);
}

TEST_CASE("negative controls", "[susy]") {
  SECTION("original kink does not solve the partner equation") {
    const auto pair = pair_for(Preset::fisher(1));
    const auto r = reverse_partner(pair);
    const auto k = solve_binomial_flow(pair.phi1, GammaSign::positive, 0.0);
    CHECK(max_residual(r.partner, k) > 0.01);
    CHECK(max_residual(expand_grouping(pair), k) < 1e-9);
  }
  SECTION("fisher(1) partner: the positive profile lives on the -sqrt(u) sheet") {
    const auto pair = pair_for(Preset::fisher(1));
    const auto r = reverse_partner(pair);
    const auto k = partner_kink(r, 0.0);
    REQUIRE(k.canonicalized);
    // u(1 + (5/4) u^{1/2} - (9/4) u): the partner with sqrt(u) -> -sqrt(u)
    const OdeSpec sheet{r.partner.gamma, P({{Exponent(1), 1.0}, {Exponent(3, 2), 1.25}, {Exponent(2), -2.25}})};
    CHECK(max_residual(sheet, k) < 1e-9);
    CHECK(max_residual(r.partner, k) > 0.01);
  }
  SECTION("mt6: only the negative-root partner kink is a solution") {
    const auto r = reverse_partner(pair_for(Preset::mt6()));
    const auto k = partner_kink(r, 0.0);
    REQUIRE(k.orientation == -1);
    CHECK(max_residual(r.partner, k) < 1e-9);
    CHECK(max_residual(r.partner, magnitude_form(k)) > 0.01);
  }
  SECTION("fhn branch 2: derived partner versus the printed one") {
    const auto pair = pair_for(Preset::fhn(3.0, 2), GammaSign::negative);
    CHECK_THAT(pair.gamma, WithinAbs(-1.0 / std::sqrt(2.0), 1e-14));
    const auto r = reverse_partner(pair);
    const auto k = partner_kink(r, 0.0);
    CHECK_THAT(k.rate, WithinAbs(std::sqrt(2.0), 1e-14));
    CHECK(max_residual(r.partner, k) < 1e-9);
    // u(u - 1)(a - u - 3u^2)
    const auto printed = P({{Exponent(1), -1.0}, {Exponent(2), 1.0}}) * P({{Exponent(0), 3.0}, {Exponent(1), -1.0}, {Exponent(2), -3.0}});
    CHECK(max_residual({pair.gamma, printed}, k) > 1e-3);
  }
}

TEST_CASE("reverse_partner rejects inconsistent pairs", "[susy]") {
  auto pair = pair_for(Preset::fisher(2));
  pair.phi1 = pair.phi1 * 1.5;
  CHECK_THROWS_AS(reverse_partner(pair), InconsistencyError);
}

TEST_CASE("second_reversal_check", "[susy]") {
  for (int n = 1; n <= 10; ++n) {
    const auto r = second_reversal_check(n);
    CHECK(r.status == ReversalStatus::obstructed);
    CHECK(r.mismatch == n * n * (n + 4) / 8.0);
    const double h = std::sqrt(n / 2.0 + 1.0);
    CHECK_THAT(r.scale_required, WithinAbs(h * h * h, 1e-12));
    CHECK_THAT(r.gamma_required, WithinAbs(h * h * h + 1.0 / (h * h * h), 1e-12));
    CHECK_THAT(r.gamma_partner, WithinAbs(h + 1.0 / h, 1e-14));
    CHECK(r.gamma_required > r.gamma_partner);
  }
  const auto zero = second_reversal_check(0);
  CHECK(zero.status == ReversalStatus::solvable);
  CHECK(zero.linear);
  CHECK(zero.mismatch == 0.0);
  const auto mp = second_reversal_check(-4);
  CHECK(mp.status == ReversalStatus::solvable);
  CHECK(mp.milne_pinney);
  CHECK(mp.detail.find("Milne-Pinney") != std::string::npos);
  CHECK(second_reversal_check(-2).status == ReversalStatus::obstructed);
  CHECK(second_reversal_check(-1).status == ReversalStatus::obstructed);
  CHECK(second_reversal_check(-6).status == ReversalStatus::obstructed);
}
