#pragma once

// End-to-end run for a preset: factor -> kink -> partner -> verify -> simulate.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kinkfact/factorizer.hpp"
#include "kinkfact/kinks.hpp"
#include "kinkfact/presets.hpp"
#include "kinkfact/susy.hpp"
#include "kinkfact/verify.hpp"

namespace kinkfact {

inline constexpr double kResidualThreshold = 1e-9;
/// Allowed relative deviation of a measured front speed from |gamma|.
inline constexpr double kSpeedTolerance = 0.02;

struct RunOptions {
  double xi0 = 0.0;
  GammaSign sign = GammaSign::positive;
  bool simulate = false;
  SpaceGrid grid{};
  double dt = 1e-3;
  double T = 5.0;
  FrontSimOptions sim{};
};

struct KinkCheck {
  KinkProfile profile;
  HyperbolicForm hyperbolic;
  /// Empty when the profile is canonicalized and solves nothing exactly.
  std::optional<ResidualReport> residual;
  std::optional<double> flow_residual;  ///< max |u' - phi(u) u|
};

struct PresetReport {
  Preset preset;
  PresetModel model;
  std::vector<FactorizationPair> pairs;
  FactorizationPair pair;
  OdeSpec ode;
  BerkovichPair berkovich;
  KinkCheck kink;
  PartnerResult partner;
  KinkCheck partner_kink;
  double rate_ratio = 0.0;
  std::optional<ReversalReport> reversal;
  std::optional<FrontSimResult> sim_original;
  std::optional<FrontSimResult> sim_partner;
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  bool passed() const { return failures.empty(); }
};

/// max |u' - phi(u) u| over the grid.
inline double flow_residual_max(const PowerPoly& phi, const KinkProfile& k, const Grid1D& g) {
  double worst = 0.0;
  for (std::size_t i = 0; i < g.count; ++i) {
    const auto p = eval_kink(k, g.at(i));
    worst = std::max(worst, std::abs(p.du - phi.eval(p.u) * p.u));
  }
  return worst;
}

inline KinkCheck check_kink(const OdeSpec& ode, const PowerPoly& phi, const KinkProfile& k) {
  KinkCheck c;
  c.profile = k;
  c.hyperbolic = to_hyperbolic(k);
  if (!k.canonicalized) {
    const Grid1D g = natural_grid(k);
    c.residual = residual_max(ode, k, g);
    c.flow_residual = flow_residual_max(phi, k, g);
  }
  return c;
}

inline PresetReport run_preset(const Preset& preset, const RunOptions& opt = {}) {
  PresetReport r;
  r.preset = preset;
  r.model = build_model(preset);
  r.pairs = solve_scale_condition(r.model.ansatzes.at(r.model.chosen));
  r.pair = select_branch(r.pairs, opt.sign);
  r.ode = expand_grouping(r.pair);
  r.berkovich = berkovich_convert(r.pair);

  const auto gsign = sign_of(r.pair.gamma);
  r.kink = check_kink(r.ode, r.pair.phi1, solve_binomial_flow(r.pair.phi1, gsign, opt.xi0));
  r.partner = reverse_partner(r.pair);
  r.partner_kink = check_kink(r.partner.partner, r.partner.compatible_phi, partner_kink(r.partner, opt.xi0));
  r.rate_ratio = r.partner_kink.profile.rate / r.kink.profile.rate;
  if (preset.is_fisher_family()) r.reversal = second_reversal_check(preset.n);

  const auto check = [&](const std::string& what, const KinkCheck& c) {
    if (!c.residual) {
      r.notes.push_back(what + ": " + c.profile.note);
      return;
    }
    if (!(c.residual->max_abs_residual < kResidualThreshold))
      r.failures.push_back(what + " residual " + detail::format_double(c.residual->max_abs_residual));
  };
  check("kink", r.kink);
  check("partner kink", r.partner_kink);
  if (r.kink.profile.canonicalized) r.failures.push_back("original kink has no real profile");

  if (opt.simulate) {
    const auto run = [&](const std::string& what, const OdeSpec& ode, const KinkProfile& k) {
      auto sim = simulate_front(ode.F, k, opt.grid, opt.dt, opt.T, opt.sim);
      const double rel = std::abs(sim.fitted_speed - ode.gamma) / std::abs(ode.gamma);
      if (!(rel <= kSpeedTolerance))
        r.failures.push_back(what + " front speed " + detail::format_double(sim.fitted_speed) + " vs gamma " +
                             detail::format_double(ode.gamma));
      return sim;
    };
    r.sim_original = run("original", r.ode, r.kink.profile);
    if (!r.partner_kink.profile.canonicalized)
      r.sim_partner = run("partner", r.partner.partner, r.partner_kink.profile);
    else
      r.notes.push_back("partner front not simulated: no real partner kink");
  }
  return r;
}

// JSON -----------------------------------------------------------------------

inline nlohmann::json to_json(const PowerPoly& p) { return p.to_string(); }

inline nlohmann::json to_json(const FactorizationPair& p) {
  return {{"phi1", p.phi1.to_string()},
          {"phi2", p.phi2.to_string()},
          {"scale_a", p.scale_a},
          {"gamma", p.gamma},
          {"branch", to_string(p.branch)}};
}

inline nlohmann::json to_json(const ResidualReport& r) {
  return {{"max_abs_residual", r.max_abs_residual},
          {"argmax_xi", r.argmax_xi},
          {"xi_min", r.grid.lo},
          {"xi_max", r.grid.hi},
          {"count", r.grid.count}};
}

inline nlohmann::json to_json(const KinkProfile& k) {
  nlohmann::json j = {{"amplitude", k.amplitude},
                      {"rate", k.rate},
                      {"inv_exponent", k.inv_exponent.to_string()},
                      {"shift", k.shift},
                      {"branch", to_string(k.branch)},
                      {"gamma_sign", to_string(k.gamma_sign)},
                      {"orientation", k.orientation},
                      {"canonicalized", k.canonicalized}};
  if (!k.note.empty()) j["note"] = k.note;
  return j;
}

inline nlohmann::json to_json(const HyperbolicForm& h) {
  return {{"prefactor", h.prefactor},
          {"kind", h.kind == HyperbolicKind::tanh ? "tanh" : "coth"},
          {"half_rate", h.half_rate},
          {"power", h.power.to_string()},
          {"text", describe(h)}};
}

inline nlohmann::json to_json(const KinkCheck& c) {
  nlohmann::json j = {{"profile", to_json(c.profile)}, {"hyperbolic", to_json(c.hyperbolic)}};
  j["residual"] = c.residual ? to_json(*c.residual) : nlohmann::json(nullptr);
  j["flow_residual"] = c.flow_residual ? nlohmann::json(*c.flow_residual) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const ReversalReport& r) {
  return {{"n", r.n},
          {"status", to_string(r.status)},
          {"mismatch", r.mismatch},
          {"linear", r.linear},
          {"milne_pinney", r.milne_pinney},
          {"scale_required", r.scale_required},
          {"gamma_required", r.gamma_required},
          {"gamma_partner", r.gamma_partner},
          {"detail", r.detail}};
}

inline nlohmann::json to_json(const FrontSimResult& s) {
  return {{"fitted_speed", s.fitted_speed}, {"fit_residual", s.fit_residual}, {"level", s.level},
          {"x_min", s.grid.x_min},          {"x_max", s.grid.x_max},          {"dx", s.grid.dx},
          {"dt", s.dt},                     {"samples", s.times.size()}};
}

inline nlohmann::json to_json(const PresetReport& r) {
  nlohmann::json j;
  j["preset"] = r.preset.id();
  j["family"] = to_string(r.model.family);
  j["F_over_u"] = r.model.f_over_u.to_string();
  j["gamma"] = r.pair.gamma;
  j["scale_a"] = r.pair.scale_a;
  j["phi1"] = r.pair.phi1.to_string();
  j["phi2"] = r.pair.phi2.to_string();
  j["F"] = r.ode.F.to_string();
  j["f1b"] = r.berkovich.f1b.to_string();
  j["f2b"] = r.berkovich.f2b.to_string();
  j["partner_F"] = r.partner.partner.F.to_string();
  j["partner_F_over_u"] = r.partner.partner.F.divided_by_power(Exponent(1)).to_string();
  j["kink_rate"] = r.kink.profile.rate;
  j["kink_half_rate"] = r.kink.hyperbolic.half_rate;
  j["partner_rate"] = r.partner_kink.profile.rate;
  j["partner_half_rate"] = r.partner_kink.hyperbolic.half_rate;
  j["rate_ratio"] = r.rate_ratio;
  j["passed"] = r.passed();
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : r.pairs) pairs.push_back(to_json(p));
  j["pairs"] = pairs;
  j["kink"] = to_json(r.kink);
  j["partner_kink"] = to_json(r.partner_kink);
  if (r.reversal) j["second_reversal"] = to_json(*r.reversal);
  if (r.sim_original) j["sim_original"] = to_json(*r.sim_original);
  if (r.sim_partner) j["sim_partner"] = to_json(*r.sim_partner);
  j["failures"] = r.failures;
  j["notes"] = r.notes;
  return j;
}

/// Single-line machine-readable summary record.
inline std::string summary_line(const PresetReport& r) {
  nlohmann::json j;
  j["preset"] = r.preset.id();
  j["gamma"] = r.pair.gamma;
  j["residual_max"] = r.kink.residual ? nlohmann::json(r.kink.residual->max_abs_residual) : nlohmann::json(nullptr);
  j["partner_residual_max"] =
      r.partner_kink.residual ? nlohmann::json(r.partner_kink.residual->max_abs_residual) : nlohmann::json(nullptr);
  j["fitted_speed"] = r.sim_original ? nlohmann::json(r.sim_original->fitted_speed) : nlohmann::json(nullptr);
  j["partner_fitted_speed"] = r.sim_partner ? nlohmann::json(r.sim_partner->fitted_speed) : nlohmann::json(nullptr);
  j["passed"] = r.passed();
  return j.dump();
}

inline std::string to_text(const PresetReport& r) {
  std::ostringstream os;
  const auto res = [](const KinkCheck& c) {
    return c.residual ? detail::format_double(c.residual->max_abs_residual) : std::string("n/a");
  };
  os << "preset        " << r.preset.id() << " (" << to_string(r.model.family) << ")\n";
  os << "F(u)/u        " << r.model.f_over_u << "\n";
  for (const auto& p : r.pairs)
    os << "pair          a = " << detail::format_double(p.scale_a) << ", gamma = " << detail::format_double(p.gamma)
       << "  [" << to_string(p.branch) << "]\n";
  os << "gamma         " << detail::format_double(r.pair.gamma) << "\n";
  os << "phi1          " << r.pair.phi1 << "\n";
  os << "phi2          " << r.pair.phi2 << "\n";
  os << "F(u)          " << r.ode.F << "\n";
  os << "kink          rate " << detail::format_double(r.kink.profile.rate) << ", power "
     << r.kink.profile.inv_exponent.to_string() << "\n";
  os << "  hyperbolic  " << describe(r.kink.hyperbolic) << "\n";
  os << "  residual    " << res(r.kink) << "\n";
  os << "partner F(u)  " << r.partner.partner.F << "\n";
  os << "partner kink  rate " << detail::format_double(r.partner_kink.profile.rate)
     << (r.partner_kink.profile.orientation < 0 ? ", negative branch" : "")
     << (r.partner_kink.profile.canonicalized ? ", canonicalized" : "") << "\n";
  os << "  hyperbolic  " << describe(r.partner_kink.hyperbolic) << "\n";
  os << "  residual    " << res(r.partner_kink) << "\n";
  os << "rate ratio    " << detail::format_double(r.rate_ratio) << "\n";
  if (r.reversal) os << "2nd reversal  " << to_string(r.reversal->status) << ": " << r.reversal->detail << "\n";
  if (r.sim_original) os << "front speed   " << detail::format_double(r.sim_original->fitted_speed) << " (original)\n";
  if (r.sim_partner) os << "front speed   " << detail::format_double(r.sim_partner->fitted_speed) << " (partner)\n";
  for (const auto& n : r.notes) os << "note          " << n << "\n";
  for (const auto& f : r.failures) os << "FAIL          " << f << "\n";
  os << (r.passed() ? "status        pass\n" : "status        FAIL\n");
  return os.str();
}

}  // namespace kinkfact
