// kinkfact command-line front end.
//
//   kinkfact factor   --preset mt6
//   kinkfact factor   --poly "1 - u^6" --family difference
//   kinkfact kink     --preset "fisher(1)" --out out/ --points 401
//   kinkfact partner  --preset "dto(2/9,4)" --reversal-n 3
//   kinkfact verify   --preset "fhn(3,2)" --branch negative
//   kinkfact simulate --scenario scenarios/mt6.json --T 5
//   kinkfact figures  --preset mt6 --out figures/

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kinkfact/kinkfact.hpp"

namespace fs = std::filesystem;
using namespace kinkfact;
using nlohmann::json;

namespace {

struct Flags {
  std::optional<std::string> scenario;
  std::optional<std::string> preset;
  std::optional<double> xi0;
  std::optional<std::string> branch;
  std::optional<std::string> out;
  bool json = false;

  std::optional<std::string> poly;
  std::optional<std::string> family;
  std::optional<std::size_t> points;
  std::optional<std::int64_t> reversal_n;
  bool simulate = false;
  std::optional<double> dt, T, x_min, x_max, dx;
  std::optional<std::size_t> snapshot_every;
};

/// Effective settings: defaults, then the scenario file, then flags.
struct Settings {
  std::string preset;
  double xi0 = 0.0;
  GammaSign sign = GammaSign::positive;
  std::string out;
  bool json = false;
  std::size_t points = 201;
  bool simulate = false;
  RunOptions run;
};

GammaSign parse_sign(const std::string& s) {
  if (s == "positive" || s == "+" || s == "upper") return GammaSign::positive;
  if (s == "negative" || s == "-" || s == "lower") return GammaSign::negative;
  throw DomainError("--branch must be positive or negative, got " + s);
}

Settings resolve(const Flags& f) {
  Settings s;
  json sc = json::object();
  if (f.scenario) {
    std::ifstream in(*f.scenario);
    if (!in) throw IoError("cannot read scenario " + *f.scenario);
    try {
      sc = json::parse(in);
    } catch (const json::exception& e) {
      throw DomainError("scenario " + *f.scenario + ": " + e.what());
    }
    if (!sc.is_object()) throw DomainError("scenario must be a JSON object");
  }
  const auto pick = [&](const auto& flag, const char* key, auto& dst) {
    using T = std::decay_t<decltype(dst)>;
    if (flag)
      dst = static_cast<T>(*flag);
    else if (sc.contains(key))
      dst = sc.at(key).template get<T>();
  };
  pick(f.preset, "preset", s.preset);
  pick(f.xi0, "xi0", s.xi0);
  pick(f.out, "out", s.out);
  pick(f.points, "points", s.points);
  pick(f.dt, "dt", s.run.dt);
  pick(f.T, "T", s.run.T);
  pick(f.x_min, "x_min", s.run.grid.x_min);
  pick(f.x_max, "x_max", s.run.grid.x_max);
  pick(f.dx, "dx", s.run.grid.dx);
  pick(f.snapshot_every, "snapshot_every", s.run.sim.snapshot_every);
  std::string branch = "positive";
  pick(f.branch, "branch", branch);
  s.sign = parse_sign(branch);
  s.json = f.json || sc.value("json", false);
  s.simulate = f.simulate || sc.value("simulate", false);
  if (s.preset.empty()) throw DomainError("no preset given (use --preset or a scenario file)");
  s.run.xi0 = s.xi0;
  s.run.sign = s.sign;
  return s;
}

fs::path out_path(const Settings& s, const std::string& name) { return fs::path(s.out) / name; }

void write_file(const fs::path& p, const std::function<void(std::ostream&)>& body) {
  auto os = io::open_out(p);
  body(os);
  io::finish(os, p);
  std::cerr << "wrote " << p.string() << "\n";
}

void print_pairs(const std::vector<FactorizationPair>& pairs) {
  for (const auto& p : pairs) {
    std::cout << "pair [" << to_string(p.branch) << "]  a = " << detail::format_double(p.scale_a)
              << "  gamma = " << detail::format_double(p.gamma) << "\n";
    std::cout << "  phi1 = " << p.phi1 << "\n  phi2 = " << p.phi2 << "\n";
    const auto b = berkovich_convert(p);
    std::cout << "  f1b  = " << b.f1b << "\n  f2b  = " << b.f2b << "\n";
  }
}

int cmd_factor(const Flags& f) {
  if (f.poly) {
    const auto fam = f.family.value_or("difference");
    Family family;
    if (fam == "difference" || fam == "fisher")
      family = Family::difference;
    else if (fam == "dto")
      family = Family::dto;
    else if (fam == "quadratic" || fam == "fhn")
      family = Family::quadratic;
    else
      throw DomainError("unknown family " + fam);
    const auto f_over_u = PowerPoly::parse(*f.poly);
    json j = json::array();
    std::vector<FactorizationPair> all;
    for (const auto& an : split_nonlinearity(f_over_u, family)) {
      for (const auto& p : solve_scale_condition(an)) {
        all.push_back(p);
        auto pj = to_json(p);
        pj["F"] = expand_grouping(p).F.to_string();
        j.push_back(pj);
      }
    }
    if (f.json) {
      std::cout << json{{"F_over_u", f_over_u.to_string()}, {"pairs", j}}.dump(2) << "\n";
    } else {
      std::cout << "F(u)/u = " << f_over_u << "\n";
      print_pairs(all);
    }
    return 0;
  }
  const auto s = resolve(f);
  const auto r = run_preset(parse_preset(s.preset), s.run);
  if (s.json) {
    json j = to_json(r);
    std::cout << json{{"preset", j["preset"]}, {"family", j["family"]}, {"F_over_u", j["F_over_u"]},
                      {"gamma", j["gamma"]},   {"F", j["F"]},           {"pairs", j["pairs"]},
                      {"f1b", j["f1b"]},       {"f2b", j["f2b"]}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "preset " << r.preset.id() << "\nF(u)/u = " << r.model.f_over_u << "\n";
    print_pairs(r.pairs);
    std::cout << "selected gamma = " << detail::format_double(r.pair.gamma) << "\nF(u) = " << r.ode.F << "\n";
  }
  return 0;
}

void print_kink(const std::string& label, const KinkCheck& c) {
  const auto& k = c.profile;
  std::cout << label << ": u = " << (k.orientation < 0 ? "-" : "") << "(" << detail::format_double(k.amplitude)
            << " / (1 " << (k.branch == KinkBranch::plus ? "+" : "-") << " exp(" << detail::format_double(k.rate)
            << " (xi - " << detail::format_double(k.shift) << "))))^{" << k.inv_exponent.to_string() << "}\n";
  std::cout << "  hyperbolic: " << describe(c.hyperbolic) << "\n";
  std::cout << "  width: " << detail::format_double(k.width()) << "\n";
  if (c.residual)
    std::cout << "  residual max: " << detail::format_double(c.residual->max_abs_residual) << " at xi = "
              << detail::format_double(c.residual->argmax_xi) << "\n";
  else
    std::cout << "  residual: n/a\n";
  if (!k.note.empty()) std::cout << "  note: " << k.note << "\n";
}

int cmd_kink(const Flags& f) {
  const auto s = resolve(f);
  const auto r = run_preset(parse_preset(s.preset), s.run);
  if (s.json)
    std::cout << json{{"preset", r.preset.id()}, {"gamma", r.pair.gamma}, {"kink", to_json(r.kink)}}.dump(2) << "\n";
  else
    print_kink("kink", r.kink);
  if (!s.out.empty()) {
    const auto& k = r.kink.profile;
    const auto g = natural_grid(k, 10.0, s.points);
    write_file(out_path(s, r.preset.slug() + "_kink.csv"),
               [&](std::ostream& os) { io::write_kink_csv(os, sample_kink(k, g.lo, g.hi, s.points)); });
  }
  return r.kink.residual && r.kink.residual->max_abs_residual < kResidualThreshold ? 0 : 1;
}

int cmd_partner(const Flags& f) {
  if (f.reversal_n && !f.preset && !f.scenario) {
    const auto rep = second_reversal_check(*f.reversal_n);
    if (f.json)
      std::cout << to_json(rep).dump(2) << "\n";
    else
      std::cout << "second reversal n = " << rep.n << ": " << to_string(rep.status) << " (" << rep.detail << ")\n";
    return 0;
  }
  const auto s = resolve(f);
  const auto r = run_preset(parse_preset(s.preset), s.run);
  std::optional<ReversalReport> rev = r.reversal;
  if (f.reversal_n) rev = second_reversal_check(*f.reversal_n);
  if (s.json) {
    json j{{"preset", r.preset.id()},
           {"gamma", r.partner.partner.gamma},
           {"partner_F", r.partner.partner.F.to_string()},
           {"partner_F_over_u", r.partner.partner.F.divided_by_power(Exponent(1)).to_string()},
           {"compatible_phi", r.partner.compatible_phi.to_string()},
           {"partner_kink", to_json(r.partner_kink)},
           {"rate_ratio", r.rate_ratio}};
    if (rev) j["second_reversal"] = to_json(*rev);
    std::cout << j.dump(2) << "\n";
  } else {
    const double g = r.partner.partner.gamma;
    std::cout << "partner: u'' " << (g < 0.0 ? "- " : "+ ") << detail::format_double(std::abs(g)) << " u' + ("
              << r.partner.partner.F << ") = 0\n";
    std::cout << "compatible flow: u' = (" << r.partner.compatible_phi << ") u\n";
    print_kink("partner kink", r.partner_kink);
    std::cout << "rate ratio: " << detail::format_double(r.rate_ratio) << "\n";
    if (rev) std::cout << "second reversal n = " << rev->n << ": " << to_string(rev->status) << " (" << rev->detail << ")\n";
  }
  if (!s.out.empty() && !r.partner_kink.profile.canonicalized) {
    const auto& k = r.partner_kink.profile;
    const auto g = natural_grid(k, 10.0, s.points);
    write_file(out_path(s, r.preset.slug() + "_partner_kink.csv"),
               [&](std::ostream& os) { io::write_kink_csv(os, sample_kink(k, g.lo, g.hi, s.points)); });
  }
  return !r.partner_kink.residual || r.partner_kink.residual->max_abs_residual < kResidualThreshold ? 0 : 1;
}

void write_sim_files(const Settings& s, const PresetReport& r) {
  if (s.out.empty()) return;
  const auto dump = [&](const std::string& tag, const FrontSimResult& sim) {
    write_file(out_path(s, r.preset.slug() + "_" + tag + "_front.csv"),
               [&](std::ostream& os) { io::write_front_csv(os, sim); });
    if (!sim.snapshots.empty())
      write_file(out_path(s, r.preset.slug() + "_" + tag + "_snapshots.csv"),
                 [&](std::ostream& os) { io::write_snapshots_csv(os, sim); });
  };
  if (r.sim_original) dump("original", *r.sim_original);
  if (r.sim_partner) dump("partner", *r.sim_partner);
}

int cmd_verify(const Flags& f, bool simulate_always) {
  auto s = resolve(f);
  s.run.simulate = simulate_always || s.simulate;
  const auto r = run_preset(parse_preset(s.preset), s.run);
  if (simulate_always) {
    write_sim_files(s, r);
    if (s.json)
      std::cout << to_json(r).dump(2) << "\n";
    std::cout << summary_line(r) << "\n";
  } else if (s.json) {
    std::cout << to_json(r).dump(2) << "\n";
  } else {
    std::cout << to_text(r);
  }
  if (!s.out.empty() && !simulate_always) {
    write_file(out_path(s, r.preset.slug() + "_report.json"), [&](std::ostream& os) { os << to_json(r).dump(2) << "\n"; });
    write_sim_files(s, r);
  }
  return r.passed() ? 0 : 1;
}

int cmd_figures(const Flags& f) {
  auto s = resolve(f);
  if (s.out.empty()) s.out = ".";
  const auto files = emit_figures(parse_preset(s.preset), s.out, s.xi0, s.sign);
  if (s.json)
    std::cout << json{{"csv", files.csv.string()}, {"svg", files.svg.string()}}.dump() << "\n";
  else
    std::cout << files.csv.string() << "\n" << files.svg.string() << "\n";
  return 0;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--scenario", f.scenario, "JSON scenario file; flags override its fields");
  sub->add_option("--preset", f.preset, "fisher(n), mt6, dto(A,n), fhn(a,1|2), newell_whitehead");
  sub->add_option("--xi0", f.xi0, "kink centre (default 0)");
  sub->add_option("--branch", f.branch, "gamma sign: positive (default) or negative");
  sub->add_option("--out", f.out, "output directory");
  sub->add_flag("--json", f.json, "machine-readable output");
}

void add_sim(CLI::App* sub, Flags& f) {
  sub->add_option("--dt", f.dt, "time step (default 1e-3)");
  sub->add_option("--T", f.T, "final time (default 5)");
  sub->add_option("--x-min", f.x_min, "left end of the domain (default -40)");
  sub->add_option("--x-max", f.x_max, "right end of the domain (default 40)");
  sub->add_option("--dx", f.dx, "grid spacing (default 0.05)");
  sub->add_option("--snapshot-every", f.snapshot_every, "store a profile every k samples (0 = none)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factorization, kinks and SUSY partners of u'' + gamma u' + F(u) = 0"};
  app.require_subcommand(1);
  Flags f;

  auto* factor = app.add_subcommand("factor", "factorization pairs and gamma");
  add_common(factor, f);
  factor->add_option("--poly", f.poly, "factor an explicit F(u)/u instead of a preset");
  factor->add_option("--family", f.family, "difference | dto | quadratic (with --poly)");

  auto* kink = app.add_subcommand("kink", "closed-form kink and its residual");
  add_common(kink, f);
  kink->add_option("--points", f.points, "CSV sample count (default 201)");

  auto* partner = app.add_subcommand("partner", "SUSY partner equation and kink");
  add_common(partner, f);
  partner->add_option("--points", f.points, "CSV sample count (default 201)");
  partner->add_option("--reversal-n", f.reversal_n, "run the second-reversal check for this n");

  auto* verify = app.add_subcommand("verify", "full pipeline; exit 0 iff every check passes");
  add_common(verify, f);
  add_sim(verify, f);
  verify->add_flag("--simulate", f.simulate, "also measure PDE front speeds");

  auto* simulate = app.add_subcommand("simulate", "PDE front-speed measurement");
  add_common(simulate, f);
  add_sim(simulate, f);

  auto* figures = app.add_subcommand("figures", "CSV and SVG of original and partner kinks");
  add_common(figures, f);

  CLI11_PARSE(app, argc, argv);

  try {
    if (factor->parsed()) return cmd_factor(f);
    if (kink->parsed()) return cmd_kink(f);
    if (partner->parsed()) return cmd_partner(f);
    if (verify->parsed()) return cmd_verify(f, false);
    if (simulate->parsed()) return cmd_verify(f, true);
    if (figures->parsed()) return cmd_figures(f);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
