#pragma once

// Original and partner kink profiles side by side: a CSV table and a small
// self-contained SVG line plot. Output bytes depend only on the inputs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "kinkfact/io.hpp"
#include "kinkfact/kinks.hpp"
#include "kinkfact/pipeline.hpp"
#include "kinkfact/presets.hpp"

namespace kinkfact {

struct FigureData {
  std::vector<double> xi;
  std::vector<double> u_original;
  std::vector<double> u_susy;
};

struct FigureFiles {
  std::filesystem::path csv;
  std::filesystem::path svg;
};

/// Both kinks over xi0 +- widths natural widths of the wider (original)
/// kink. The curves are the positive published forms of each profile.
inline FigureData figure_data(const KinkProfile& original, const KinkProfile& susy, std::size_t points = 1001,
                              double widths = 10.0) {
  const auto a = magnitude_form(original);
  const auto b = magnitude_form(susy);
  const double half = widths * std::max(a.width(), b.width());
  FigureData d;
  d.xi.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double xi = a.shift - half + 2.0 * half * static_cast<double>(i) / static_cast<double>(points - 1);
    d.xi.push_back(xi);
    d.u_original.push_back(eval_kink(a, xi).u);
    d.u_susy.push_back(eval_kink(b, xi).u);
  }
  return d;
}

inline void write_figure_csv(std::ostream& os, const FigureData& d) {
  os << "xi,u_original,u_susy\n";
  for (std::size_t i = 0; i < d.xi.size(); ++i) io::write_row(os, {d.xi[i], d.u_original[i], d.u_susy[i]});
}

namespace detail {

inline std::string svg_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

inline std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", std::abs(x) < 1e-12 ? 0.0 : x);
  return buf;
}

}  // namespace detail

/// 800x500 viewBox, one polyline per curve, axes with tick labels.
inline std::string render_svg(const FigureData& d, const std::string& title) {
  constexpr double W = 800, H = 500, left = 70, right = 30, top = 40, bottom = 60;
  const double x0 = d.xi.front(), x1 = d.xi.back();
  double y0 = 0.0, y1 = 0.0;
  for (std::size_t i = 0; i < d.xi.size(); ++i) {
    y0 = std::min({y0, d.u_original[i], d.u_susy[i]});
    y1 = std::max({y1, d.u_original[i], d.u_susy[i]});
  }
  if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
  const auto py = [&](double y) { return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" width=\"800\" height=\"500\">\n";
  os << "  <rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  os << "  <text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" << title
     << "</text>\n";
  os << "  <g stroke=\"black\" stroke-width=\"1\">\n";
  os << "    <line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
     << "\"/>\n";
  os << "    <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom << "\"/>\n";
  os << "  </g>\n";
  os << "  <g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    os << "    <line x1=\"" << detail::svg_num(px(xv)) << "\" y1=\"" << H - bottom << "\" x2=\""
       << detail::svg_num(px(xv)) << "\" y2=\"" << H - bottom + 5 << "\" stroke=\"black\"/>\n";
    os << "    <text x=\"" << detail::svg_num(px(xv)) << "\" y=\"" << H - bottom + 20 << "\" text-anchor=\"middle\">"
       << detail::tick_label(xv) << "</text>\n";
    os << "    <line x1=\"" << left - 5 << "\" y1=\"" << detail::svg_num(py(yv)) << "\" x2=\"" << left << "\" y2=\""
       << detail::svg_num(py(yv)) << "\" stroke=\"black\"/>\n";
    os << "    <text x=\"" << left - 8 << "\" y=\"" << detail::svg_num(py(yv) + 4) << "\" text-anchor=\"end\">"
       << detail::tick_label(yv) << "</text>\n";
  }
  os << "    <text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">xi</text>\n";
  os << "    <text x=\"20\" y=\"" << (top + H - bottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << (top + H - bottom) / 2 << ")\">u</text>\n";
  os << "  </g>\n";
  const auto polyline = [&](const std::vector<double>& ys, const char* colour, const char* name) {
    os << "  <polyline id=\"" << name << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < ys.size(); ++i) {
      if (i) os << ' ';
      os << detail::svg_num(px(d.xi[i])) << ',' << detail::svg_num(py(ys[i]));
    }
    os << "\"/>\n";
  };
  polyline(d.u_original, "#1f77b4", "u_original");
  polyline(d.u_susy, "#d62728", "u_susy");
  os << "  <g font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "    <line x1=\"" << W - 190 << "\" y1=\"" << top + 10 << "\" x2=\"" << W - 160 << "\" y2=\"" << top + 10
     << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  os << "    <text x=\"" << W - 152 << "\" y=\"" << top + 14 << "\">original kink</text>\n";
  os << "    <line x1=\"" << W - 190 << "\" y1=\"" << top + 30 << "\" x2=\"" << W - 160 << "\" y2=\"" << top + 30
     << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  os << "    <text x=\"" << W - 152 << "\" y=\"" << top + 34 << "\">susy kink</text>\n";
  os << "  </g>\n";
  os << "</svg>\n";
  return os.str();
}

/// Writes <slug>_kinks.csv and <slug>_kinks.svg into out_dir.
inline FigureFiles emit_figures(const Preset& preset, const std::filesystem::path& out_dir, double xi0 = 0.0,
                                GammaSign sign = GammaSign::positive) {
  RunOptions opt;
  opt.xi0 = xi0;
  opt.sign = sign;
  const auto report = run_preset(preset, opt);
  const auto data = figure_data(report.kink.profile, report.partner_kink.profile);

  FigureFiles files{out_dir / (preset.slug() + "_kinks.csv"), out_dir / (preset.slug() + "_kinks.svg")};
  {
    auto os = io::open_out(files.csv);
    write_figure_csv(os, data);
    io::finish(os, files.csv);
  }
  {
    auto os = io::open_out(files.svg);
    os << render_svg(data, preset.id() + ": original and susy kinks");
    io::finish(os, files.svg);
  }
  return files;
}

}  // namespace kinkfact
