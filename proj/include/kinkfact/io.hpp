#pragma once

// CSV output: comma separated, header row, 17 significant digits.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "kinkfact/errors.hpp"
#include "kinkfact/kinks.hpp"
#include "kinkfact/verify.hpp"

namespace kinkfact::io {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void write_row(std::ostream& os, std::initializer_list<double> values) {
  bool first = true;
  for (const double v : values) {
    if (!first) os << ',';
    os << fmt17(v);
    first = false;
  }
  os << '\n';
}

/// Opens `path` for writing, creating parent directories.
inline std::ofstream open_out(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

inline void finish(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError("write failed for " + path.string());
}

/// Columns xi,u,du,d2u.
inline void write_kink_csv(std::ostream& os, const std::vector<KinkSample>& samples) {
  os << "xi,u,du,d2u\n";
  for (const auto& s : samples) write_row(os, {s.xi, s.p.u, s.p.du, s.p.d2u});
}

/// Columns t,x,u for every stored snapshot.
inline void write_snapshots_csv(std::ostream& os, const FrontSimResult& r) {
  os << "t,x,u\n";
  for (const auto& snap : r.snapshots)
    for (std::size_t i = 0; i < snap.u.size(); ++i) write_row(os, {snap.t, r.grid.at(i), snap.u[i]});
}

/// Columns t,front_position.
inline void write_front_csv(std::ostream& os, const FrontSimResult& r) {
  os << "t,front_position\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) write_row(os, {r.times[i], r.front_positions[i]});
}

/// Columns xi,u for a trajectory (and du when present).
inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << (tr.du.empty() ? "xi,u\n" : "xi,u,du\n");
  for (std::size_t i = 0; i < tr.xi.size(); ++i) {
    if (tr.du.empty())
      write_row(os, {tr.xi[i], tr.u[i]});
    else
      write_row(os, {tr.xi[i], tr.u[i], tr.du[i]});
  }
}

}  // namespace kinkfact::io
