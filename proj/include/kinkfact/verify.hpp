#pragma once

// Numerical checks independent of the algebra: closed-form residuals, RK4
// integration of the first- and second-order equations, and an explicit
// finite-difference solver for u_t = u_xx + F(u) that measures front speed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kinkfact/errors.hpp"
#include "kinkfact/factorizer.hpp"
#include "kinkfact/kinks.hpp"
#include "kinkfact/powerpoly.hpp"

namespace kinkfact {

struct Grid1D {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t count = 2;

  double at(std::size_t i) const {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
};

/// Grid of `count` points over xi0 +- widths / |rate|.
inline Grid1D natural_grid(const KinkProfile& k, double widths = 10.0, std::size_t count = 2001) {
  return {k.shift - widths * k.width(), k.shift + widths * k.width(), count};
}

struct ResidualReport {
  double max_abs_residual = 0.0;
  double argmax_xi = 0.0;
  Grid1D grid;
};

/// max |u'' + gamma u' + F(u)| over the grid, using the kink's analytic derivatives.
inline ResidualReport residual_max(const OdeSpec& ode, const KinkProfile& kink, const Grid1D& grid) {
  if (grid.count < 3) throw DomainError("residual grid needs at least three points");
  ResidualReport r;
  r.grid = grid;
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double xi = grid.at(i);
    const auto p = eval_kink(kink, xi);
    const double res = std::abs(ode.residual(p.u, p.du, p.d2u));
    if (!(res <= r.max_abs_residual)) {
      r.max_abs_residual = res;
      r.argmax_xi = xi;
    }
  }
  return r;
}

struct Trajectory {
  std::vector<double> xi;
  std::vector<double> u;
  std::vector<double> du;  ///< only filled by rk4_second_order
};

namespace detail {

inline std::size_t step_count(double xi_start, double xi_end, double step) {
  if (!(step > 0.0)) throw DomainError("integration step must be positive");
  const double span = std::abs(xi_end - xi_start);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(span / step)));
}

}  // namespace detail

/// Classical RK4 for u' = phi(u) u. The state must stay inside the fixed-point
/// interval of the flow (to 1e-6).
inline Trajectory rk4_flow(const PowerPoly& phi, double u0, double xi_start, double xi_end, double step) {
  const auto [lo, hi] = flow_fixed_interval(phi);
  constexpr double slack = 1e-6;
  const auto check = [&](double u, double xi) {
    if (u < lo - slack || u > hi + slack || !std::isfinite(u))
      throw InstabilityError("flow left [" + detail::format_double(lo) + ", " + detail::format_double(hi) +
                             "] at xi = " + detail::format_double(xi));
  };
  check(u0, xi_start);
  const std::size_t n = detail::step_count(xi_start, xi_end, step);
  const double h = (xi_end - xi_start) / static_cast<double>(n);
  const auto f = [&](double u) { return phi.eval(u) * u; };

  Trajectory tr;
  tr.xi.reserve(n + 1);
  tr.u.reserve(n + 1);
  double u = u0;
  tr.xi.push_back(xi_start);
  tr.u.push_back(u);
  for (std::size_t i = 1; i <= n; ++i) {
    const double k1 = f(u);
    const double k2 = f(u + 0.5 * h * k1);
    const double k3 = f(u + 0.5 * h * k2);
    const double k4 = f(u + h * k3);
    u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double xi = xi_start + h * static_cast<double>(i);
    check(u, xi);
    tr.xi.push_back(xi);
    tr.u.push_back(u);
  }
  return tr;
}

/// Classical RK4 for (u, v)' = (v, -gamma v - F(u)).
inline Trajectory rk4_second_order(const OdeSpec& ode, double u0, double v0, double xi_start, double xi_end,
                                   double step) {
  constexpr double blowup = 1e6;
  const std::size_t n = detail::step_count(xi_start, xi_end, step);
  const double h = (xi_end - xi_start) / static_cast<double>(n);
  const auto accel = [&](double u, double v) { return -ode.gamma * v - ode.F.eval(u); };

  Trajectory tr;
  tr.xi.reserve(n + 1);
  tr.u.reserve(n + 1);
  tr.du.reserve(n + 1);
  double u = u0;
  double v = v0;
  tr.xi.push_back(xi_start);
  tr.u.push_back(u);
  tr.du.push_back(v);
  for (std::size_t i = 1; i <= n; ++i) {
    const double ku1 = v;
    const double kv1 = accel(u, v);
    const double ku2 = v + 0.5 * h * kv1;
    const double kv2 = accel(u + 0.5 * h * ku1, v + 0.5 * h * kv1);
    const double ku3 = v + 0.5 * h * kv2;
    const double kv3 = accel(u + 0.5 * h * ku2, v + 0.5 * h * kv2);
    const double ku4 = v + h * kv3;
    const double kv4 = accel(u + h * ku3, v + h * kv3);
    u += h / 6.0 * (ku1 + 2.0 * ku2 + 2.0 * ku3 + ku4);
    v += h / 6.0 * (kv1 + 2.0 * kv2 + 2.0 * kv3 + kv4);
    const double xi = xi_start + h * static_cast<double>(i);
    if (!(std::abs(u) < blowup && std::abs(v) < blowup))
      throw InstabilityError("second-order trajectory blew up at xi = " + detail::format_double(xi));
    tr.xi.push_back(xi);
    tr.u.push_back(u);
    tr.du.push_back(v);
  }
  return tr;
}

struct SpaceGrid {
  double x_min = -40.0;
  double x_max = 40.0;
  double dx = 0.05;

  std::size_t points() const { return static_cast<std::size_t>(std::llround((x_max - x_min) / dx)) + 1; }
  double at(std::size_t i) const { return x_min + dx * static_cast<double>(i); }
};

struct FrontSnapshot {
  double t = 0.0;
  std::vector<double> u;
};

struct FrontSimResult {
  std::vector<double> times;
  std::vector<double> front_positions;
  double fitted_speed = 0.0;
  double fit_residual = 0.0;  ///< RMS deviation of the fitted positions
  double level = 0.0;         ///< tracked level u*
  SpaceGrid grid;
  double dt = 0.0;
  std::vector<FrontSnapshot> snapshots;
};

struct FrontSimOptions {
  double sample_interval = 0.05;
  /// Keep full profiles every this many samples (0 = none).
  std::size_t snapshot_every = 0;
};

/// Least-squares slope of y against x; also returns the RMS residual.
inline std::pair<double, double> least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) throw DomainError("line fit needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (my + slope * (x[i] - mx));
    ss += e * e;
  }
  return {slope, std::sqrt(ss / static_cast<double>(n))};
}

/// First crossing of `level` from the left, linearly interpolated.
inline std::optional<double> level_crossing(const std::vector<double>& u, const SpaceGrid& g, double level,
                                            std::size_t* cell = nullptr) {
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double a = u[i] - level;
    const double b = u[i + 1] - level;
    if (a == 0.0) {
      if (cell) *cell = i;
      return g.at(i);
    }
    if ((a < 0.0) != (b < 0.0)) {
      if (cell) *cell = i;
      return g.at(i) + g.dx * a / (a - b);
    }
  }
  return std::nullopt;
}

/// Forward Euler in time, centred second difference in space, unit diffusion.
/// Starts from the exact kink, pins the ends to its asymptotes and tracks
/// the crossing of the kink's own midpoint level.
inline FrontSimResult simulate_front(const PowerPoly& F, const KinkProfile& initial, const SpaceGrid& grid, double dt,
                                     double T, const FrontSimOptions& opts = {}) {
  if (!(grid.dx > 0.0) || !(grid.x_max > grid.x_min)) throw DomainError("invalid space grid");
  if (!(dt > 0.0) || !(T > 0.0)) throw DomainError("dt and T must be positive");
  if (dt > 0.5 * grid.dx * grid.dx)
    throw DomainError("CFL violation: dt = " + detail::format_double(dt) + " > dx^2/2 = " +
                      detail::format_double(0.5 * grid.dx * grid.dx));
  if (initial.branch != KinkBranch::plus) throw UnsupportedError("front simulation needs a plus-branch kink");
  const double margin = 10.0 * initial.width();
  if (initial.shift - margin < grid.x_min || initial.shift + margin > grid.x_max)
    throw DomainError("initial kink needs 10 widths of margin inside the domain");

  const std::size_t n = grid.points();
  std::vector<double> u(n), next(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = eval_kink(initial, grid.at(i)).u;
  const auto [left, right] = asymptotes(initial);
  u.front() = left;
  u.back() = right;
  next.front() = left;
  next.back() = right;

  FrontSimResult res;
  res.grid = grid;
  res.dt = dt;
  res.level = midpoint_value(initial);

  const std::size_t steps = static_cast<std::size_t>(std::llround(T / dt));
  const std::size_t sample_stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(opts.sample_interval / dt)));
  const double inv_dx2 = 1.0 / (grid.dx * grid.dx);
  std::size_t sample_index = 0;

  const auto record = [&](double t) {
    std::size_t cell = 0;
    const auto pos = level_crossing(u, grid, res.level, &cell);
    if (!pos) throw TruncatedRunError("front level lost at t = " + detail::format_double(t));
    if (cell < 5 || cell + 6 > n) throw TruncatedRunError("front within 5 cells of the boundary at t = " + detail::format_double(t));
    res.times.push_back(t);
    res.front_positions.push_back(*pos);
    if (opts.snapshot_every != 0 && sample_index % opts.snapshot_every == 0) res.snapshots.push_back({t, u});
    ++sample_index;
  };

  record(0.0);
  for (std::size_t s = 1; s <= steps; ++s) {
    for (std::size_t i = 1; i + 1 < n; ++i)
      next[i] = u[i] + dt * ((u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_dx2 + F.eval(u[i]));
    std::swap(u, next);
    if (s % sample_stride == 0 || s == steps) record(dt * static_cast<double>(s));
  }

  std::vector<double> t2, x2;
  for (std::size_t i = 0; i < res.times.size(); ++i) {
    if (res.times[i] >= 0.5 * T) {
      t2.push_back(res.times[i]);
      x2.push_back(res.front_positions[i]);
    }
  }
  const auto [slope, rms] = least_squares_slope(t2, x2);
  res.fitted_speed = slope;
  res.fit_residual = rms;
  return res;
}

}  // namespace kinkfact
