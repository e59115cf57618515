#include "flrw/oracle.hpp"

#include "flrw/density.hpp"

#include <cmath>

namespace flrw {

namespace {
double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}
}  // namespace

GridSolver::GridSolver(ScaleFactor scale, InitialData data, GridConfig config)
    : scale_(std::move(scale)), data_(std::move(data)), cfg_(config) {
  if (data_.dim() != 1) throw ConfigError("grid solver: one-dimensional data only");
  if (cfg_.N < 8) throw ConfigError("grid solver: need at least 8 cells");
  if (!(cfg_.cfl > 0.0 && cfg_.cfl < 1.0)) throw ConfigError("grid solver: cfl in (0,1)");
  if (!(cfg_.x_hi > cfg_.x_lo)) throw ConfigError("grid solver: empty domain");
  dx_ = (cfg_.x_hi - cfg_.x_lo) / cfg_.N;
}

GridState GridSolver::initial_state() const {
  GridState s;
  s.t = 0.0;
  s.v.resize(cfg_.N);
  s.rho.resize(cfg_.N);
  const double eps = data_.epsilon();
  Vec a(1);
  for (int i = 0; i < cfg_.N; ++i) {
    a[0] = cell_center(i);
    s.v[i] = eps * data_.v0(a)[0];
    s.rho[i] = eps * data_.rho0(a);
  }
  return s;
}

// Exact solve of dv/dt = -(da/a) v (1 - v^2/c^2) over [t0, t0+dt] through the
// conserved boost g = a v / sqrt(c^2 - v^2); the matching density damping
// d rho/dt = -rho (da/a)(n - v^2/c^2) also integrates in closed form.
double GridSolver::source_step(GridState& s, double t0, double dt) const {
  const double c = data_.light_speed();
  const double c2 = c * c;
  const double t1 = t0 + dt;
  const double a0 = scale_.eval_a(t0);
  const double ia1 = scale_.inv_power(t1, 1);
  const double n_ratio = std::exp(-cfg_.ambient_n * (scale_.log_scale(t1) - scale_.log_scale(t0)));
  for (int i = 0; i < cfg_.N; ++i) {
    const double v = s.v[i];
    if (!(std::abs(v) < c))
      throw NumericalError("grid solver: superluminal cell before source step", 0.0);
    const double g = a0 * v / std::sqrt(c2 - v * v);
    const double gia = g * ia1;
    const double v1 = c * gia / std::sqrt(1.0 + gia * gia);
    // int (da/a)(v^2/c^2) dt over the relaxation = (1/2) ln of the boost ratio
    const double q0 = g * g / (a0 * a0);
    const double q1 = gia * gia;
    s.v[i] = v1;
    s.rho[i] *= n_ratio * std::sqrt((1.0 + q0) / (1.0 + q1));
  }
  s.t = t1;
  return t1;
}

void GridSolver::advect(GridState& s, double t_mid, double dt) const {
  const int N = cfg_.N;
  const double inv_a = scale_.inv_power(t_mid, 1);
  const double lam = dt / dx_;

  // ghost cells: outflow (copy the edge state)
  auto V = [&](int i) { return s.v[std::clamp(i, 0, N - 1)]; };
  auto R = [&](int i) { return s.rho[std::clamp(i, 0, N - 1)]; };

  thread_local std::vector<double> vL, vR, rL, rR;
  vL.resize(N + 1);
  vR.resize(N + 1);
  rL.resize(N + 1);
  rR.resize(N + 1);
  if (cfg_.recon == GridConfig::Recon::minmod) {
    for (int f = 0; f <= N; ++f) {
      const int i = f - 1, j = f;
      const double sv_i = minmod(V(i) - V(i - 1), V(i + 1) - V(i));
      const double sv_j = minmod(V(j) - V(j - 1), V(j + 1) - V(j));
      const double sr_i = minmod(R(i) - R(i - 1), R(i + 1) - R(i));
      const double sr_j = minmod(R(j) - R(j - 1), R(j + 1) - R(j));
      vL[f] = V(i) + 0.5 * sv_i;
      vR[f] = V(j) - 0.5 * sv_j;
      rL[f] = R(i) + 0.5 * sr_i;
      rR[f] = R(j) - 0.5 * sr_j;
    }
  } else {
    for (int f = 0; f <= N; ++f) {
      vL[f] = V(f - 1);
      vR[f] = V(f);
      rL[f] = R(f - 1);
      rR[f] = R(f);
    }
  }

  thread_local std::vector<double> flux_v, flux_r;
  flux_v.resize(N + 1);
  flux_r.resize(N + 1);
  for (int f = 0; f <= N; ++f) {
    const double fl = 0.5 * vL[f] * vL[f] * inv_a;
    const double fr = 0.5 * vR[f] * vR[f] * inv_a;
    const double speed = std::max(std::abs(vL[f]), std::abs(vR[f])) * inv_a;
    flux_v[f] = 0.5 * (fl + fr) - 0.5 * speed * (vR[f] - vL[f]);
    const double vface = 0.5 * (vL[f] + vR[f]) * inv_a;
    flux_r[f] = vface >= 0.0 ? rL[f] * vface : rR[f] * vface;
  }
  for (int i = 0; i < N; ++i) {
    s.v[i] -= lam * (flux_v[i + 1] - flux_v[i]);
    s.rho[i] -= lam * (flux_r[i + 1] - flux_r[i]);
    if (std::isnan(s.v[i]) || std::isnan(s.rho[i]))
      throw NumericalError("grid solver: instability (NaN state)", 0.0);
    if (s.rho[i] < -1e-13)
      throw NumericalError("grid solver: negative density cell", s.rho[i]);
  }
}

double GridSolver::max_grad(const GridState& s) const {
  double g = 0.0;
  for (int i = 0; i + 1 < cfg_.N; ++i)
    g = std::max(g, std::abs(s.v[i + 1] - s.v[i]) / dx_);
  return g;
}

GridState GridSolver::step(const GridState& s, double t_cap) const {
  const double c = data_.light_speed();
  double vmax = 0.0;
  for (double v : s.v) vmax = std::max(vmax, std::abs(v));
  if (!(vmax < c)) throw NumericalError("grid solver: superluminal state", vmax);
  const double speed = std::max(vmax, cfg_.speed_floor * c);
  double dt = cfg_.cfl * dx_ * scale_.eval_a(s.t) / speed;
  if (!(dt > 0.0)) throw NumericalError("grid solver: vanishing time step", dt);
  dt = std::min(dt, t_cap - s.t);

  GridState next = s;
  source_step(next, s.t, 0.5 * dt);
  advect(next, s.t + 0.5 * dt, dt);
  source_step(next, s.t + 0.5 * dt, 0.5 * dt);
  next.t = s.t + dt;
  for (double v : next.v)
    if (!(std::abs(v) < c))
      throw NumericalError("grid solver: superluminal state after step", std::abs(v));
  return next;
}

GridSolver::RunResult GridSolver::run() const {
  RunResult out;
  GridState s = initial_state();
  const double g0 = max_grad(s);
  out.snapshots.push_back(s);
  const int snaps = std::max(1, cfg_.snapshots);
  int next_snap = 1;
  double snap_t = cfg_.t_end * next_snap / snaps;
  while (s.t < cfg_.t_end) {
    s = step(s, std::min(snap_t, cfg_.t_end));
    ++out.steps;
    if (g0 > 0.0 && max_grad(s) > cfg_.monitor_factor * g0) {
      out.monitor_time = s.t;
      out.snapshots.push_back(s);
      return out;
    }
    if (s.t >= snap_t - 1e-14 * cfg_.t_end) {
      out.snapshots.push_back(s);
      ++next_snap;
      snap_t = cfg_.t_end * next_snap / snaps;
    }
  }
  return out;
}

std::vector<CompareRow> compare_with_flow(const GridSolver::RunResult& run,
                                          const CharacteristicFlow& flow,
                                          const GridSolver& solver) {
  std::vector<CompareRow> rows;
  const int N = solver.config().N;
  const double dx = solver.dx();
  for (const GridState& snap : run.snapshots) {
    CompareRow row;
    row.t = snap.t;
    Vec x(1), seed(1);
    bool have_seed = false;
    for (int i = 0; i < N; ++i) {
      x[0] = solver.cell_center(i);
      Vec alpha(1);
      try {
        alpha = flow.invert_position(snap.t, x, have_seed ? std::optional<Vec>(seed)
                                                          : std::nullopt);
      } catch (const InversionError&) {
        ++row.excluded;
        have_seed = false;
        continue;
      }
      seed = alpha;
      seed[0] += dx;  // continuation along the row
      have_seed = true;
      const double v_exact = flow.velocity(snap.t, alpha)[0];
      const double rho_exact = density_along_char(flow, snap.t, alpha);
      const double ev = std::abs(snap.v[i] - v_exact);
      const double er = std::abs(snap.rho[i] - rho_exact);
      row.linf_v = std::max(row.linf_v, ev);
      row.linf_rho = std::max(row.linf_rho, er);
      row.l1_v += ev * dx;
      row.l1_rho += er * dx;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace flrw
