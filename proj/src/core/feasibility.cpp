#include "core/feasibility.hpp"

#include <algorithm>
#include <cmath>

namespace leoisl {

void LinkBudget::validate() const {
  if (f_c_hz <= 0.0 || P_tx_w <= 0.0 || G_tx <= 0.0 || G_rx <= 0.0 || P_sens_w <= 0.0)
    fail(Err::config, "link budget: all RF parameters must be positive");
  if (beta_rad <= 0.0 || beta_rad >= M_PI / 2.0)
    fail(Err::config, "link budget: half-beamwidth must lie in (0, pi/2)");
}

double radio_horizon_km(double h_km, double R_km) {
  if (h_km < 0.0 || R_km <= 0.0) fail(Err::domain, "radio horizon: bad altitude or radius");
  return 2.0 * std::sqrt(h_km * (h_km + 2.0 * R_km));
}

static double friis_factor(const LinkBudget& b) {
  double lambda_m = 2.99792458e8 / b.f_c_hz;
  double coef = lambda_m / (4.0 * M_PI);
  return b.P_tx_w * b.G_tx * b.G_rx * coef * coef;  // divide by d_m^2 for power
}

double received_power_w(const LinkBudget& b, double d_km) {
  if (d_km <= 0.0) fail(Err::domain, "received power: distance must be positive");
  double d_m = d_km * 1e3;
  return friis_factor(b) / (d_m * d_m);
}

BodyAxes body_axes(const WalkerConfig& cfg, const SatIndex& s, double t) {
  Eigen::Vector3d r = ecef_position(cfg, s, t);
  Eigen::Vector3d v = ecef_velocity(cfg, s, t);
  BodyAxes axes;
  axes.roll = v.normalized();
  axes.pitch = r.cross(v).normalized();
  return axes;
}

bool beam_check(const Eigen::Vector3d& u_link, const BodyAxes& axes, double beta_rad) {
  double cb = std::cos(beta_rad) - 1e-12;  // boundary inclusive
  return std::abs(u_link.dot(axes.roll)) >= cb || std::abs(u_link.dot(axes.pitch)) >= cb;
}

namespace {

struct Kinematics {
  Eigen::Vector3d r;
  Eigen::Vector3d v;
};

struct SweepCache {
  const WalkerConfig& cfg;
  std::vector<Eigen::Matrix3d> rot;  // per plane
  std::vector<double> gamma;         // per 1D index - 1
  double radius;
  double speed;

  explicit SweepCache(const WalkerConfig& c) : cfg(c) {
    rot.reserve(c.P);
    for (int p = 1; p <= c.P; ++p) rot.push_back(plane_rotation(c, p));
    gamma.reserve(c.K);
    for (int i = 1; i <= c.K; ++i) gamma.push_back(in_plane_phase(c, from_1d(c, i)));
    radius = c.shell_radius_km();
    speed = radius * c.omega_rad_s;
  }

  Kinematics state(int idx1d, double t) const {
    double u = cfg.omega_rad_s * t + gamma[idx1d - 1];
    double cu = std::cos(u), su = std::sin(u);
    const Eigen::Matrix3d& m = rot[(idx1d - 1) / cfg.N];
    Kinematics k;
    k.r = radius * (m * Eigen::Vector3d(cu, su, 0.0));
    k.v = radius * cfg.omega_rad_s * (m * Eigen::Vector3d(-su, cu, 0.0));
    return k;
  }
};

std::vector<int> feasible_ids(const SweepCache& cache, const LinkBudget& b, int sink_id,
                              double t) {
  const WalkerConfig& cfg = cache.cfg;
  double d_h = radio_horizon_km(cfg.h_km, cfg.R_earth_km);
  double d_h2 = d_h * d_h;
  double ffac = friis_factor(b);
  double cb = std::cos(b.beta_rad) - 1e-12;

  Kinematics sink = cache.state(sink_id, t);
  Eigen::Vector3d sink_roll = sink.v.normalized();
  Eigen::Vector3d sink_pitch = sink.r.cross(sink.v).normalized();

  std::vector<int> out;
  for (int id = 1; id <= cfg.K; ++id) {
    if (id == sink_id) continue;
    Kinematics sat = cache.state(id, t);
    Eigen::Vector3d dr = sink.r - sat.r;
    double d2 = dr.squaredNorm();
    if (d2 > d_h2) continue;                       // (c1)
    double d_m2 = d2 * 1e6;
    if (ffac / d_m2 < b.P_sens_w) continue;        // (c2)
    Eigen::Vector3d u_link = dr / std::sqrt(d2);
    bool sink_ok = std::abs(u_link.dot(sink_roll)) >= cb || std::abs(u_link.dot(sink_pitch)) >= cb;
    if (!sink_ok) continue;                        // (c3) sink side
    Eigen::Vector3d roll = sat.v.normalized();
    Eigen::Vector3d pitch = sat.r.cross(sat.v).normalized();
    bool sat_ok = std::abs(u_link.dot(roll)) >= cb || std::abs(u_link.dot(pitch)) >= cb;
    if (!sat_ok) continue;                         // (c3) transmitter side
    out.push_back(id);
  }
  return out;
}

}  // namespace

bool is_feasible(const WalkerConfig& cfg, const LinkBudget& b, const SatIndex& sat,
                 const SatIndex& sink, double t) {
  if (sat == sink) fail(Err::degenerate_pair, "feasibility undefined for a link to itself");
  b.validate();
  check_index(cfg, sat);
  check_index(cfg, sink);
  double d = distance_km(cfg, sat, sink, t);
  if (d > radio_horizon_km(cfg.h_km, cfg.R_earth_km)) return false;
  if (received_power_w(b, d) < b.P_sens_w) return false;
  Eigen::Vector3d u_link = (ecef_position(cfg, sink, t) - ecef_position(cfg, sat, t)) / d;
  if (!beam_check(u_link, body_axes(cfg, sink, t), b.beta_rad)) return false;
  return beam_check(u_link, body_axes(cfg, sat, t), b.beta_rad);
}

std::vector<SatIndex> feasible_set(const WalkerConfig& cfg, const LinkBudget& b,
                                   const SatIndex& sink, double t) {
  b.validate();
  check_index(cfg, sink);
  SweepCache cache(cfg);
  std::vector<SatIndex> out;
  for (int id : feasible_ids(cache, b, to_1d(cfg, sink), t)) out.push_back(from_1d(cfg, id));
  return out;
}

std::vector<FeasibilityWindow> feasibility_timeline(const WalkerConfig& cfg, const LinkBudget& b,
                                                    const SatIndex& sink, double horizon_s,
                                                    double dt_s, double edge_tol_s) {
  b.validate();
  check_index(cfg, sink);
  if (dt_s <= 0.0 || horizon_s < dt_s) fail(Err::domain, "timeline: need dt > 0 and horizon >= dt");
  SweepCache cache(cfg);
  int sink_id = to_1d(cfg, sink);

  std::vector<FeasibilityWindow> windows;
  double cur_start = 0.0;
  std::vector<int> cur = feasible_ids(cache, b, sink_id, 0.0);

  double t_prev = 0.0;
  for (double t = dt_s; t_prev < horizon_s; t += dt_s) {
    double t_clip = std::min(t, horizon_s);
    std::vector<int> nxt = feasible_ids(cache, b, sink_id, t_clip);
    if (nxt != cur) {
      double lo = t_prev, hi = t_clip;
      while (hi - lo > edge_tol_s) {
        double mid = 0.5 * (lo + hi);
        if (feasible_ids(cache, b, sink_id, mid) == cur)
          lo = mid;
        else
          hi = mid;
      }
      double edge = 0.5 * (lo + hi);
      windows.push_back({cur_start, edge, cur, static_cast<int>(cur.size())});
      cur_start = edge;
      cur = std::move(nxt);
    }
    t_prev = t_clip;
  }
  windows.push_back({cur_start, horizon_s, cur, static_cast<int>(cur.size())});
  return windows;
}

WindowStats window_stats(const std::vector<FeasibilityWindow>& timeline) {
  if (timeline.empty()) fail(Err::domain, "window stats: empty timeline");
  std::map<int, std::vector<double>> durations;
  for (const auto& w : timeline) durations[w.L].push_back(w.t_end - w.t_start);
  WindowStats stats;
  for (auto& [L, ds] : durations) {
    LDurationStats s;
    s.count = static_cast<int>(ds.size());
    s.min_s = *std::min_element(ds.begin(), ds.end());
    s.max_s = *std::max_element(ds.begin(), ds.end());
    double sum = 0.0;
    for (double d : ds) sum += d;
    s.mean_s = sum / s.count;
    double acc = 0.0;
    for (double d : ds) acc += (d - s.mean_s) * (d - s.mean_s);
    s.std_s = std::sqrt(acc / s.count);
    stats.per_L[L] = s;
  }
  return stats;
}

}  // namespace leoisl
