#include "core/orbit.hpp"

#include <cmath>

namespace leoisl {

WalkerConfig WalkerConfig::make(int P, int N, double h_km, double alpha_rad, int F_phasing,
                                double T_rev_s, double R_earth_km) {
  if (P <= 0 || N <= 0) fail(Err::config, "walker: P and N must be positive");
  if (h_km <= 0.0) fail(Err::config, "walker: altitude must be positive");
  if (R_earth_km <= 0.0) fail(Err::config, "walker: Earth radius must be positive");
  if (alpha_rad < 0.0 || alpha_rad > M_PI / 2.0 + 1e-12)
    fail(Err::config, "walker: inclination must lie in [0, pi/2]");
  if (F_phasing < 0 || F_phasing >= P) fail(Err::config, "walker: phasing must satisfy 0 <= F < P");
  if (T_rev_s <= 0.0) fail(Err::config, "walker: revolution period must be positive");
  WalkerConfig cfg;
  cfg.P = P;
  cfg.N = N;
  cfg.K = P * N;
  cfg.h_km = h_km;
  cfg.alpha_rad = alpha_rad;
  cfg.F_phasing = F_phasing;
  cfg.R_earth_km = R_earth_km;
  cfg.omega_rad_s = 2.0 * M_PI / T_rev_s;
  return cfg;
}

void check_index(const WalkerConfig& cfg, const SatIndex& s) {
  if (s.p < 1 || s.p > cfg.P || s.n < 1 || s.n > cfg.N)
    fail(Err::index, "satellite index (" + std::to_string(s.p) + "," + std::to_string(s.n) +
                         ") out of range");
}

int to_1d(const WalkerConfig& cfg, const SatIndex& s) {
  check_index(cfg, s);
  return (s.p - 1) * cfg.N + s.n;
}

SatIndex from_1d(const WalkerConfig& cfg, int idx) {
  if (idx < 1 || idx > cfg.K) fail(Err::index, "1D satellite index out of range");
  return SatIndex{(idx - 1) / cfg.N + 1, (idx - 1) % cfg.N + 1};
}

Eigen::Matrix3d plane_rotation(const WalkerConfig& cfg, int p) {
  double beta = 2.0 * M_PI * (p - 1) / cfg.P;
  double cb = std::cos(beta), sb = std::sin(beta);
  double ca = std::cos(cfg.alpha_rad), sa = std::sin(cfg.alpha_rad);
  Eigen::Matrix3d xi;  // z-rotation by beta_p
  xi << cb, -sb, 0.0, sb, cb, 0.0, 0.0, 0.0, 1.0;
  Eigen::Matrix3d pi_rot;  // x-z rotation by the inclination
  pi_rot << ca, 0.0, -sa, 0.0, 1.0, 0.0, sa, 0.0, ca;
  return xi * pi_rot;
}

double in_plane_phase(const WalkerConfig& cfg, const SatIndex& s) {
  return 2.0 * M_PI * (s.n - 1) / cfg.N + 2.0 * M_PI * cfg.F_phasing * (s.p - 1) / cfg.K;
}

Eigen::Vector3d ecef_position(const WalkerConfig& cfg, const SatIndex& s, double t) {
  check_index(cfg, s);
  double u = cfg.omega_rad_s * t + in_plane_phase(cfg, s);
  Eigen::Vector3d e(std::cos(u), std::sin(u), 0.0);
  return cfg.shell_radius_km() * (plane_rotation(cfg, s.p) * e);
}

Eigen::Vector3d ecef_velocity(const WalkerConfig& cfg, const SatIndex& s, double t) {
  check_index(cfg, s);
  double u = cfg.omega_rad_s * t + in_plane_phase(cfg, s);
  Eigen::Vector3d de(-std::sin(u), std::cos(u), 0.0);
  return cfg.shell_radius_km() * cfg.omega_rad_s * (plane_rotation(cfg, s.p) * de);
}

double distance_km(const WalkerConfig& cfg, const SatIndex& a, const SatIndex& b, double t) {
  return (ecef_position(cfg, a, t) - ecef_position(cfg, b, t)).norm();
}

double radial_speed_km_s(const WalkerConfig& cfg, const SatIndex& a, const SatIndex& sink,
                         double t) {
  if (a == sink) fail(Err::degenerate_pair, "radial speed undefined for a pair of equal indices");
  Eigen::Vector3d dr = ecef_position(cfg, a, t) - ecef_position(cfg, sink, t);
  Eigen::Vector3d dv = ecef_velocity(cfg, a, t) - ecef_velocity(cfg, sink, t);
  return dr.dot(dv) / dr.norm();
}

double doppler_shift_hz(const WalkerConfig& cfg, const SatIndex& a, const SatIndex& sink, double t,
                        double f_c_hz) {
  if (f_c_hz <= 0.0) fail(Err::domain, "carrier frequency must be positive");
  return radial_speed_km_s(cfg, a, sink, t) * f_c_hz / kLightSpeedKmS;
}

}  // namespace leoisl
