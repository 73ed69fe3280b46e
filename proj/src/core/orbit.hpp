#pragma once

#include <Eigen/Dense>

#include "core/errors.hpp"

namespace leoisl {

// Walker Delta constellation kinematics in ECEF (treated as inertial over the
// observation horizon; positions are pure functions of t).

struct WalkerConfig {
  int K = 0;  // total satellites, K = P*N
  int P = 0;  // orbital planes
  int N = 0;  // satellites per plane
  double h_km = 0.0;
  double alpha_rad = 0.0;  // inclination
  int F_phasing = 0;
  double R_earth_km = 6378.0;
  double omega_rad_s = 0.0;  // angular speed, 2*pi / revolution period

  static WalkerConfig make(int P, int N, double h_km, double alpha_rad, int F_phasing,
                           double T_rev_s, double R_earth_km = 6378.0);

  double shell_radius_km() const { return R_earth_km + h_km; }
  double period_s() const { return 2.0 * M_PI / omega_rad_s; }
};

struct SatIndex {
  int p = 1;  // plane, 1..P
  int n = 1;  // in-plane slot, 1..N
  bool operator==(const SatIndex&) const = default;
};

int to_1d(const WalkerConfig& cfg, const SatIndex& s);        // row-major, 1..K
SatIndex from_1d(const WalkerConfig& cfg, int idx);

void check_index(const WalkerConfig& cfg, const SatIndex& s);

Eigen::Vector3d ecef_position(const WalkerConfig& cfg, const SatIndex& s, double t);
Eigen::Vector3d ecef_velocity(const WalkerConfig& cfg, const SatIndex& s, double t);

double distance_km(const WalkerConfig& cfg, const SatIndex& a, const SatIndex& b, double t);

// d/dt of the pair distance; positive = receding.
double radial_speed_km_s(const WalkerConfig& cfg, const SatIndex& a, const SatIndex& sink, double t);

// Sign convention validated against the reference Doppler table: shift carries the
// sign of the range rate (f = +radial_speed * f_c / c).
double doppler_shift_hz(const WalkerConfig& cfg, const SatIndex& a, const SatIndex& sink, double t,
                        double f_c_hz);

inline constexpr double kLightSpeedKmS = 2.99792458e5;

// Plane-fixed rotation Xi_p * Pi: z-rotation by beta_p composed with the x-z
// inclination rotation. Cached by callers that sweep many epochs.
Eigen::Matrix3d plane_rotation(const WalkerConfig& cfg, int p);
double in_plane_phase(const WalkerConfig& cfg, const SatIndex& s);  // gamma_{p,n}

}  // namespace leoisl
