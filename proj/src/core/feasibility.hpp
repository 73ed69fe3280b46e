#pragma once

#include <map>
#include <vector>

#include "core/orbit.hpp"

namespace leoisl {

struct LinkBudget {
  double f_c_hz = 0.0;
  double P_tx_w = 0.0;
  double G_tx = 1.0;  // linear
  double G_rx = 1.0;  // linear
  double beta_rad = 0.0;  // antenna half-beamwidth
  double P_sens_w = 0.0;

  void validate() const;
};

double radio_horizon_km(double h_km, double R_km);
double received_power_w(const LinkBudget& b, double d_km);

struct BodyAxes {
  Eigen::Vector3d roll;   // along velocity
  Eigen::Vector3d pitch;  // orbit-plane normal
};

BodyAxes body_axes(const WalkerConfig& cfg, const SatIndex& s, double t);

// True when u_link lies within beta of +/-roll or +/-pitch.
bool beam_check(const Eigen::Vector3d& u_link, const BodyAxes& axes, double beta_rad);

// (c1) range, (c2) power, (c3) beam cones at BOTH endpoints. Transmitter-side
// evaluation is required to reproduce the reference link-count staircase; see README.
bool is_feasible(const WalkerConfig& cfg, const LinkBudget& b, const SatIndex& sat,
                 const SatIndex& sink, double t);

// Sorted by 1D constellation index.
std::vector<SatIndex> feasible_set(const WalkerConfig& cfg, const LinkBudget& b,
                                   const SatIndex& sink, double t);

struct FeasibilityWindow {
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<int> members;  // 1D constellation indices, sorted
  int L = 0;
};

std::vector<FeasibilityWindow> feasibility_timeline(const WalkerConfig& cfg, const LinkBudget& b,
                                                    const SatIndex& sink, double horizon_s,
                                                    double dt_s = 0.05, double edge_tol_s = 1e-3);

struct LDurationStats {
  int count = 0;
  double min_s = 0.0;
  double max_s = 0.0;
  double mean_s = 0.0;
  double std_s = 0.0;  // population standard deviation
};

struct WindowStats {
  std::map<int, LDurationStats> per_L;
};

WindowStats window_stats(const std::vector<FeasibilityWindow>& timeline);

}  // namespace leoisl
