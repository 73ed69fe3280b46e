#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "core/feasibility.hpp"

namespace leoisl {

using cd = std::complex<double>;

enum class PulseShape { triangular, raised_cosine };

// Composite pulse sampled once per chip; the whitening factor turns the colored
// post-sampling noise into white noise, and P_eff is the effective pulse matrix of
// the whitened model.
struct PulseModel {
  int S = 0;
  double T = 0.0;    // symbol period
  double T_c = 0.0;  // chip period T/S
  double eps = 0.0;  // sampling phase offset
  Eigen::VectorXd p_samples;  // p(s*T_c + eps), s = 0..S-1
  Eigen::MatrixXd C_pp;       // p((s1-s2)*T_c + T)
  Eigen::MatrixXd T_pp;       // lower Cholesky factor of C_pp
  Eigen::MatrixXd P_eff;      // T_pp^{-1} * diag(p_samples)
  double E_p = 0.0;           // sum of squared diagonal entries of P_eff

  static PulseModel from_parts(int S, double T, double eps, const Eigen::VectorXd& p_samples,
                               const Eigen::MatrixXd& C_pp);

  // Diagonal effective-pulse model (identity lag correlation); used by the
  // closed-form oracles, which are exact only for diagonal P_eff.
  static PulseModel diagonal(int S, double T, const Eigen::VectorXd& p_samples);
};

double pulse_value(PulseShape shape, double rolloff, double T, double t);

PulseModel build_pulse(int S, double T, PulseShape shape, double rolloff, double eps);

cd link_amplitude(const LinkBudget& b, double d_km, double phase_rad, double P_ref_w = 1.0);

Eigen::MatrixXcd vandermonde(const std::vector<double>& nus, int S);

struct LinkParams {
  cd A;
  double f_hz = 0.0;
  double nu = 0.0;   // f * T_c mod 1
  double tau = 0.0;  // fixed 0 (timing-advance assumption)
};

struct GroupChannel {
  std::vector<int> members;  // positions into the owning link list
  std::vector<double> nus;
  Eigen::MatrixXcd V;       // S x Lk
  Eigen::VectorXcd A_diag;  // Lk
  double rho = 1.0;
  Eigen::MatrixXcd C;  // P_eff * V * diag(A)

  int size() const { return static_cast<int>(A_diag.size()); }
  Eigen::MatrixXcd H() const { return C / std::sqrt(rho); }
};

GroupChannel group_channel(const PulseModel& pm, const std::vector<LinkParams>& links, double rho,
                           const std::vector<int>& members = {});

double wraparound_distance(double nu1, double nu2);
double min_separation(const std::vector<double>& nus);

double noise_variance(double F_dB, double T_sym_s, double T_ref_K = 290.0, double P_ref_w = 1.0);

inline double normalized_doppler(double f_hz, double T_c_s) {
  double x = f_hz * T_c_s;
  x -= std::floor(x);
  // x - floor(x) rounds up to 1.0 for tiny negative inputs; keep [0, 1).
  if (x >= 1.0) x = 0.0;
  return x;
}

inline constexpr double kBoltzmann = 1.380649e-23;

}  // namespace leoisl
