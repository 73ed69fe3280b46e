#include "core/channel.hpp"

#include <cmath>

namespace leoisl {

double pulse_value(PulseShape shape, double rolloff, double T, double t) {
  if (t <= 0.0 || t >= 2.0 * T) return 0.0;
  double x = std::abs(t - T);
  switch (shape) {
    case PulseShape::triangular:
      return 1.0 - x / T;
    case PulseShape::raised_cosine: {
      double flat = (1.0 - rolloff) * T;
      if (x <= flat) return 1.0;
      return 0.5 * (1.0 + std::cos(M_PI * (x - flat) / (rolloff * T)));
    }
  }
  return 0.0;
}

PulseModel PulseModel::from_parts(int S, double T, double eps, const Eigen::VectorXd& p_samples,
                                  const Eigen::MatrixXd& C_pp) {
  if (S <= 1) fail(Err::domain, "pulse: oversampling factor must exceed 1");
  if (p_samples.size() != S || C_pp.rows() != S || C_pp.cols() != S)
    fail(Err::shape, "pulse: sample vector and lag matrix must be S-sized");
  for (int s = 0; s < S; ++s)
    if (std::abs(p_samples[s]) < 1e-15)
      fail(Err::singular, "pulse: zero sample makes the pulse matrix singular");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C_pp, Eigen::EigenvaluesOnly);
  double lam_max = es.eigenvalues().maxCoeff();
  if (es.eigenvalues().minCoeff() <= 1e-12 * std::max(lam_max, 1.0))
    fail(Err::pulse_model, "pulse: lag correlation matrix is not positive definite");
  Eigen::LLT<Eigen::MatrixXd> llt(C_pp);
  if (llt.info() != Eigen::Success)
    fail(Err::pulse_model, "pulse: Cholesky factorization of the lag matrix failed");

  PulseModel pm;
  pm.S = S;
  pm.T = T;
  pm.T_c = T / S;
  pm.eps = eps;
  pm.p_samples = p_samples;
  pm.C_pp = C_pp;
  pm.T_pp = llt.matrixL();
  pm.P_eff = pm.T_pp.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXd(p_samples.asDiagonal()));
  pm.E_p = pm.P_eff.diagonal().squaredNorm();
  return pm;
}

PulseModel PulseModel::diagonal(int S, double T, const Eigen::VectorXd& p_samples) {
  return from_parts(S, T, T / S * 0.5, p_samples, Eigen::MatrixXd::Identity(S, S));
}

PulseModel build_pulse(int S, double T, PulseShape shape, double rolloff, double eps) {
  if (S <= 1) fail(Err::domain, "pulse: oversampling factor must exceed 1");
  if (T <= 0.0) fail(Err::domain, "pulse: symbol period must be positive");
  double T_c = T / S;
  if (eps < 0.0 || eps >= T_c) fail(Err::domain, "pulse: sampling offset must lie in [0, T_c)");
  if (shape == PulseShape::raised_cosine && (rolloff <= 0.0 || rolloff > 1.0))
    fail(Err::domain, "pulse: roll-off must lie in (0, 1]");

  Eigen::VectorXd p(S);
  for (int s = 0; s < S; ++s) p[s] = pulse_value(shape, rolloff, T, s * T_c + eps);
  Eigen::MatrixXd C(S, S);
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < S; ++j) C(i, j) = pulse_value(shape, rolloff, T, (i - j) * T_c + T);
  return PulseModel::from_parts(S, T, eps, p, C);
}

cd link_amplitude(const LinkBudget& b, double d_km, double phase_rad, double P_ref_w) {
  double mag = std::sqrt(received_power_w(b, d_km) / P_ref_w);
  return std::polar(mag, phase_rad);
}

Eigen::MatrixXcd vandermonde(const std::vector<double>& nus, int S) {
  Eigen::MatrixXcd V(S, nus.size());
  for (size_t q = 0; q < nus.size(); ++q)
    for (int s = 0; s < S; ++s) V(s, q) = std::polar(1.0, 2.0 * M_PI * nus[q] * s);
  return V;
}

GroupChannel group_channel(const PulseModel& pm, const std::vector<LinkParams>& links, double rho,
                           const std::vector<int>& members) {
  if (links.empty()) fail(Err::domain, "group channel: empty link set");
  if (!(rho > 0.0 && rho <= 1.0)) fail(Err::domain, "group channel: rho must lie in (0, 1]");
  GroupChannel gc;
  gc.rho = rho;
  gc.members = members;
  if (gc.members.empty())
    for (size_t i = 0; i < links.size(); ++i) gc.members.push_back(static_cast<int>(i));
  for (const auto& lp : links) gc.nus.push_back(lp.nu);
  gc.V = vandermonde(gc.nus, pm.S);
  gc.A_diag.resize(links.size());
  for (size_t i = 0; i < links.size(); ++i) gc.A_diag[i] = links[i].A;
  gc.C = pm.P_eff * gc.V * gc.A_diag.asDiagonal();
  return gc;
}

double wraparound_distance(double nu1, double nu2) {
  double d = std::abs(nu1 - nu2);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

double min_separation(const std::vector<double>& nus) {
  if (nus.size() < 2) fail(Err::domain, "min separation undefined for fewer than two shifts");
  double best = 0.5;
  for (size_t i = 0; i < nus.size(); ++i)
    for (size_t j = i + 1; j < nus.size(); ++j)
      best = std::min(best, wraparound_distance(nus[i], nus[j]));
  return best;
}

double noise_variance(double F_dB, double T_sym_s, double T_ref_K, double P_ref_w) {
  if (T_sym_s <= 0.0) fail(Err::domain, "noise variance: symbol period must be positive");
  return kBoltzmann * T_ref_K * (1.0 / T_sym_s) * std::pow(10.0, F_dB / 10.0) / P_ref_w;
}

}  // namespace leoisl
