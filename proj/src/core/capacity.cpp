#include "capacity.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "receiver.hpp"

namespace leoisl {

namespace {

constexpr double kLog2e = 1.4426950408889634073599246810019;
constexpr double kTwoPi = 6.283185307179586476925286766559;

double log2_1p(double x) { return std::log1p(x) * kLog2e; }

void check_noise(double s2) {
  if (!(s2 > 0.0)) fail(Err::domain, "noise variance must be positive");
}

void check_rho_sum(const std::vector<double>& rhos) {
  double total = 0.0;
  for (double r : rhos) {
    if (!(r > 0.0)) fail(Err::allocation, "DoF fractions must be positive");
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-9)
    fail(Err::allocation, "DoF fractions must sum to one");
}

// Eigenvalues of the Gram matrix of C, taken on the smaller side.
Eigen::VectorXd gram_eigenvalues(const Eigen::MatrixXcd& C) {
  Eigen::MatrixXcd G;
  if (C.cols() <= C.rows())
    G = C.adjoint() * C;
  else
    G = C * C.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G,
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    fail(Err::internal, "Gram eigendecomposition failed");
  return es.eigenvalues();
}

double logdet2_identity_plus(const Eigen::MatrixXcd& M, double scale) {
  // log2 det(I + M/scale) for Hermitian PSD M.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M,
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    fail(Err::internal, "eigendecomposition failed");
  double out = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()(i);
    if (lam < 0.0 && lam > -1e-9 * std::max(1.0, es.eigenvalues().maxCoeff()))
      lam = 0.0;
    out += log2_1p(lam / scale);
  }
  return out;
}

}  // namespace

double group_rate(const GroupChannel& gc, double s2) {
  check_noise(s2);
  Eigen::VectorXd lams = gram_eigenvalues(gc.C);
  double rate = 0.0;
  for (int i = 0; i < lams.size(); ++i) {
    double lam = lams(i);
    if (lam < 0.0) lam = 0.0;
    rate += log2_1p(lam / (s2 * gc.rho));
  }
  return gc.rho * rate;
}

double sum_capacity(const std::vector<GroupChannel>& groups, double s2) {
  if (groups.empty()) fail(Err::shape, "no groups given");
  std::vector<double> rhos;
  rhos.reserve(groups.size());
  for (const auto& g : groups) rhos.push_back(g.rho);
  check_rho_sum(rhos);
  double total = 0.0;
  for (const auto& g : groups) total += group_rate(g, s2);
  return total;
}

double noma_capacity(const PulseModel& pm, const std::vector<LinkParams>& links,
                     double s2) {
  GroupChannel gc = group_channel(pm, links, 1.0);
  return group_rate(gc, s2);
}

double oma_capacity(const std::vector<double>& amps2,
                    const std::vector<double>& rhos, double E_p, double s2) {
  check_noise(s2);
  if (amps2.empty() || amps2.size() != rhos.size())
    fail(Err::shape, "power and DoF lists must match");
  if (!(E_p > 0.0)) fail(Err::domain, "pulse energy must be positive");
  check_rho_sum(rhos);
  double total = 0.0;
  for (std::size_t l = 0; l < amps2.size(); ++l) {
    if (amps2[l] < 0.0) fail(Err::domain, "link power must be nonnegative");
    total += rhos[l] * log2_1p(E_p * amps2[l] / (s2 * rhos[l]));
  }
  return total;
}

DofAllocation oma_opt_dof(const std::vector<double>& amps2) {
  if (amps2.empty()) fail(Err::shape, "no link powers given");
  double total = 0.0;
  for (double a : amps2) {
    if (!(a > 0.0))
      fail(Err::domain, "optimized OMA DoF needs strictly positive powers");
    total += a;
  }
  DofAllocation out;
  out.mode = DofMode::optimized;
  out.rhos.reserve(amps2.size());
  for (double a : amps2) out.rhos.push_back(a / total);
  return out;
}

DofAllocation hybrid_opt_dof(const std::vector<GroupChannel>& groups) {
  if (groups.empty()) fail(Err::shape, "no groups given");
  std::vector<double> chi;
  chi.reserve(groups.size());
  double total = 0.0;
  for (const auto& g : groups) {
    double c = g.C.squaredNorm() / g.size();
    if (!(c > 0.0))
      fail(Err::domain, "optimized hybrid DoF needs nonzero group channels");
    chi.push_back(c);
    total += c;
  }
  DofAllocation out;
  out.mode = DofMode::optimized;
  out.rhos.reserve(chi.size());
  for (double c : chi) out.rhos.push_back(c / total);
  return out;
}

RateReport individual_rates(const std::vector<GroupChannel>& groups,
                            double s2) {
  check_noise(s2);
  if (groups.empty()) fail(Err::shape, "no groups given");
  std::vector<double> rhos;
  for (const auto& g : groups) rhos.push_back(g.rho);
  check_rho_sum(rhos);

  RateReport rep;
  std::vector<double> rates;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    const GroupChannel& g = groups[k];
    const int L = g.size();
    const Eigen::MatrixXcd H = g.H();
    std::vector<int> active(L);
    for (int l = 0; l < L; ++l) active[l] = l;
    double grate = 0.0;
    for (int stage = 0; stage < L; ++stage) {
      const int n_act = static_cast<int>(active.size());
      Eigen::MatrixXcd Ha(H.rows(), n_act);
      for (int j = 0; j < n_act; ++j) Ha.col(j) = H.col(active[j]);
      Eigen::VectorXd sinrs = sinr_per_stream(Ha, s2);
      int best = 0;
      for (int j = 1; j < n_act; ++j)
        if (sinrs(j) > sinrs(best)) best = j;
      double rate = g.rho * log2_1p(sinrs(best));
      RateReport::Row row;
      row.link = g.members[active[best]];
      row.group = static_cast<int>(k);
      row.stage = stage;
      row.rate = rate;
      rep.rows.push_back(row);
      rates.push_back(rate);
      grate += rate;
      active.erase(active.begin() + best);
    }
    rep.group_rates.push_back(grate);
    rep.c_sum += grate;

    if (L > 1 && min_separation(g.nus) < 1e-12)
      rep.dup_nu_groups.push_back(static_cast<int>(k));
  }
  rep.fairness = fairness(rates);
  return rep;
}

double fairness(const std::vector<double>& rates) {
  if (rates.empty()) fail(Err::shape, "no rates given");
  double sum = 0.0, sum2 = 0.0;
  for (double r : rates) {
    if (r < 0.0) fail(Err::domain, "rates must be nonnegative");
    sum += r;
    sum2 += r * r;
  }
  if (sum2 <= 0.0)
    fail(Err::undefined_fairness, "fairness undefined for all-zero rates");
  return sum * sum / (static_cast<double>(rates.size()) * sum2);
}

TwoSatSinrs two_sat_oracle(cd A1, cd A2, double nu1, double nu2,
                           const PulseModel& pm, double s2) {
  check_noise(s2);
  const double E_p = pm.E_p;
  const double a1 = std::norm(A1);
  const double a2 = std::norm(A2);
  cd cross(0.0, 0.0);
  for (int s = 0; s < pm.S; ++s) {
    double p2 = std::norm(pm.P_eff(s, s));
    double ang = -kTwoPi * s * (nu1 - nu2);
    cross += p2 * cd(std::cos(ang), std::sin(ang));
  }
  const double cross2 = std::norm(cross);
  TwoSatSinrs out;
  out.sinr1 = (s2 * a1 * E_p + a1 * a2 * (E_p * E_p - cross2)) /
              (s2 * (a2 * E_p + s2));
  out.sinr2 = a2 * E_p / s2;
  out.sinr1_floor = a1 / (a2 + s2 / E_p);
  return out;
}

JensenReport jensen_bounds_check(const std::vector<GroupChannel>& groups,
                                 const PulseModel& pm, double s2) {
  check_noise(s2);
  if (groups.empty()) fail(Err::shape, "no groups given");
  std::vector<double> rhos;
  for (const auto& g : groups) rhos.push_back(g.rho);
  check_rho_sum(rhos);

  JensenReport rep;
  const int S = pm.S;
  Eigen::MatrixXcd sum_outer = Eigen::MatrixXcd::Zero(S, S);
  std::vector<double> amps2;
  int l_min = groups.front().size();
  double amgm = 0.0, size_approx = 0.0, lmin_partial = 0.0;

  for (const auto& g : groups) {
    rep.c_hybrid += group_rate(g, s2);
    sum_outer += g.C * g.C.adjoint();
    for (int l = 0; l < g.size(); ++l)
      amps2.push_back(std::norm(g.A_diag[l]));

    Eigen::VectorXd lams = gram_eigenvalues(g.C);
    const double lam_max = std::max(lams.maxCoeff(), 0.0);
    const double thresh = 1e-10 * std::sqrt(lam_max);
    int rank = 0;
    double sum_mu2 = 0.0;
    for (int i = 0; i < lams.size(); ++i) {
      double lam = std::max(lams(i), 0.0);
      sum_mu2 += lam;
      if (std::sqrt(lam) > thresh) ++rank;
    }
    const int L = g.size();
    l_min = std::min(l_min, L);
    if (rank > 0)
      amgm += rank * g.rho * log2_1p(sum_mu2 / (s2 * g.rho * rank));
    size_approx += L * g.rho * log2_1p(sum_mu2 / (s2 * g.rho * L));
    lmin_partial += g.rho * log2_1p(sum_mu2 / (s2 * L * g.rho));
  }

  rep.c_noma = logdet2_identity_plus(sum_outer, s2);
  rep.c_oma_opt =
      oma_capacity(amps2, oma_opt_dof(amps2).rhos, pm.E_p, s2);
  rep.amgm_bound = amgm;
  rep.size_approx = size_approx;
  rep.lmin_lower = l_min * lmin_partial;
  rep.slack_noma = rep.c_noma - rep.c_hybrid;
  rep.slack_amgm = rep.amgm_bound - rep.c_hybrid;
  rep.slack_lmin = rep.size_approx - rep.lmin_lower;
  rep.slack_oma = rep.c_hybrid - rep.c_oma_opt;
  return rep;
}

}  // namespace leoisl
