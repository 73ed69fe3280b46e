#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "core/capacity.hpp"
#include "core/receiver.hpp"
#include "core/rng.hpp"

using namespace leoisl;

namespace {

constexpr double kT = 2.5e-7;

PulseModel unit_diag_pm(int S) {
  return PulseModel::diagonal(S, kT, Eigen::VectorXd::Ones(S));
}

std::vector<LinkParams> random_links(int L, Rng& rng, double nu_shared = -1.0) {
  std::vector<LinkParams> links(L);
  for (int l = 0; l < L; ++l) {
    links[l].A = std::polar(0.2 + 1.5 * rng.u01(), 2.0 * M_PI * rng.u01());
    links[l].nu = nu_shared >= 0.0 ? nu_shared : rng.u01();
  }
  return links;
}

double direct_group_rate(const GroupChannel& gc, double s2) {
  Eigen::MatrixXcd M = gc.C * gc.C.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M,
                                                     Eigen::EigenvaluesOnly);
  double r = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    r += std::log2(1.0 + std::max(0.0, es.eigenvalues()(i)) / (s2 * gc.rho));
  return gc.rho * r;
}

}  // namespace

TEST_CASE("singleton group rate closed form") {
  Eigen::VectorXd p(4);
  p << 0.5, 1.0, 1.5, 2.0;
  PulseModel pm = PulseModel::diagonal(4, kT, p);
  std::vector<LinkParams> links(1);
  links[0].A = cd(0.9, 0.3);
  links[0].nu = 0.37;
  const double rho = 0.4;
  GroupChannel gc = group_channel(pm, links, rho);
  const double s2 = 0.13;
  const double expect =
      rho * std::log2(1.0 + std::norm(links[0].A) * pm.E_p / (s2 * rho));
  CHECK(group_rate(gc, s2) == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(group_rate(gc, 0.0), Error);
}

TEST_CASE("group rate equals the log-determinant on either side") {
  Rng rng(2024);
  PulseModel pm = build_pulse(4, kT, PulseShape::triangular, 0.0, kT / 8.0);
  // More links than chips.
  auto wide = random_links(6, rng);
  GroupChannel gw = group_channel(pm, wide, 0.7);
  const double s2 = 0.4;
  CHECK(group_rate(gw, s2) ==
        doctest::Approx(direct_group_rate(gw, s2)).epsilon(1e-9));
  // Fewer links than chips.
  PulseModel pm8 = build_pulse(8, kT, PulseShape::triangular, 0.0, kT / 16.0);
  auto tall = random_links(3, rng);
  GroupChannel gt = group_channel(pm8, tall, 1.0);
  CHECK(group_rate(gt, s2) ==
        doctest::Approx(direct_group_rate(gt, s2)).epsilon(1e-9));
}

TEST_CASE("sum capacity validates the DoF budget") {
  Rng rng(5);
  PulseModel pm = unit_diag_pm(4);
  GroupChannel g1 = group_channel(pm, random_links(2, rng), 0.5);
  GroupChannel g2 = group_channel(pm, random_links(2, rng), 0.6);
  CHECK_THROWS_AS(sum_capacity({g1, g2}, 0.1), Error);
  try {
    sum_capacity({g1, g2}, 0.1);
  } catch (const Error& e) {
    CHECK(e.kind() == Err::allocation);
  }
  GroupChannel g2b = group_channel(pm, random_links(2, rng), 0.5);
  const double s2 = 0.1;
  CHECK(sum_capacity({g1, g2b}, s2) ==
        doctest::Approx(group_rate(g1, s2) + group_rate(g2b, s2))
            .epsilon(1e-12));
}

TEST_CASE("single-group access is the group rate with the full budget") {
  Rng rng(6);
  PulseModel pm = build_pulse(8, kT, PulseShape::triangular, 0.0, kT / 16.0);
  auto links = random_links(5, rng);
  GroupChannel gc = group_channel(pm, links, 1.0);
  const double s2 = 0.2;
  CHECK(noma_capacity(pm, links, s2) ==
        doctest::Approx(group_rate(gc, s2)).epsilon(1e-12));
}

TEST_CASE("orthogonal access with optimized DoF matches joint access when "
          "dopplers coincide") {
  const int S = 8;
  PulseModel pm = unit_diag_pm(S);
  std::vector<LinkParams> links(3);
  const double amps[3] = {0.3, 0.9, 1.7};
  for (int l = 0; l < 3; ++l) {
    links[l].A = cd(amps[l], 0.0);
    links[l].nu = 0.21;
  }
  const double s2 = 0.05;
  std::vector<double> amps2;
  for (double a : amps) amps2.push_back(a * a);
  DofAllocation opt = oma_opt_dof(amps2);
  double c_oma = oma_capacity(amps2, opt.rhos, pm.E_p, s2);
  double c_joint = noma_capacity(pm, links, s2);
  CHECK(c_oma == doctest::Approx(c_joint).epsilon(1e-9));
}

TEST_CASE("optimized orthogonal DoF dominates random allocations") {
  std::vector<double> amps2 = {0.1, 0.7, 1.3, 2.9};
  const double E_p = 8.0;
  const double s2 = 0.3;
  DofAllocation opt = oma_opt_dof(amps2);
  double best = oma_capacity(amps2, opt.rhos, E_p, s2);
  Rng rng(404);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> rhos(4);
    double total = 0.0;
    for (double& r : rhos) {
      r = -std::log(rng.u01_pos());
      total += r;
    }
    for (double& r : rhos) r /= total;
    CHECK(best >= oma_capacity(amps2, rhos, E_p, s2) - 1e-12);
  }
  CHECK_THROWS_AS(oma_opt_dof(std::vector<double>{1.0, 0.0}), Error);
}

TEST_CASE("hybrid DoF reduces to the orthogonal rule for singletons") {
  const int S = 8;
  PulseModel pm = unit_diag_pm(S);
  const double amps[3] = {0.4, 1.0, 2.2};
  const double nus[3] = {0.11, 0.52, 0.83};
  std::vector<GroupChannel> groups;
  std::vector<double> amps2;
  for (int l = 0; l < 3; ++l) {
    std::vector<LinkParams> one(1);
    one[0].A = cd(amps[l], 0.0);
    one[0].nu = nus[l];
    groups.push_back(group_channel(pm, one, 1.0, {l}));
    amps2.push_back(amps[l] * amps[l]);
  }
  DofAllocation hybrid = hybrid_opt_dof(groups);
  DofAllocation oma = oma_opt_dof(amps2);
  REQUIRE(hybrid.rhos.size() == 3);
  for (int l = 0; l < 3; ++l)
    CHECK(hybrid.rhos[l] == doctest::Approx(oma.rhos[l]).epsilon(1e-12));
}

TEST_CASE("two-link closed-form stage sinrs") {
  Rng rng(777);
  for (int trial = 0; trial < 200; ++trial) {
    const int S = 8;
    Eigen::VectorXd p(S);
    for (int s = 0; s < S; ++s) p[s] = 0.3 + 1.2 * rng.u01();
    PulseModel pm = PulseModel::diagonal(S, kT, p);
    std::vector<LinkParams> links(2);
    links[0].A = std::polar(0.2 + 1.8 * rng.u01(), 2.0 * M_PI * rng.u01());
    links[1].A = std::polar(0.2 + 1.8 * rng.u01(), 2.0 * M_PI * rng.u01());
    links[0].nu = rng.u01();
    links[1].nu = rng.u01();
    const double s2 = 0.01 + rng.u01();
    TwoSatSinrs oracle = two_sat_oracle(links[0].A, links[1].A, links[0].nu,
                                        links[1].nu, pm, s2);
    GroupChannel gc = group_channel(pm, links, 1.0);
    Eigen::VectorXd sinrs = sinr_per_stream(gc.H(), s2);
    CHECK(sinrs(0) == doctest::Approx(oracle.sinr1).epsilon(1e-9));
    // After ideal cancellation of the first stream the second is alone.
    Eigen::MatrixXcd h2 = gc.H().col(1);
    CHECK(sinr_per_stream(h2, s2)(0) ==
          doctest::Approx(oracle.sinr2).epsilon(1e-9));
  }
}

TEST_CASE("two-link sinr floor is attained exactly at equal dopplers") {
  const int S = 8;
  PulseModel pm = unit_diag_pm(S);
  cd A1 = cd(1.4, 0.0), A2 = cd(0.0, 0.8);
  const double s2 = 0.23;
  TwoSatSinrs same = two_sat_oracle(A1, A2, 0.4, 0.4, pm, s2);
  CHECK(same.sinr1 == doctest::Approx(same.sinr1_floor).epsilon(1e-9));
  TwoSatSinrs apart = two_sat_oracle(A1, A2, 0.1, 0.35, pm, s2);
  CHECK(apart.sinr1 > apart.sinr1_floor * (1.0 + 1e-6));
  CHECK(apart.sinr2 == doctest::Approx(std::norm(A2) * pm.E_p / s2)
                           .epsilon(1e-12));
}

TEST_CASE("per-link rate report is consistent") {
  Rng rng(90);
  PulseModel pm = build_pulse(8, kT, PulseShape::triangular, 0.0, kT / 16.0);
  auto l1 = random_links(3, rng);
  auto l2 = random_links(2, rng, 0.44);  // shared doppler, flags the group
  GroupChannel g1 = group_channel(pm, l1, 0.6, {0, 1, 2});
  GroupChannel g2 = group_channel(pm, l2, 0.4, {3, 4});
  const double s2 = 0.7;
  RateReport rep = individual_rates({g1, g2}, s2);

  REQUIRE(rep.rows.size() == 5);
  REQUIRE(rep.group_rates.size() == 2);
  // The stage decomposition reproduces each group rate exactly.
  CHECK(rep.group_rates[0] ==
        doctest::Approx(group_rate(g1, s2)).epsilon(1e-9));
  CHECK(rep.group_rates[1] ==
        doctest::Approx(group_rate(g2, s2)).epsilon(1e-9));
  CHECK(rep.c_sum == doctest::Approx(rep.group_rates[0] + rep.group_rates[1])
                         .epsilon(1e-12));
  // Every link appears exactly once, stages run 0..Lk-1 inside each group.
  std::vector<int> seen;
  for (const auto& row : rep.rows) seen.push_back(row.link);
  std::sort(seen.begin(), seen.end());
  CHECK(seen == std::vector<int>({0, 1, 2, 3, 4}));
  std::vector<double> rates;
  for (const auto& row : rep.rows) rates.push_back(row.rate);
  CHECK(rep.fairness == doctest::Approx(fairness(rates)).epsilon(1e-12));
  CHECK(rep.dup_nu_groups == std::vector<int>({1}));
}

TEST_CASE("fairness index") {
  CHECK(fairness({2.0, 2.0, 2.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fairness({5.0, 0.0, 0.0, 0.0}) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(fairness({0.0, 0.0}), Error);
  try {
    fairness({0.0, 0.0});
  } catch (const Error& e) {
    CHECK(e.kind() == Err::undefined_fairness);
  }
  CHECK_THROWS_AS(fairness({1.0, -0.1}), Error);
  CHECK_THROWS_AS(fairness(std::vector<double>{}), Error);
}

TEST_CASE("capacity bound chain has nonnegative slack") {
  Rng rng(333);
  PulseModel pm = build_pulse(8, kT, PulseShape::triangular, 0.0, kT / 16.0);
  for (int trial = 0; trial < 30; ++trial) {
    auto links = random_links(8, rng);
    // Partition into sizes 3/3/2 by draw order.
    std::vector<std::vector<int>> parts = {{0, 1, 2}, {3, 4, 5}, {6, 7}};
    std::vector<std::vector<LinkParams>> subs;
    std::vector<GroupChannel> groups;
    for (const auto& part : parts) {
      std::vector<LinkParams> sub;
      for (int idx : part) sub.push_back(links[idx]);
      subs.push_back(sub);
      groups.push_back(group_channel(pm, sub, 1.0 / 3.0, part));
    }
    // Re-share the budget with the optimized hybrid rule.
    DofAllocation dof = hybrid_opt_dof(groups);
    for (std::size_t k = 0; k < groups.size(); ++k)
      groups[k] = group_channel(pm, subs[k], dof.rhos[k], parts[k]);
    JensenReport rep = jensen_bounds_check(groups, pm, 0.4);
    CHECK(rep.slack_noma >= -1e-9);
    CHECK(rep.slack_amgm >= -1e-9);
    CHECK(rep.slack_lmin >= -1e-9);
  }
}

TEST_CASE("joint-access bound is tight for proportionally shared groups with "
          "a common doppler") {
  const int S = 8;
  PulseModel pm = unit_diag_pm(S);
  Rng rng(1234);
  auto links = random_links(6, rng, 0.3);
  std::vector<std::vector<int>> parts = {{0, 1, 2}, {3, 4}, {5}};
  // Share the budget proportionally to the group channel powers.
  std::vector<double> chi;
  double total = 0.0;
  for (const auto& part : parts) {
    double c = 0.0;
    for (int idx : part) c += std::norm(links[idx].A);
    chi.push_back(c);
    total += c;
  }
  std::vector<GroupChannel> groups;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    std::vector<LinkParams> sub;
    for (int idx : parts[k]) sub.push_back(links[idx]);
    groups.push_back(group_channel(pm, sub, chi[k] / total, parts[k]));
  }
  JensenReport rep = jensen_bounds_check(groups, pm, 0.15);
  CHECK(std::abs(rep.slack_noma) <= 1e-9);
}

TEST_CASE("concavity bound is tight for equal-singular-value groups") {
  const int S = 4;
  PulseModel pm = unit_diag_pm(S);
  Rng rng(555);
  std::vector<std::vector<int>> parts = {{0, 1, 2, 3}, {4, 5, 6, 7}};
  const double mags[2] = {0.8, 1.3};
  std::vector<LinkParams> links(8);
  for (int k = 0; k < 2; ++k)
    for (int q = 0; q < S; ++q) {
      LinkParams& lp = links[parts[k][q]];
      lp.A = std::polar(mags[k], 2.0 * M_PI * rng.u01());
      lp.nu = double(q) / S;  // orthogonal doppler grid
    }
  std::vector<GroupChannel> groups;
  const double rhos[2] = {0.35, 0.65};
  for (int k = 0; k < 2; ++k) {
    std::vector<LinkParams> sub;
    for (int idx : parts[k]) sub.push_back(links[idx]);
    groups.push_back(group_channel(pm, sub, rhos[k], parts[k]));
  }
  JensenReport rep = jensen_bounds_check(groups, pm, 0.2);
  CHECK(std::abs(rep.slack_amgm) <= 1e-9);
}
