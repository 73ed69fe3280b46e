#pragma once

#include <vector>

#include "channel.hpp"

namespace leoisl {

enum class DofMode { uniform, optimized };

struct DofAllocation {
  std::vector<double> rhos;
  DofMode mode = DofMode::uniform;
};

// Rate of one group under MMSE-SIC: rho * log2 det(I + C C^H / (s2 rho)).
double group_rate(const GroupChannel& gc, double s2);

// Sum over groups; the DoF fractions must sum to one.
double sum_capacity(const std::vector<GroupChannel>& groups, double s2);

// All links in a single group with the full DoF budget.
double noma_capacity(const PulseModel& pm, const std::vector<LinkParams>& links,
                     double s2);

// Orthogonal access: each link alone in its share of the DoF budget.
// Depends only on link powers, not on Doppler shifts.
double oma_capacity(const std::vector<double>& amps2,
                    const std::vector<double>& rhos, double E_p, double s2);

// Exact OMA sum-rate maximizer: rho_l proportional to |A_l|^2.
DofAllocation oma_opt_dof(const std::vector<double>& amps2);

// Hybrid allocation: rho_k proportional to the mean squared singular value
// of C_k, i.e. ||C_k||_F^2 / L_k.
DofAllocation hybrid_opt_dof(const std::vector<GroupChannel>& groups);

struct RateReport {
  struct Row {
    int link = 0;   // position in the scenario link list
    int group = 0;  // group index
    int stage = 0;  // decode stage within the group
    double rate = 0.0;
  };
  std::vector<Row> rows;
  std::vector<double> group_rates;
  double c_sum = 0.0;
  double fairness = 0.0;
  std::vector<int> dup_nu_groups;  // groups holding near-identical Dopplers
};

// Per-link rates under ideal (genie-aided) max-SINR ordered SIC.
RateReport individual_rates(const std::vector<GroupChannel>& groups, double s2);

// Jain's index (sum r)^2 / (n sum r^2).
double fairness(const std::vector<double>& rates);

struct TwoSatSinrs {
  double sinr1 = 0.0;      // first-decoded stream, interference present
  double sinr2 = 0.0;      // last-decoded stream, interference-free
  double sinr1_floor = 0.0;  // worst case, attained when nu1 == nu2
};

// Closed-form stage SINRs for a two-link group with a diagonal effective
// pulse matrix.
TwoSatSinrs two_sat_oracle(cd A1, cd A2, double nu1, double nu2,
                           const PulseModel& pm, double s2);

struct JensenReport {
  double c_hybrid = 0.0;
  double c_noma = 0.0;
  double c_oma_opt = 0.0;
  double amgm_bound = 0.0;   // rank-weighted concavity bound
  double size_approx = 0.0;  // same bound with group sizes in place of ranks
  double lmin_lower = 0.0;   // lower bound scaled by the smallest group size
  double slack_noma = 0.0;   // c_noma - c_hybrid, nonnegative
  double slack_amgm = 0.0;   // amgm_bound - c_hybrid, nonnegative
  double slack_lmin = 0.0;   // size_approx - lmin_lower, nonnegative
  double slack_oma = 0.0;    // c_hybrid - c_oma_opt, reported unasserted
};

// Evaluates the capacity bound chain for a given grouping and returns the
// slack of each inequality.
JensenReport jensen_bounds_check(const std::vector<GroupChannel>& groups,
                                 const PulseModel& pm, double s2);

}  // namespace leoisl
