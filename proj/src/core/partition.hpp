#pragma once

#include <cstdint>
#include <vector>

#include "capacity.hpp"
#include "channel.hpp"

namespace leoisl {

// Sum over groups of squared deviations of the Doppler shifts from the
// group mean (unnormalized within-group variance objective).
double variance_objective(const std::vector<std::vector<int>>& groups,
                          const std::vector<double>& f_hz);

struct AnticlusterTrace {
  std::vector<double> objective_after_swap;
  int passes = 0;
};

// Balanced Doppler-spreading heuristic: round-robin initialization over the
// ascending link order, then repeated best-improvement swap passes. A swap
// is inadmissible when it would place two links with near-identical Doppler
// shifts (within 1e-6 of the total spread, at least 1e-6 Hz) in one group.
std::vector<std::vector<int>> anticluster(const std::vector<double>& f_hz,
                                          int n_groups, bool single_pass = false,
                                          AnticlusterTrace* trace = nullptr);

// Seed skeleton for the fairness search: one group per designated seed link.
// Positions not listed stay unassigned (they are the search's free slots).
std::vector<std::vector<int>> prepartition(const std::vector<int>& seed_positions,
                                           int n_links);

// Rates, sum capacity, and fairness of a concrete partition.
RateReport evaluate_partition(const std::vector<std::vector<int>>& groups,
                              const std::vector<LinkParams>& links,
                              const PulseModel& pm, double s2, DofMode mode);

enum class SearchMode { exhaustive, random_sample, swap_heuristic };

struct SearchConfig {
  SearchMode mode = SearchMode::random_sample;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  DofMode dof_mode = DofMode::uniform;
  int group_size_cap = -1;  // -1: use the pulse oversampling factor
  bool allow_exhaustive = false;
  double exhaustive_gate = 4.2e6;  // abort above this candidate count
};

struct SearchOutcome {
  std::vector<std::vector<int>> groups;
  RateReport report;
  std::uint64_t candidates_evaluated = 0;
  double space_size = 0.0;  // G^(number of free links)
};

// Fairness-maximizing assignment of free links to seeded groups. Exhaustive
// mode enumerates every assignment (guarded by the cost gate); sampling mode
// draws seeded uniform assignments plus the swap heuristic's partition as an
// extra candidate; swap-heuristic mode returns that partition directly.
// Ties break toward higher sum capacity, then the lexicographically smaller
// canonical encoding.
SearchOutcome max_fairness_search(const std::vector<LinkParams>& links,
                                  const PulseModel& pm, double s2,
                                  const std::vector<int>& seed_positions,
                                  const SearchConfig& cfg);

}  // namespace leoisl
