#include "partition.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "errors.hpp"
#include "receiver.hpp"
#include "rng.hpp"

namespace leoisl {

namespace {

constexpr double kLog2e = 1.4426950408889634073599246810019;

double log2_1p(double x) { return std::log1p(x) * kLog2e; }

std::vector<std::vector<int>> canonical_groups(
    std::vector<std::vector<int>> groups) {
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              return a.front() < b.front();
            });
  return groups;
}

bool canonical_less(const std::vector<std::vector<int>>& a,
                    const std::vector<std::vector<int>>& b) {
  return a < b;
}

// Stage SINRs by Cholesky on the Gram submatrix; avoids forming channel
// matrices in the search hot path.
struct GroupEval {
  double rate = 0.0;
  double sum_r = 0.0;
  double sum_r2 = 0.0;
};

GroupEval sic_eval_gram(const Eigen::MatrixXcd& gram,
                        const std::vector<int>& members, double rho,
                        double s2) {
  const int n = static_cast<int>(members.size());
  Eigen::MatrixXcd W(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      W(i, j) = gram(members[i], members[j]) / rho;

  GroupEval ev;
  std::vector<int> active(n);
  for (int i = 0; i < n; ++i) active[i] = i;
  for (int stage = 0; stage < n; ++stage) {
    const int m = static_cast<int>(active.size());
    Eigen::MatrixXcd B(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) B(i, j) = W(active[i], active[j]);
    B.diagonal().array() += s2;
    Eigen::LLT<Eigen::MatrixXcd> llt(B);
    if (llt.info() != Eigen::Success)
      fail(Err::singular, "SINR normal matrix is not positive definite");
    Eigen::MatrixXcd inv = llt.solve(Eigen::MatrixXcd::Identity(m, m));
    int best = 0;
    double best_sinr = -1.0;
    for (int i = 0; i < m; ++i) {
      double sinr = 1.0 / (s2 * inv(i, i).real()) - 1.0;
      if (sinr < 0.0) sinr = 0.0;
      if (sinr > best_sinr) {
        best_sinr = sinr;
        best = i;
      }
    }
    double r = rho * log2_1p(best_sinr);
    ev.rate += r;
    ev.sum_r += r;
    ev.sum_r2 += r * r;
    active.erase(active.begin() + best);
  }
  return ev;
}

}  // namespace

double variance_objective(const std::vector<std::vector<int>>& groups,
                          const std::vector<double>& f_hz) {
  double total = 0.0;
  for (const auto& g : groups) {
    if (g.empty()) fail(Err::shape, "empty group");
    double mean = 0.0;
    for (int i : g) {
      if (i < 0 || i >= static_cast<int>(f_hz.size()))
        fail(Err::index, "group member out of range");
      mean += f_hz[i];
    }
    mean /= static_cast<double>(g.size());
    for (int i : g) {
      double d = f_hz[i] - mean;
      total += d * d;
    }
  }
  return total;
}

std::vector<std::vector<int>> anticluster(const std::vector<double>& f_hz,
                                          int n_groups, bool single_pass,
                                          AnticlusterTrace* trace) {
  const int L = static_cast<int>(f_hz.size());
  if (n_groups < 1 || n_groups > L)
    fail(Err::domain, "group count must lie in [1, number of links]");

  std::vector<int> assign(L);
  std::vector<double> sums(n_groups, 0.0);
  std::vector<int> sizes(n_groups, 0);
  for (int i = 0; i < L; ++i) {
    assign[i] = i % n_groups;
    sums[assign[i]] += f_hz[i];
    sizes[assign[i]] += 1;
  }

  double fmin = f_hz.empty() ? 0.0 : f_hz[0], fmax = fmin;
  for (double f : f_hz) {
    fmin = std::min(fmin, f);
    fmax = std::max(fmax, f);
  }
  const double dup_tol = 1e-6 * std::max(fmax - fmin, 1.0);
  auto duplicates = [&](int i, int j) {
    return std::abs(f_hz[i] - f_hz[j]) < dup_tol;
  };
  // Swap (i, j) may not co-locate a link with a near-duplicate Doppler.
  auto admissible = [&](int i, int j) {
    for (int m = 0; m < L; ++m) {
      if (m == i || m == j) continue;
      if (assign[m] == assign[j] && duplicates(i, m)) return false;
      if (assign[m] == assign[i] && duplicates(j, m)) return false;
    }
    return true;
  };

  double sumf2 = 0.0;
  for (double f : f_hz) sumf2 += f * f;
  auto packed = [&] {
    double q = 0.0;
    for (int g = 0; g < n_groups; ++g)
      q += sums[g] * sums[g] / static_cast<double>(sizes[g]);
    return q;
  };
  double objective = sumf2 - packed();

  if (trace) {
    trace->objective_after_swap.clear();
    trace->passes = 0;
  }

  bool improved = true;
  int passes = 0;
  const int max_passes = 1000;
  while (improved && passes < max_passes) {
    improved = false;
    ++passes;
    for (int i = 0; i < L; ++i) {
      double best_delta = 0.0;
      int best_j = -1;
      const int a = assign[i];
      for (int j = 0; j < L; ++j) {
        if (j == i || assign[j] == a) continue;
        const int b = assign[j];
        if (!admissible(i, j)) continue;
        const double sa = sums[a] - f_hz[i] + f_hz[j];
        const double sb = sums[b] - f_hz[j] + f_hz[i];
        const double delta =
            (sums[a] * sums[a] - sa * sa) / static_cast<double>(sizes[a]) +
            (sums[b] * sums[b] - sb * sb) / static_cast<double>(sizes[b]);
        if (delta > best_delta) {
          best_delta = delta;
          best_j = j;
        }
      }
      if (best_j >= 0) {
        const int b = assign[best_j];
        sums[a] += f_hz[best_j] - f_hz[i];
        sums[b] += f_hz[i] - f_hz[best_j];
        std::swap(assign[i], assign[best_j]);
        objective += best_delta;
        improved = true;
        if (trace) trace->objective_after_swap.push_back(objective);
      }
    }
    if (single_pass) break;
  }
  if (trace) trace->passes = passes;

  std::vector<std::vector<int>> groups(n_groups);
  for (int i = 0; i < L; ++i) groups[assign[i]].push_back(i);
  return groups;
}

std::vector<std::vector<int>> prepartition(const std::vector<int>& seed_positions,
                                           int n_links) {
  if (seed_positions.empty())
    fail(Err::domain,
         "no seed links available; choose the group count explicitly");
  std::vector<std::vector<int>> groups;
  std::vector<bool> seen(n_links, false);
  for (int s : seed_positions) {
    if (s < 0 || s >= n_links) fail(Err::index, "seed position out of range");
    if (seen[s]) fail(Err::domain, "duplicate seed position");
    seen[s] = true;
    groups.push_back({s});
  }
  return groups;
}

RateReport evaluate_partition(const std::vector<std::vector<int>>& groups,
                              const std::vector<LinkParams>& links,
                              const PulseModel& pm, double s2, DofMode mode) {
  const int L = static_cast<int>(links.size());
  if (groups.empty()) fail(Err::shape, "no groups given");
  std::vector<bool> seen(L, false);
  int covered = 0;
  for (const auto& g : groups) {
    if (g.empty()) fail(Err::shape, "empty group");
    for (int i : g) {
      if (i < 0 || i >= L) fail(Err::index, "group member out of range");
      if (seen[i]) fail(Err::allocation, "link assigned to two groups");
      seen[i] = true;
      ++covered;
    }
  }
  if (covered != L) fail(Err::allocation, "partition does not cover all links");

  const double rho0 = 1.0 / static_cast<double>(groups.size());
  std::vector<GroupChannel> gcs;
  gcs.reserve(groups.size());
  for (const auto& g : groups) {
    std::vector<int> members = g;
    std::sort(members.begin(), members.end());
    std::vector<LinkParams> sub;
    sub.reserve(members.size());
    for (int i : members) sub.push_back(links[i]);
    gcs.push_back(group_channel(pm, sub, rho0, members));
  }
  if (mode == DofMode::optimized) {
    DofAllocation alloc = hybrid_opt_dof(gcs);
    for (std::size_t k = 0; k < gcs.size(); ++k) gcs[k].rho = alloc.rhos[k];
  }
  return individual_rates(gcs, s2);
}

SearchOutcome max_fairness_search(const std::vector<LinkParams>& links,
                                  const PulseModel& pm, double s2,
                                  const std::vector<int>& seed_positions,
                                  const SearchConfig& cfg) {
  const int L = static_cast<int>(links.size());
  const int G = static_cast<int>(seed_positions.size());
  prepartition(seed_positions, L);  // validates the seed list
  const int cap = cfg.group_size_cap < 0 ? pm.S : cfg.group_size_cap;
  if (cap < 1) fail(Err::domain, "group size cap must be positive");
  if (static_cast<long long>(G) * cap < L)
    fail(Err::infeasible, "group size cap cannot accommodate all links");

  std::vector<double> f_all;
  f_all.reserve(L);
  for (const auto& lk : links) f_all.push_back(lk.f_hz);

  if (cfg.mode == SearchMode::swap_heuristic) {
    SearchOutcome out;
    out.groups = canonical_groups(anticluster(f_all, G));
    out.report = evaluate_partition(out.groups, links, pm, s2, cfg.dof_mode);
    out.candidates_evaluated = 1;
    out.space_size = std::pow(static_cast<double>(G),
                              static_cast<double>(L - G));
    return out;
  }

  std::vector<bool> is_seed(L, false);
  for (int s : seed_positions) is_seed[s] = true;
  std::vector<int> free_slots;
  for (int i = 0; i < L; ++i)
    if (!is_seed[i]) free_slots.push_back(i);
  const int F = static_cast<int>(free_slots.size());
  const double space = std::pow(static_cast<double>(G),
                                static_cast<double>(F));

  if (cfg.mode == SearchMode::exhaustive && space > cfg.exhaustive_gate &&
      !cfg.allow_exhaustive) {
    fail(Err::search_aborted,
         "exhaustive search space holds " + std::to_string(space) +
             " assignments, above the cost gate of " +
             std::to_string(cfg.exhaustive_gate) +
             "; use sampling mode or raise the gate");
  }

  // Per-link effective columns and the full Gram matrix, shared by every
  // candidate evaluation.
  std::vector<double> nus;
  nus.reserve(L);
  for (const auto& lk : links) nus.push_back(lk.nu);
  Eigen::MatrixXcd cols = pm.P_eff * vandermonde(nus, pm.S);
  for (int l = 0; l < L; ++l) cols.col(l) *= links[l].A;
  const Eigen::MatrixXcd gram = cols.adjoint() * cols;

  const bool memo_ok = cfg.dof_mode == DofMode::uniform && F <= 56 && G <= 127;
  std::unordered_map<std::uint64_t, GroupEval> memo;
  if (memo_ok) memo.reserve(4096);
  const double rho_uni = 1.0 / static_cast<double>(G);

  double best_f = -1.0, best_c = -1.0;
  std::vector<std::vector<int>> best_groups;
  std::uint64_t evaluated = 0;

  std::vector<std::vector<int>> scratch_groups(G);
  auto eval_groups = [&](const std::vector<std::vector<int>>& groups) {
    double sum_r = 0.0, sum_r2 = 0.0, c_sum = 0.0;
    if (cfg.dof_mode == DofMode::uniform) {
      for (const auto& g : groups) {
        GroupEval ev = sic_eval_gram(gram, g, rho_uni, s2);
        sum_r += ev.sum_r;
        sum_r2 += ev.sum_r2;
        c_sum += ev.rate;
      }
    } else {
      std::vector<double> chi(groups.size());
      double chi_total = 0.0;
      for (std::size_t k = 0; k < groups.size(); ++k) {
        double q = 0.0;
        for (int m : groups[k]) q += gram(m, m).real();
        chi[k] = q / static_cast<double>(groups[k].size());
        chi_total += chi[k];
      }
      for (std::size_t k = 0; k < groups.size(); ++k) {
        GroupEval ev =
            sic_eval_gram(gram, groups[k], chi[k] / chi_total, s2);
        sum_r += ev.sum_r;
        sum_r2 += ev.sum_r2;
        c_sum += ev.rate;
      }
    }
    double fair = sum_r2 > 0.0
                      ? sum_r * sum_r / (static_cast<double>(L) * sum_r2)
                      : 0.0;
    return std::pair<double, double>(fair, c_sum);
  };

  auto consider = [&](const std::vector<std::vector<int>>& groups, double fair,
                      double c_sum) {
    if (fair > best_f || (fair == best_f && c_sum > best_c)) {
      best_f = fair;
      best_c = c_sum;
      best_groups = canonical_groups(groups);
      return;
    }
    if (fair == best_f && c_sum == best_c) {
      auto cand = canonical_groups(groups);
      if (best_groups.empty() || canonical_less(cand, best_groups))
        best_groups = std::move(cand);
    }
  };

  auto eval_assignment = [&](const std::vector<int>& digits) {
    std::vector<int> sizes(G, 1);
    for (int j = 0; j < F; ++j) {
      if (++sizes[digits[j]] > cap) return false;  // over the cap: skip
    }
    double sum_r = 0.0, sum_r2 = 0.0, c_sum = 0.0;
    if (memo_ok) {
      std::vector<std::uint64_t> masks(G, 0);
      for (int j = 0; j < F; ++j)
        masks[digits[j]] |= std::uint64_t{1} << j;
      for (int k = 0; k < G; ++k) {
        const std::uint64_t key =
            (static_cast<std::uint64_t>(k) << F) | masks[k];
        auto it = memo.find(key);
        if (it == memo.end()) {
          std::vector<int> members;
          members.reserve(sizes[k]);
          for (int j = 0; j < F; ++j)
            if (masks[k] >> j & 1u) members.push_back(free_slots[j]);
          members.push_back(seed_positions[k]);
          std::sort(members.begin(), members.end());
          it = memo.emplace(key, sic_eval_gram(gram, members, rho_uni, s2))
                   .first;
        }
        sum_r += it->second.sum_r;
        sum_r2 += it->second.sum_r2;
        c_sum += it->second.rate;
      }
      double fair = sum_r2 > 0.0
                        ? sum_r * sum_r / (static_cast<double>(L) * sum_r2)
                        : 0.0;
      if (fair > best_f || (fair == best_f && c_sum >= best_c)) {
        for (auto& g : scratch_groups) g.clear();
        for (int k = 0; k < G; ++k)
          scratch_groups[k].push_back(seed_positions[k]);
        for (int j = 0; j < F; ++j)
          scratch_groups[digits[j]].push_back(free_slots[j]);
        consider(scratch_groups, fair, c_sum);
      }
    } else {
      for (auto& g : scratch_groups) g.clear();
      for (int k = 0; k < G; ++k)
        scratch_groups[k].push_back(seed_positions[k]);
      for (int j = 0; j < F; ++j)
        scratch_groups[digits[j]].push_back(free_slots[j]);
      for (auto& g : scratch_groups) std::sort(g.begin(), g.end());
      auto [fair, c_sum2] = eval_groups(scratch_groups);
      consider(scratch_groups, fair, c_sum2);
    }
    return true;
  };

  std::vector<int> digits(F, 0);
  if (cfg.mode == SearchMode::exhaustive) {
    while (true) {
      if (eval_assignment(digits)) ++evaluated;
      int pos = 0;
      while (pos < F && ++digits[pos] == G) digits[pos++] = 0;
      if (pos == F) break;
    }
  } else {
    for (std::uint64_t i = 0; i < cfg.samples; ++i) {
      Rng r(cfg.seed, i);
      for (int j = 0; j < F; ++j)
        digits[j] = static_cast<int>(r.below(static_cast<std::uint64_t>(G)));
      if (eval_assignment(digits)) ++evaluated;
    }
    // The swap heuristic's partition competes as one extra candidate.
    auto heur = anticluster(f_all, G);
    bool fits = true;
    for (const auto& g : heur)
      if (static_cast<int>(g.size()) > cap) fits = false;
    if (fits) {
      auto groups = canonical_groups(heur);
      auto [fair, c_sum] = eval_groups(groups);
      consider(groups, fair, c_sum);
      ++evaluated;
    }
  }

  if (best_groups.empty())
    fail(Err::infeasible, "no candidate satisfied the group size cap");

  SearchOutcome out;
  out.groups = best_groups;
  out.report = evaluate_partition(best_groups, links, pm, s2, cfg.dof_mode);
  out.candidates_evaluated = evaluated;
  out.space_size = space;
  return out;
}

}  // namespace leoisl
