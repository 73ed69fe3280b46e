#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "capacity.hpp"
#include "channel.hpp"
#include "feasibility.hpp"
#include "orbit.hpp"
#include "partition.hpp"

namespace leoisl {

struct PulseSpec {
  PulseShape shape = PulseShape::triangular;
  double rolloff = 0.22;   // raised-cosine only
  double eps_frac = 0.5;   // sampling offset as a fraction of the chip period
};

struct Scenario {
  WalkerConfig walker;
  LinkBudget budget;
  SatIndex sink;
  double symbol_rate_baud = 0.0;
  int S = 0;
  double noise_figure_db = 0.0;
  double noise_bandwidth_hz = 1.0;
  PulseSpec pulse;
  double observation_s = 0.0;
  bool epoch_auto = true;
  double epoch_value = 0.0;  // explicit epoch when epoch_auto is false
  int epoch_L = 0;           // target link count when epoch_auto is true
  std::uint64_t seed = 1;
  double timeline_dt_s = 0.05;
  double edge_tol_s = 1e-3;
  double T_ref_K = 290.0;
  double P_ref_w = 1.0;

  double symbol_period_s() const { return 1.0 / symbol_rate_baud; }
  double chip_period_s() const { return symbol_period_s() / S; }
};

// Strict parser: unknown keys anywhere are a config error. Angles arrive in
// degrees, gains in dBi, and powers either as plain watts or as strings with
// an explicit unit suffix ("10 W", "-120 dBm").
Scenario scenario_from_json_text(const std::string& text);
Scenario scenario_from_file(const std::string& path);

// FNV-1a over the canonical serialized form; embedded in output headers so
// every table is traceable to its configuration.
std::uint64_t scenario_hash(const Scenario& sc);
std::string scenario_hash_hex(const Scenario& sc);

double scenario_noise_variance(const Scenario& sc);
PulseModel scenario_pulse(const Scenario& sc);

struct LinkInfo {
  SatIndex sat;
  int constellation_id = 0;  // 1-based 1D index
  int link_id = 0;           // 1-based row in ascending constellation order
  double d_km = 0.0;
  double rx_power_w = 0.0;
  double f_hz = 0.0;
  double nu = 0.0;
  cd A;
};

std::vector<LinkInfo> build_links(const Scenario& sc, double epoch);
std::vector<LinkParams> to_link_params(const std::vector<LinkInfo>& links);

std::vector<FeasibilityWindow> scenario_timeline(const Scenario& sc);
double resolve_epoch(const Scenario& sc,
                     const std::vector<FeasibilityWindow>& timeline);

struct FeasibilityRun {
  std::vector<FeasibilityWindow> timeline;
  WindowStats stats;
};

FeasibilityRun run_feasibility(const Scenario& sc);

struct DopplerRun {
  double epoch = 0.0;
  std::vector<LinkInfo> links;
};

DopplerRun run_doppler_table(const Scenario& sc,
                             std::optional<double> epoch_override);

struct SchemeResult {
  std::string scheme;
  DofMode dof = DofMode::uniform;
  int n_groups = 0;
  RateReport report;
  std::vector<std::vector<int>> groups;  // 0-based link positions
};

struct ComparisonOptions {
  std::vector<std::string> schemes;  // empty: all seven
  SearchMode search_mode = SearchMode::random_sample;
  std::uint64_t samples = 1000000;
  bool allow_exhaustive = false;
  std::optional<double> epoch_override;
};

struct ComparisonRun {
  double epoch = 0.0;
  double sigma2 = 0.0;
  std::vector<LinkInfo> links;
  std::vector<SchemeResult> results;
};

// Known scheme names, in the canonical summary row order.
const std::vector<std::string>& known_schemes();

ComparisonRun run_comparison(const Scenario& sc, const ComparisonOptions& opts);

struct PartitionOptions {
  std::string algorithm = "alg2";  // "alg1" (swap heuristic) or "alg2" (search)
  DofMode dof_mode = DofMode::uniform;
  SearchMode search_mode = SearchMode::random_sample;
  std::uint64_t samples = 1000000;
  bool allow_exhaustive = false;
  std::optional<double> epoch_override;
};

struct PartitionRun {
  double epoch = 0.0;
  std::string algorithm;
  std::vector<std::vector<int>> groups;  // 0-based link positions
  std::vector<double> rhos;
  DofMode dof_mode = DofMode::uniform;
  RateReport report;
  double objective = 0.0;  // Doppler-spread objective of the partition
  std::uint64_t candidates_evaluated = 0;
  std::vector<LinkInfo> links;
};

PartitionRun run_partition(const Scenario& sc, const PartitionOptions& opts);

// Positions (into the epoch link list) of the sink-plane links; these seed
// the fairness search and set the group count for both algorithms.
std::vector<int> sink_plane_positions(const Scenario& sc,
                                      const std::vector<LinkInfo>& links);

}  // namespace leoisl
