#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace leoisl {

namespace {

using nlohmann::json;

constexpr double kDegToRad = M_PI / 180.0;

void reject_unknown(const json& j, const std::vector<std::string>& allowed,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      fail(Err::config, "unknown key \"" + it.key() + "\" in " + where);
  }
}

const json& require(const json& j, const std::string& key,
                    const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    fail(Err::config, "missing key \"" + key + "\" in " + where);
  return *it;
}

double as_number(const json& j, const std::string& what) {
  if (!j.is_number())
    fail(Err::config, what + " must be a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& what) {
  if (!j.is_number_integer())
    fail(Err::config, what + " must be an integer");
  return j.get<int>();
}

// Powers are accepted as plain watts or as strings with an explicit unit:
// "10 W", "200 mW", "-120 dBm", "-90 dBW".
double parse_power_w(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string())
    fail(Err::config, what + " must be a number (watts) or a unit string");
  std::istringstream in(j.get<std::string>());
  double value = 0.0;
  std::string unit;
  if (!(in >> value >> unit))
    fail(Err::config, what + ": expected \"<value> <unit>\"");
  std::string rest;
  if (in >> rest) fail(Err::config, what + ": trailing content after unit");
  if (unit == "W") return value;
  if (unit == "mW") return value * 1e-3;
  if (unit == "dBm") return std::pow(10.0, value / 10.0) * 1e-3;
  if (unit == "dBW") return std::pow(10.0, value / 10.0);
  fail(Err::config, what + ": unknown power unit \"" + unit + "\"");
}

Scenario parse_scenario(const json& root) {
  if (!root.is_object()) fail(Err::config, "scenario must be a JSON object");
  reject_unknown(root,
                 {"walker", "budget", "sink", "symbol_rate_baud",
                  "oversampling", "noise_figure_db", "noise_bandwidth_hz",
                  "pulse", "observation_s", "epoch", "seed", "timeline_dt_s",
                  "edge_tol_s"},
                 "scenario");

  Scenario sc;

  const json& w = require(root, "walker", "scenario");
  reject_unknown(w,
                 {"planes", "sats_per_plane", "altitude_km", "inclination_deg",
                  "phasing", "period_s", "earth_radius_km"},
                 "walker");
  double R = w.contains("earth_radius_km")
                 ? as_number(w["earth_radius_km"], "walker.earth_radius_km")
                 : 6378.0;
  sc.walker = WalkerConfig::make(
      as_int(require(w, "planes", "walker"), "walker.planes"),
      as_int(require(w, "sats_per_plane", "walker"), "walker.sats_per_plane"),
      as_number(require(w, "altitude_km", "walker"), "walker.altitude_km"),
      as_number(require(w, "inclination_deg", "walker"),
                "walker.inclination_deg") *
          kDegToRad,
      as_int(require(w, "phasing", "walker"), "walker.phasing"),
      as_number(require(w, "period_s", "walker"), "walker.period_s"), R);

  const json& b = require(root, "budget", "scenario");
  reject_unknown(b,
                 {"carrier_hz", "tx_power", "tx_gain_dbi", "rx_gain_dbi",
                  "beamwidth_deg", "sensitivity"},
                 "budget");
  sc.budget.f_c_hz = as_number(require(b, "carrier_hz", "budget"),
                               "budget.carrier_hz");
  sc.budget.P_tx_w = parse_power_w(require(b, "tx_power", "budget"),
                                   "budget.tx_power");
  sc.budget.G_tx = std::pow(
      10.0, as_number(require(b, "tx_gain_dbi", "budget"),
                      "budget.tx_gain_dbi") /
                10.0);
  sc.budget.G_rx = std::pow(
      10.0, as_number(require(b, "rx_gain_dbi", "budget"),
                      "budget.rx_gain_dbi") /
                10.0);
  sc.budget.P_sens_w = parse_power_w(require(b, "sensitivity", "budget"),
                                     "budget.sensitivity");
  if (b.contains("beamwidth_deg")) {
    sc.budget.beta_rad =
        as_number(b["beamwidth_deg"], "budget.beamwidth_deg") * kDegToRad;
  } else {
    // Half-beamwidth of an ideal cone antenna with the given boresight gain.
    if (sc.budget.G_tx <= 2.0)
      fail(Err::config,
           "budget.beamwidth_deg required when tx gain is 3 dBi or less");
    sc.budget.beta_rad = std::acos(1.0 - 2.0 / sc.budget.G_tx);
  }
  sc.budget.validate();

  const json& sk = require(root, "sink", "scenario");
  reject_unknown(sk, {"plane", "slot"}, "sink");
  sc.sink.p = as_int(require(sk, "plane", "sink"), "sink.plane");
  sc.sink.n = as_int(require(sk, "slot", "sink"), "sink.slot");
  check_index(sc.walker, sc.sink);

  sc.symbol_rate_baud = as_number(require(root, "symbol_rate_baud", "scenario"),
                                  "symbol_rate_baud");
  if (!(sc.symbol_rate_baud > 0.0))
    fail(Err::config, "symbol_rate_baud must be positive");
  sc.S = as_int(require(root, "oversampling", "scenario"), "oversampling");
  if (sc.S < 2) fail(Err::config, "oversampling must be at least 2");
  sc.noise_figure_db = as_number(require(root, "noise_figure_db", "scenario"),
                                 "noise_figure_db");
  if (root.contains("noise_bandwidth_hz")) {
    sc.noise_bandwidth_hz =
        as_number(root["noise_bandwidth_hz"], "noise_bandwidth_hz");
    if (!(sc.noise_bandwidth_hz > 0.0))
      fail(Err::config, "noise_bandwidth_hz must be positive");
  }

  const json& pl = require(root, "pulse", "scenario");
  reject_unknown(pl, {"shape", "rolloff", "eps_frac"}, "pulse");
  std::string shape = require(pl, "shape", "pulse").is_string()
                          ? pl["shape"].get<std::string>()
                          : "";
  if (shape == "triangular")
    sc.pulse.shape = PulseShape::triangular;
  else if (shape == "raised-cosine")
    sc.pulse.shape = PulseShape::raised_cosine;
  else
    fail(Err::config, "pulse.shape must be \"triangular\" or \"raised-cosine\"");
  if (pl.contains("rolloff"))
    sc.pulse.rolloff = as_number(pl["rolloff"], "pulse.rolloff");
  if (pl.contains("eps_frac"))
    sc.pulse.eps_frac = as_number(pl["eps_frac"], "pulse.eps_frac");
  if (!(sc.pulse.eps_frac > 0.0 && sc.pulse.eps_frac < 1.0))
    fail(Err::config, "pulse.eps_frac must lie in (0, 1)");

  sc.observation_s = root.contains("observation_s")
                         ? as_number(root["observation_s"], "observation_s")
                         : sc.walker.period_s();
  if (!(sc.observation_s > 0.0))
    fail(Err::config, "observation_s must be positive");

  const json& ep = require(root, "epoch", "scenario");
  if (ep.is_number()) {
    sc.epoch_auto = false;
    sc.epoch_value = ep.get<double>();
  } else if (ep.is_string()) {
    const std::string s = ep.get<std::string>();
    const std::string prefix = "auto-L=";
    if (s.rfind(prefix, 0) != 0)
      fail(Err::config, "epoch must be a number or \"auto-L=<count>\"");
    try {
      sc.epoch_L = std::stoi(s.substr(prefix.size()));
    } catch (const std::exception&) {
      fail(Err::config, "epoch: cannot parse the link count in \"" + s + "\"");
    }
    if (sc.epoch_L < 1) fail(Err::config, "epoch link count must be positive");
    sc.epoch_auto = true;
  } else {
    fail(Err::config, "epoch must be a number or \"auto-L=<count>\"");
  }

  if (root.contains("seed")) {
    const json& sd = root["seed"];
    if (!sd.is_number_unsigned())
      fail(Err::config, "seed must be a nonnegative integer");
    sc.seed = sd.get<std::uint64_t>();
  }
  if (root.contains("timeline_dt_s")) {
    sc.timeline_dt_s = as_number(root["timeline_dt_s"], "timeline_dt_s");
    if (!(sc.timeline_dt_s > 0.0))
      fail(Err::config, "timeline_dt_s must be positive");
  }
  if (root.contains("edge_tol_s")) {
    sc.edge_tol_s = as_number(root["edge_tol_s"], "edge_tol_s");
    if (!(sc.edge_tol_s > 0.0))
      fail(Err::config, "edge_tol_s must be positive");
  }
  return sc;
}

json canonical_json(const Scenario& sc) {
  json root;
  root["walker"] = {{"planes", sc.walker.P},
                    {"sats_per_plane", sc.walker.N},
                    {"altitude_km", sc.walker.h_km},
                    {"inclination_rad", sc.walker.alpha_rad},
                    {"phasing", sc.walker.F_phasing},
                    {"period_s", sc.walker.period_s()},
                    {"earth_radius_km", sc.walker.R_earth_km}};
  root["budget"] = {{"carrier_hz", sc.budget.f_c_hz},
                    {"tx_power_w", sc.budget.P_tx_w},
                    {"tx_gain", sc.budget.G_tx},
                    {"rx_gain", sc.budget.G_rx},
                    {"beamwidth_rad", sc.budget.beta_rad},
                    {"sensitivity_w", sc.budget.P_sens_w}};
  root["sink"] = {{"plane", sc.sink.p}, {"slot", sc.sink.n}};
  root["symbol_rate_baud"] = sc.symbol_rate_baud;
  root["oversampling"] = sc.S;
  root["noise_figure_db"] = sc.noise_figure_db;
  root["noise_bandwidth_hz"] = sc.noise_bandwidth_hz;
  root["pulse"] = {{"shape", sc.pulse.shape == PulseShape::triangular
                                 ? "triangular"
                                 : "raised-cosine"},
                   {"rolloff", sc.pulse.rolloff},
                   {"eps_frac", sc.pulse.eps_frac}};
  root["observation_s"] = sc.observation_s;
  if (sc.epoch_auto)
    root["epoch"] = "auto-L=" + std::to_string(sc.epoch_L);
  else
    root["epoch"] = sc.epoch_value;
  root["seed"] = sc.seed;
  root["timeline_dt_s"] = sc.timeline_dt_s;
  root["edge_tol_s"] = sc.edge_tol_s;
  return root;
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    fail(Err::config, std::string("scenario JSON parse error: ") + e.what());
  }
  return parse_scenario(root);
}

Scenario scenario_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::io, "cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str());
}

std::uint64_t scenario_hash(const Scenario& sc) {
  const std::string text = canonical_json(sc).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string scenario_hash_hex(const Scenario& sc) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(scenario_hash(sc)));
  return buf;
}

double scenario_noise_variance(const Scenario& sc) {
  return kBoltzmann * sc.T_ref_K * sc.noise_bandwidth_hz *
         std::pow(10.0, sc.noise_figure_db / 10.0) / sc.P_ref_w;
}

PulseModel scenario_pulse(const Scenario& sc) {
  const double T = sc.symbol_period_s();
  const double eps = sc.pulse.eps_frac * sc.chip_period_s();
  return build_pulse(sc.S, T, sc.pulse.shape, sc.pulse.rolloff, eps);
}

std::vector<LinkInfo> build_links(const Scenario& sc, double epoch) {
  std::vector<SatIndex> sats =
      feasible_set(sc.walker, sc.budget, sc.sink, epoch);
  if (sats.empty())
    fail(Err::infeasible, "no feasible links at the requested epoch");
  std::vector<LinkInfo> out;
  out.reserve(sats.size());
  const double T_c = sc.chip_period_s();
  int row = 0;
  for (const SatIndex& s : sats) {
    LinkInfo li;
    li.sat = s;
    li.constellation_id = to_1d(sc.walker, s);
    li.link_id = ++row;
    li.d_km = distance_km(sc.walker, s, sc.sink, epoch);
    li.rx_power_w = received_power_w(sc.budget, li.d_km);
    li.f_hz = doppler_shift_hz(sc.walker, s, sc.sink, epoch, sc.budget.f_c_hz);
    li.nu = normalized_doppler(li.f_hz, T_c);
    Rng phase_rng(sc.seed, static_cast<std::uint64_t>(li.constellation_id));
    li.A = link_amplitude(sc.budget, li.d_km, 2.0 * M_PI * phase_rng.u01(),
                          sc.P_ref_w);
    out.push_back(li);
  }
  return out;
}

std::vector<LinkParams> to_link_params(const std::vector<LinkInfo>& links) {
  std::vector<LinkParams> out;
  out.reserve(links.size());
  for (const auto& li : links) {
    LinkParams lp;
    lp.A = li.A;
    lp.f_hz = li.f_hz;
    lp.nu = li.nu;
    out.push_back(lp);
  }
  return out;
}

std::vector<FeasibilityWindow> scenario_timeline(const Scenario& sc) {
  return feasibility_timeline(sc.walker, sc.budget, sc.sink, sc.observation_s,
                              sc.timeline_dt_s, sc.edge_tol_s);
}

double resolve_epoch(const Scenario& sc,
                     const std::vector<FeasibilityWindow>& timeline) {
  if (!sc.epoch_auto) return sc.epoch_value;
  for (const auto& w : timeline) {
    if (w.L != sc.epoch_L) continue;
    // Midpoint, snapped to a round 10 s mark when one falls inside the window.
    const double mid = 0.5 * (w.t_start + w.t_end);
    const double snapped = std::round(mid / 10.0) * 10.0;
    return (snapped >= w.t_start && snapped <= w.t_end) ? snapped : mid;
  }
  fail(Err::infeasible, "no feasibility window with " +
                            std::to_string(sc.epoch_L) + " links");
}

FeasibilityRun run_feasibility(const Scenario& sc) {
  FeasibilityRun run;
  run.timeline = scenario_timeline(sc);
  if (run.timeline.empty())
    fail(Err::infeasible, "feasible set is empty over the whole observation");
  run.stats = window_stats(run.timeline);
  return run;
}

DopplerRun run_doppler_table(const Scenario& sc,
                             std::optional<double> epoch_override) {
  DopplerRun run;
  if (epoch_override) {
    run.epoch = *epoch_override;
  } else if (!sc.epoch_auto) {
    run.epoch = sc.epoch_value;
  } else {
    run.epoch = resolve_epoch(sc, scenario_timeline(sc));
  }
  run.links = build_links(sc, run.epoch);
  return run;
}

std::vector<int> sink_plane_positions(const Scenario& sc,
                                      const std::vector<LinkInfo>& links) {
  std::vector<int> out;
  for (std::size_t i = 0; i < links.size(); ++i)
    if (links[i].sat.p == sc.sink.p) out.push_back(static_cast<int>(i));
  return out;
}

const std::vector<std::string>& known_schemes() {
  static const std::vector<std::string> names = {
      "pure-NOMA",    "alg1-opt", "alg2-opt",     "alg2-uni",
      "alg1-uni",     "pure-OMA-opt", "pure-OMA-uni"};
  return names;
}

namespace {

RateReport oma_report(const std::vector<LinkInfo>& links,
                      const std::vector<double>& rhos, double E_p, double s2) {
  RateReport rep;
  std::vector<double> rates;
  const double kLog2e = 1.4426950408889634;
  for (std::size_t l = 0; l < links.size(); ++l) {
    const double a2 = std::norm(links[l].A);
    const double r =
        rhos[l] * std::log1p(E_p * a2 / (s2 * rhos[l])) * kLog2e;
    RateReport::Row row;
    row.link = static_cast<int>(l);
    row.group = static_cast<int>(l);
    row.stage = 0;
    row.rate = r;
    rep.rows.push_back(row);
    rep.group_rates.push_back(r);
    rep.c_sum += r;
    rates.push_back(r);
  }
  rep.fairness = fairness(rates);
  return rep;
}

std::vector<std::vector<int>> singleton_groups(int L) {
  std::vector<std::vector<int>> g(L);
  for (int i = 0; i < L; ++i) g[i] = {i};
  return g;
}

}  // namespace

ComparisonRun run_comparison(const Scenario& sc, const ComparisonOptions& opts) {
  ComparisonRun run;
  if (opts.epoch_override) {
    run.epoch = *opts.epoch_override;
  } else if (!sc.epoch_auto) {
    run.epoch = sc.epoch_value;
  } else {
    run.epoch = resolve_epoch(sc, scenario_timeline(sc));
  }
  run.links = build_links(sc, run.epoch);
  run.sigma2 = scenario_noise_variance(sc);

  std::vector<std::string> wanted =
      opts.schemes.empty() ? known_schemes() : opts.schemes;
  for (const auto& name : wanted) {
    if (std::find(known_schemes().begin(), known_schemes().end(), name) ==
        known_schemes().end())
      fail(Err::config, "unknown scheme \"" + name + "\"");
  }
  // Keep the canonical row order regardless of how the subset was listed.
  std::vector<std::string> ordered;
  for (const auto& name : known_schemes())
    if (std::find(wanted.begin(), wanted.end(), name) != wanted.end())
      ordered.push_back(name);

  const PulseModel pm = scenario_pulse(sc);
  const std::vector<LinkParams> lps = to_link_params(run.links);
  const int L = static_cast<int>(lps.size());
  const double s2 = run.sigma2;

  std::vector<int> seeds = sink_plane_positions(sc, run.links);
  std::vector<double> f_all;
  for (const auto& li : run.links) f_all.push_back(li.f_hz);

  for (const auto& name : ordered) {
    SchemeResult res;
    res.scheme = name;
    if (name == "pure-NOMA") {
      res.dof = DofMode::uniform;
      res.groups = {std::vector<int>(L)};
      for (int i = 0; i < L; ++i) res.groups[0][i] = i;
      res.report = evaluate_partition(res.groups, lps, pm, s2,
                                      DofMode::uniform);
    } else if (name == "pure-OMA-uni" || name == "pure-OMA-opt") {
      std::vector<double> amps2;
      for (const auto& li : run.links) amps2.push_back(std::norm(li.A));
      std::vector<double> rhos;
      if (name == "pure-OMA-uni") {
        res.dof = DofMode::uniform;
        rhos.assign(L, 1.0 / L);
      } else {
        res.dof = DofMode::optimized;
        rhos = oma_opt_dof(amps2).rhos;
      }
      res.groups = singleton_groups(L);
      res.report = oma_report(run.links, rhos, pm.E_p, s2);
    } else if (name == "alg1-uni" || name == "alg1-opt") {
      res.dof = name == "alg1-opt" ? DofMode::optimized : DofMode::uniform;
      const int G = seeds.empty()
                        ? (L + pm.S - 1) / pm.S
                        : static_cast<int>(seeds.size());
      res.groups = anticluster(f_all, G);
      res.report = evaluate_partition(res.groups, lps, pm, s2, res.dof);
    } else {  // alg2-uni / alg2-opt
      res.dof = name == "alg2-opt" ? DofMode::optimized : DofMode::uniform;
      SearchConfig cfg;
      cfg.mode = opts.search_mode;
      cfg.samples = opts.samples;
      cfg.seed = sc.seed;
      cfg.dof_mode = res.dof;
      cfg.allow_exhaustive = opts.allow_exhaustive;
      SearchOutcome so = max_fairness_search(lps, pm, s2, seeds, cfg);
      res.groups = so.groups;
      res.report = so.report;
    }
    res.n_groups = static_cast<int>(res.groups.size());
    run.results.push_back(std::move(res));
  }
  return run;
}

PartitionRun run_partition(const Scenario& sc, const PartitionOptions& opts) {
  PartitionRun run;
  if (opts.epoch_override) {
    run.epoch = *opts.epoch_override;
  } else if (!sc.epoch_auto) {
    run.epoch = sc.epoch_value;
  } else {
    run.epoch = resolve_epoch(sc, scenario_timeline(sc));
  }
  run.links = build_links(sc, run.epoch);
  run.algorithm = opts.algorithm;
  run.dof_mode = opts.dof_mode;

  const PulseModel pm = scenario_pulse(sc);
  const std::vector<LinkParams> lps = to_link_params(run.links);
  const double s2 = scenario_noise_variance(sc);
  std::vector<int> seeds = sink_plane_positions(sc, run.links);
  std::vector<double> f_all;
  for (const auto& li : run.links) f_all.push_back(li.f_hz);

  if (opts.algorithm == "alg1") {
    const int G = seeds.empty()
                      ? (static_cast<int>(lps.size()) + pm.S - 1) / pm.S
                      : static_cast<int>(seeds.size());
    run.groups = anticluster(f_all, G);
    run.report = evaluate_partition(run.groups, lps, pm, s2, opts.dof_mode);
    run.candidates_evaluated = 1;
  } else if (opts.algorithm == "alg2") {
    SearchConfig cfg;
    cfg.mode = opts.search_mode;
    cfg.samples = opts.samples;
    cfg.seed = sc.seed;
    cfg.dof_mode = opts.dof_mode;
    cfg.allow_exhaustive = opts.allow_exhaustive;
    SearchOutcome so = max_fairness_search(lps, pm, s2, seeds, cfg);
    run.groups = so.groups;
    run.report = so.report;
    run.candidates_evaluated = so.candidates_evaluated;
  } else {
    fail(Err::config, "algorithm must be \"alg1\" or \"alg2\"");
  }
  run.objective = variance_objective(run.groups, f_all);

  const int G = static_cast<int>(run.groups.size());
  if (opts.dof_mode == DofMode::uniform) {
    run.rhos.assign(G, 1.0 / G);
  } else {
    std::vector<GroupChannel> gcs;
    for (const auto& g : run.groups) {
      std::vector<int> members = g;
      std::sort(members.begin(), members.end());
      std::vector<LinkParams> sub;
      for (int i : members) sub.push_back(lps[i]);
      gcs.push_back(group_channel(pm, sub, 1.0 / G, members));
    }
    run.rhos = hybrid_opt_dof(gcs).rhos;
  }
  return run;
}

}  // namespace leoisl
