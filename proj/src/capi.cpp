#include "leoisl.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"
#include "core/report.hpp"
#include "core/scenario.hpp"

namespace {

using nlohmann::json;
using namespace leoisl;

thread_local std::string g_last_error = "no error";

int status_of(Err kind) {
  switch (kind) {
    case Err::infeasible:
      return LEOISL_ERR_INFEASIBLE;
    case Err::search_aborted:
      return LEOISL_ERR_SEARCH_ABORTED;
    case Err::io:
    case Err::internal:
      return LEOISL_ERR_INTERNAL;
    default:
      return LEOISL_ERR_CONFIG;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return LEOISL_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LEOISL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return LEOISL_ERR_INTERNAL;
  }
}

json parse_opts(const char* opts_json, const std::vector<std::string>& allowed,
                const std::string& where) {
  if (!opts_json || !*opts_json) return json::object();
  json j;
  try {
    j = json::parse(opts_json);
  } catch (const json::exception& e) {
    fail(Err::config, where + " options: " + e.what());
  }
  if (!j.is_object()) fail(Err::config, where + " options must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      fail(Err::config,
           "unknown option \"" + it.key() + "\" for " + where);
  }
  return j;
}

bool json_format(const json& opts) {
  if (!opts.contains("format")) return false;
  const json& f = opts["format"];
  if (!f.is_string()) fail(Err::config, "format must be a string");
  const std::string s = f.get<std::string>();
  if (s == "csv") return false;
  if (s == "json") return true;
  fail(Err::config, "format must be \"csv\" or \"json\"");
}

std::optional<double> opt_epoch(const json& opts) {
  if (!opts.contains("epoch")) return std::nullopt;
  if (!opts["epoch"].is_number())
    fail(Err::config, "epoch option must be a number");
  return opts["epoch"].get<double>();
}

SearchMode parse_search_mode(const json& opts) {
  if (!opts.contains("search_mode")) return SearchMode::random_sample;
  if (!opts["search_mode"].is_string())
    fail(Err::config, "search_mode must be a string");
  const std::string s = opts["search_mode"].get<std::string>();
  if (s == "random-sample") return SearchMode::random_sample;
  if (s == "exhaustive") return SearchMode::exhaustive;
  if (s == "swap-heuristic") return SearchMode::swap_heuristic;
  fail(Err::config, "search_mode must be \"random-sample\", \"exhaustive\", "
                    "or \"swap-heuristic\"");
}

std::uint64_t parse_samples(const json& opts, std::uint64_t fallback) {
  if (!opts.contains("samples")) return fallback;
  if (!opts["samples"].is_number_unsigned() || opts["samples"] == 0)
    fail(Err::config, "samples must be a positive integer");
  return opts["samples"].get<std::uint64_t>();
}

bool parse_flag(const json& opts, const std::string& key) {
  if (!opts.contains(key)) return false;
  if (!opts[key].is_boolean()) fail(Err::config, key + " must be a boolean");
  return opts[key].get<bool>();
}

Scenario with_seed_override(const Scenario& base, const json& opts) {
  Scenario sc = base;
  if (opts.contains("seed")) {
    if (!opts["seed"].is_number_unsigned())
      fail(Err::config, "seed must be a nonnegative integer");
    sc.seed = opts["seed"].get<std::uint64_t>();
  }
  return sc;
}

void finish(char** summary_json, const json& summary) {
  if (summary_json) *summary_json = dup_string(summary.dump(2) + "\n");
}

json comparison_rows(const ComparisonRun& run) {
  json rows = json::array();
  for (const auto& res : run.results) {
    rows.push_back({{"scheme", res.scheme},
                    {"dof", res.dof == DofMode::uniform ? "uniform"
                                                        : "optimized"},
                    {"groups", res.n_groups},
                    {"c_sum", res.report.c_sum},
                    {"fairness", res.report.fairness}});
  }
  return rows;
}

// Emits one comparison run's files with an optional name suffix; returns the
// summary entry for that run.
json emit_comparison(const Scenario& sc, const ComparisonOptions& copts,
                     const std::string& out_dir, const std::string& suffix,
                     bool as_json, json* files) {
  ComparisonRun run = run_comparison(sc, copts);
  const char* ext = as_json ? ".json" : ".csv";
  const std::string summary_name = "summary" + suffix + ext;
  write_text_file(out_dir, summary_name,
                  as_json ? json_summary(sc, run) : csv_summary(sc, run));
  files->push_back(summary_name);
  for (const auto& res : run.results) {
    const std::string rates_name = "rates_" + res.scheme + suffix + ext;
    write_text_file(out_dir, rates_name,
                    as_json ? json_rates(sc, res.report, run.links)
                            : csv_rates(sc, res.report, run.links));
    files->push_back(rates_name);
    if (res.scheme.rfind("alg", 0) == 0) {
      std::vector<double> rhos;
      const int G = res.n_groups;
      if (res.dof == DofMode::uniform) {
        rhos.assign(G, 1.0 / G);
      } else {
        PulseModel pm = scenario_pulse(sc);
        std::vector<LinkParams> lps = to_link_params(run.links);
        std::vector<GroupChannel> gcs;
        for (const auto& g : res.groups) {
          std::vector<int> members = g;
          std::sort(members.begin(), members.end());
          std::vector<LinkParams> sub;
          for (int i : members) sub.push_back(lps[i]);
          gcs.push_back(group_channel(pm, sub, 1.0 / G, members));
        }
        rhos = hybrid_opt_dof(gcs).rhos;
      }
      const std::string part_name = "partition_" + res.scheme + suffix + ".json";
      write_text_file(out_dir, part_name,
                      partition_json(res.groups, rhos, res.dof, run.links));
      files->push_back(part_name);
    }
  }
  json entry;
  entry["epoch_s"] = run.epoch;
  entry["sigma2"] = run.sigma2;
  entry["links"] = run.links.size();
  entry["rows"] = comparison_rows(run);
  return entry;
}

}  // namespace

extern "C" {

const char* leoisl_version(void) { return "1.0.0"; }

const char* leoisl_last_error(void) { return g_last_error.c_str(); }

struct leoisl_scenario {
  Scenario sc;
};

int leoisl_scenario_from_json(const char* json_text, leoisl_scenario** out) {
  if (!json_text || !out) {
    g_last_error = "null argument";
    return LEOISL_ERR_CONFIG;
  }
  *out = nullptr;
  return guarded([&] {
    Scenario sc = scenario_from_json_text(json_text);
    *out = new leoisl_scenario{std::move(sc)};
  });
}

int leoisl_scenario_from_file(const char* path, leoisl_scenario** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    return LEOISL_ERR_CONFIG;
  }
  *out = nullptr;
  return guarded([&] {
    Scenario sc = scenario_from_file(path);
    *out = new leoisl_scenario{std::move(sc)};
  });
}

void leoisl_scenario_destroy(leoisl_scenario* sc) { delete sc; }

int leoisl_run_feasibility(const leoisl_scenario* sc, const char* opts_json,
                           const char* out_dir, char** summary_json) {
  if (!sc || !out_dir) {
    g_last_error = "null argument";
    return LEOISL_ERR_CONFIG;
  }
  return guarded([&] {
    json opts = parse_opts(opts_json, {"format"}, "feasibility");
    const bool as_json = json_format(opts);
    FeasibilityRun run = run_feasibility(sc->sc);
    json files = json::array();
    if (as_json) {
      write_text_file(out_dir, "timeline.json", json_timeline(sc->sc, run));
      files.push_back("timeline.json");
    } else {
      write_text_file(out_dir, "timeline.csv", csv_timeline(sc->sc, run));
      write_text_file(out_dir, "window_stats.csv",
                      csv_window_stats(sc->sc, run));
      files.push_back("timeline.csv");
      files.push_back("window_stats.csv");
    }
    int l_min = 0, l_max = 0;
    if (!run.stats.per_L.empty()) {
      l_min = run.stats.per_L.begin()->first;
      l_max = run.stats.per_L.rbegin()->first;
    }
    json summary;
    summary["scenario"] = scenario_hash_hex(sc->sc);
    summary["windows"] = run.timeline.size();
    summary["L_min"] = l_min;
    summary["L_max"] = l_max;
    summary["files"] = files;
    finish(summary_json, summary);
  });
}

int leoisl_run_doppler(const leoisl_scenario* sc, const char* opts_json,
                       const char* out_dir, char** summary_json) {
  if (!sc || !out_dir) {
    g_last_error = "null argument";
    return LEOISL_ERR_CONFIG;
  }
  return guarded([&] {
    json opts = parse_opts(opts_json, {"epoch", "format"}, "doppler");
    const bool as_json = json_format(opts);
    DopplerRun run = run_doppler_table(sc->sc, opt_epoch(opts));
    json files = json::array();
    const std::string name = as_json ? "doppler.json" : "doppler.csv";
    write_text_file(out_dir, name,
                    as_json ? json_doppler(sc->sc, run)
                            : csv_doppler(sc->sc, run));
    files.push_back(name);
    json summary;
    summary["scenario"] = scenario_hash_hex(sc->sc);
    summary["epoch_s"] = run.epoch;
    summary["links"] = run.links.size();
    summary["files"] = files;
    finish(summary_json, summary);
  });
}

int leoisl_run_comparison(const leoisl_scenario* sc, const char* opts_json,
                          const char* out_dir, char** summary_json) {
  if (!sc || !out_dir) {
    g_last_error = "null argument";
    return LEOISL_ERR_CONFIG;
  }
  return guarded([&] {
    json opts = parse_opts(
        opts_json,
        {"schemes", "search_mode", "samples", "seed", "allow_exhaustive",
         "epoch", "format", "sweep_S", "sweep_noise_figure"},
        "comparison");
    const bool as_json = json_format(opts);
    Scenario base = with_seed_override(sc->sc, opts);

    ComparisonOptions copts;
    if (opts.contains("schemes")) {
      if (!opts["schemes"].is_array())
        fail(Err::config, "schemes must be an array of names");
      for (const auto& s : opts["schemes"]) {
        if (!s.is_string()) fail(Err::config, "schemes entries must be strings");
        copts.schemes.push_back(s.get<std::string>());
      }
    }
    copts.search_mode = parse_search_mode(opts);
    copts.samples = parse_samples(opts, copts.samples);
    copts.allow_exhaustive = parse_flag(opts, "allow_exhaustive");
    copts.epoch_override = opt_epoch(opts);

    const bool sweep_s = opts.contains("sweep_S");
    const bool sweep_nf = opts.contains("sweep_noise_figure");
    if (sweep_s && sweep_nf)
      fail(Err::config, "only one sweep may be given per run");

    json summary;
    summary["scenario"] = scenario_hash_hex(base);
    json files = json::array();
    if (!sweep_s && !sweep_nf) {
      json entry = emit_comparison(base, copts, out_dir, "", as_json, &files);
      summary.update(entry);
    } else if (sweep_s) {
      if (!opts["sweep_S"].is_array() || opts["sweep_S"].empty())
        fail(Err::config, "sweep_S must be a nonempty array of integers");
      json runs = json::array();
      for (const auto& v : opts["sweep_S"]) {
        if (!v.is_number_integer() || v.get<int>() < 2)
          fail(Err::config, "sweep_S entries must be integers >= 2");
        Scenario swept = base;
        swept.S = v.get<int>();
        json entry = emit_comparison(swept, copts, out_dir,
                                     "_S" + std::to_string(v.get<int>()),
                                     as_json, &files);
        entry["S"] = v.get<int>();
        runs.push_back(entry);
      }
      summary["runs"] = runs;
    } else {
      if (!opts["sweep_noise_figure"].is_array() ||
          opts["sweep_noise_figure"].empty())
        fail(Err::config,
             "sweep_noise_figure must be a nonempty array of dB values");
      json runs = json::array();
      for (const auto& v : opts["sweep_noise_figure"]) {
        if (!v.is_number())
          fail(Err::config, "sweep_noise_figure entries must be numbers");
        Scenario swept = base;
        swept.noise_figure_db = v.get<double>();
        json entry = emit_comparison(
            swept, copts, out_dir, "_nf" + format_number(v.get<double>()),
            as_json, &files);
        entry["noise_figure_db"] = v.get<double>();
        runs.push_back(entry);
      }
      summary["runs"] = runs;
    }
    summary["files"] = files;
    finish(summary_json, summary);
  });
}

int leoisl_run_partition(const leoisl_scenario* sc, const char* opts_json,
                         const char* out_dir, char** summary_json) {
  if (!sc || !out_dir) {
    g_last_error = "null argument";
    return LEOISL_ERR_CONFIG;
  }
  return guarded([&] {
    json opts = parse_opts(opts_json,
                           {"algorithm", "dof", "search_mode", "samples",
                            "seed", "allow_exhaustive", "epoch", "format"},
                           "partition");
    const bool as_json = json_format(opts);
    Scenario base = with_seed_override(sc->sc, opts);

    PartitionOptions popts;
    if (opts.contains("algorithm")) {
      if (!opts["algorithm"].is_string())
        fail(Err::config, "algorithm must be a string");
      popts.algorithm = opts["algorithm"].get<std::string>();
    }
    if (opts.contains("dof")) {
      if (!opts["dof"].is_string())
        fail(Err::config, "dof must be \"uniform\" or \"optimized\"");
      const std::string d = opts["dof"].get<std::string>();
      if (d == "uniform")
        popts.dof_mode = DofMode::uniform;
      else if (d == "optimized")
        popts.dof_mode = DofMode::optimized;
      else
        fail(Err::config, "dof must be \"uniform\" or \"optimized\"");
    }
    popts.search_mode = parse_search_mode(opts);
    popts.samples = parse_samples(opts, popts.samples);
    popts.allow_exhaustive = parse_flag(opts, "allow_exhaustive");
    popts.epoch_override = opt_epoch(opts);

    PartitionRun run = run_partition(base, popts);
    json files = json::array();
    write_text_file(out_dir, "partition.json",
                    partition_json(run.groups, run.rhos, run.dof_mode,
                                   run.links));
    files.push_back("partition.json");
    const std::string rates_name = as_json ? "rates.json" : "rates.csv";
    write_text_file(out_dir, rates_name,
                    as_json ? json_rates(base, run.report, run.links)
                            : csv_rates(base, run.report, run.links));
    files.push_back(rates_name);

    json groups = json::array();
    for (const auto& g : run.groups) {
      json ids = json::array();
      for (int pos : g) ids.push_back(run.links[pos].link_id);
      groups.push_back(ids);
    }
    json summary;
    summary["scenario"] = scenario_hash_hex(base);
    summary["epoch_s"] = run.epoch;
    summary["algorithm"] = run.algorithm;
    summary["groups"] = groups;
    summary["c_sum"] = run.report.c_sum;
    summary["fairness"] = run.report.fairness;
    summary["objective"] = run.objective;
    summary["candidates_evaluated"] = run.candidates_evaluated;
    summary["files"] = files;
    finish(summary_json, summary);
  });
}

void leoisl_string_free(char* s) { std::free(s); }

}  // extern "C"
