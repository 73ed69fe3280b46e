#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leoisl.h"

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

struct CommonArgs {
  std::string scenario_path;
  std::string out_dir = "out";
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--scenario", args->scenario_path, "scenario JSON file")
      ->required();
  cmd->add_option("--out", args->out_dir, "output directory");
  cmd->add_option("--format", args->format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

int run(const CommonArgs& args, const std::string& opts,
        int (*fn)(const leoisl_scenario*, const char*, const char*, char**)) {
  leoisl_scenario* sc = nullptr;
  int rc = leoisl_scenario_from_file(args.scenario_path.c_str(), &sc);
  if (rc != LEOISL_OK) {
    std::fprintf(stderr, "error: %s\n", leoisl_last_error());
    return rc;
  }
  char* summary = nullptr;
  rc = fn(sc, opts.c_str(), args.out_dir.c_str(), &summary);
  if (rc != LEOISL_OK) {
    std::fprintf(stderr, "error: %s\n", leoisl_last_error());
  } else if (summary) {
    std::fputs(summary, stdout);
  }
  leoisl_string_free(summary);
  leoisl_scenario_destroy(sc);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inter-satellite link feasibility, Doppler, and capacity studies"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(leoisl_version()));

  CommonArgs feas_args;
  CLI::App* feas = app.add_subcommand("feasibility",
                                      "feasibility timeline and window stats");
  add_common(feas, &feas_args);

  CommonArgs dop_args;
  double dop_epoch = 0.0;
  CLI::App* dop = app.add_subcommand("doppler", "Doppler table at an epoch");
  add_common(dop, &dop_args);
  CLI::Option* dop_epoch_opt =
      dop->add_option("--epoch", dop_epoch, "epoch in seconds (default: auto)");

  CommonArgs cmp_args;
  std::vector<std::string> schemes;
  std::string search_mode;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  bool allow_exhaustive = false;
  double cmp_epoch = 0.0;
  std::vector<int> sweep_s;
  std::vector<double> sweep_nf;
  CLI::App* cmp = app.add_subcommand("compare",
                                     "multi-scheme capacity comparison");
  add_common(cmp, &cmp_args);
  cmp->add_option("--schemes", schemes,
                  "scheme subset (default: all seven)")
      ->delimiter(',');
  cmp->add_option("--search-mode", search_mode,
                  "random-sample, exhaustive, or swap-heuristic")
      ->check(CLI::IsMember({"random-sample", "exhaustive", "swap-heuristic"}));
  CLI::Option* cmp_samples =
      cmp->add_option("--samples", samples, "sampled candidates");
  CLI::Option* cmp_seed = cmp->add_option("--seed", seed, "seed override");
  cmp->add_flag("--allow-exhaustive", allow_exhaustive,
                "lift the exhaustive-search cost gate");
  CLI::Option* cmp_epoch_opt =
      cmp->add_option("--epoch", cmp_epoch, "epoch in seconds (default: auto)");
  cmp->add_option("--sweep-S", sweep_s, "oversampling sweep values")
      ->delimiter(',');
  cmp->add_option("--sweep-noise-figure", sweep_nf,
                  "noise figure sweep values (dB)")
      ->delimiter(',');

  CommonArgs par_args;
  std::string algorithm = "alg2";
  std::string dof = "uniform";
  std::string par_search_mode;
  std::uint64_t par_samples = 0;
  std::uint64_t par_seed = 0;
  bool par_allow_exhaustive = false;
  double par_epoch = 0.0;
  CLI::App* par = app.add_subcommand("partition", "single partition study");
  add_common(par, &par_args);
  par->add_option("--algorithm", algorithm, "alg1 or alg2")
      ->check(CLI::IsMember({"alg1", "alg2"}));
  par->add_option("--dof", dof, "uniform or optimized")
      ->check(CLI::IsMember({"uniform", "optimized"}));
  par->add_option("--search-mode", par_search_mode,
                  "random-sample, exhaustive, or swap-heuristic")
      ->check(CLI::IsMember({"random-sample", "exhaustive", "swap-heuristic"}));
  CLI::Option* par_samples_opt =
      par->add_option("--samples", par_samples, "sampled candidates");
  CLI::Option* par_seed_opt = par->add_option("--seed", par_seed, "seed override");
  par->add_flag("--allow-exhaustive", par_allow_exhaustive,
                "lift the exhaustive-search cost gate");
  CLI::Option* par_epoch_opt =
      par->add_option("--epoch", par_epoch, "epoch in seconds (default: auto)");

  CLI11_PARSE(app, argc, argv);

  if (feas->parsed()) {
    std::string opts = "{\"format\":" + quote(feas_args.format) + "}";
    return run(feas_args, opts, leoisl_run_feasibility);
  }

  if (dop->parsed()) {
    std::string opts = "{\"format\":" + quote(dop_args.format);
    if (dop_epoch_opt->count()) opts += ",\"epoch\":" + std::to_string(dop_epoch);
    opts += "}";
    return run(dop_args, opts, leoisl_run_doppler);
  }

  if (cmp->parsed()) {
    std::string opts = "{\"format\":" + quote(cmp_args.format);
    if (!schemes.empty()) {
      opts += ",\"schemes\":[";
      for (std::size_t i = 0; i < schemes.size(); ++i) {
        if (i) opts += ',';
        opts += quote(schemes[i]);
      }
      opts += "]";
    }
    if (!search_mode.empty()) opts += ",\"search_mode\":" + quote(search_mode);
    if (cmp_samples->count()) opts += ",\"samples\":" + std::to_string(samples);
    if (cmp_seed->count()) opts += ",\"seed\":" + std::to_string(seed);
    if (allow_exhaustive) opts += ",\"allow_exhaustive\":true";
    if (cmp_epoch_opt->count()) opts += ",\"epoch\":" + std::to_string(cmp_epoch);
    auto int_array = [](const std::vector<int>& v) {
      std::string s = "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
      }
      return s + "]";
    };
    if (!sweep_s.empty()) opts += ",\"sweep_S\":" + int_array(sweep_s);
    if (!sweep_nf.empty()) {
      opts += ",\"sweep_noise_figure\":[";
      for (std::size_t i = 0; i < sweep_nf.size(); ++i) {
        if (i) opts += ',';
        opts += std::to_string(sweep_nf[i]);
      }
      opts += "]";
    }
    opts += "}";
    return run(cmp_args, opts, leoisl_run_comparison);
  }

  std::string opts = "{\"format\":" + quote(par_args.format) +
                     ",\"algorithm\":" + quote(algorithm) +
                     ",\"dof\":" + quote(dof);
  if (!par_search_mode.empty())
    opts += ",\"search_mode\":" + quote(par_search_mode);
  if (par_samples_opt->count())
    opts += ",\"samples\":" + std::to_string(par_samples);
  if (par_seed_opt->count()) opts += ",\"seed\":" + std::to_string(par_seed);
  if (par_allow_exhaustive) opts += ",\"allow_exhaustive\":true";
  if (par_epoch_opt->count())
    opts += ",\"epoch\":" + std::to_string(par_epoch);
  opts += "}";
  return run(par_args, opts, leoisl_run_partition);
}
