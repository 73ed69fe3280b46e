#include "report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "errors.hpp"

namespace leoisl {

namespace {

using nlohmann::json;

std::string header(const Scenario& sc) {
  return "# scenario " + scenario_hash_hex(sc) + "\n";
}

std::string members_field(const std::vector<int>& ids, const WalkerConfig& cfg) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    SatIndex s = from_1d(cfg, ids[i]);
    if (i) out += ';';
    out += std::to_string(s.p) + ':' + std::to_string(s.n);
  }
  return out;
}

const char* dof_name(DofMode m) {
  return m == DofMode::uniform ? "uniform" : "optimized";
}

json rate_rows_json(const RateReport& rep, const std::vector<LinkInfo>& links) {
  json rows = json::array();
  for (const auto& row : rep.rows) {
    const LinkInfo& li = links[row.link];
    rows.push_back({{"link", li.link_id},
                    {"plane", li.sat.p},
                    {"slot", li.sat.n},
                    {"group", row.group + 1},
                    {"stage", row.stage},
                    {"rate", row.rate}});
  }
  return rows;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_text_file(const std::string& dir, const std::string& name,
                     const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(Err::io, "cannot create output directory " + dir);
  const std::string path = (fs::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Err::io, "cannot open " + path + " for writing");
  out << content;
  if (!out) fail(Err::io, "write to " + path + " failed");
}

std::string csv_timeline(const Scenario& sc, const FeasibilityRun& run) {
  std::string out = header(sc);
  out += "t_start_s,t_end_s,L,members\n";
  for (const auto& w : run.timeline) {
    out += format_number(w.t_start) + ',' + format_number(w.t_end) + ',' +
           std::to_string(w.L) + ',' + members_field(w.members, sc.walker) +
           '\n';
  }
  return out;
}

std::string csv_window_stats(const Scenario& sc, const FeasibilityRun& run) {
  std::string out = header(sc);
  out += "L,count,min_s,max_s,mean_s,std_s\n";
  for (const auto& [L, st] : run.stats.per_L) {
    out += std::to_string(L) + ',' + std::to_string(st.count) + ',' +
           format_number(st.min_s) + ',' + format_number(st.max_s) + ',' +
           format_number(st.mean_s) + ',' + format_number(st.std_s) + '\n';
  }
  return out;
}

std::string csv_doppler(const Scenario& sc, const DopplerRun& run) {
  std::string out = header(sc);
  out += "# epoch_s " + format_number(run.epoch) + '\n';
  out += "plane,slot,link,distance_km,rx_power_w,doppler_hz,nu\n";
  for (const auto& li : run.links) {
    out += std::to_string(li.sat.p) + ',' + std::to_string(li.sat.n) + ',' +
           std::to_string(li.link_id) + ',' + format_number(li.d_km) + ',' +
           format_number(li.rx_power_w) + ',' + format_number(li.f_hz) + ',' +
           format_number(li.nu) + '\n';
  }
  return out;
}

std::string csv_summary(const Scenario& sc, const ComparisonRun& run) {
  std::string out = header(sc);
  out += "# epoch_s " + format_number(run.epoch) + '\n';
  out += "scheme,dof,groups,c_sum,fairness\n";
  for (const auto& res : run.results) {
    out += res.scheme + ',' + dof_name(res.dof) + ',' +
           std::to_string(res.n_groups) + ',' +
           format_number(res.report.c_sum) + ',' +
           format_number(res.report.fairness) + '\n';
  }
  return out;
}

std::string csv_rates(const Scenario& sc, const RateReport& rep,
                      const std::vector<LinkInfo>& links) {
  std::string out = header(sc);
  out += "link,plane,slot,group,stage,rate\n";
  for (const auto& row : rep.rows) {
    const LinkInfo& li = links[row.link];
    out += std::to_string(li.link_id) + ',' + std::to_string(li.sat.p) + ',' +
           std::to_string(li.sat.n) + ',' + std::to_string(row.group + 1) +
           ',' + std::to_string(row.stage) + ',' + format_number(row.rate) +
           '\n';
  }
  out += "C_sum," + format_number(rep.c_sum) + '\n';
  out += "fairness," + format_number(rep.fairness) + '\n';
  return out;
}

std::string json_timeline(const Scenario& sc, const FeasibilityRun& run) {
  json root;
  root["scenario"] = scenario_hash_hex(sc);
  json windows = json::array();
  for (const auto& w : run.timeline) {
    json members = json::array();
    for (int id : w.members) {
      SatIndex s = from_1d(sc.walker, id);
      members.push_back({{"plane", s.p}, {"slot", s.n}});
    }
    windows.push_back({{"t_start_s", w.t_start},
                       {"t_end_s", w.t_end},
                       {"L", w.L},
                       {"members", members}});
  }
  root["windows"] = windows;
  json stats = json::array();
  for (const auto& [L, st] : run.stats.per_L) {
    stats.push_back({{"L", L},
                     {"count", st.count},
                     {"min_s", st.min_s},
                     {"max_s", st.max_s},
                     {"mean_s", st.mean_s},
                     {"std_s", st.std_s}});
  }
  root["stats"] = stats;
  return root.dump(2) + "\n";
}

std::string json_doppler(const Scenario& sc, const DopplerRun& run) {
  json root;
  root["scenario"] = scenario_hash_hex(sc);
  root["epoch_s"] = run.epoch;
  json rows = json::array();
  for (const auto& li : run.links) {
    rows.push_back({{"plane", li.sat.p},
                    {"slot", li.sat.n},
                    {"link", li.link_id},
                    {"distance_km", li.d_km},
                    {"rx_power_w", li.rx_power_w},
                    {"doppler_hz", li.f_hz},
                    {"nu", li.nu}});
  }
  root["links"] = rows;
  return root.dump(2) + "\n";
}

std::string json_summary(const Scenario& sc, const ComparisonRun& run) {
  json root;
  root["scenario"] = scenario_hash_hex(sc);
  root["epoch_s"] = run.epoch;
  root["sigma2"] = run.sigma2;
  json rows = json::array();
  for (const auto& res : run.results) {
    rows.push_back({{"scheme", res.scheme},
                    {"dof", dof_name(res.dof)},
                    {"groups", res.n_groups},
                    {"c_sum", res.report.c_sum},
                    {"fairness", res.report.fairness}});
  }
  root["schemes"] = rows;
  return root.dump(2) + "\n";
}

std::string json_rates(const Scenario& sc, const RateReport& rep,
                       const std::vector<LinkInfo>& links) {
  json root;
  root["scenario"] = scenario_hash_hex(sc);
  root["rows"] = rate_rows_json(rep, links);
  root["c_sum"] = rep.c_sum;
  root["fairness"] = rep.fairness;
  if (!rep.dup_nu_groups.empty()) {
    json dup = json::array();
    for (int g : rep.dup_nu_groups) dup.push_back(g + 1);
    root["duplicate_nu_groups"] = dup;
  }
  return root.dump(2) + "\n";
}

std::string partition_json(const std::vector<std::vector<int>>& groups,
                           const std::vector<double>& rhos, DofMode mode,
                           const std::vector<LinkInfo>& links) {
  json root;
  json gs = json::array();
  for (const auto& g : groups) {
    json ids = json::array();
    for (int pos : g) ids.push_back(links[pos].link_id);
    gs.push_back(ids);
  }
  root["groups"] = gs;
  json dof = json::array();
  for (double r : rhos) dof.push_back(r);
  root["dof"] = dof;
  root["mode"] = dof_name(mode);
  return root.dump(2) + "\n";
}

}  // namespace leoisl
