#pragma once

#include <string>

#include "scenario.hpp"

namespace leoisl {

// All tables start with a comment line carrying the scenario hash, and all
// numeric cells use the same shortest-roundtrip format, so reruns with the
// same configuration are byte-identical.

std::string csv_timeline(const Scenario& sc, const FeasibilityRun& run);
std::string csv_window_stats(const Scenario& sc, const FeasibilityRun& run);
std::string csv_doppler(const Scenario& sc, const DopplerRun& run);
std::string csv_summary(const Scenario& sc, const ComparisonRun& run);
std::string csv_rates(const Scenario& sc, const RateReport& rep,
                      const std::vector<LinkInfo>& links);

std::string json_timeline(const Scenario& sc, const FeasibilityRun& run);
std::string json_doppler(const Scenario& sc, const DopplerRun& run);
std::string json_summary(const Scenario& sc, const ComparisonRun& run);
std::string json_rates(const Scenario& sc, const RateReport& rep,
                       const std::vector<LinkInfo>& links);

// {"groups": [[...1-based...]], "dof": [...], "mode": "..."}
std::string partition_json(const std::vector<std::vector<int>>& groups,
                           const std::vector<double>& rhos, DofMode mode,
                           const std::vector<LinkInfo>& links);

std::string format_number(double v);

void write_text_file(const std::string& dir, const std::string& name,
                     const std::string& content);

}  // namespace leoisl
