#pragma once

#include "dupsim/cdf.hpp"
#include "dupsim/simulation.hpp"

#include <string>
#include <vector>

namespace dupsim {

// CSV with a "value,cum_prob" header and one fixed precision row per point.
std::string format_cdf_csv(const std::vector<CdfPoint>& cdf);

// Fixed key order, six decimal places, so equal inputs give identical bytes.
std::string summary_json(const std::vector<CampaignResult>& campaigns);

// Writes cdf_<metric>_<scenario>_<direction>.csv files, the iteration 0
// topology dump and a summary.json into dir (created if needed).
void write_campaign_outputs(const std::string& dir, const CampaignResult& res);

// The full default figure sweep: every scenario and direction at the default
// threshold plus the S3 low threshold runs, one subdirectory per campaign
// and one merged summary.json at the top.
std::vector<RunConfig> figure_sweep_configs(const RunConfig& base);
std::string campaign_dir_name(const RunConfig& cfg);
void write_sweep_outputs(const std::string& dir, const std::vector<CampaignResult>& results);

void write_text_file(const std::string& path, const std::string& content);

} // namespace dupsim
