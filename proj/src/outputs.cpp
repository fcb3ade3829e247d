#include "dupsim/outputs.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace dupsim {

namespace {

std::string fixed6(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

std::string quantile_block(const std::vector<double>& values) {
    const std::vector<CdfPoint> cdf = compute_cdf(values);
    std::ostringstream os;
    os << "{\"mean\": " << fixed6(mean(values)) << ", \"p50\": " << fixed6(cdf_quantile(cdf, 0.5))
       << ", \"p80\": " << fixed6(cdf_quantile(cdf, 0.8))
       << ", \"p95\": " << fixed6(cdf_quantile(cdf, 0.95)) << "}";
    return os.str();
}

std::string campaign_json(const CampaignResult& res) {
    const RunConfig& c = res.cfg;
    double sig = 0.0, redundant = 0.0, avoided = 0.0, dc = 0.0;
    for (const IterationMetrics& it : res.iterations) {
        sig += static_cast<double>(it.signaling_bytes);
        redundant += static_cast<double>(it.totals.redundant_retx);
        avoided += static_cast<double>(it.totals.avoided_retx);
        dc += static_cast<double>(it.dc_ues);
    }
    const double n = static_cast<double>(res.iterations.size());
    const double n_ues = static_cast<double>(c.ues_per_cell * c.n_tier1);

    std::ostringstream os;
    os << "    {\n";
    os << "      \"scenario\": \"" << to_string(c.scenario) << "\",\n";
    os << "      \"direction\": \"" << to_string(c.direction) << "\",\n";
    os << "      \"beta_db\": " << fixed6(c.beta_db) << ",\n";
    os << "      \"xn_latency_ms\": " << fixed6(c.xn_latency_ms) << ",\n";
    os << "      \"latency_budget_ms\": " << fixed6(c.latency_budget_ms) << ",\n";
    os << "      \"n_sc\": " << c.n_sc << ",\n";
    os << "      \"iterations\": " << c.iterations << ",\n";
    os << "      \"packets_per_ue\": " << c.packets_per_ue << ",\n";
    os << "      \"seed\": " << c.seed << ",\n";
    os << "      \"cross_leg_discard\": " << (c.cross_leg_discard ? "true" : "false") << ",\n";
    os << "      \"dc_ue_fraction\": " << fixed6(n > 0 ? dc / (n * n_ues) : 0.0) << ",\n";
    os << "      \"pdr\": " << quantile_block(res.pdr_values()) << ",\n";
    const std::vector<double> eff = res.dup_eff_values();
    if (eff.empty())
        os << "      \"dup_efficiency\": null,\n";
    else
        os << "      \"dup_efficiency\": " << quantile_block(eff) << ",\n";
    os << "      \"signaling_bytes_mean\": " << fixed6(n > 0 ? sig / n : 0.0) << ",\n";
    os << "      \"redundant_retx_mean\": " << fixed6(n > 0 ? redundant / n : 0.0) << ",\n";
    os << "      \"avoided_retx_mean\": " << fixed6(n > 0 ? avoided / n : 0.0) << "\n";
    os << "    }";
    return os.str();
}

} // namespace

std::string format_cdf_csv(const std::vector<CdfPoint>& cdf) {
    std::ostringstream os;
    os << "value,cum_prob\n" << std::fixed << std::setprecision(6);
    for (const CdfPoint& p : cdf) os << p.value << ',' << p.cum_prob << '\n';
    return os.str();
}

std::string summary_json(const std::vector<CampaignResult>& campaigns) {
    std::ostringstream os;
    os << "{\n  \"campaigns\": [\n";
    for (std::size_t i = 0; i < campaigns.size(); ++i) {
        os << campaign_json(campaigns[i]);
        os << (i + 1 < campaigns.size() ? ",\n" : "\n");
    }
    os << "  ]\n}\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << content;
}

void write_campaign_outputs(const std::string& dir, const CampaignResult& res) {
    std::filesystem::create_directories(dir);
    const std::string tag = to_string(res.cfg.scenario) + "_" + to_string(res.cfg.direction);
    write_text_file(dir + "/cdf_pdr_" + tag + ".csv", format_cdf_csv(compute_cdf(res.pdr_values())));
    const std::vector<double> eff = res.dup_eff_values();
    if (!eff.empty())
        write_text_file(dir + "/cdf_dup_efficiency_" + tag + ".csv",
                        format_cdf_csv(compute_cdf(eff)));
    write_text_file(dir + "/topology_iter0.txt", res.topology_dump);
    write_text_file(dir + "/summary.json", summary_json({res}));
}

std::vector<RunConfig> figure_sweep_configs(const RunConfig& base) {
    std::vector<RunConfig> out;
    const Scenario scenarios[] = {Scenario::S1, Scenario::S1Ca, Scenario::S2, Scenario::S3};
    const Direction dirs[] = {Direction::Downlink, Direction::Uplink};
    for (Scenario s : scenarios) {
        for (Direction d : dirs) {
            RunConfig c = base;
            c.scenario = s;
            c.direction = d;
            out.push_back(c);
        }
    }
    // The low threshold pair that shows duplication efficiency dropping.
    for (Direction d : dirs) {
        RunConfig c = base;
        c.scenario = Scenario::S3;
        c.direction = d;
        c.beta_db = 4.0;
        out.push_back(c);
    }
    return out;
}

std::string campaign_dir_name(const RunConfig& cfg) {
    std::ostringstream os;
    os << to_string(cfg.scenario) << '_' << to_string(cfg.direction) << "_beta";
    const double b = cfg.beta_db;
    if (b == static_cast<double>(static_cast<long long>(b))) {
        os << static_cast<long long>(b);
    } else {
        std::ostringstream bs;
        bs << std::fixed << std::setprecision(1) << b;
        std::string s = bs.str();
        for (char& ch : s)
            if (ch == '.') ch = 'p';
        os << s;
    }
    return os.str();
}

void write_sweep_outputs(const std::string& dir, const std::vector<CampaignResult>& results) {
    std::filesystem::create_directories(dir);
    for (const CampaignResult& res : results)
        write_campaign_outputs(dir + "/" + campaign_dir_name(res.cfg), res);
    write_text_file(dir + "/summary.json", summary_json(results));
}

} // namespace dupsim
