#include "dupsim/app_config.hpp"
#include "dupsim/handover.hpp"
#include "dupsim/outputs.hpp"
#include "dupsim/simulation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

using namespace dupsim;

namespace {

int run_handover_demo(const RunConfig& run, const std::string& out_dir) {
    HandoverParams hp;
    hp.direction = run.direction;
    hp.xn_latency = ms(run.xn_latency_ms);
    hp.tti = ms(run.tti_ms);
    const HandoverResult res = run_handover(hp);
    const std::string trace = format_handover_trace(res.trace);
    std::cout << trace;
    std::cout << "final phase: " << to_string(res.final_phase) << ", " << res.deliveries.size()
              << " SDUs delivered, " << res.eliminations.size() << " duplicates eliminated\n";
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir + "/handover_trace.txt", trace);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"system level simulator of PDCP packet duplication in 5G dual"
                 " connectivity and carrier aggregation"};

    std::string scenario = "S1";
    std::string direction = "dl";
    std::string config_path;
    std::string out_dir = "out";
    double beta_db = 10.0, xn_ms = 2.0, budget_ms = 5.0;
    int nsc = 2, iterations = 100, packets = 1000, threads = 1;
    std::uint64_t seed = 1;
    bool fig4 = false, discard = false;

    app.add_option("--scenario", scenario, "S1, S2, S3, S1_CA or handover-demo");
    app.add_option("--direction", direction, "dl or ul");
    app.add_option("--beta-db", beta_db, "SINR decoding threshold in dB");
    app.add_option("--nsc", nsc, "small cells per tier-1 cell");
    app.add_option("--iterations", iterations, "Monte Carlo iterations");
    app.add_option("--packets", packets, "SDUs per UE per iteration");
    app.add_option("--xn-latency-ms", xn_ms, "one way Xn backhaul latency");
    app.add_option("--latency-budget-ms", budget_ms, "delivery deadline for the PDR");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--config", config_path, "key = value config file")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads over iterations");
    app.add_flag("--paper-fig4", fig4, "run the full scenario sweep used for the headline figure");
    app.add_flag("--cross-leg-discard", discard, "cancel retransmissions once the twin is acked");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // Help and version end with 0; anything else was a bad invocation.
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig run;
        if (!config_path.empty()) apply_config_file(config_path, run);

        // Explicit flags beat the config file which beats the defaults.
        if (app.count("--scenario") && !parse_scenario(scenario, run.scenario))
            throw ConfigError("unknown scenario '" + scenario + "'");
        if (app.count("--direction") && !parse_direction(direction, run.direction))
            throw ConfigError("unknown direction '" + direction + "'");
        if (app.count("--beta-db")) run.beta_db = beta_db;
        if (app.count("--nsc")) run.n_sc = nsc;
        if (app.count("--iterations")) run.iterations = iterations;
        if (app.count("--packets")) run.packets_per_ue = packets;
        if (app.count("--xn-latency-ms")) run.xn_latency_ms = xn_ms;
        if (app.count("--latency-budget-ms")) run.latency_budget_ms = budget_ms;
        if (app.count("--seed")) run.seed = seed;
        if (app.count("--threads")) run.threads = threads;
        if (app.count("--cross-leg-discard")) run.cross_leg_discard = true;

        if (run.scenario == Scenario::HandoverDemo) return run_handover_demo(run, out_dir);

        if (fig4) {
            std::vector<CampaignResult> results;
            for (const RunConfig& c : figure_sweep_configs(run)) {
                std::cerr << "running " << campaign_dir_name(c) << "...\n";
                results.push_back(run_campaign(c));
            }
            write_sweep_outputs(out_dir, results);
            std::cout << "wrote " << results.size() << " campaigns under " << out_dir << "\n";
            return 0;
        }

        validate_run_config(run);
        const CampaignResult res = run_campaign(run);
        write_campaign_outputs(out_dir, res);
        const std::vector<double> pdr = res.pdr_values();
        std::cout << to_string(run.scenario) << " " << to_string(run.direction)
                  << ": median PDR " << quantile(pdr, 0.5) << ", p80 " << quantile(pdr, 0.8)
                  << " over " << pdr.size() << " iterations\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
