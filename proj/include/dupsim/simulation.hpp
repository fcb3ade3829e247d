#pragma once

#include "dupsim/control.hpp"
#include "dupsim/radio.hpp"
#include "dupsim/stack.hpp"
#include "dupsim/topology.hpp"
#include "dupsim/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dupsim {

enum class InterferenceMode : std::uint8_t { None, CoChannel };

// Everything one Monte Carlo campaign needs. Defaults reproduce the dense
// indoor deployment the simulator was calibrated for.
struct RunConfig {
    Scenario scenario = Scenario::S1;
    Direction direction = Direction::Downlink;
    int iterations = 100;
    int packets_per_ue = 1000;
    double beta_db = 10.0;
    double xn_latency_ms = 2.0;
    double latency_budget_ms = 5.0;
    int n_sc = 2;
    std::uint64_t seed = 1;
    int ues_per_cell = 50;
    int n_tier1 = 3;

    double tti_ms = 1.0;
    double retx_delay_ms = 4.0;
    int max_retx = 3;
    int rlc_buffer_limit = 1024;
    bool cross_leg_discard = false;
    std::uint32_t sdu_bytes = 1200;

    double bandwidth_mhz = 20.0;
    FadingModel fading = FadingModel::RayleighBlock;
    InterferenceMode interference = InterferenceMode::CoChannel;
    // Duty cycle of a fully loaded downlink transmitter. Each node scales
    // this by the share of a cell's UEs it actually serves, so offloading
    // traffic onto small cells also thins the interference they and the
    // macros generate.
    double interferer_activity = 0.85;

    // Dynamic duplication control preset: bearers start with duplication off
    // and a periodic trigger decides per UE.
    bool dynamic_control = false;
    ControlMechanism control_mechanism = ControlMechanism::MacCe;
    double trigger_interval_ms = 50.0;
    double trigger_activate_snr_db = 15.0;
    double trigger_deactivate_snr_db = 20.0;

    int threads = 1;
};

void validate_run_config(const RunConfig& cfg);

struct IterationMetrics {
    std::uint64_t iteration = 0;
    double pdr = 0.0;            // delivered within budget / generated
    double dup_efficiency = -1.0; // -1 when nothing was duplicated
    double mean_latency_ms = 0.0;
    std::uint64_t dc_ues = 0;     // UEs that actually run with two legs
    std::uint64_t signaling_bytes = 0;
    BearerStats totals;
};

IterationMetrics run_iteration(const RunConfig& cfg, std::uint64_t index);

struct CampaignResult {
    RunConfig cfg;
    std::vector<IterationMetrics> iterations;
    std::string topology_dump; // layout of iteration 0

    std::vector<double> pdr_values() const;
    std::vector<double> dup_eff_values() const; // only iterations that duplicated
};

CampaignResult run_campaign(const RunConfig& cfg);

} // namespace dupsim
