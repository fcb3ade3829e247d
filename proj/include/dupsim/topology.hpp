#pragma once

#include "dupsim/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dupsim {

struct TopologyConfig {
    int n_tier1 = 3;
    int n_sc_per_cell = 2;   // tier-2 nodes deployed inside each tier-1 cell
    int ues_per_cell = 50;
    double radius_tier1_m = 30.0;
    double radius_tier2_m = 20.0;
    // Tier-1 sites form an equilateral triangle with this side length, chosen
    // so neighbouring 30 m cells just touch.
    double isd_m = 51.96152422706632;
};

struct NodeInfo {
    std::uint32_t id = 0;
    int tier = 1;
    std::uint32_t parent_cell = 0; // tier-1 cell the node belongs to
    double x = 0.0;
    double y = 0.0;
};

struct UeInfo {
    std::uint32_t id = 0;
    std::uint32_t cell = 0; // tier-1 cell the UE was dropped in
    double x = 0.0;
    double y = 0.0;
};

struct Topology {
    TopologyConfig cfg;
    std::vector<NodeInfo> nodes; // tier-1 nodes first, then tier-2
    std::vector<UeInfo> ues;

    const NodeInfo& node(std::uint32_t id) const { return nodes.at(id); }
    double distance(const NodeInfo& n, const UeInfo& u) const;
};

// Drops tier-2 nodes and UEs for one iteration. UE positions depend only on
// the seed and the tier-1 layout, never on n_sc_per_cell, so scenarios that
// differ in small cell count see identical user drops under the same seed.
Topology build_topology(const TopologyConfig& cfg, std::uint64_t iter_seed);

// Per link lognormal shadowing in dB, reciprocal between uplink and downlink
// and frozen for the whole iteration.
double shadow_db(std::uint64_t iter_seed, std::uint32_t node_id, std::uint32_t ue_id,
                 double sigma_db);

struct LinkBudget {
    std::uint32_t node_id = 0;
    double mean_rx_dbm = 0.0; // long term downlink receive power, no fading
};

// Strongest candidate by mean downlink receive power; ties break toward the
// lowest node id so results do not depend on candidate ordering.
std::uint32_t associate(const std::vector<LinkBudget>& candidates);

// Human readable dump of node and UE coordinates for one iteration.
std::string describe_topology(const Topology& topo);

} // namespace dupsim
