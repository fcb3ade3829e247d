#include "dupsim/topology.hpp"

#include "dupsim/rng.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace dupsim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Uniform position in a disc around (cx, cy).
void disc_point(std::uint64_t key, double cx, double cy, double radius, double& x, double& y) {
    const double r = radius * std::sqrt(u01(splitmix64(key)));
    const double phi = kTwoPi * u01(splitmix64(key ^ 0xA5A5A5A55A5A5A5AULL));
    x = cx + r * std::cos(phi);
    y = cy + r * std::sin(phi);
}

} // namespace

double Topology::distance(const NodeInfo& n, const UeInfo& u) const {
    return std::hypot(n.x - u.x, n.y - u.y);
}

Topology build_topology(const TopologyConfig& cfg, std::uint64_t iter_seed) {
    if (cfg.n_tier1 < 1 || cfg.n_tier1 > 3)
        throw ConfigError("topology supports 1 to 3 tier-1 cells");
    if (cfg.n_sc_per_cell < 0) throw ConfigError("n_sc must be non negative");
    if (cfg.ues_per_cell < 1) throw ConfigError("need at least one UE per cell");

    Topology topo;
    topo.cfg = cfg;

    const double s = cfg.isd_m;
    const double centers[3][2] = {{0.0, 0.0}, {s, 0.0}, {s / 2.0, s * std::sqrt(3.0) / 2.0}};

    for (int i = 0; i < cfg.n_tier1; ++i) {
        NodeInfo n;
        n.id = static_cast<std::uint32_t>(topo.nodes.size());
        n.tier = 1;
        n.parent_cell = static_cast<std::uint32_t>(i);
        n.x = centers[i][0];
        n.y = centers[i][1];
        topo.nodes.push_back(n);
    }
    for (int i = 0; i < cfg.n_tier1; ++i) {
        for (int j = 0; j < cfg.n_sc_per_cell; ++j) {
            NodeInfo n;
            n.id = static_cast<std::uint32_t>(topo.nodes.size());
            n.tier = 2;
            n.parent_cell = static_cast<std::uint32_t>(i);
            disc_point(hash_key({rngtag::kNodePos, iter_seed, static_cast<std::uint64_t>(i),
                                 static_cast<std::uint64_t>(j)}),
                       centers[i][0], centers[i][1], cfg.radius_tier1_m, n.x, n.y);
            topo.nodes.push_back(n);
        }
    }
    for (int i = 0; i < cfg.n_tier1; ++i) {
        for (int k = 0; k < cfg.ues_per_cell; ++k) {
            UeInfo u;
            u.id = static_cast<std::uint32_t>(topo.ues.size());
            u.cell = static_cast<std::uint32_t>(i);
            disc_point(hash_key({rngtag::kUePos, iter_seed, static_cast<std::uint64_t>(i),
                                 static_cast<std::uint64_t>(k)}),
                       centers[i][0], centers[i][1], cfg.radius_tier1_m, u.x, u.y);
            topo.ues.push_back(u);
        }
    }
    return topo;
}

double shadow_db(std::uint64_t iter_seed, std::uint32_t node_id, std::uint32_t ue_id,
                 double sigma_db) {
    return sigma_db * std_normal(hash_key({rngtag::kShadow, iter_seed, node_id, ue_id}));
}

std::uint32_t associate(const std::vector<LinkBudget>& candidates) {
    if (candidates.empty()) throw ConfigError("associate needs at least one candidate");
    std::uint32_t best = candidates.front().node_id;
    double best_rx = candidates.front().mean_rx_dbm;
    for (const LinkBudget& c : candidates) {
        if (c.mean_rx_dbm > best_rx || (c.mean_rx_dbm == best_rx && c.node_id < best)) {
            best = c.node_id;
            best_rx = c.mean_rx_dbm;
        }
    }
    return best;
}

std::string describe_topology(const Topology& topo) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3);
    os << "# nodes: id tier parent_cell x_m y_m\n";
    for (const NodeInfo& n : topo.nodes)
        os << "node " << n.id << ' ' << n.tier << ' ' << n.parent_cell << ' ' << n.x << ' '
           << n.y << '\n';
    os << "# ues: id cell x_m y_m\n";
    for (const UeInfo& u : topo.ues)
        os << "ue " << u.id << ' ' << u.cell << ' ' << u.x << ' ' << u.y << '\n';
    return os.str();
}

} // namespace dupsim
