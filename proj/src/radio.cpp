#include "dupsim/radio.hpp"

#include "dupsim/rng.hpp"

#include <cmath>

namespace dupsim {

namespace {
constexpr double kSpeedOfLight = 3.0e8;
constexpr double kPi = 3.14159265358979323846;
} // namespace

double pathloss_db(double distance_m, double carrier_hz) {
    if (distance_m <= 0.0) throw ConfigError("pathloss requires a positive distance");
    if (distance_m > 15.0) return 70.28 + 25.9 * std::log10(distance_m / 15.0);
    // Free space inside the breakpoint; at 5.2 GHz this evaluates to 70.28 dB
    // at exactly 15 m, so the curve is continuous.
    const double lambda = kSpeedOfLight / carrier_hz;
    return 20.0 * std::log10(4.0 * kPi * distance_m / lambda);
}

double noise_power_dbm(const LinkModelConfig& cfg) {
    if (cfg.bandwidth_mhz <= 0.0) throw ConfigError("bandwidth must be positive");
    return cfg.noise_psd_dbm_hz + 10.0 * std::log10(cfg.bandwidth_mhz * 1e6) +
           cfg.noise_figure_db;
}

double sinr_db(const ChannelRealization& signal,
               const std::vector<ChannelRealization>& interferers,
               const LinkModelConfig& cfg) {
    const double noise_mw = std::pow(10.0, noise_power_dbm(cfg) / 10.0);
    double denom_mw = noise_mw;
    for (const ChannelRealization& i : interferers)
        denom_mw += std::pow(10.0, i.rx_power_dbm() / 10.0);
    const double sig_mw = std::pow(10.0, signal.rx_power_dbm() / 10.0);
    return 10.0 * std::log10(sig_mw / denom_mw);
}

double sinr_db(const std::vector<ChannelRealization>& links, const LinkModelConfig& cfg) {
    if (links.empty()) throw ConfigError("sinr needs at least the signal link");
    std::vector<ChannelRealization> interferers(links.begin() + 1, links.end());
    return sinr_db(links.front(), interferers, cfg);
}

bool attempt_outcome(double sinr_db, double beta_db) { return sinr_db >= beta_db; }

double fading_gain_db(std::uint64_t key) { return 10.0 * std::log10(exp1(key)); }

} // namespace dupsim
