#pragma once

#include "dupsim/types.hpp"

#include <cstdint>
#include <vector>

namespace dupsim {

enum class FadingModel : std::uint8_t { None, RayleighBlock };

// Physical layer constants. Defaults describe an indoor hotspot at 5.2 GHz.
struct LinkModelConfig {
    double carrier_hz = 5.2e9;
    double bandwidth_mhz = 20.0;
    double noise_psd_dbm_hz = -174.0;
    double noise_figure_db = 5.0;
    double tx_power_tier1_dbm = 30.0;
    double tx_power_tier2_dbm = 23.0;
    double tx_power_ue_dbm = 18.0;
    double shadow_sigma_tier1_db = 8.0;
    double shadow_sigma_tier2_db = 10.0;
    double beta_db = 10.0; // SINR decoding threshold
    FadingModel fading = FadingModel::RayleighBlock;
};

// One directed radio link with its large scale state frozen for an iteration.
// Fast fading is drawn per attempt and lives in fading_db.
struct ChannelRealization {
    std::uint32_t tx_id = 0;
    std::uint32_t rx_id = 0;
    double distance_m = 0.0;
    double tx_power_dbm = 0.0;
    double pathloss_db = 0.0;
    double shadow_db = 0.0;
    double fading_db = 0.0;

    double rx_power_dbm() const {
        return tx_power_dbm - pathloss_db + shadow_db + fading_db;
    }
};

// Distance dependent loss. Indoor model beyond 15 m, free space closer in;
// the two branches meet at the 15 m breakpoint.
double pathloss_db(double distance_m, double carrier_hz = 5.2e9);

// Thermal noise plus receiver noise figure over the configured bandwidth.
double noise_power_dbm(const LinkModelConfig& cfg);

double sinr_db(const ChannelRealization& signal,
               const std::vector<ChannelRealization>& interferers,
               const LinkModelConfig& cfg);

// Convenience form: links[0] is the signal, the rest interfere.
double sinr_db(const std::vector<ChannelRealization>& links, const LinkModelConfig& cfg);

// Hard SINR threshold; a decode succeeds at exactly beta as well.
bool attempt_outcome(double sinr_db, double beta_db);

// Rayleigh block fading power gain in dB for a given draw key.
double fading_gain_db(std::uint64_t key);

} // namespace dupsim
