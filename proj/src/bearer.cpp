#include "dupsim/bearer.hpp"

#include <string>

namespace dupsim {

void validate_bearer(const BearerConfig& cfg) {
    const auto fail = [&](const std::string& why) {
        throw ConfigError("bearer " + std::to_string(cfg.bearer_id) + ": " + why);
    };

    if (cfg.n_legs < 1 || cfg.n_legs > 2) fail("needs one or two legs");
    if (cfg.default_leg < 0 || cfg.default_leg >= cfg.n_legs) fail("default leg out of range");
    if (cfg.sn_bits < 4 || cfg.sn_bits > 18) fail("sn_bits outside supported range");

    const bool wants_two_legs = cfg.kind == BearerKind::Split ||
                                cfg.kind == BearerKind::Duplicate ||
                                cfg.duplication_configured;
    if (wants_two_legs && cfg.n_legs != 2) fail("duplication and split require two legs");
    if (cfg.kind == BearerKind::Mcg || cfg.kind == BearerKind::Scg) {
        if (cfg.n_legs != 1) fail("single cell group bearer cannot have two legs");
        if (cfg.duplication_configured) fail("duplication needs a secondary leg");
    }

    if (cfg.n_legs == 2) {
        const LegConfig& a = cfg.legs[0];
        const LegConfig& b = cfg.legs[1];
        if (cfg.dup_mode == DupMode::Ca) {
            if (a.cell_group != b.cell_group) fail("CA legs must share one cell group");
            if (a.carrier == b.carrier) fail("CA legs must use different carriers");
        } else {
            // Split and DC duplicated bearers span master and secondary.
            if (a.cell_group == b.cell_group) fail("legs must be in different cell groups");
        }
        if (a.link_id == b.link_id) fail("legs cannot share a radio link");
    }

    if (cfg.kind == BearerKind::Split && cfg.dup_mode == DupMode::Ca)
        fail("split bearer is a dual connectivity construct");
    if (cfg.duplication_configured && cfg.dup_mode == DupMode::None)
        fail("duplication needs a dup_mode");
}

void check_dup_mode_compatible(DupMode configured_so_far, DupMode requested) {
    if (configured_so_far == DupMode::Dc && requested == DupMode::Ca)
        throw ConfigError("CA duplication unavailable while DC duplication is configured");
    if (configured_so_far == DupMode::Ca && requested == DupMode::Dc)
        throw ConfigError("DC duplication unavailable while CA duplication is configured");
}

} // namespace dupsim
