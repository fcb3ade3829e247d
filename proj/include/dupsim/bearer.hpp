#pragma once

#include "dupsim/types.hpp"

#include <array>
#include <cstdint>

namespace dupsim {

// One RLC entity / logical channel endpoint of a bearer.
struct LegConfig {
    std::uint32_t cell_group = 0; // 0 = master, 1 = secondary
    std::uint32_t carrier = 0;
    std::uint32_t link_id = 0;    // key into the link model
    // Delay between PDCP and the air interface on this leg (backhaul on the
    // network side of a split bearer). Zero for the direct leg.
    Time pre_air_delay = 0;
    // Delay between reception at the far RLC and PDCP elimination (uplink
    // copies landing at the secondary node still cross Xn).
    Time post_air_delay = 0;
    // How long an ACK seen by this leg takes to reach the peer RLC entity;
    // zero when both entities live in one box, Xn latency when they do not.
    Time notify_delay = 0;
};

struct BearerConfig {
    std::uint32_t bearer_id = 0;
    BearerKind kind = BearerKind::Mcg;
    DupMode dup_mode = DupMode::None;
    int n_legs = 1;
    std::array<LegConfig, 2> legs{};
    int default_leg = 0;          // carries traffic while duplication is idle
    bool duplication_configured = false;
    std::uint64_t split_threshold_bytes = 0; // split bearer volume threshold
    int sn_bits = 12;
};

// Throws ConfigError when the combination is not allowed (single leg split,
// CA legs on different cell groups, duplication on top of an MCG bearer...).
void validate_bearer(const BearerConfig& cfg);

// Guard for adding a CA duplicated bearer to a UE that may already use DC
// duplication; the two modes cannot coexist in one UE.
void check_dup_mode_compatible(DupMode configured_so_far, DupMode requested);

} // namespace dupsim
