#pragma once

#include "dupsim/types.hpp"

#include <set>
#include <string>
#include <vector>

namespace dupsim {

enum class HoPhase : std::uint8_t {
    Idle,
    BearerEstablished,
    Duplicating,
    PathSwitched,
    SourceReleased,
};

std::string to_string(HoPhase p);

// A scripted make-before-break handover of one bearer between two nodes,
// with PDCP duplication covering the transition. SDU spacing must exceed the
// Xn latency so the path switch can fall cleanly between two SDUs.
struct HandoverParams {
    Direction direction = Direction::Uplink;
    int n_sdus = 20;
    int path_switch_after_sn = 10; // last SN handled on the source path
    Time tti = 1000;
    Time xn_latency = 2000;
    Time rrc_latency = 10000;
    Time sdu_spacing = 4000;
    Time trigger_at = 1000;
    bool xn_available = true;
    int sn_bits = 12;
    std::set<int> lost_on_source; // SNs that never survive the source air leg
    std::set<int> lost_on_target;
};

struct HandoverRecord {
    Time time = 0;
    std::string entity; // ue, source_gnb, target_gnb, core
    HoPhase phase = HoPhase::Idle;
    std::string message;
    int sn_lo = -1; // -1 when the record carries no SNs
    int sn_hi = -1;
};

struct HandoverDelivery {
    int sn = 0;
    Time time = 0;
    std::string entity; // where duplicate elimination delivered it upward
};

struct HandoverResult {
    std::vector<HandoverRecord> trace;
    std::vector<HandoverDelivery> deliveries;
    std::vector<HandoverDelivery> eliminations;
    HoPhase final_phase = HoPhase::Idle;
    Time path_switch_time = -1;
    bool aborted = false;
};

HandoverResult run_handover(const HandoverParams& params);

// One line per record: "time_ms | entity | phase | message | sn_range".
std::string format_handover_trace(const std::vector<HandoverRecord>& trace);

} // namespace dupsim
