#pragma once

#include "dupsim/stack.hpp"
#include "dupsim/types.hpp"

#include <cstdint>
#include <vector>

namespace dupsim {

// Ways the network can toggle duplication at runtime, ordered roughly by
// decreasing latency and signaling weight.
enum class ControlMechanism : std::uint8_t { Rrc, PdcpControlPdu, MacCe };

struct ControlParams {
    Time tti = 1000;
    Time rrc_latency = 10000;           // one way RRC processing and transfer
    std::uint32_t rrc_reconfig_bytes = 80;
    std::uint32_t rrc_complete_bytes = 40;
    std::uint32_t pdcp_ctrl_bytes = 2;
    std::uint32_t mac_ce_bytes = 1;
};

struct SignalingCost {
    std::uint64_t bytes_dl = 0;
    std::uint64_t bytes_ul = 0;
    std::uint64_t messages = 0;
    std::uint64_t total_bytes() const { return bytes_dl + bytes_ul; }
};

// Duplication state machine of one UE. Owns which bearers have duplication
// configured, guards DC/CA exclusivity, and turns activation requests into
// state flips scheduled on the stack at the moment they take effect.
class DuplicationController {
public:
    DuplicationController(StackSim& sim, const ControlParams& params);

    // Registers a bearer created via StackSim::add_bearer.
    void track_bearer(int bearer, const BearerConfig& cfg);

    // Returns the time the new state takes effect. RRC needs the full
    // reconfiguration round trip; the in band mechanisms act from the next
    // slot boundary.
    Time request(int bearer, bool activate, ControlMechanism m, Time now);

    // MAC CE duplication commands address every configured bearer at once.
    Time request_all(bool activate, ControlMechanism m, Time now);

    const SignalingCost& cost() const { return cost_; }
    DupMode ue_dup_mode() const { return ue_mode_; }

private:
    Time effective_time(ControlMechanism m, Time now) const;
    void account(ControlMechanism m);

    struct Tracked {
        int bearer = 0;
        bool dup_configured = false;
    };

    StackSim& sim_;
    ControlParams params_;
    std::vector<Tracked> bearers_;
    SignalingCost cost_;
    DupMode ue_mode_ = DupMode::None;
};

struct TriggerConfig {
    // Activate when both legs fall below this long term quality...
    double activate_below_db = 15.0;
    // ...deactivate once either leg rises above this one. Keeping the two
    // apart gives hysteresis.
    double deactivate_above_db = 20.0;
};

enum class TriggerDecision : std::int8_t { Hold = 0, Activate = 1, Deactivate = -1 };

TriggerDecision evaluate_trigger(double leg0_db, double leg1_db, bool currently_active,
                                 const TriggerConfig& cfg);

} // namespace dupsim
