#include "dupsim/control.hpp"

namespace dupsim {

DuplicationController::DuplicationController(StackSim& sim, const ControlParams& params)
    : sim_(sim), params_(params) {
    if (params_.rrc_latency < 0) throw ConfigError("rrc latency cannot be negative");
    if (params_.tti <= 0) throw ConfigError("tti must be positive");
}

void DuplicationController::track_bearer(int bearer, const BearerConfig& cfg) {
    validate_bearer(cfg);
    if (cfg.duplication_configured) {
        check_dup_mode_compatible(ue_mode_, cfg.dup_mode);
        ue_mode_ = cfg.dup_mode;
    }
    bearers_.push_back(Tracked{bearer, cfg.duplication_configured});
}

Time DuplicationController::effective_time(ControlMechanism m, Time now) const {
    switch (m) {
    case ControlMechanism::Rrc:
        // Reconfiguration plus the complete message before anyone acts on it.
        return now + 2 * params_.rrc_latency;
    case ControlMechanism::PdcpControlPdu:
    case ControlMechanism::MacCe:
        // In band, applied from the next slot boundary.
        return next_boundary(now + 1, params_.tti);
    }
    throw SimError("unknown control mechanism");
}

void DuplicationController::account(ControlMechanism m) {
    switch (m) {
    case ControlMechanism::Rrc:
        cost_.bytes_dl += params_.rrc_reconfig_bytes;
        cost_.bytes_ul += params_.rrc_complete_bytes;
        cost_.messages += 2;
        break;
    case ControlMechanism::PdcpControlPdu:
        cost_.bytes_dl += params_.pdcp_ctrl_bytes;
        ++cost_.messages;
        break;
    case ControlMechanism::MacCe:
        cost_.bytes_dl += params_.mac_ce_bytes;
        ++cost_.messages;
        break;
    }
}

Time DuplicationController::request(int bearer, bool activate, ControlMechanism m, Time now) {
    const Tracked* tracked = nullptr;
    for (const Tracked& t : bearers_)
        if (t.bearer == bearer) tracked = &t;
    if (!tracked) throw ConfigError("unknown bearer");
    if (!tracked->dup_configured)
        throw ConfigError("duplication is not configured on this bearer");
    if (m == ControlMechanism::MacCe)
        throw ConfigError("the MAC CE addresses all configured bearers, not one");

    account(m);
    const Time at = effective_time(m, now);
    StackSim& sim = sim_;
    sim_.schedule_control(at, [&sim, bearer, activate] { sim.set_dup_active(bearer, activate); });
    return at;
}

Time DuplicationController::request_all(bool activate, ControlMechanism m, Time now) {
    account(m);
    const Time at = effective_time(m, now);
    StackSim& sim = sim_;
    for (const Tracked& t : bearers_) {
        if (!t.dup_configured) continue;
        const int b = t.bearer;
        sim_.schedule_control(at, [&sim, b, activate] { sim.set_dup_active(b, activate); });
    }
    return at;
}

TriggerDecision evaluate_trigger(double leg0_db, double leg1_db, bool currently_active,
                                 const TriggerConfig& cfg) {
    if (cfg.deactivate_above_db < cfg.activate_below_db)
        throw ConfigError("trigger thresholds must leave a hysteresis band");
    if (!currently_active) {
        if (leg0_db < cfg.activate_below_db && leg1_db < cfg.activate_below_db)
            return TriggerDecision::Activate;
        return TriggerDecision::Hold;
    }
    if (leg0_db > cfg.deactivate_above_db || leg1_db > cfg.deactivate_above_db)
        return TriggerDecision::Deactivate;
    return TriggerDecision::Hold;
}

} // namespace dupsim
