#include "dupsim/handover.hpp"

#include "dupsim/events.hpp"
#include "dupsim/pdcp.hpp"

#include <functional>
#include <iomanip>
#include <sstream>

namespace dupsim {

std::string to_string(HoPhase p) {
    switch (p) {
    case HoPhase::Idle: return "Idle";
    case HoPhase::BearerEstablished: return "BearerEstablished";
    case HoPhase::Duplicating: return "Duplicating";
    case HoPhase::PathSwitched: return "PathSwitched";
    case HoPhase::SourceReleased: return "SourceReleased";
    }
    return "?";
}

namespace {

constexpr const char* kUe = "ue";
constexpr const char* kSource = "source_gnb";
constexpr const char* kTarget = "target_gnb";
constexpr const char* kCore = "core";

// Scripted choreography around a shared event queue. The elimination window
// is a single logical object that changes owner at the path switch, which is
// what keeps delivery exactly once through the transition.
struct HoRun {
    const HandoverParams& p;
    HandoverResult out;
    EventQueue queue;
    std::vector<std::function<void()>> actions;
    HoPhase phase = HoPhase::Idle;
    ReceiverWindow window;
    std::string eliminator; // entity currently doing duplicate elimination
    bool source_released = false;

    explicit HoRun(const HandoverParams& params)
        : p(params), window(params.sn_bits),
          eliminator(params.direction == Direction::Uplink ? kSource : kUe) {}

    void at(Time t, std::function<void()> fn) {
        actions.push_back(std::move(fn));
        queue.schedule(t, EventKind::RrcDelivery, 0, 0,
                       static_cast<std::int64_t>(actions.size()) - 1);
    }

    void trace(Time t, const std::string& entity, const std::string& msg, int lo = -1,
               int hi = -2) {
        out.trace.push_back(HandoverRecord{t, entity, phase, msg, lo, hi < lo ? lo : hi});
        if (lo < 0) out.trace.back().sn_hi = -1;
    }

    void receive_copy(const std::string& site, int sn, Time t) {
        if (site != eliminator) {
            // Not this node's job (any more); hand the copy to the peer.
            trace(t, site, "XnForward", sn);
            const std::string dest = site == kSource ? kTarget : kSource;
            at(t + p.xn_latency, [this, dest, sn, t2 = t + p.xn_latency] {
                receive_copy(dest, sn, t2);
            });
            return;
        }
        const RxOutcome r = window.receive(static_cast<std::uint32_t>(sn));
        if (r == RxOutcome::Deliver) {
            trace(t, site, "Deliver", sn);
            out.deliveries.push_back(HandoverDelivery{sn, t, site});
        } else {
            trace(t, site, "EliminateDuplicate", sn);
            out.eliminations.push_back(HandoverDelivery{sn, t, site});
        }
    }

    // Air transmission to a gNB (uplink) or the UE (downlink): one slot.
    void air_to(const std::string& dest, int sn, Time tx_time, bool lost) {
        if (lost) return;
        at(tx_time + p.tti, [this, dest, sn, t = tx_time + p.tti] { receive_copy(dest, sn, t); });
    }

    void run() {
        while (auto ev = queue.pop()) actions[static_cast<std::size_t>(ev->c)]();
        out.final_phase = phase;
    }
};

void validate(const HandoverParams& p) {
    if (p.n_sdus < 1) throw ConfigError("handover needs at least one SDU");
    if (p.path_switch_after_sn < 1 || p.path_switch_after_sn > p.n_sdus)
        throw ConfigError("path switch point outside the SDU range");
    if (p.sdu_spacing <= p.xn_latency + p.tti)
        throw ConfigError("SDU spacing must exceed the Xn latency plus one slot");
    if (p.tti <= 0 || p.xn_latency < 0 || p.rrc_latency < 0)
        throw ConfigError("invalid handover timing");
}

} // namespace

HandoverResult run_handover(const HandoverParams& p) {
    validate(p);
    HoRun r(p);

    const Time t0 = p.trigger_at;
    r.at(t0, [&] { r.trace(t0, kSource, "HandoverTrigger"); });

    if (!p.xn_available) {
        // No backhaul, no secondary path. Keep serving from the source.
        r.at(t0, [&] { r.trace(t0, kSource, "HandoverAbortNoXn"); });
        r.eliminator = p.direction == Direction::Uplink ? kSource : kUe;
        const Time start = next_boundary(t0 + 1, p.tti);
        for (int i = 1; i <= p.n_sdus; ++i) {
            const Time ti = start + static_cast<Time>(i - 1) * p.sdu_spacing;
            r.at(ti, [&r, i, ti, &p] {
                if (p.direction == Direction::Uplink) {
                    r.trace(ti, kUe, "PdcpTransmit", i);
                    r.air_to(kSource, i, ti, p.lost_on_source.count(i) > 0);
                } else {
                    r.trace(ti, kSource, "PdcpTransmit", i);
                    r.air_to(kUe, i, ti, p.lost_on_source.count(i) > 0);
                }
            });
        }
        r.run();
        r.out.aborted = true;
        return std::move(r.out);
    }

    r.at(t0 + p.xn_latency, [&r, &p, t0] { r.trace(t0 + p.xn_latency, kTarget, "XnBearerSetup"); });
    const Time t_est = t0 + 2 * p.xn_latency;
    r.at(t_est, [&r, t_est] {
        r.phase = HoPhase::BearerEstablished;
        r.trace(t_est, kSource, "XnBearerSetupAck");
    });
    const Time t_apply = t_est + p.rrc_latency;
    r.at(t_apply, [&r, t_apply] {
        r.phase = HoPhase::Duplicating;
        r.trace(t_apply, kUe, "RrcReconfiguration");
    });
    r.at(t_est + 2 * p.rrc_latency, [&r, &p, t_est] {
        r.trace(t_est + 2 * p.rrc_latency, kSource, "RrcReconfigurationComplete");
    });

    const Time dup_start = next_boundary(t_apply + 1, p.tti);
    const auto sdu_time = [&](int i) {
        return dup_start + static_cast<Time>(i - 1) * p.sdu_spacing;
    };

    for (int i = 1; i <= p.n_sdus; ++i) {
        const Time ti = sdu_time(i);
        if (p.direction == Direction::Uplink) {
            r.at(ti, [&r, &p, i, ti] {
                r.trace(ti, kUe, "PdcpDuplicate", i);
                r.air_to(kSource, i, ti, p.lost_on_source.count(i) > 0);
                r.air_to(kTarget, i, ti, p.lost_on_target.count(i) > 0);
            });
        } else {
            // The core hands the SDU to whichever node anchors PDCP when it
            // arrives; both nodes transmit while duplication lasts.
            r.at(ti, [&r, &p, i, ti] {
                const bool via_source = r.phase < HoPhase::PathSwitched;
                const std::string& anchor = via_source ? kSource : kTarget;
                const std::string& peer = via_source ? kTarget : kSource;
                r.trace(ti, anchor, "PdcpDuplicate", i);
                const bool anchor_lost =
                    (via_source ? p.lost_on_source : p.lost_on_target).count(i) > 0;
                r.air_to(kUe, i, ti, anchor_lost);
                if (!r.source_released) {
                    r.trace(ti, anchor, "XnForward", i);
                    const Time peer_tx = next_boundary(ti + p.xn_latency, p.tti);
                    const bool peer_lost =
                        (via_source ? p.lost_on_target : p.lost_on_source).count(i) > 0;
                    r.at(peer_tx, [&r, i, peer_tx, peer_lost, peer] {
                        r.trace(peer_tx, peer, "PdcpTransmit", i);
                        r.air_to(kUe, i, peer_tx, peer_lost);
                    });
                }
            });
        }
    }

    // Between the moment SDU k has fully settled on the source path and the
    // first contact of SDU k+1 with a receiver.
    const int k = p.path_switch_after_sn;
    Time t_ps;
    if (p.direction == Direction::Uplink) {
        const Time settled = sdu_time(k) + p.tti + p.xn_latency;
        const Time next_contact =
            k < p.n_sdus ? sdu_time(k + 1) + p.tti : settled + p.sdu_spacing;
        t_ps = (settled + next_contact) / 2;
    } else {
        const Time next_arrival = k < p.n_sdus ? sdu_time(k + 1) : sdu_time(k) + p.sdu_spacing;
        t_ps = (sdu_time(k) + p.tti + p.xn_latency + next_arrival) / 2;
        if (t_ps >= next_arrival) t_ps = next_arrival - 1;
    }
    r.at(t_ps, [&r, &p, t_ps] {
        r.phase = HoPhase::PathSwitched;
        r.trace(t_ps, kCore, "PathSwitchRequest");
        if (p.direction == Direction::Uplink) {
            // Elimination context moves with the path switch transaction.
            r.trace(t_ps, kSource, "SnStatusTransfer");
            r.eliminator = kTarget;
        }
        r.out.path_switch_time = t_ps;
    });

    const Time t_rel = sdu_time(p.n_sdus) + p.sdu_spacing + 2 * (p.xn_latency + p.tti);
    r.at(t_rel, [&r, t_rel] {
        r.phase = HoPhase::SourceReleased;
        r.source_released = true;
        r.trace(t_rel, kSource, "ContextRelease");
    });

    r.run();
    return std::move(r.out);
}

std::string format_handover_trace(const std::vector<HandoverRecord>& trace) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3);
    for (const HandoverRecord& rec : trace) {
        os << std::setw(9) << to_ms(rec.time) << " | " << std::setw(10) << rec.entity << " | "
           << std::setw(17) << to_string(rec.phase) << " | " << std::setw(26) << rec.message
           << " | ";
        if (rec.sn_lo < 0)
            os << "-";
        else if (rec.sn_hi > rec.sn_lo)
            os << rec.sn_lo << "-" << rec.sn_hi;
        else
            os << rec.sn_lo;
        os << '\n';
    }
    return os.str();
}

} // namespace dupsim
