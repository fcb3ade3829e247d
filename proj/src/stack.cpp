#include "dupsim/stack.hpp"

#include <algorithm>
#include <limits>

namespace dupsim {

namespace {
constexpr std::uint32_t kBatch = std::numeric_limits<std::uint32_t>::max();
constexpr std::uint32_t kPdcpTick = std::numeric_limits<std::uint32_t>::max();
constexpr std::uint32_t kLegMask = 0xFFu;
constexpr std::uint32_t kSuccessFlag = 0x100u;
constexpr std::uint32_t kNotifyFlag = 0x200u;
} // namespace

StackSim::StackSim(const StackParams& params, LinkModel* links)
    : params_(params), links_model_(links) {
    if (params_.tti <= 0) throw ConfigError("tti must be positive");
    if (params_.latency_budget < 0) throw ConfigError("latency budget cannot be negative");
    if (params_.rlc.max_retx < 0 || params_.rlc.retx_delay < 0)
        throw ConfigError("invalid RLC retransmission parameters");
}

int StackSim::add_bearer(const BearerConfig& cfg) {
    validate_bearer(cfg);
    bearers_.emplace_back(cfg);
    for (int l = 0; l < cfg.n_legs; ++l) {
        const std::uint32_t link = cfg.legs[static_cast<std::size_t>(l)].link_id;
        if (link >= links_.size()) links_.resize(link + 1);
    }
    return static_cast<int>(bearers_.size()) - 1;
}

void StackSim::schedule_sdu(int bearer, Time at, std::uint32_t bytes) {
    queue_.schedule(at, EventKind::TrafficArrival, static_cast<std::uint32_t>(bearer), bytes);
}

void StackSim::schedule_sdu_batch(Time at, std::uint32_t bytes) {
    queue_.schedule(at, EventKind::TrafficArrival, kBatch, bytes);
}

void StackSim::schedule_control(Time at, std::function<void()> fn) {
    controls_.push_back(std::move(fn));
    queue_.schedule(at, EventKind::RrcDelivery, 0, 0,
                    static_cast<std::int64_t>(controls_.size()) - 1);
}

void StackSim::schedule_snapshot(Time at, std::function<void(Time)> fn) {
    snapshots_.push_back(std::move(fn));
    queue_.schedule(at, EventKind::MetricSnapshot, 0, 0,
                    static_cast<std::int64_t>(snapshots_.size()) - 1);
}

void StackSim::set_dup_active(int bearer, bool active) {
    BearerRt& br = bearers_[static_cast<std::size_t>(bearer)];
    if (active && br.cfg.n_legs != 2)
        throw ConfigError("cannot activate duplication on a single leg bearer");
    br.dup_active = active;
}

std::size_t StackSim::rlc_queued(int bearer, int leg) const {
    const BearerRt& br = bearers_[static_cast<std::size_t>(bearer)];
    return static_cast<std::size_t>(br.rlc_pending[leg]);
}

void StackSim::run(Time horizon) {
    while (auto ev = queue_.pop()) {
        if (ev->time > horizon)
            throw SimError("simulation ran past its horizon at t=" + std::to_string(ev->time) +
                           "us with " + std::to_string(queue_.size() + 1) + " events pending");
        handle(*ev);
    }
    finalize();
}

void StackSim::handle(const SimEvent& ev) {
    switch (ev.kind) {
    case EventKind::TrafficArrival:
        if (ev.a == kBatch) {
            // One pulse feeds every bearer; a single shared tick then runs
            // their PDCP processing at the boundary.
            bool newly = false;
            for (BearerRt& br : bearers_) {
                br.pdcp.buffer_sdu(PdcpSdu{ev.b, queue_.now()});
                if (!br.process_pending) {
                    br.process_pending = true;
                    newly = true;
                }
            }
            if (newly)
                queue_.schedule(next_boundary(queue_.now(), params_.tti), EventKind::TtiTick,
                                kBatch, kPdcpTick);
        } else {
            on_arrival(ev.a, ev.b);
        }
        break;
    case EventKind::TtiTick:
        if (ev.b == kPdcpTick) {
            if (ev.a == kBatch) {
                for (std::uint32_t i = 0; i < bearers_.size(); ++i)
                    if (bearers_[i].process_pending) process_pdcp(i);
            } else {
                process_pdcp(ev.a);
            }
        } else {
            link_tick(ev.b);
        }
        break;
    case EventKind::TxAttempt:
        on_attempt(ev);
        break;
    case EventKind::AckNack:
        if (ev.b & kNotifyFlag)
            on_twin_notice(ev.a, static_cast<std::uint32_t>(ev.c));
        else
            on_acknack(ev);
        break;
    case EventKind::XnDelivery:
        deliver_pdu(ev.a, static_cast<std::uint32_t>(ev.c));
        break;
    case EventKind::RrcDelivery:
        controls_[static_cast<std::size_t>(ev.c)]();
        break;
    case EventKind::MetricSnapshot:
        snapshots_[static_cast<std::size_t>(ev.c)](ev.time);
        break;
    }
}

void StackSim::on_arrival(std::uint32_t bearer, std::uint32_t bytes) {
    BearerRt& br = bearers_[bearer];
    br.pdcp.buffer_sdu(PdcpSdu{bytes, queue_.now()});
    if (!br.process_pending) {
        br.process_pending = true;
        // Processing runs at the slot boundary, after any control plane
        // change already booked for the same instant.
        queue_.schedule(next_boundary(queue_.now(), params_.tti), EventKind::TtiTick, bearer,
                        kPdcpTick);
    }
}

void StackSim::process_pdcp(std::uint32_t bearer) {
    BearerRt& br = bearers_[bearer];
    br.process_pending = false;
    for (const PdcpPdu& pdu : br.pdcp.process(br.dup_active)) enqueue_pdu(bearer, pdu);
}

void StackSim::enqueue_pdu(std::uint32_t bearer, const PdcpPdu& pdu) {
    BearerRt& br = bearers_[bearer];
    const std::uint32_t packet_idx = static_cast<std::uint32_t>(pdu.count);
    if (packet_idx >= br.packets.size()) {
        br.packets.resize(packet_idx + 1);
        PacketState& pk = br.packets[packet_idx];
        pk.created_at = pdu.created_at;
        ++br.stats.generated;
    }
    PacketState& pk = br.packets[packet_idx];
    if (pdu.is_duplicate) {
        pk.duplicated = true;
        ++br.stats.duplicated;
    }

    const LegConfig& lc = br.cfg.legs[static_cast<std::size_t>(pdu.leg)];
    if (br.rlc_pending[pdu.leg] >= params_.rlc.buffer_limit) {
        ++br.stats.rlc_drops;
        return; // refused at RLC ingress, the copy never existed
    }

    PduState ps;
    ps.count = pdu.count;
    ps.sn = pdu.sn;
    ps.packet = packet_idx;
    ps.leg = static_cast<std::uint8_t>(pdu.leg);
    ps.is_duplicate = pdu.is_duplicate;
    const std::uint32_t pdu_idx = static_cast<std::uint32_t>(br.pdus.size());
    br.pdus.push_back(ps);
    pk.pdu_idx[pdu.leg] = static_cast<std::int32_t>(pdu_idx);
    ++pk.copies;
    ++br.rlc_pending[pdu.leg];

    LinkRt& link = links_[lc.link_id];
    const Time ready = queue_.now() + lc.pre_air_delay;
    QEntry entry{bearer, pdu_idx, ready};
    if (br.cfg.kind == BearerKind::Srb)
        link.new_srb.push_back(entry);
    else
        link.new_data.push_back(entry);
    arm_link(lc.link_id, ready);
}

void StackSim::arm_link(std::uint32_t link_id, Time ready) {
    LinkRt& link = links_[link_id];
    const Time b = next_boundary(std::max(ready, queue_.now()), params_.tti);
    if (link.armed_at < 0 || b < link.armed_at) {
        link.armed_at = b;
        queue_.schedule(b, EventKind::TtiTick, 0, link_id);
    }
}

Time StackSim::min_ready(const LinkRt& link) const {
    Time m = std::numeric_limits<Time>::max();
    for (const std::deque<QEntry>* q : {&link.retx_srb, &link.retx_data, &link.new_srb,
                                        &link.new_data})
        if (!q->empty()) m = std::min(m, q->front().ready);
    return m;
}

void StackSim::link_tick(std::uint32_t link_id) {
    LinkRt& link = links_[link_id];
    if (link.armed_at != queue_.now()) return; // stale wakeup from an older arming
    link.armed_at = -1;
    // Retransmissions go to the MAC before new data; SRBs preempt data in
    // both stages.
    drain_queue(link_id, link.retx_srb, true);
    drain_queue(link_id, link.retx_data, true);
    drain_queue(link_id, link.new_srb, false);
    drain_queue(link_id, link.new_data, false);
    if (!link.empty()) {
        Time b = next_boundary(min_ready(link), params_.tti);
        if (b <= queue_.now()) b = queue_.now() + params_.tti;
        if (link.armed_at < 0 || b < link.armed_at) {
            link.armed_at = b;
            queue_.schedule(b, EventKind::TtiTick, 0, link_id);
        }
    }
}

void StackSim::drain_queue(std::uint32_t link_id, std::deque<QEntry>& q, bool) {
    const Time now = queue_.now();
    while (!q.empty()) {
        const QEntry e = q.front();
        PduState& pdu = bearers_[e.bearer].pdus[e.pdu];
        if (pdu.status == PduStatus::Cancelled) {
            q.pop_front(); // removed by a cross leg discard while waiting
            continue;
        }
        if (e.ready > now) break;
        q.pop_front();
        pdu.status = PduStatus::InFlight;
        // Same timestamp, so the attempt runs inline instead of bouncing
        // through the queue; outcome draws key on (count, attempt) and do
        // not care.
        on_attempt(SimEvent{now, 0, EventKind::TxAttempt, e.bearer, link_id,
                            static_cast<std::int64_t>(e.pdu)});
    }
}

void StackSim::on_attempt(const SimEvent& ev) {
    BearerRt& br = bearers_[ev.a];
    PduState& pdu = br.pdus[static_cast<std::size_t>(ev.c)];
    PacketState& pk = br.packets[pdu.packet];
    const std::uint32_t attempt_idx = pdu.attempts_done;
    const bool ok = links_model_->attempt_succeeds(ev.b, pdu.count, attempt_idx, ev.time);

    ++pdu.attempts_done;
    pdu.last_attempt = ev.time;
    ++br.stats.attempts;
    if (attempt_idx > 0) {
        ++br.stats.retx_attempts;
        const Time twin_ack = pk.acked_at[1 - pdu.leg];
        if (twin_ack >= 0 && twin_ack <= ev.time) ++br.stats.redundant_retx;
    }
    if (attempt_idx == 0 && pk.duplicated && !pdu.is_duplicate && !ok)
        pk.default_first_failed = true;

    if (trace)
        trace(TraceEvent{ev.time, EventKind::TxAttempt, static_cast<int>(ev.a), pdu.leg,
                         pdu.count, static_cast<int>(attempt_idx), ok});

    queue_.schedule(ev.time + params_.tti, EventKind::AckNack, ev.a,
                    static_cast<std::uint32_t>(pdu.leg) | (ok ? kSuccessFlag : 0u), ev.c);
}

void StackSim::on_acknack(const SimEvent& ev) {
    BearerRt& br = bearers_[ev.a];
    PduState& pdu = br.pdus[static_cast<std::size_t>(ev.c)];
    PacketState& pk = br.packets[pdu.packet];
    const int leg = static_cast<int>(ev.b & kLegMask);
    const bool ok = (ev.b & kSuccessFlag) != 0;
    const Time now = ev.time;

    if (trace)
        trace(TraceEvent{now, EventKind::AckNack, static_cast<int>(ev.a), leg, pdu.count,
                         pdu.attempts_done - 1, ok});

    if (ok) {
        pk.acked_at[leg] = now;
        retire_copy(br, pdu, PduStatus::Acked);
        if (params_.cross_leg_discard && pk.duplicated) {
            const std::int32_t other = pk.pdu_idx[1 - leg];
            if (other >= 0) {
                const PduStatus st = br.pdus[static_cast<std::size_t>(other)].status;
                if (st == PduStatus::Queued || st == PduStatus::InFlight)
                    queue_.schedule(now + br.cfg.legs[static_cast<std::size_t>(leg)].notify_delay,
                                    EventKind::AckNack, ev.a,
                                    static_cast<std::uint32_t>(1 - leg) | kNotifyFlag,
                                    static_cast<std::int64_t>(other));
            }
        }
        const Time post = br.cfg.legs[static_cast<std::size_t>(leg)].post_air_delay;
        if (post > 0)
            queue_.schedule(now + post, EventKind::XnDelivery, ev.a, 0, ev.c);
        else
            deliver_pdu(ev.a, static_cast<std::uint32_t>(ev.c));
        return;
    }

    const bool retx_due = pdu.attempts_done <= params_.rlc.max_retx;
    if (pdu.cancel_pending) {
        if (retx_due) ++br.stats.avoided_retx;
        retire_copy(br, pdu, PduStatus::Cancelled);
        return;
    }
    if (!retx_due) {
        retire_copy(br, pdu, PduStatus::Failed);
        return;
    }
    pdu.status = PduStatus::Queued;
    const Time ready = pdu.last_attempt + params_.rlc.retx_delay;
    const std::uint32_t link_id = br.cfg.legs[static_cast<std::size_t>(leg)].link_id;
    LinkRt& link = links_[link_id];
    QEntry entry{ev.a, static_cast<std::uint32_t>(ev.c), ready};
    if (br.cfg.kind == BearerKind::Srb)
        link.retx_srb.push_back(entry);
    else
        link.retx_data.push_back(entry);
    arm_link(link_id, ready);
}

void StackSim::on_twin_notice(std::uint32_t bearer_idx, std::uint32_t pdu_idx) {
    BearerRt& br = bearers_[bearer_idx];
    PduState& pdu = br.pdus[pdu_idx];
    switch (pdu.status) {
    case PduStatus::Queued:
        // Cancel a waiting retransmission. A copy that never went out keeps
        // its first attempt; the receive window will eliminate it anyway.
        if (pdu.attempts_done > 0) {
            pdu.status = PduStatus::Cancelled;
            ++br.stats.avoided_retx;
            --br.rlc_pending[pdu.leg];
            ++br.packets[pdu.packet].retired;
        }
        break;
    case PduStatus::InFlight:
        pdu.cancel_pending = true; // suppress the requeue if this attempt fails
        break;
    default:
        break;
    }
}

void StackSim::retire_copy(BearerRt& br, PduState& pdu, PduStatus final_status) {
    pdu.status = final_status;
    --br.rlc_pending[pdu.leg];
    ++br.packets[pdu.packet].retired;
}

void StackSim::deliver_pdu(std::uint32_t bearer, std::uint32_t pdu_idx) {
    BearerRt& br = bearers_[bearer];
    PduState& pdu = br.pdus[pdu_idx];
    const RxOutcome out = br.window.receive(pdu.sn);
    if (trace)
        trace(TraceEvent{queue_.now(), EventKind::XnDelivery, static_cast<int>(bearer), pdu.leg,
                         pdu.count, 0, out == RxOutcome::Deliver});
    if (out != RxOutcome::Deliver) return;
    PacketState& pk = br.packets[pdu.packet];
    if (pk.delivered_at < 0) pk.delivered_at = queue_.now();
    if (collect_delivered_) br.delivered_counts.push_back(pdu.count);
}

void StackSim::finalize() {
    if (finalized_) return;
    finalized_ = true;
    for (BearerRt& br : bearers_) {
        for (const PacketState& pk : br.packets) {
            if (pk.retired != pk.copies)
                throw SimError("packet still unresolved after the event queue drained");
            // Duplication counted as necessary whenever one default leg
            // transmission would not have been enough.
            if (pk.duplicated && pk.default_first_failed) ++br.stats.dup_saved;
            if (pk.delivered_at < 0) {
                ++br.stats.lost;
                continue;
            }
            const Time latency = pk.delivered_at - pk.created_at;
            br.stats.latency_sum_us += latency;
            if (latency <= params_.latency_budget)
                ++br.stats.delivered_within;
            else
                ++br.stats.delivered_late;
        }
    }
}

BearerStats StackSim::total_stats() const {
    BearerStats t;
    for (const BearerRt& br : bearers_) {
        const BearerStats& s = br.stats;
        t.generated += s.generated;
        t.delivered_within += s.delivered_within;
        t.delivered_late += s.delivered_late;
        t.lost += s.lost;
        t.duplicated += s.duplicated;
        t.dup_saved += s.dup_saved;
        t.attempts += s.attempts;
        t.retx_attempts += s.retx_attempts;
        t.redundant_retx += s.redundant_retx;
        t.avoided_retx += s.avoided_retx;
        t.rlc_drops += s.rlc_drops;
        t.latency_sum_us += s.latency_sum_us;
    }
    return t;
}

} // namespace dupsim
