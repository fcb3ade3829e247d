#pragma once

#include "dupsim/bearer.hpp"
#include "dupsim/events.hpp"
#include "dupsim/link_model.hpp"
#include "dupsim/pdcp.hpp"
#include "dupsim/types.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

namespace dupsim {

struct RlcParams {
    int max_retx = 3;          // retransmissions after the first attempt
    Time retx_delay = 4000;    // gap between consecutive attempts of one PDU
    int buffer_limit = 1024;   // pending PDUs one RLC entity will hold
};

struct StackParams {
    Time tti = 1000;
    Time latency_budget = 5000; // inclusive deadline for a useful delivery
    bool cross_leg_discard = false;
    RlcParams rlc;
};

struct BearerStats {
    std::uint64_t generated = 0;
    std::uint64_t delivered_within = 0;
    std::uint64_t delivered_late = 0;
    std::uint64_t lost = 0;
    std::uint64_t duplicated = 0;  // packets sent as two copies
    std::uint64_t dup_saved = 0;   // duplicated, default leg first attempt failed, still in time
    std::uint64_t attempts = 0;
    std::uint64_t retx_attempts = 0;
    std::uint64_t redundant_retx = 0; // retransmitted although the twin was already acked
    std::uint64_t avoided_retx = 0;   // retransmissions cancelled by cross leg discard
    std::uint64_t rlc_drops = 0;      // new PDUs refused by a full RLC buffer
    std::int64_t latency_sum_us = 0;  // over all delivered packets
};

// One line of the observable protocol timeline, mostly for tests.
struct TraceEvent {
    Time time = 0;
    EventKind kind = EventKind::TtiTick;
    int bearer = 0;
    int leg = 0;
    std::uint64_t count = 0;
    int attempt = 0;
    bool success = false;
};

// Event driven model of PDCP + two RLC AM legs per bearer over a shared link
// model. Bearers are independent apart from links they share, where SRB
// traffic preempts data and retransmissions go out before new PDUs.
class StackSim {
public:
    StackSim(const StackParams& params, LinkModel* links);

    int add_bearer(const BearerConfig& cfg);

    // Pre booked traffic. Batch arrivals hit every bearer at once.
    void schedule_sdu(int bearer, Time at, std::uint32_t bytes);
    void schedule_sdu_batch(Time at, std::uint32_t bytes);

    // Control plane hooks executed inside the event loop.
    void schedule_control(Time at, std::function<void()> fn);
    void schedule_snapshot(Time at, std::function<void(Time)> fn);

    // Flips routing for SDUs processed from now on. Called from control code
    // at the moment a (re)configuration takes effect.
    void set_dup_active(int bearer, bool active);
    bool dup_active(int bearer) const { return bearers_[static_cast<std::size_t>(bearer)].dup_active; }

    void run(Time horizon);

    const BearerStats& stats(int bearer) const { return bearers_[static_cast<std::size_t>(bearer)].stats; }
    BearerStats total_stats() const;
    const PdcpTxEntity& pdcp(int bearer) const { return bearers_[static_cast<std::size_t>(bearer)].pdcp; }
    std::size_t rlc_queued(int bearer, int leg) const;

    // Delivered packet counts in delivery order (enable before running).
    void collect_delivered(bool on) { collect_delivered_ = on; }
    const std::vector<std::uint64_t>& delivered_counts(int bearer) const {
        return bearers_[static_cast<std::size_t>(bearer)].delivered_counts;
    }

    std::function<void(const TraceEvent&)> trace;

private:
    enum class PduStatus : std::uint8_t { Queued, InFlight, Acked, Failed, Cancelled };

    struct PduState {
        std::uint64_t count = 0;
        std::uint32_t sn = 0;
        std::uint32_t packet = 0; // index into the bearer packet vector
        std::int64_t last_attempt = -1;
        std::uint16_t attempts_done = 0;
        std::uint8_t leg = 0;
        bool is_duplicate = false;
        bool cancel_pending = false; // cross leg notice arrived while in flight
        PduStatus status = PduStatus::Queued;
    };

    struct PacketState {
        Time created_at = 0;
        Time delivered_at = -1;
        Time acked_at[2] = {-1, -1}; // RLC ack processing time per leg
        std::int32_t pdu_idx[2] = {-1, -1};
        std::uint8_t copies = 0;
        std::uint8_t retired = 0;
        bool duplicated = false;
        bool default_first_failed = false;
    };

    struct BearerRt {
        BearerConfig cfg;
        PdcpTxEntity pdcp;
        ReceiverWindow window;
        BearerStats stats;
        std::vector<PduState> pdus;
        std::vector<PacketState> packets;
        std::vector<std::uint64_t> delivered_counts;
        int rlc_pending[2] = {0, 0}; // PDUs held by each RLC entity
        bool dup_active = false;
        bool process_pending = false; // PDCP processing already booked

        explicit BearerRt(const BearerConfig& c) : cfg(c), pdcp(c), window(c.sn_bits) {}
    };

    struct QEntry {
        std::uint32_t bearer = 0;
        std::uint32_t pdu = 0;
        Time ready = 0;
    };

    // Four FIFO stages per radio link, drained in this order at each slot.
    struct LinkRt {
        std::deque<QEntry> retx_srb, retx_data, new_srb, new_data;
        Time armed_at = -1; // earliest pending tick, -1 when none
        bool empty() const {
            return retx_srb.empty() && retx_data.empty() && new_srb.empty() && new_data.empty();
        }
    };

    void handle(const SimEvent& ev);
    void on_arrival(std::uint32_t bearer, std::uint32_t bytes);
    void process_pdcp(std::uint32_t bearer);
    void enqueue_pdu(std::uint32_t bearer, const PdcpPdu& pdu);
    void arm_link(std::uint32_t link, Time ready);
    void link_tick(std::uint32_t link);
    void drain_queue(std::uint32_t link, std::deque<QEntry>& q, bool retx_stage);
    void on_attempt(const SimEvent& ev);
    void on_acknack(const SimEvent& ev);
    void on_twin_notice(std::uint32_t bearer_idx, std::uint32_t pdu_idx);
    void deliver_pdu(std::uint32_t bearer, std::uint32_t pdu_idx);
    void retire_copy(BearerRt& br, PduState& pdu, PduStatus final_status);
    void finalize();
    Time min_ready(const LinkRt& link) const;

    StackParams params_;
    LinkModel* links_model_;
    EventQueue queue_;
    std::vector<BearerRt> bearers_;
    std::vector<LinkRt> links_;
    std::vector<std::function<void()>> controls_;
    std::vector<std::function<void(Time)>> snapshots_;
    bool collect_delivered_ = false;
    bool finalized_ = false;
};

} // namespace dupsim
