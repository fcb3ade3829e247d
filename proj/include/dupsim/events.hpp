#pragma once

#include "dupsim/types.hpp"

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

namespace dupsim {

enum class EventKind : std::uint8_t {
    TtiTick,        // slot boundary work for one RLC leg
    TrafficArrival, // SDU generation pulse
    TxAttempt,      // one MAC transmission attempt of one RLC PDU
    AckNack,        // RLC feedback for an attempt, or a cross leg ACK notice
    XnDelivery,     // PDU arriving at the far end of the Xn interface
    RrcDelivery,    // control plane message taking effect
    MetricSnapshot, // periodic measurement / trigger evaluation point
};

struct SimEvent {
    Time time = 0;
    std::uint64_t seq = 0; // insertion order; ties on time resolve FIFO
    EventKind kind = EventKind::TtiTick;
    std::uint32_t a = 0; // payload slots, meaning depends on kind
    std::uint32_t b = 0;
    std::int64_t c = 0;
};

// Min heap on (time, seq). The queue itself knows nothing about handlers;
// whoever drives the simulation pops and dispatches.
class EventQueue {
public:
    void schedule(Time t, EventKind kind, std::uint32_t a = 0, std::uint32_t b = 0,
                  std::int64_t c = 0) {
        if (t < now_)
            throw SimError("event scheduled in the past (t=" + std::to_string(t) +
                           " now=" + std::to_string(now_) + ")");
        heap_.push(SimEvent{t, next_seq_++, kind, a, b, c});
    }

    std::optional<SimEvent> pop() {
        if (heap_.empty()) return std::nullopt;
        SimEvent ev = heap_.top();
        heap_.pop();
        now_ = ev.time;
        return ev;
    }

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    Time now() const { return now_; }

private:
    struct Later {
        bool operator()(const SimEvent& x, const SimEvent& y) const {
            if (x.time != y.time) return x.time > y.time;
            return x.seq > y.seq;
        }
    };
    std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
    std::uint64_t next_seq_ = 0;
    Time now_ = 0;
};

} // namespace dupsim
