#pragma once

#include "dupsim/bearer.hpp"
#include "dupsim/types.hpp"

#include <cstdint>
#include <vector>

namespace dupsim {

struct PdcpSdu {
    std::uint32_t payload_bytes = 0;
    Time created_at = 0;
};

struct PdcpPdu {
    std::uint32_t sn = 0;      // wraps at 2^sn_bits
    std::uint64_t count = 0;   // monotone, never wraps
    std::uint32_t payload_bytes = 0;
    Time created_at = 0;
    int leg = 0;
    bool is_duplicate = false; // copy on the non default leg of a duplicated PDU
};

// Routes one SDU onto the bearer legs. Duplication doubles the PDU with the
// same SN on both legs; a split bearer alternates legs above its volume
// threshold; everything else uses the default leg. rr_state carries the
// alternation point between calls.
std::vector<PdcpPdu> pdcp_submit(const BearerConfig& cfg, bool dup_active,
                                 std::uint64_t buffered_volume_bytes, std::uint32_t& rr_state,
                                 std::uint32_t sn, std::uint64_t count, const PdcpSdu& sdu);

// Transmit side PDCP entity. SDUs wait in the PDCP buffer until the next
// processing opportunity, which matters when duplication flips in between:
// only data still held here picks up the new routing.
class PdcpTxEntity {
public:
    explicit PdcpTxEntity(const BearerConfig& cfg);

    void buffer_sdu(const PdcpSdu& sdu);
    std::vector<PdcpPdu> process(bool dup_active);

    const BearerConfig& config() const { return cfg_; }
    std::uint64_t buffered_bytes() const { return buffered_bytes_; }
    std::size_t buffered_sdus() const { return buffer_.size(); }
    std::uint64_t submitted_sdus() const { return next_count_; }

private:
    BearerConfig cfg_;
    std::vector<PdcpSdu> buffer_;
    std::uint64_t buffered_bytes_ = 0;
    std::uint32_t next_sn_ = 0;
    std::uint64_t next_count_ = 0;
    std::uint32_t rr_state_ = 0;
};

enum class RxOutcome : std::uint8_t { Deliver, DuplicateDiscard, StaleDiscard };

// Receive side duplicate elimination. First copy of an SN inside the reorder
// window is delivered, later copies are discarded, SNs older than a full
// window are treated as stale. SNs are unwrapped to absolute positions so a
// slot can be reused after the space wraps.
class ReceiverWindow {
public:
    explicit ReceiverWindow(int sn_bits = 12);

    RxOutcome receive(std::uint32_t sn);

    std::uint32_t sn_space() const { return space_; }
    std::uint32_t window_size() const { return window_; }
    std::uint64_t delivered() const { return delivered_; }
    std::uint64_t discarded_duplicate() const { return dup_discard_; }
    std::uint64_t discarded_stale() const { return stale_discard_; }

private:
    std::uint32_t space_ = 0;
    std::uint32_t window_ = 0;
    std::int64_t highest_abs_ = -1;
    std::vector<std::uint64_t> seen_; // absolute position + 1, 0 when never seen
    std::uint64_t delivered_ = 0;
    std::uint64_t dup_discard_ = 0;
    std::uint64_t stale_discard_ = 0;
};

} // namespace dupsim
