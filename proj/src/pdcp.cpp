#include "dupsim/pdcp.hpp"

namespace dupsim {

std::vector<PdcpPdu> pdcp_submit(const BearerConfig& cfg, bool dup_active,
                                 std::uint64_t buffered_volume_bytes, std::uint32_t& rr_state,
                                 std::uint32_t sn, std::uint64_t count, const PdcpSdu& sdu) {
    const auto make = [&](int leg, bool dup) {
        PdcpPdu p;
        p.sn = sn;
        p.count = count;
        p.payload_bytes = sdu.payload_bytes;
        p.created_at = sdu.created_at;
        p.leg = leg;
        p.is_duplicate = dup;
        return p;
    };

    std::vector<PdcpPdu> out;
    if (dup_active) {
        if (cfg.n_legs != 2)
            throw SimError("duplication active on a single leg bearer");
        // Both copies carry the same SN; the default leg holds the primary.
        out.push_back(make(cfg.default_leg, false));
        out.push_back(make(1 - cfg.default_leg, true));
        return out;
    }

    if (cfg.kind == BearerKind::Split && buffered_volume_bytes >= cfg.split_threshold_bytes) {
        out.push_back(make(static_cast<int>(rr_state % 2), false));
        ++rr_state;
        return out;
    }

    out.push_back(make(cfg.default_leg, false));
    return out;
}

PdcpTxEntity::PdcpTxEntity(const BearerConfig& cfg) : cfg_(cfg) { validate_bearer(cfg_); }

void PdcpTxEntity::buffer_sdu(const PdcpSdu& sdu) {
    buffer_.push_back(sdu);
    buffered_bytes_ += sdu.payload_bytes;
}

std::vector<PdcpPdu> PdcpTxEntity::process(bool dup_active) {
    std::vector<PdcpPdu> out;
    out.reserve(buffer_.size() * (dup_active ? 2 : 1));
    const std::uint32_t sn_mask = (1u << cfg_.sn_bits) - 1u;
    for (const PdcpSdu& sdu : buffer_) {
        // The volume estimate counts this SDU and everything still behind it.
        std::vector<PdcpPdu> routed =
            pdcp_submit(cfg_, dup_active, buffered_bytes_, rr_state_, next_sn_, next_count_, sdu);
        for (PdcpPdu& p : routed) out.push_back(p);
        next_sn_ = (next_sn_ + 1u) & sn_mask;
        ++next_count_;
        buffered_bytes_ -= sdu.payload_bytes;
    }
    buffer_.clear();
    return out;
}

ReceiverWindow::ReceiverWindow(int sn_bits) {
    if (sn_bits < 4 || sn_bits > 18) throw ConfigError("sn_bits outside supported range");
    space_ = 1u << sn_bits;
    window_ = space_ / 2u;
    seen_.assign(space_, 0);
}

RxOutcome ReceiverWindow::receive(std::uint32_t sn) {
    if (sn >= space_) throw SimError("SN outside the sequence space");

    // Unwrap to the absolute position closest to the newest delivery.
    std::int64_t abs;
    if (highest_abs_ < 0) {
        abs = sn;
    } else {
        const std::uint32_t base_sn = static_cast<std::uint32_t>(highest_abs_) & (space_ - 1u);
        const std::uint32_t delta = (sn - base_sn) & (space_ - 1u);
        abs = (delta < window_) ? highest_abs_ + delta
                                : highest_abs_ - static_cast<std::int64_t>(space_ - delta);
    }

    if (abs < 0 || (highest_abs_ >= 0 && abs + static_cast<std::int64_t>(window_) <= highest_abs_)) {
        ++stale_discard_;
        return RxOutcome::StaleDiscard;
    }
    std::uint64_t& slot = seen_[static_cast<std::uint32_t>(abs) & (space_ - 1u)];
    if (slot == static_cast<std::uint64_t>(abs) + 1) {
        ++dup_discard_;
        return RxOutcome::DuplicateDiscard;
    }
    slot = static_cast<std::uint64_t>(abs) + 1;
    if (abs > highest_abs_) highest_abs_ = abs;
    ++delivered_;
    return RxOutcome::Deliver;
}

} // namespace dupsim
