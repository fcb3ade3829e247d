#pragma once

#include "dupsim/rng.hpp"
#include "dupsim/types.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

namespace dupsim {

// Decides the fate of individual MAC transmission attempts. Outcomes must be
// a pure function of (link, packet, attempt index) so that cancelling one
// attempt never changes any other outcome.
class LinkModel {
public:
    virtual ~LinkModel() = default;
    virtual bool attempt_succeeds(std::uint32_t link_id, std::uint64_t packet_count,
                                  std::uint32_t attempt_idx, Time at) = 0;
};

class PerfectLink final : public LinkModel {
public:
    bool attempt_succeeds(std::uint32_t, std::uint64_t, std::uint32_t, Time) override {
        return true;
    }
};

// Outcomes scripted per (link, packet, attempt); unscripted attempts succeed.
// Used by tests to force exact loss patterns.
class ScriptedLinkModel final : public LinkModel {
public:
    void set(std::uint32_t link, std::uint64_t count, std::uint32_t attempt, bool ok) {
        script_[{link, count, attempt}] = ok;
    }
    // All attempts for this packet on this link fail.
    void fail_packet(std::uint32_t link, std::uint64_t count, std::uint32_t max_attempts = 8) {
        for (std::uint32_t a = 0; a < max_attempts; ++a) set(link, count, a, false);
    }
    bool attempt_succeeds(std::uint32_t link, std::uint64_t count, std::uint32_t attempt,
                          Time) override {
        auto it = script_.find({link, count, attempt});
        return it == script_.end() ? true : it->second;
    }

private:
    std::map<std::tuple<std::uint32_t, std::uint64_t, std::uint32_t>, bool> script_;
};

// Independent loss probability per link, drawn with counter based hashing.
class BernoulliLinkModel final : public LinkModel {
public:
    explicit BernoulliLinkModel(std::uint64_t seed) : seed_(seed) {}
    void set_loss(std::uint32_t link, double p) { loss_.resize(std::max<std::size_t>(loss_.size(), link + 1), 0.0); loss_[link] = p; }
    bool attempt_succeeds(std::uint32_t link, std::uint64_t count, std::uint32_t attempt,
                          Time) override {
        const double p = link < loss_.size() ? loss_[link] : 0.0;
        if (p <= 0.0) return true;
        return u01(hash_key({rngtag::kBernoulli, seed_, link, count, attempt})) > p;
    }

private:
    std::uint64_t seed_;
    std::vector<double> loss_;
};

} // namespace dupsim
