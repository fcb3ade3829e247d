#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dupsim/events.hpp"
#include "dupsim/link_model.hpp"
#include "dupsim/stack.hpp"
#include "dupsim/types.hpp"

#include <algorithm>
#include <vector>

using namespace dupsim;

namespace {

constexpr Time kHorizon = 10'000'000;

BearerConfig mcg(std::uint32_t link = 0) {
    BearerConfig c;
    c.kind = BearerKind::Mcg;
    c.n_legs = 1;
    c.legs[0].link_id = link;
    return c;
}

BearerConfig srb(std::uint32_t link = 0) {
    BearerConfig c = mcg(link);
    c.kind = BearerKind::Srb;
    return c;
}

// DC duplicated bearer as seen from the downlink: PDCP sits at the master,
// the secondary copy crosses Xn before its air transmission.
BearerConfig dc_dl(Time xn) {
    BearerConfig c;
    c.kind = BearerKind::Duplicate;
    c.dup_mode = DupMode::Dc;
    c.n_legs = 2;
    c.duplication_configured = true;
    c.legs[0].cell_group = 0;
    c.legs[0].link_id = 0;
    c.legs[0].notify_delay = xn;
    c.legs[1].cell_group = 1;
    c.legs[1].link_id = 1;
    c.legs[1].pre_air_delay = xn;
    c.legs[1].notify_delay = xn;
    return c;
}

// Uplink twin: both copies leave the UE immediately, the one received at the
// secondary node crosses Xn to reach the PDCP anchor.
BearerConfig dc_ul(Time xn) {
    BearerConfig c = dc_dl(xn);
    c.legs[1].pre_air_delay = 0;
    c.legs[1].post_air_delay = xn;
    return c;
}

BearerConfig ca_dup() {
    BearerConfig c;
    c.kind = BearerKind::Duplicate;
    c.dup_mode = DupMode::Ca;
    c.n_legs = 2;
    c.duplication_configured = true;
    c.legs[0].cell_group = 0;
    c.legs[0].carrier = 0;
    c.legs[0].link_id = 0;
    c.legs[1].cell_group = 0;
    c.legs[1].carrier = 1;
    c.legs[1].link_id = 1;
    return c;
}

struct Recorder {
    std::vector<TraceEvent> events;
    std::vector<TraceEvent> attempts;
    void attach(StackSim& sim) {
        sim.trace = [this](const TraceEvent& e) {
            events.push_back(e);
            if (e.kind == EventKind::TxAttempt) attempts.push_back(e);
        };
    }
};

} // namespace

TEST_CASE("event queue orders by time then insertion") {
    EventQueue q;
    q.schedule(5, EventKind::TtiTick, 1);
    q.schedule(3, EventKind::TtiTick, 2);
    q.schedule(5, EventKind::TtiTick, 3);
    q.schedule(3, EventKind::TtiTick, 4);
    std::vector<std::uint32_t> order;
    while (auto ev = q.pop()) order.push_back(ev->a);
    CHECK(order == std::vector<std::uint32_t>{2, 4, 1, 3});
    CHECK_THROWS_AS([] {
        EventQueue qq;
        qq.schedule(10, EventKind::TtiTick);
        qq.pop();
        qq.schedule(5, EventKind::TtiTick);
    }(), SimError);
}

TEST_CASE("clean delivery on the first attempt") {
    PerfectLink link;
    StackSim sim(StackParams{}, &link);
    const int b = sim.add_bearer(mcg());
    Recorder rec;
    rec.attach(sim);
    sim.schedule_sdu(b, 0, 1200);
    sim.run(kHorizon);

    const BearerStats& s = sim.stats(b);
    CHECK(s.generated == 1);
    CHECK(s.delivered_within == 1);
    CHECK(s.delivered_late == 0);
    CHECK(s.lost == 0);
    CHECK(s.attempts == 1);
    CHECK(s.retx_attempts == 0);
    CHECK(s.latency_sum_us == 1000); // one air slot
    REQUIRE(rec.attempts.size() == 1);
    CHECK(rec.attempts[0].time == 0);
    CHECK(rec.attempts[0].success);
}

TEST_CASE("one retransmission lands exactly on the budget edge") {
    ScriptedLinkModel link;
    link.set(0, 0, 0, false);
    StackSim sim(StackParams{}, &link);
    const int b = sim.add_bearer(mcg());
    Recorder rec;
    rec.attach(sim);
    sim.schedule_sdu(b, 0, 1200);
    sim.run(kHorizon);

    REQUIRE(rec.attempts.size() == 2);
    CHECK(rec.attempts[0].time == 0);
    CHECK_FALSE(rec.attempts[0].success);
    CHECK(rec.attempts[1].time == 4000);
    CHECK(rec.attempts[1].attempt == 1);
    CHECK(rec.attempts[1].success);
    const BearerStats& s = sim.stats(b);
    // delivered at 5000 with a 5000 us budget, inclusive
    CHECK(s.delivered_within == 1);
    CHECK(s.delivered_late == 0);
    CHECK(s.retx_attempts == 1);
    CHECK(s.latency_sum_us == 5000);
}

TEST_CASE("two retransmissions miss the budget but still deliver") {
    ScriptedLinkModel link;
    link.set(0, 0, 0, false);
    link.set(0, 0, 1, false);
    StackSim sim(StackParams{}, &link);
    const int b = sim.add_bearer(mcg());
    Recorder rec;
    rec.attach(sim);
    sim.schedule_sdu(b, 0, 1200);
    sim.run(kHorizon);

    REQUIRE(rec.attempts.size() == 3);
    CHECK(rec.attempts[2].time == 8000);
    const BearerStats& s = sim.stats(b);
    CHECK(s.delivered_within == 0);
    CHECK(s.delivered_late == 1);
    CHECK(s.latency_sum_us == 9000);
}

TEST_CASE("the retransmission budget is max_retx after the first attempt") {
    ScriptedLinkModel link;
    link.fail_packet(0, 0);
    StackSim sim(StackParams{}, &link);
    const int b = sim.add_bearer(mcg());
    Recorder rec;
    rec.attach(sim);
    sim.schedule_sdu(b, 0, 1200);
    sim.run(kHorizon);

    REQUIRE(rec.attempts.size() == 4); // attempts at 0, 4, 8, 12 ms
    CHECK(rec.attempts[3].time == 12000);
    const BearerStats& s = sim.stats(b);
    CHECK(s.lost == 1);
    CHECK(s.attempts == 4);
    CHECK(s.retx_attempts == 3);
    CHECK(s.latency_sum_us == 0);
}

TEST_CASE("max_retx zero means a single shot") {
    ScriptedLinkModel link;
    link.fail_packet(0, 0);
    StackParams p;
    p.rlc.max_retx = 0;
    StackSim sim(p, &link);
    const int b = sim.add_bearer(mcg());
    sim.schedule_sdu(b, 0, 1200);
    sim.run(kHorizon);
    CHECK(sim.stats(b).attempts == 1);
    CHECK(sim.stats(b).lost == 1);
}

TEST_CASE("retransmissions drain before new PDUs on a shared link") {
    ScriptedLinkModel link;
    link.set(0, 0, 0, false);
    StackSim sim(StackParams{}, &link);
    const int b = sim.add_bearer(mcg());
    Recorder rec;
    rec.attach(sim);
    sim.schedule_sdu(b, 0, 1200);
    sim.schedule_sdu(b, 3500, 1200);
    sim.run(kHorizon);

    REQUIRE(rec.attempts.size() == 3);
    // slot 4000 carries both; the retransmission goes first
    CHECK(rec.attempts[1].time == 4000);
    CHECK(rec.attempts[1].count == 0);
    CHECK(rec.attempts[1].attempt == 1);
    CHECK(rec.attempts[2].time == 4000);
    CHECK(rec.attempts[2].count == 1);
    CHECK(rec.attempts[2].attempt == 0);
}

TEST_CASE("SRB traffic preempts data in the same slot") {
    PerfectLink link;
    StackSim sim(StackParams{}, &link);
    const int data = sim.add_bearer(mcg());
    const int sig = sim.add_bearer(srb());
    Recorder rec;
    rec.attach(sim);
    sim.schedule_sdu(data, 0, 1200);
    sim.schedule_sdu(sig, 0, 80);
    sim.run(kHorizon);

    REQUIRE(rec.attempts.size() == 2);
    CHECK(rec.attempts[0].time == 0);
    CHECK(rec.attempts[0].bearer == sig);
    CHECK(rec.attempts[1].bearer == data);
}

namespace {

// Outcomes keyed on (link, count, attempt) would hit both bearers here, so
// this one fails by timestamp instead.
struct FailAtZero final : LinkModel {
    bool attempt_succeeds(std::uint32_t, std::uint64_t, std::uint32_t, Time at) override {
        return at != 0;
    }
};

} // namespace

TEST_CASE("a data retransmission still beats fresh SRB traffic") {
    FailAtZero link;
    StackSim sim(StackParams{}, &link);
    const int data = sim.add_bearer(mcg());
    const int sig = sim.add_bearer(srb());
    Recorder rec;
    rec.attach(sim);
    sim.schedule_sdu(data, 0, 1200);
    sim.schedule_sdu(sig, 3500, 80);
    sim.run(kHorizon);

    REQUIRE(rec.attempts.size() == 3);
    CHECK(rec.attempts[1].time == 4000);
    CHECK(rec.attempts[1].bearer == data);
    CHECK(rec.attempts[1].attempt == 1);
    CHECK(rec.attempts[2].bearer == sig);
}

TEST_CASE("downlink duplication: secondary copy rides the backhaul first") {
    PerfectLink link;
    StackSim sim(StackParams{}, &link);
    const int b = sim.add_bearer(dc_dl(2000));
    sim.set_dup_active(b, true);
    Recorder rec;
    rec.attach(sim);
    sim.schedule_sdu(b, 0, 1200);
    sim.run(kHorizon);

    REQUIRE(rec.attempts.size() == 2);
    CHECK(rec.attempts[0].time == 0);    // master leg
    CHECK(rec.attempts[0].leg == 0);
    CHECK(rec.attempts[1].time == 2000); // after Xn
    CHECK(rec.attempts[1].leg == 1);
    const BearerStats& s = sim.stats(b);
    CHECK(s.generated == 1);
    CHECK(s.duplicated == 1);
    CHECK(s.delivered_within == 1);
    CHECK(s.latency_sum_us == 1000); // first copy wins
}

TEST_CASE("uplink duplication: secondary copy pays Xn after the air leg") {
    ScriptedLinkModel link;
    link.fail_packet(0, 0); // master leg never succeeds
    StackSim sim(StackParams{}, &link);
    const int b = sim.add_bearer(dc_ul(2000));
    sim.set_dup_active(b, true);
    sim.schedule_sdu(b, 0, 1200);
    sim.run(kHorizon);

    const BearerStats& s = sim.stats(b);
    // 1000 us air + 2000 us Xn forward to the anchor
    CHECK(s.delivered_within == 1);
    CHECK(s.latency_sum_us == 3000);
    CHECK(s.dup_saved == 1);
}

TEST_CASE("dup_saved counts default leg first attempt failures only") {
    ScriptedLinkModel link;
    link.set(0, 0, 0, false); // packet 0: default leg needs help
    StackSim sim(StackParams{}, &link);
    const int b = sim.add_bearer(dc_dl(2000));
    sim.set_dup_active(b, true);
    sim.schedule_sdu(b, 0, 1200);
    sim.schedule_sdu(b, 10000, 1200); // packet 1 sails through
    sim.run(kHorizon);

    const BearerStats& s = sim.stats(b);
    CHECK(s.generated == 2);
    CHECK(s.duplicated == 2);
    CHECK(s.dup_saved == 1);
    CHECK(s.delivered_within == 2);
}

TEST_CASE("secondary leg failures do not count as saved") {
    ScriptedLinkModel link;
    link.fail_packet(1, 0); // only the duplicate copy struggles
    StackSim sim(StackParams{}, &link);
    const int b = sim.add_bearer(dc_dl(2000));
    sim.set_dup_active(b, true);
    sim.schedule_sdu(b, 0, 1200);
    sim.run(kHorizon);
    CHECK(sim.stats(b).dup_saved == 0);
    CHECK(sim.stats(b).delivered_within == 1);
}

TEST_CASE("RLC ingress refuses PDUs beyond the buffer limit") {
    PerfectLink link;
    StackParams p;
    p.rlc.buffer_limit = 2;
    StackSim sim(p, &link);
    const int b = sim.add_bearer(mcg());
    for (int i = 0; i < 5; ++i) sim.schedule_sdu(b, 0, 1200);
    sim.run(kHorizon);

    const BearerStats& s = sim.stats(b);
    CHECK(s.generated == 5);
    CHECK(s.rlc_drops == 3);
    CHECK(s.delivered_within == 2);
    CHECK(s.lost == 3);
}

TEST_CASE("cross leg discard cancels a queued retransmission") {
    ScriptedLinkModel link;
    link.fail_packet(0, 0); // default leg would retransmit forever
    StackParams p;
    p.cross_leg_discard = true;
    StackSim sim(p, &link);
    const int b = sim.add_bearer(ca_dup()); // both RLC entities in one node
    sim.set_dup_active(b, true);
    sim.schedule_sdu(b, 0, 1200);
    sim.run(kHorizon);

    const BearerStats& s = sim.stats(b);
    // twin acked at 1000, notice lands immediately, retx at 4000 never runs
    CHECK(s.attempts == 2);
    CHECK(s.retx_attempts == 0);
    CHECK(s.avoided_retx == 1);
    CHECK(s.redundant_retx == 0);
    CHECK(s.delivered_within == 1);
}

TEST_CASE("without discard the stack keeps retransmitting redundantly") {
    ScriptedLinkModel link;
    link.fail_packet(0, 0);
    StackSim sim(StackParams{}, &link);
    const int b = sim.add_bearer(ca_dup());
    sim.set_dup_active(b, true);
    sim.schedule_sdu(b, 0, 1200);
    sim.run(kHorizon);

    const BearerStats& s = sim.stats(b);
    CHECK(s.attempts == 5); // 4 on the doomed leg, 1 on the twin
    CHECK(s.retx_attempts == 3);
    CHECK(s.redundant_retx == 3);
    CHECK(s.avoided_retx == 0);
    CHECK(s.delivered_within == 1);
}

TEST_CASE("paired runs with and without discard deliver the same packets") {
    for (const std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
        std::vector<std::uint64_t> sets[2];
        std::uint64_t avoided[2] = {0, 0};
        for (int mode = 0; mode < 2; ++mode) {
            BernoulliLinkModel link(seed);
            link.set_loss(0, 0.5);
            link.set_loss(1, 0.5);
            StackParams p;
            p.cross_leg_discard = mode == 1;
            StackSim sim(p, &link);
            const int b = sim.add_bearer(ca_dup());
            sim.set_dup_active(b, true);
            sim.collect_delivered(true);
            for (int i = 0; i < 200; ++i) sim.schedule_sdu(b, i * 1000, 1200);
            sim.run(kHorizon);
            sets[mode] = sim.delivered_counts(b);
            std::sort(sets[mode].begin(), sets[mode].end());
            avoided[mode] = sim.stats(b).avoided_retx;
        }
        // same packets get through; only same-instant delivery order may move
        CHECK(sets[0] == sets[1]);
        CHECK(avoided[0] == 0);
        CHECK(avoided[1] > 0);
    }
}

TEST_CASE("a notice overtaking an in flight attempt suppresses the requeue") {
    ScriptedLinkModel link;
    link.fail_packet(0, 0);
    link.set(1, 0, 0, true);
    BearerConfig cfg = ca_dup();
    cfg.legs[1].notify_delay = 3500; // lands between retx start and its nack
    StackParams p;
    p.cross_leg_discard = true;
    StackSim sim(p, &link);
    const int b = sim.add_bearer(cfg);
    sim.set_dup_active(b, true);
    sim.schedule_sdu(b, 0, 1200);
    sim.run(kHorizon);

    const BearerStats& s = sim.stats(b);
    CHECK(s.attempts == 3); // default leg at 0 and 4000, twin at 0
    CHECK(s.avoided_retx == 1);
    CHECK(s.delivered_within == 1);
}

TEST_CASE("a copy that never transmitted keeps its first attempt") {
    PerfectLink link;
    BearerConfig cfg = dc_dl(2000);
    cfg.legs[0].notify_delay = 500; // notice beats the secondary Xn transfer
    StackParams p;
    p.cross_leg_discard = true;
    StackSim sim(p, &link);
    const int b = sim.add_bearer(cfg);
    sim.set_dup_active(b, true);
    Recorder rec;
    rec.attach(sim);
    sim.schedule_sdu(b, 0, 1200);
    sim.run(kHorizon);

    // primary acked at 1000, notice at 1500, secondary still untransmitted
    // and goes out at 2000 regardless
    CHECK(rec.attempts.size() == 2);
    CHECK(sim.stats(b).avoided_retx == 0);
    CHECK(sim.stats(b).delivered_within == 1);
}

TEST_CASE("accounting stays conserved under random loss") {
    BernoulliLinkModel link(77);
    link.set_loss(0, 0.3);
    link.set_loss(1, 0.4);
    StackSim sim(StackParams{}, &link);
    const int plain = sim.add_bearer(mcg(0));
    const int dup = sim.add_bearer(dc_ul(2000));
    sim.set_dup_active(dup, true);
    for (int i = 0; i < 500; ++i) sim.schedule_sdu_batch(i * 1000, 1200);
    sim.run(kHorizon);

    for (int b : {plain, dup}) {
        const BearerStats& s = sim.stats(b);
        CHECK(s.generated == 500);
        CHECK(s.generated == s.delivered_within + s.delivered_late + s.lost);
    }
    CHECK(sim.stats(dup).duplicated == 500);
    CHECK(sim.total_stats().generated == 1000);
}

TEST_CASE("identical configurations replay identically") {
    auto run_once = [] {
        BernoulliLinkModel link(123);
        link.set_loss(0, 0.35);
        link.set_loss(1, 0.35);
        StackSim sim(StackParams{}, &link);
        const int b = sim.add_bearer(dc_dl(2000));
        sim.set_dup_active(b, true);
        sim.collect_delivered(true);
        for (int i = 0; i < 300; ++i) sim.schedule_sdu(b, i * 1000, 1200);
        sim.run(kHorizon);
        return std::make_pair(sim.delivered_counts(b), sim.stats(b).attempts);
    };
    const auto a = run_once();
    const auto b = run_once();
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
}

TEST_CASE("configuration guards") {
    PerfectLink link;
    StackParams bad;
    bad.tti = 0;
    CHECK_THROWS_AS(StackSim(bad, &link), ConfigError);
    bad = StackParams{};
    bad.latency_budget = -1;
    CHECK_THROWS_AS(StackSim(bad, &link), ConfigError);
    bad = StackParams{};
    bad.rlc.max_retx = -1;
    CHECK_THROWS_AS(StackSim(bad, &link), ConfigError);

    StackSim sim(StackParams{}, &link);
    const int b = sim.add_bearer(mcg());
    CHECK_THROWS_AS(sim.set_dup_active(b, true), ConfigError);
}
