#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dupsim/handover.hpp"
#include "dupsim/types.hpp"

#include <map>
#include <string>

using namespace dupsim;

namespace {

std::map<int, int> deliveries_per_sn(const HandoverResult& res) {
    std::map<int, int> n;
    for (const HandoverDelivery& d : res.deliveries) ++n[d.sn];
    return n;
}

bool trace_has(const HandoverResult& res, Time t, const std::string& entity,
               const std::string& msg) {
    for (const HandoverRecord& r : res.trace)
        if (r.time == t && r.entity == entity && r.message == msg) return true;
    return false;
}

} // namespace

TEST_CASE("uplink handover walks the expected timeline") {
    const HandoverParams p; // trigger 1 ms, Xn 2 ms, RRC 10 ms, spacing 4 ms
    const HandoverResult res = run_handover(p);

    CHECK(trace_has(res, 1000, "source_gnb", "HandoverTrigger"));
    CHECK(trace_has(res, 3000, "target_gnb", "XnBearerSetup"));
    CHECK(trace_has(res, 5000, "source_gnb", "XnBearerSetupAck"));
    CHECK(trace_has(res, 15000, "ue", "RrcReconfiguration"));
    CHECK(trace_has(res, 25000, "source_gnb", "RrcReconfigurationComplete"));
    CHECK(trace_has(res, 56000, "core", "PathSwitchRequest"));
    CHECK(trace_has(res, 56000, "source_gnb", "SnStatusTransfer"));
    CHECK(res.path_switch_time == 56000);
    CHECK(res.final_phase == HoPhase::SourceReleased);
    CHECK_FALSE(res.aborted);
}

TEST_CASE("every SDU is delivered exactly once across the switch") {
    const HandoverResult res = run_handover(HandoverParams{});
    const auto per_sn = deliveries_per_sn(res);
    REQUIRE(per_sn.size() == 20);
    for (const auto& [sn, n] : per_sn) {
        CHECK(n == 1);
        CHECK(sn >= 1);
        CHECK(sn <= 20);
    }
    // duplicate elimination swallowed the twin of every SDU
    CHECK(res.eliminations.size() == 20);
}

TEST_CASE("the elimination site flips exactly at the path switch") {
    const HandoverParams p;
    const HandoverResult res = run_handover(p);
    for (const HandoverDelivery& d : res.deliveries) {
        if (d.sn <= p.path_switch_after_sn)
            CHECK(d.entity == "source_gnb");
        else
            CHECK(d.entity == "target_gnb");
    }
    for (const HandoverDelivery& e : res.eliminations) {
        if (e.sn <= p.path_switch_after_sn)
            CHECK(e.entity == "source_gnb");
        else
            CHECK(e.entity == "target_gnb");
    }
}

TEST_CASE("single link losses never cost an SDU while duplication runs") {
    for (int sn = 1; sn <= 8; ++sn) {
        HandoverParams p;
        p.n_sdus = 8;
        p.path_switch_after_sn = 4;
        for (int side = 0; side < 2; ++side) {
            p.lost_on_source.clear();
            p.lost_on_target.clear();
            (side == 0 ? p.lost_on_source : p.lost_on_target).insert(sn);
            const HandoverResult res = run_handover(p);
            const auto per_sn = deliveries_per_sn(res);
            REQUIRE(per_sn.size() == 8);
            for (const auto& [s, n] : per_sn) CHECK(n == 1);
        }
    }
}

TEST_CASE("a copy lost on its primary path arrives via the peer") {
    HandoverParams p;
    p.lost_on_source.insert(5);
    const HandoverResult res = run_handover(p);
    bool found = false;
    for (const HandoverDelivery& d : res.deliveries) {
        if (d.sn != 5) continue;
        found = true;
        CHECK(d.entity == "source_gnb"); // forwarded over Xn, delivered late
    }
    CHECK(found);
    CHECK(res.eliminations.size() == 19); // the lost copy had no twin left
}

TEST_CASE("downlink anchors PDCP at the source until the switch") {
    HandoverParams p;
    p.direction = Direction::Downlink;
    const HandoverResult res = run_handover(p);
    CHECK_FALSE(res.aborted);
    CHECK(res.final_phase == HoPhase::SourceReleased);

    for (const HandoverRecord& r : res.trace) {
        if (r.message != "PdcpDuplicate") continue;
        if (r.sn_lo <= p.path_switch_after_sn)
            CHECK(r.entity == "source_gnb");
        else
            CHECK(r.entity == "target_gnb");
    }
    const auto per_sn = deliveries_per_sn(res);
    REQUIRE(per_sn.size() == 20);
    for (const auto& [sn, n] : per_sn) CHECK(n == 1);
    for (const HandoverDelivery& d : res.deliveries) CHECK(d.entity == "ue");
}

TEST_CASE("no backhaul aborts into plain single path service") {
    HandoverParams p;
    p.xn_available = false;
    p.lost_on_source.insert(3);
    const HandoverResult res = run_handover(p);
    CHECK(res.aborted);
    CHECK(res.final_phase == HoPhase::Idle);
    CHECK(trace_has(res, 1000, "source_gnb", "HandoverAbortNoXn"));
    CHECK(res.path_switch_time == -1);

    const auto per_sn = deliveries_per_sn(res);
    CHECK(per_sn.size() == 19); // the lost SDU has no second chance
    CHECK(per_sn.count(3) == 0);
    for (const HandoverDelivery& d : res.deliveries) CHECK(d.entity == "source_gnb");
    CHECK(res.eliminations.empty());
}

TEST_CASE("parameter validation") {
    HandoverParams p;
    p.n_sdus = 0;
    CHECK_THROWS_AS(run_handover(p), ConfigError);

    p = HandoverParams{};
    p.path_switch_after_sn = 0;
    CHECK_THROWS_AS(run_handover(p), ConfigError);
    p.path_switch_after_sn = p.n_sdus + 1;
    CHECK_THROWS_AS(run_handover(p), ConfigError);

    p = HandoverParams{};
    p.sdu_spacing = p.xn_latency + p.tti; // must be strictly larger
    CHECK_THROWS_AS(run_handover(p), ConfigError);

    p = HandoverParams{};
    p.tti = 0;
    CHECK_THROWS_AS(run_handover(p), ConfigError);
    p = HandoverParams{};
    p.xn_latency = -1;
    CHECK_THROWS_AS(run_handover(p), ConfigError);
}

TEST_CASE("the formatted trace keeps its column layout") {
    const HandoverResult res = run_handover(HandoverParams{});
    const std::string text = format_handover_trace(res.trace);
    CHECK(text.find("source_gnb") != std::string::npos);
    CHECK(text.find("PathSwitchRequest") != std::string::npos);

    std::size_t lines = 0, pos = 0, prev = 0;
    while ((pos = text.find('\n', prev)) != std::string::npos) {
        const std::string line = text.substr(prev, pos - prev);
        prev = pos + 1;
        ++lines;
        // four column separators per record
        std::size_t seps = 0, p2 = 0;
        while ((p2 = line.find(" | ", p2)) != std::string::npos) {
            ++seps;
            p2 += 3;
        }
        CHECK(seps == 4);
    }
    CHECK(lines == res.trace.size());

    // records without SNs close with a dash
    CHECK(text.find("HandoverTrigger") != std::string::npos);
    const std::size_t trig = text.find("HandoverTrigger");
    const std::size_t eol = text.find('\n', trig);
    CHECK(text.substr(trig, eol - trig).find("| -") != std::string::npos);
}
