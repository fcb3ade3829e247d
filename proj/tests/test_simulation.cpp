#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dupsim/simulation.hpp"
#include "dupsim/types.hpp"

#include <vector>

using namespace dupsim;

namespace {

RunConfig small_cfg(Scenario s) {
    RunConfig c;
    c.scenario = s;
    c.iterations = 3;
    c.packets_per_ue = 100;
    c.ues_per_cell = 10;
    c.seed = 5;
    return c;
}

bool metrics_equal(const IterationMetrics& a, const IterationMetrics& b) {
    return a.pdr == b.pdr && a.dup_efficiency == b.dup_efficiency &&
           a.mean_latency_ms == b.mean_latency_ms && a.dc_ues == b.dc_ues &&
           a.signaling_bytes == b.signaling_bytes &&
           a.totals.generated == b.totals.generated &&
           a.totals.delivered_within == b.totals.delivered_within &&
           a.totals.delivered_late == b.totals.delivered_late &&
           a.totals.lost == b.totals.lost && a.totals.attempts == b.totals.attempts &&
           a.totals.duplicated == b.totals.duplicated &&
           a.totals.dup_saved == b.totals.dup_saved &&
           a.totals.redundant_retx == b.totals.redundant_retx;
}

} // namespace

TEST_CASE("an iteration replays bit for bit") {
    for (Scenario s : {Scenario::S1, Scenario::S1Ca, Scenario::S2, Scenario::S3}) {
        const RunConfig cfg = small_cfg(s);
        const IterationMetrics a = run_iteration(cfg, 0);
        const IterationMetrics b = run_iteration(cfg, 0);
        CHECK(metrics_equal(a, b));
        CHECK(a.totals.generated ==
              a.totals.delivered_within + a.totals.delivered_late + a.totals.lost);
    }
}

TEST_CASE("different iterations see different channels") {
    const RunConfig cfg = small_cfg(Scenario::S1);
    const IterationMetrics a = run_iteration(cfg, 0);
    const IterationMetrics b = run_iteration(cfg, 1);
    CHECK(a.pdr != b.pdr); // same size, fresh drops and shadowing
}

TEST_CASE("thread count cannot change campaign results") {
    RunConfig cfg = small_cfg(Scenario::S3);
    cfg.iterations = 6;
    const CampaignResult serial = run_campaign(cfg);
    cfg.threads = 3;
    const CampaignResult parallel = run_campaign(cfg);
    REQUIRE(serial.iterations.size() == parallel.iterations.size());
    for (std::size_t i = 0; i < serial.iterations.size(); ++i)
        CHECK(metrics_equal(serial.iterations[i], parallel.iterations[i]));
    CHECK(serial.topology_dump == parallel.topology_dump);
}

TEST_CASE("a benign channel delivers everything in one slot") {
    RunConfig cfg = small_cfg(Scenario::S1);
    cfg.interference = InterferenceMode::None;
    cfg.fading = FadingModel::None;
    cfg.beta_db = 0.0;
    const IterationMetrics m = run_iteration(cfg, 0);
    CHECK(m.pdr == 1.0);
    CHECK(m.totals.lost == 0);
    CHECK(m.totals.attempts == m.totals.generated);
    CHECK(m.mean_latency_ms == doctest::Approx(1.0)); // one air slot
}

TEST_CASE("an impossible threshold loses everything") {
    RunConfig cfg = small_cfg(Scenario::S1);
    cfg.interference = InterferenceMode::None;
    cfg.fading = FadingModel::None;
    cfg.beta_db = 200.0;
    const IterationMetrics m = run_iteration(cfg, 0);
    CHECK(m.pdr == 0.0);
    CHECK(m.totals.lost == m.totals.generated);
    CHECK(m.dup_efficiency == -1.0); // nothing duplicated in S1
}

TEST_CASE("scenarios wire up the expected leg structure") {
    const std::uint64_t n_ues = 30; // 3 cells x 10

    const IterationMetrics s1 = run_iteration(small_cfg(Scenario::S1), 0);
    CHECK(s1.dc_ues == 0);
    CHECK(s1.totals.duplicated == 0);

    const IterationMetrics ca = run_iteration(small_cfg(Scenario::S1Ca), 0);
    CHECK(ca.dc_ues == n_ues); // every UE runs two carriers
    CHECK(ca.totals.duplicated == ca.totals.generated);

    const IterationMetrics s2 = run_iteration(small_cfg(Scenario::S2), 0);
    CHECK(s2.dc_ues == 0); // small cells join the candidate set, one leg only
    CHECK(s2.totals.duplicated == 0);

    const IterationMetrics s3 = run_iteration(small_cfg(Scenario::S3), 0);
    CHECK(s3.dc_ues > 0);
    CHECK(s3.dc_ues < n_ues);
    CHECK(s3.totals.duplicated > 0);
    CHECK(s3.dup_efficiency >= 0.0);
    CHECK(s3.dup_efficiency <= 1.0);
}

TEST_CASE("packets generated match the configured load") {
    RunConfig cfg = small_cfg(Scenario::S1);
    cfg.packets_per_ue = 37;
    const IterationMetrics m = run_iteration(cfg, 2);
    CHECK(m.totals.generated == 37u * 30u);
}

TEST_CASE("a long backhaul starves the within budget gain") {
    RunConfig cfg = small_cfg(Scenario::S3);
    cfg.iterations = 4;
    RunConfig slow = cfg;
    slow.xn_latency_ms = 8.0; // secondary deliveries land past the 5 ms budget
    double fast_sum = 0.0, slow_sum = 0.0;
    for (int i = 0; i < cfg.iterations; ++i) {
        fast_sum += run_iteration(cfg, static_cast<std::uint64_t>(i)).pdr;
        slow_sum += run_iteration(slow, static_cast<std::uint64_t>(i)).pdr;
    }
    CHECK(fast_sum >= slow_sum);
}

TEST_CASE("dynamic control books signaling and keeps accounting intact") {
    RunConfig cfg = small_cfg(Scenario::S3);
    cfg.dynamic_control = true;
    cfg.control_mechanism = ControlMechanism::MacCe;
    // Typical links here sit around 40 dB, so lift the band to force flips.
    cfg.trigger_activate_snr_db = 60.0;
    cfg.trigger_deactivate_snr_db = 70.0;
    const IterationMetrics m = run_iteration(cfg, 0);
    CHECK(m.totals.generated ==
          m.totals.delivered_within + m.totals.delivered_late + m.totals.lost);
    CHECK(m.dc_ues > 0);
    CHECK(m.signaling_bytes > 0);

    cfg.control_mechanism = ControlMechanism::Rrc;
    const IterationMetrics r = run_iteration(cfg, 0);
    CHECK(r.signaling_bytes > m.signaling_bytes); // RRC weighs far more per flip
}

TEST_CASE("campaign collects one row per iteration") {
    RunConfig cfg = small_cfg(Scenario::S2);
    cfg.iterations = 5;
    const CampaignResult res = run_campaign(cfg);
    REQUIRE(res.iterations.size() == 5);
    for (std::size_t i = 0; i < res.iterations.size(); ++i)
        CHECK(res.iterations[i].iteration == i);
    CHECK(res.pdr_values().size() == 5);
    CHECK(res.dup_eff_values().empty()); // S2 never duplicates
    CHECK_FALSE(res.topology_dump.empty());

    const CampaignResult s3 = run_campaign(small_cfg(Scenario::S3));
    CHECK(s3.dup_eff_values().size() == s3.iterations.size());
}

TEST_CASE("config validation rejects broken campaigns") {
    RunConfig cfg;
    cfg.iterations = 0;
    CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.packets_per_ue = 0;
    CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.latency_budget_ms = -1.0;
    CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.xn_latency_ms = -0.5;
    CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.tti_ms = 0.0;
    CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.interferer_activity = 1.5;
    CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.scenario = Scenario::S2;
    cfg.n_sc = 0;
    CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.scenario = Scenario::S3;
    cfg.n_sc = 0;
    CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.n_tier1 = 4;
    CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.threads = 0;
    CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.scenario = Scenario::HandoverDemo;
    CHECK_THROWS_AS(run_iteration(cfg, 0), ConfigError);
}
