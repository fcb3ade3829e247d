#include "dupsim/simulation.hpp"

#include "dupsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <thread>

namespace dupsim {

namespace {

constexpr std::uint64_t kUeEntityBase = 1000; // keeps UE ids out of the node id range

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

struct InterfererDl {
    std::uint64_t tx_ent = 0;
    double g_lin = 0.0;   // received power in mW when active, before fading
    double activity = 1.0; // duty cycle of this transmitter
};

struct UlInterfCell {
    std::uint32_t cell = 0;
    std::vector<std::uint64_t> ue_ent;
    std::vector<double> g_lin;
};

struct LinkPlan {
    double g_sig_lin = 0.0; // long term signal power at the receiver, mW
    std::uint64_t tx_ent = 0;
    std::uint64_t rx_ent = 0;
    std::uint32_t carrier = 0;
    std::vector<InterfererDl> dl_interf;
    std::vector<UlInterfCell> ul_cells;
};

// Evaluates MAC attempts against the frozen large scale plan. Interference
// is drawn once per receiver slot and memoized; signal fading is keyed by
// (packet, attempt) so discarding one transmission never disturbs another.
class RadioLinkModel final : public LinkModel {
public:
    RadioLinkModel(std::vector<LinkPlan> links, std::uint64_t iter_seed, Time tti,
                   double noise_mw, double beta_db, bool fading, InterferenceMode mode,
                   double activity, std::size_t max_slots)
        : links_(std::move(links)), seed_(iter_seed), tti_(tti), noise_mw_(noise_mw),
          beta_db_(beta_db), fading_(fading), mode_(mode), activity_(activity) {
        memo_.assign(links_.size(),
                     std::vector<double>(max_slots, std::numeric_limits<double>::quiet_NaN()));
    }

    bool attempt_succeeds(std::uint32_t link_id, std::uint64_t count, std::uint32_t attempt,
                          Time at) override {
        const LinkPlan& L = links_[link_id];
        const std::uint64_t slot = static_cast<std::uint64_t>(at / tti_);
        const double i_mw = interference(link_id, L, slot);
        double sig = L.g_sig_lin;
        if (fading_)
            sig *= exp1(hash_key(
                {rngtag::kFading, seed_, L.tx_ent, L.rx_ent, L.carrier, count, attempt}));
        const double sinr = 10.0 * std::log10(sig / (noise_mw_ + i_mw));
        return attempt_outcome(sinr, beta_db_);
    }

private:
    double interference(std::uint32_t link_id, const LinkPlan& L, std::uint64_t slot) {
        if (mode_ == InterferenceMode::None) return 0.0;
        std::vector<double>& row = memo_[link_id];
        if (slot >= row.size())
            row.resize(slot + 16, std::numeric_limits<double>::quiet_NaN());
        double& cell = row[slot];
        if (!std::isnan(cell)) return cell;

        double sum = 0.0;
        for (const InterfererDl& it : L.dl_interf) {
            if (it.activity < 1.0 &&
                u01(hash_key({rngtag::kInterf, seed_, it.tx_ent, slot})) >= it.activity)
                continue;
            double g = it.g_lin;
            if (fading_)
                g *= exp1(hash_key(
                    {rngtag::kFading, seed_, it.tx_ent, L.rx_ent, L.carrier, slot}));
            sum += g;
        }
        for (const UlInterfCell& c : L.ul_cells) {
            if (c.g_lin.empty()) continue;
            if (activity_ < 1.0 &&
                u01(hash_key({rngtag::kInterf, seed_, c.cell, slot})) >= activity_)
                continue;
            const std::size_t pick = static_cast<std::size_t>(
                hash_key({rngtag::kUlPick, seed_, c.cell, slot}) % c.g_lin.size());
            double g = c.g_lin[pick];
            if (fading_)
                g *= exp1(hash_key(
                    {rngtag::kFading, seed_, c.ue_ent[pick], L.rx_ent, L.carrier, slot}));
            sum += g;
        }
        cell = sum;
        return sum;
    }

    std::vector<LinkPlan> links_;
    std::uint64_t seed_;
    Time tti_;
    double noise_mw_;
    double beta_db_;
    bool fading_;
    InterferenceMode mode_;
    double activity_;
    std::vector<std::vector<double>> memo_;
};

double node_tx_dbm(const NodeInfo& n, const LinkModelConfig& lm) {
    return n.tier == 1 ? lm.tx_power_tier1_dbm : lm.tx_power_tier2_dbm;
}

double node_sigma_db(const NodeInfo& n, const LinkModelConfig& lm) {
    return n.tier == 1 ? lm.shadow_sigma_tier1_db : lm.shadow_sigma_tier2_db;
}

double link_distance(const Topology& topo, const NodeInfo& n, const UeInfo& u) {
    return std::max(topo.distance(n, u), 0.1);
}

// Long term downlink receive power, the quantity cell selection ranks by.
double mean_rx_dbm(const Topology& topo, const NodeInfo& n, const UeInfo& u,
                   const LinkModelConfig& lm, std::uint64_t iter_seed) {
    return node_tx_dbm(n, lm) - pathloss_db(link_distance(topo, n, u), lm.carrier_hz) +
           shadow_db(iter_seed, n.id, u.id, node_sigma_db(n, lm));
}

struct UePlan {
    int n_legs = 1;
    std::uint32_t serving[2] = {0, 0}; // node ids
    std::uint32_t carrier[2] = {0, 0};
};

// Serving set selection per scenario. Tier-1 only for the macro baselines,
// best node overall for S2, master plus strongest small cell for S3 when the
// UE sits inside both coverage radii, two carriers of one node for CA.
UePlan plan_ue(const RunConfig& cfg, const Topology& topo, const UeInfo& u,
               const LinkModelConfig& lm, std::uint64_t iter_seed) {
    std::vector<LinkBudget> tier1, all;
    for (const NodeInfo& n : topo.nodes) {
        const LinkBudget b{n.id, mean_rx_dbm(topo, n, u, lm, iter_seed)};
        if (n.tier == 1) tier1.push_back(b);
        all.push_back(b);
    }

    UePlan plan;
    switch (cfg.scenario) {
    case Scenario::S1: {
        plan.serving[0] = associate(tier1);
        break;
    }
    case Scenario::S1Ca: {
        const std::uint32_t node = associate(tier1);
        plan.n_legs = 2;
        plan.serving[0] = plan.serving[1] = node;
        plan.carrier[1] = 1;
        break;
    }
    case Scenario::S2: {
        plan.serving[0] = associate(all);
        break;
    }
    case Scenario::S3: {
        // The S2 pick keeps serving; a second leg from the other tier joins
        // when the UE sits inside the coverage radius of both tiers. The
        // tier-1 node is always the master.
        const std::uint32_t best = associate(all);
        const NodeInfo& bn = topo.node(best);
        const int other_tier = bn.tier == 1 ? 2 : 1;
        std::vector<LinkBudget> cands;
        bool covered_own = false;
        for (const NodeInfo& n : topo.nodes) {
            const double radius =
                n.tier == 1 ? topo.cfg.radius_tier1_m : topo.cfg.radius_tier2_m;
            if (topo.distance(n, u) > radius) continue;
            if (n.tier == bn.tier) covered_own = true;
            else cands.push_back(LinkBudget{n.id, mean_rx_dbm(topo, n, u, lm, iter_seed)});
        }
        if (cands.empty() || !covered_own) {
            plan.serving[0] = best; // single connectivity, same serving as S2
            break;
        }
        const std::uint32_t second = associate(cands);
        plan.n_legs = 2;
        plan.serving[0] = other_tier == 1 ? second : best;
        plan.serving[1] = other_tier == 1 ? best : second;
        break;
    }
    case Scenario::HandoverDemo:
        throw ConfigError("the handover demo is not a Monte Carlo scenario");
    }
    return plan;
}

std::vector<const NodeInfo*> participating_nodes(const RunConfig& cfg, const Topology& topo) {
    std::vector<const NodeInfo*> out;
    const bool two_tier = cfg.scenario == Scenario::S2 || cfg.scenario == Scenario::S3;
    for (const NodeInfo& n : topo.nodes)
        if (n.tier == 1 || two_tier) out.push_back(&n);
    return out;
}

} // namespace

void validate_run_config(const RunConfig& cfg) {
    if (cfg.iterations < 1) throw ConfigError("iterations must be at least 1");
    if (cfg.packets_per_ue < 1) throw ConfigError("packets must be at least 1");
    if (cfg.latency_budget_ms < 0) throw ConfigError("latency budget cannot be negative");
    if (cfg.xn_latency_ms < 0) throw ConfigError("xn latency cannot be negative");
    if (cfg.tti_ms <= 0) throw ConfigError("tti must be positive");
    if (cfg.bandwidth_mhz <= 0) throw ConfigError("bandwidth must be positive");
    if (cfg.interferer_activity < 0 || cfg.interferer_activity > 1)
        throw ConfigError("interferer activity must lie in [0, 1]");
    if (cfg.ues_per_cell < 1) throw ConfigError("need at least one UE per cell");
    if (cfg.n_tier1 < 1 || cfg.n_tier1 > 3) throw ConfigError("n_tier1 must be 1 to 3");
    if (cfg.max_retx < 0) throw ConfigError("max_retx cannot be negative");
    if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
    if ((cfg.scenario == Scenario::S2 || cfg.scenario == Scenario::S3) && cfg.n_sc < 1)
        throw ConfigError("scenario " + to_string(cfg.scenario) +
                          " needs at least one small cell per cell (nsc >= 1)");
    if (cfg.n_sc < 0) throw ConfigError("nsc cannot be negative");
    if (cfg.scenario == Scenario::HandoverDemo && cfg.dynamic_control)
        throw ConfigError("dynamic control does not apply to the handover demo");
}

IterationMetrics run_iteration(const RunConfig& cfg, std::uint64_t index) {
    validate_run_config(cfg);
    const std::uint64_t iter_seed = iteration_seed(cfg.seed, index);

    TopologyConfig tc;
    tc.n_tier1 = cfg.n_tier1;
    tc.n_sc_per_cell = cfg.n_sc;
    tc.ues_per_cell = cfg.ues_per_cell;
    const Topology topo = build_topology(tc, iter_seed);

    LinkModelConfig lm;
    lm.bandwidth_mhz = cfg.bandwidth_mhz;
    lm.beta_db = cfg.beta_db;
    lm.fading = cfg.fading;
    const double noise_mw = dbm_to_mw(noise_power_dbm(lm));

    const Time tti = ms(cfg.tti_ms);
    const Time xn = ms(cfg.xn_latency_ms);
    const bool dl = cfg.direction == Direction::Downlink;
    const std::vector<const NodeInfo*> nodes = participating_nodes(cfg, topo);

    std::vector<LinkPlan> links(topo.ues.size() * 2);
    std::vector<BearerConfig> bearer_cfgs;
    std::vector<UePlan> plans;
    bearer_cfgs.reserve(topo.ues.size());
    plans.reserve(topo.ues.size());

    // Association first, so every node's downlink duty cycle can reflect the
    // load it serves. Background load anchors to the strongest participating
    // node per UE; the bearer under test is one flow among that bulk, so its
    // extra duplicate leg does not move cell duty.
    std::vector<std::uint32_t> served(topo.nodes.size(), 0);
    for (const UeInfo& u : topo.ues) {
        plans.push_back(plan_ue(cfg, topo, u, lm, iter_seed));
        std::vector<LinkBudget> budgets;
        budgets.reserve(nodes.size());
        for (const NodeInfo* n : nodes)
            budgets.push_back(LinkBudget{n->id, mean_rx_dbm(topo, *n, u, lm, iter_seed)});
        served[associate(budgets)] += 1;
    }
    const auto node_activity = [&](const NodeInfo& n) {
        const double load = static_cast<double>(served[n.id]) / cfg.ues_per_cell;
        return cfg.interferer_activity * std::min(1.0, load);
    };

    for (const UeInfo& u : topo.ues) {
        const UePlan& plan = plans[u.id];

        BearerConfig bc;
        bc.bearer_id = u.id;
        bc.n_legs = plan.n_legs;
        if (plan.n_legs == 2) {
            bc.kind = BearerKind::Duplicate;
            bc.dup_mode = cfg.scenario == Scenario::S1Ca ? DupMode::Ca : DupMode::Dc;
            bc.duplication_configured = true;
        }
        for (int leg = 0; leg < plan.n_legs; ++leg) {
            const NodeInfo& sn = topo.node(plan.serving[leg]);
            LegConfig& lc = bc.legs[static_cast<std::size_t>(leg)];
            lc.cell_group = bc.dup_mode == DupMode::Ca ? 0u : static_cast<std::uint32_t>(leg);
            lc.carrier = plan.carrier[leg];
            lc.link_id = u.id * 2 + static_cast<std::uint32_t>(leg);
            if (bc.dup_mode == DupMode::Dc && leg == 1) {
                // The secondary path crosses Xn: before the air interface in
                // downlink, after it in uplink.
                if (dl)
                    lc.pre_air_delay = xn;
                else
                    lc.post_air_delay = xn;
            }
            // A transmitter ack on one leg reaches the peer RLC immediately
            // when both entities share a box, over Xn when they do not.
            lc.notify_delay = (bc.dup_mode == DupMode::Dc && dl) ? xn : 0;

            LinkPlan& lp = links[lc.link_id];
            const double shadow = shadow_db(iter_seed, sn.id, u.id, node_sigma_db(sn, lm));
            const double pl = pathloss_db(link_distance(topo, sn, u), lm.carrier_hz);
            const double tx_dbm = dl ? node_tx_dbm(sn, lm) : lm.tx_power_ue_dbm;
            lp.g_sig_lin = dbm_to_mw(tx_dbm - pl + shadow);
            lp.tx_ent = dl ? sn.id : kUeEntityBase + u.id;
            lp.rx_ent = dl ? kUeEntityBase + u.id : sn.id;
            lp.carrier = plan.carrier[leg];

            if (cfg.interference == InterferenceMode::None) continue;
            if (dl) {
                for (const NodeInfo* other : nodes) {
                    // Nodes inside one cell hang off one scheduler, and the
                    // two serving nodes of a dual leg UE coordinate as well,
                    // so downlink interference is inter-cell only.
                    if (other->parent_cell == sn.parent_cell) continue;
                    if (other->id == plan.serving[0]) continue;
                    if (plan.n_legs == 2 && other->id == plan.serving[1]) continue;
                    const double act = node_activity(*other);
                    if (act <= 0.0) continue; // idle node, never transmits
                    const double opl = pathloss_db(link_distance(topo, *other, u), lm.carrier_hz);
                    const double osh =
                        shadow_db(iter_seed, other->id, u.id, node_sigma_db(*other, lm));
                    lp.dl_interf.push_back(InterfererDl{
                        other->id, dbm_to_mw(node_tx_dbm(*other, lm) - opl + osh), act});
                }
            } else {
                for (int c = 0; c < tc.n_tier1; ++c) {
                    if (static_cast<std::uint32_t>(c) == u.cell) continue;
                    UlInterfCell uc;
                    uc.cell = static_cast<std::uint32_t>(c);
                    for (const UeInfo& iu : topo.ues) {
                        if (iu.cell != static_cast<std::uint32_t>(c)) continue;
                        const double ipl =
                            pathloss_db(link_distance(topo, sn, iu), lm.carrier_hz);
                        const double ish =
                            shadow_db(iter_seed, sn.id, iu.id, node_sigma_db(sn, lm));
                        uc.ue_ent.push_back(kUeEntityBase + iu.id);
                        uc.g_lin.push_back(dbm_to_mw(lm.tx_power_ue_dbm - ipl + ish));
                    }
                    lp.ul_cells.push_back(std::move(uc));
                }
            }
        }
        bearer_cfgs.push_back(bc);
    }

    const Time traffic_end = static_cast<Time>(cfg.packets_per_ue) * tti;
    const Time horizon = traffic_end + ms(200.0);
    const std::size_t max_slots = static_cast<std::size_t>(horizon / tti) + 2;

    RadioLinkModel radio(std::move(links), iter_seed, tti, noise_mw, cfg.beta_db,
                         cfg.fading == FadingModel::RayleighBlock, cfg.interference,
                         cfg.interferer_activity, max_slots);

    StackParams sp;
    sp.tti = tti;
    sp.latency_budget = ms(cfg.latency_budget_ms);
    sp.cross_leg_discard = cfg.cross_leg_discard;
    sp.rlc.max_retx = cfg.max_retx;
    sp.rlc.retx_delay = ms(cfg.retx_delay_ms);
    sp.rlc.buffer_limit = cfg.rlc_buffer_limit;
    StackSim sim(sp, &radio);

    ControlParams cp;
    cp.tti = tti;
    std::vector<std::unique_ptr<DuplicationController>> controllers;
    IterationMetrics m;
    m.iteration = index;

    for (std::size_t i = 0; i < bearer_cfgs.size(); ++i) {
        const int b = sim.add_bearer(bearer_cfgs[i]);
        if (bearer_cfgs[i].n_legs == 2) {
            ++m.dc_ues;
            if (cfg.dynamic_control) {
                auto ctl = std::make_unique<DuplicationController>(sim, cp);
                ctl->track_bearer(b, bearer_cfgs[i]);
                controllers.push_back(std::move(ctl));
            } else {
                sim.set_dup_active(b, true); // configured and activated at setup
            }
        }
    }

    if (cfg.dynamic_control && !controllers.empty()) {
        // Periodic long term quality check per dual leg UE; each independent
        // controller flips its own bearers via the selected mechanism.
        struct TriggerCtx {
            DuplicationController* ctl = nullptr;
            int bearer = 0; // index inside the shared sim
            double snr0 = 0.0, snr1 = 0.0;
            bool pending = false;
            Time pending_until = -1;
        };
        auto ctxs = std::make_shared<std::vector<TriggerCtx>>();
        std::size_t ci = 0;
        for (std::size_t i = 0; i < bearer_cfgs.size(); ++i) {
            if (bearer_cfgs[i].n_legs != 2) continue;
            TriggerCtx tctx;
            tctx.ctl = controllers[ci++].get();
            tctx.bearer = static_cast<int>(i);
            const UePlan& plan = plans[i];
            const UeInfo& u = topo.ues[i];
            for (int leg = 0; leg < 2; ++leg) {
                const NodeInfo& sn = topo.node(plan.serving[leg]);
                const double shadow = shadow_db(iter_seed, sn.id, u.id, node_sigma_db(sn, lm));
                const double pl = pathloss_db(link_distance(topo, sn, u), lm.carrier_hz);
                const double tx_dbm = dl ? node_tx_dbm(sn, lm) : lm.tx_power_ue_dbm;
                (leg == 0 ? tctx.snr0 : tctx.snr1) =
                    tx_dbm - pl + shadow - noise_power_dbm(lm);
            }
            ctxs->push_back(tctx);
        }
        const TriggerConfig trig{cfg.trigger_activate_snr_db, cfg.trigger_deactivate_snr_db};
        const Time interval = std::max<Time>(ms(cfg.trigger_interval_ms), 1);
        const ControlMechanism mech = cfg.control_mechanism;
        for (Time t = 0; t < traffic_end; t += interval) {
            sim.schedule_snapshot(t, [ctxs, &sim, trig, mech](Time now) {
                for (TriggerCtx& c : *ctxs) {
                    if (c.pending && now < c.pending_until) continue;
                    c.pending = false;
                    const bool active = sim.dup_active(c.bearer);
                    const TriggerDecision d = evaluate_trigger(c.snr0, c.snr1, active, trig);
                    if (d == TriggerDecision::Hold) continue;
                    const bool want = d == TriggerDecision::Activate;
                    const Time eff = mech == ControlMechanism::MacCe
                                         ? c.ctl->request_all(want, mech, now)
                                         : c.ctl->request(c.bearer, want, mech, now);
                    c.pending = true;
                    c.pending_until = eff;
                }
            });
        }
    }

    for (int k = 0; k < cfg.packets_per_ue; ++k)
        sim.schedule_sdu_batch(static_cast<Time>(k) * tti, cfg.sdu_bytes);

    sim.run(horizon);

    m.totals = sim.total_stats();
    m.pdr = m.totals.generated
                ? static_cast<double>(m.totals.delivered_within) /
                      static_cast<double>(m.totals.generated)
                : 0.0;
    if (m.totals.duplicated > 0)
        m.dup_efficiency = static_cast<double>(m.totals.dup_saved) /
                           static_cast<double>(m.totals.duplicated);
    const std::uint64_t delivered = m.totals.delivered_within + m.totals.delivered_late;
    m.mean_latency_ms =
        delivered ? to_ms(m.totals.latency_sum_us) / static_cast<double>(delivered) : 0.0;
    for (const auto& ctl : controllers) m.signaling_bytes += ctl->cost().total_bytes();
    return m;
}

CampaignResult run_campaign(const RunConfig& cfg) {
    validate_run_config(cfg);
    CampaignResult res;
    res.cfg = cfg;
    res.iterations.resize(static_cast<std::size_t>(cfg.iterations));

    const int n = cfg.iterations;
    const int workers = std::max(1, std::min(cfg.threads, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i)
            res.iterations[static_cast<std::size_t>(i)] =
                run_iteration(cfg, static_cast<std::uint64_t>(i));
    } else {
        // Static partition by index; per iteration seeding keeps the result
        // identical to the serial order.
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int i = w; i < n; i += workers)
                    res.iterations[static_cast<std::size_t>(i)] =
                        run_iteration(cfg, static_cast<std::uint64_t>(i));
            });
        }
        for (std::thread& t : pool) t.join();
    }

    TopologyConfig tc;
    tc.n_tier1 = cfg.n_tier1;
    tc.n_sc_per_cell = cfg.n_sc;
    tc.ues_per_cell = cfg.ues_per_cell;
    res.topology_dump = describe_topology(build_topology(tc, iteration_seed(cfg.seed, 0)));
    return res;
}

std::vector<double> CampaignResult::pdr_values() const {
    std::vector<double> v;
    v.reserve(iterations.size());
    for (const IterationMetrics& it : iterations) v.push_back(it.pdr);
    return v;
}

std::vector<double> CampaignResult::dup_eff_values() const {
    std::vector<double> v;
    for (const IterationMetrics& it : iterations)
        if (it.dup_efficiency >= 0.0) v.push_back(it.dup_efficiency);
    return v;
}

} // namespace dupsim
