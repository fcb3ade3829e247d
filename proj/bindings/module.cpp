#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dupsim/cdf.hpp"
#include "dupsim/control.hpp"
#include "dupsim/handover.hpp"
#include "dupsim/pdcp.hpp"
#include "dupsim/radio.hpp"
#include "dupsim/simulation.hpp"
#include "dupsim/topology.hpp"

namespace py = pybind11;
using namespace dupsim;

namespace {

std::string rx_outcome_str(RxOutcome r) {
    switch (r) {
    case RxOutcome::Deliver: return "deliver";
    case RxOutcome::DuplicateDiscard: return "duplicate";
    case RxOutcome::StaleDiscard: return "stale";
    }
    return "?";
}

py::dict metrics_dict(const IterationMetrics& m) {
    py::dict d;
    d["iteration"] = m.iteration;
    d["pdr"] = m.pdr;
    d["dup_efficiency"] = m.dup_efficiency;
    d["mean_latency_ms"] = m.mean_latency_ms;
    d["dc_ues"] = m.dc_ues;
    d["signaling_bytes"] = m.signaling_bytes;
    d["generated"] = m.totals.generated;
    d["delivered_within"] = m.totals.delivered_within;
    d["delivered_late"] = m.totals.delivered_late;
    d["lost"] = m.totals.lost;
    d["duplicated"] = m.totals.duplicated;
    d["redundant_retx"] = m.totals.redundant_retx;
    d["avoided_retx"] = m.totals.avoided_retx;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "PDCP packet duplication system simulator";

    py::register_exception<ConfigError>(m, "ConfigError");

    m.def("pathloss_db", &pathloss_db, py::arg("distance_m"), py::arg("carrier_hz") = 5.2e9,
          "Distance dependent loss in dB (indoor model past 15 m, free space below)");
    m.def("attempt_outcome", &attempt_outcome, py::arg("sinr_db"), py::arg("beta_db"),
          "Hard threshold decode decision, success at exactly beta included");

    py::class_<LinkModelConfig>(m, "LinkModelConfig")
        .def(py::init<>())
        .def_readwrite("carrier_hz", &LinkModelConfig::carrier_hz)
        .def_readwrite("bandwidth_mhz", &LinkModelConfig::bandwidth_mhz)
        .def_readwrite("noise_psd_dbm_hz", &LinkModelConfig::noise_psd_dbm_hz)
        .def_readwrite("noise_figure_db", &LinkModelConfig::noise_figure_db)
        .def_readwrite("tx_power_tier1_dbm", &LinkModelConfig::tx_power_tier1_dbm)
        .def_readwrite("tx_power_tier2_dbm", &LinkModelConfig::tx_power_tier2_dbm)
        .def_readwrite("tx_power_ue_dbm", &LinkModelConfig::tx_power_ue_dbm)
        .def_readwrite("beta_db", &LinkModelConfig::beta_db);

    py::class_<ChannelRealization>(m, "ChannelRealization")
        .def(py::init<>())
        .def_readwrite("tx_id", &ChannelRealization::tx_id)
        .def_readwrite("rx_id", &ChannelRealization::rx_id)
        .def_readwrite("distance_m", &ChannelRealization::distance_m)
        .def_readwrite("tx_power_dbm", &ChannelRealization::tx_power_dbm)
        .def_readwrite("pathloss_db", &ChannelRealization::pathloss_db)
        .def_readwrite("shadow_db", &ChannelRealization::shadow_db)
        .def_readwrite("fading_db", &ChannelRealization::fading_db)
        .def("rx_power_dbm", &ChannelRealization::rx_power_dbm);

    m.def("noise_power_dbm", &noise_power_dbm, py::arg("config"));
    m.def(
        "sinr_db",
        [](const ChannelRealization& sig, const std::vector<ChannelRealization>& interferers,
           const LinkModelConfig& cfg) { return sinr_db(sig, interferers, cfg); },
        py::arg("signal"), py::arg("interferers") = std::vector<ChannelRealization>{},
        py::arg("config") = LinkModelConfig{});

    py::class_<ReceiverWindow>(m, "ReceiverWindow")
        .def(py::init<int>(), py::arg("sn_bits") = 12)
        .def("receive",
             [](ReceiverWindow& w, std::uint32_t sn) { return rx_outcome_str(w.receive(sn)); },
             py::arg("sn"))
        .def_property_readonly("delivered", &ReceiverWindow::delivered)
        .def_property_readonly("discarded_duplicate", &ReceiverWindow::discarded_duplicate)
        .def_property_readonly("discarded_stale", &ReceiverWindow::discarded_stale)
        .def_property_readonly("window_size", &ReceiverWindow::window_size);

    m.def(
        "compute_cdf",
        [](std::vector<double> values) {
            std::vector<std::pair<double, double>> out;
            for (const CdfPoint& p : compute_cdf(std::move(values)))
                out.emplace_back(p.value, p.cum_prob);
            return out;
        },
        py::arg("values"), "Sorted (value, cum_prob) pairs, ties collapsed to the top rank");
    m.def(
        "quantile", [](std::vector<double> values, double p) { return quantile(std::move(values), p); },
        py::arg("values"), py::arg("p"));

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("iterations", &RunConfig::iterations)
        .def_readwrite("packets_per_ue", &RunConfig::packets_per_ue)
        .def_readwrite("beta_db", &RunConfig::beta_db)
        .def_readwrite("xn_latency_ms", &RunConfig::xn_latency_ms)
        .def_readwrite("latency_budget_ms", &RunConfig::latency_budget_ms)
        .def_readwrite("n_sc", &RunConfig::n_sc)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("ues_per_cell", &RunConfig::ues_per_cell)
        .def_readwrite("cross_leg_discard", &RunConfig::cross_leg_discard)
        .def_readwrite("threads", &RunConfig::threads)
        .def_property(
            "scenario", [](const RunConfig& c) { return to_string(c.scenario); },
            [](RunConfig& c, const std::string& s) {
                if (!parse_scenario(s, c.scenario)) throw ConfigError("unknown scenario " + s);
            })
        .def_property(
            "direction", [](const RunConfig& c) { return to_string(c.direction); },
            [](RunConfig& c, const std::string& s) {
                if (!parse_direction(s, c.direction)) throw ConfigError("unknown direction " + s);
            });

    m.def(
        "run_iteration",
        [](const RunConfig& cfg, std::uint64_t index) { return metrics_dict(run_iteration(cfg, index)); },
        py::arg("config"), py::arg("index") = 0);
    m.def(
        "run_campaign",
        [](const RunConfig& cfg) {
            const CampaignResult res = run_campaign(cfg);
            py::list iters;
            for (const IterationMetrics& it : res.iterations) iters.append(metrics_dict(it));
            py::dict d;
            d["scenario"] = to_string(res.cfg.scenario);
            d["direction"] = to_string(res.cfg.direction);
            d["iterations"] = iters;
            d["pdr_values"] = res.pdr_values();
            d["dup_eff_values"] = res.dup_eff_values();
            return d;
        },
        py::arg("config"));

    m.def(
        "handover_trace",
        [](const std::string& direction, int n_sdus, int path_switch_after, double xn_ms,
           bool xn_available) {
            HandoverParams hp;
            if (!parse_direction(direction, hp.direction))
                throw ConfigError("unknown direction " + direction);
            hp.n_sdus = n_sdus;
            hp.path_switch_after_sn = path_switch_after;
            hp.xn_latency = ms(xn_ms);
            hp.xn_available = xn_available;
            const HandoverResult res = run_handover(hp);
            py::dict d;
            d["trace"] = format_handover_trace(res.trace);
            d["final_phase"] = to_string(res.final_phase);
            d["aborted"] = res.aborted;
            py::list deliveries;
            for (const HandoverDelivery& del : res.deliveries)
                deliveries.append(py::make_tuple(del.sn, del.entity, to_ms(del.time)));
            d["deliveries"] = deliveries;
            return d;
        },
        py::arg("direction") = "ul", py::arg("n_sdus") = 20, py::arg("path_switch_after") = 10,
        py::arg("xn_ms") = 2.0, py::arg("xn_available") = true);

    py::class_<TriggerConfig>(m, "TriggerConfig")
        .def(py::init<>())
        .def_readwrite("activate_below_db", &TriggerConfig::activate_below_db)
        .def_readwrite("deactivate_above_db", &TriggerConfig::deactivate_above_db);
    m.def(
        "evaluate_trigger",
        [](double leg0, double leg1, bool active, const TriggerConfig& cfg) {
            return static_cast<int>(evaluate_trigger(leg0, leg1, active, cfg));
        },
        py::arg("leg0_db"), py::arg("leg1_db"), py::arg("currently_active"),
        py::arg("config") = TriggerConfig{},
        "1 to activate, -1 to deactivate, 0 to hold");

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
