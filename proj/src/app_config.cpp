#include "dupsim/app_config.hpp"

#include <fstream>
#include <sstream>

namespace dupsim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError(key + ": not a number: '" + v + "'");
    return d;
}

long long to_int(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    long long i = 0;
    try {
        i = std::stoll(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an integer: '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError(key + ": not an integer: '" + v + "'");
    return i;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": not a boolean: '" + v + "'");
}

} // namespace

void apply_config_entry(const std::string& key, const std::string& value, RunConfig& run) {
    if (key == "scenario") {
        if (!parse_scenario(value, run.scenario))
            throw ConfigError("scenario: unknown value '" + value + "'");
    } else if (key == "direction") {
        if (!parse_direction(value, run.direction))
            throw ConfigError("direction: unknown value '" + value + "'");
    } else if (key == "beta_db") {
        run.beta_db = to_double(key, value);
    } else if (key == "nsc") {
        run.n_sc = static_cast<int>(to_int(key, value));
    } else if (key == "iterations") {
        run.iterations = static_cast<int>(to_int(key, value));
    } else if (key == "packets") {
        run.packets_per_ue = static_cast<int>(to_int(key, value));
    } else if (key == "xn_latency_ms") {
        run.xn_latency_ms = to_double(key, value);
    } else if (key == "latency_budget_ms") {
        run.latency_budget_ms = to_double(key, value);
    } else if (key == "seed") {
        run.seed = static_cast<std::uint64_t>(to_int(key, value));
    } else if (key == "ues_per_cell") {
        run.ues_per_cell = static_cast<int>(to_int(key, value));
    } else if (key == "n_tier1") {
        run.n_tier1 = static_cast<int>(to_int(key, value));
    } else if (key == "tti_ms") {
        run.tti_ms = to_double(key, value);
    } else if (key == "retx_delay_ms") {
        run.retx_delay_ms = to_double(key, value);
    } else if (key == "max_retx") {
        run.max_retx = static_cast<int>(to_int(key, value));
    } else if (key == "rlc_buffer_limit") {
        run.rlc_buffer_limit = static_cast<int>(to_int(key, value));
    } else if (key == "cross_leg_discard") {
        run.cross_leg_discard = to_bool(key, value);
    } else if (key == "sdu_bytes") {
        run.sdu_bytes = static_cast<std::uint32_t>(to_int(key, value));
    } else if (key == "bandwidth_mhz") {
        run.bandwidth_mhz = to_double(key, value);
    } else if (key == "fading") {
        if (value == "rayleigh") run.fading = FadingModel::RayleighBlock;
        else if (value == "none") run.fading = FadingModel::None;
        else throw ConfigError("fading: unknown value '" + value + "'");
    } else if (key == "interference") {
        if (value == "co_channel") run.interference = InterferenceMode::CoChannel;
        else if (value == "none") run.interference = InterferenceMode::None;
        else throw ConfigError("interference: unknown value '" + value + "'");
    } else if (key == "interferer_activity") {
        run.interferer_activity = to_double(key, value);
    } else if (key == "dynamic_control") {
        run.dynamic_control = to_bool(key, value);
    } else if (key == "control_mechanism") {
        if (value == "rrc") run.control_mechanism = ControlMechanism::Rrc;
        else if (value == "pdcp") run.control_mechanism = ControlMechanism::PdcpControlPdu;
        else if (value == "mac_ce") run.control_mechanism = ControlMechanism::MacCe;
        else throw ConfigError("control_mechanism: unknown value '" + value + "'");
    } else if (key == "trigger_interval_ms") {
        run.trigger_interval_ms = to_double(key, value);
    } else if (key == "trigger_activate_snr_db") {
        run.trigger_activate_snr_db = to_double(key, value);
    } else if (key == "trigger_deactivate_snr_db") {
        run.trigger_deactivate_snr_db = to_double(key, value);
    } else if (key == "threads") {
        run.threads = static_cast<int>(to_int(key, value));
    } else {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
}

void apply_config_file(const std::string& path, RunConfig& run) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        try {
            apply_config_entry(key, value, run);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

} // namespace dupsim
