#include "spectrade/config.hpp"

#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spectrade/errors.hpp"

namespace spectrade::config {

namespace {

using json = nlohmann::json;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// shortest representation that parses back to the same double
std::string fmt_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

consensus::Behavior behavior_from_string(const std::string& s) {
    if (s == "honest") return consensus::Behavior::honest;
    if (s == "malicious_reject") return consensus::Behavior::malicious_reject;
    if (s == "malicious_tamper") return consensus::Behavior::malicious_tamper;
    if (s == "offline") return consensus::Behavior::offline;
    throw ConfigError("unknown node behavior '" + s + "'");
}

std::string behavior_to_string(consensus::Behavior b) {
    switch (b) {
        case consensus::Behavior::honest: return "honest";
        case consensus::Behavior::malicious_reject: return "malicious_reject";
        case consensus::Behavior::malicious_tamper: return "malicious_tamper";
        case consensus::Behavior::offline: return "offline";
    }
    return "?";
}

// strict scalar parsers

double parse_double(const std::string& v, const std::string& where) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError(where + ": trailing characters in '" + v + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& v, const std::string& where) {
    // stoull wraps negatives silently
    if (!v.empty() && v[0] == '-') {
        throw ConfigError(where + ": expected an unsigned integer, got '" + v + "'");
    }
    std::size_t pos = 0;
    unsigned long long out = 0;
    try {
        out = std::stoull(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected an unsigned integer, got '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError(where + ": trailing characters in '" + v + "'");
    return out;
}

int parse_int(const std::string& v, const std::string& where) {
    std::size_t pos = 0;
    int out = 0;
    try {
        out = std::stoi(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected an integer, got '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError(where + ": trailing characters in '" + v + "'");
    return out;
}

std::vector<std::string> split_tokens(const std::string& v) {
    std::istringstream is(v);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

// ---- sectioned text parsing ----

struct IniHandlerCtx {
    ScenarioConfig cfg;
    bool balances_cleared = false;
    bool nodes_cleared = false;
    bool buyers_cleared = false;
    bool omegas_cleared = false;
};

void apply_kv(IniHandlerCtx& ctx, const std::string& section, const std::string& key,
              const std::string& value) {
    ScenarioConfig& c = ctx.cfg;
    const std::string where = "[" + section + "] " + key;
    auto tokens = [&]() { return split_tokens(value); };

    if (section == "sim") {
        if (key == "seed") { c.seed = parse_u64(value, where); return; }
        if (key == "epochs") { c.epochs = parse_int(value, where); return; }
        if (key == "max_retries") { c.max_retries = std::uint32_t(parse_u64(value, where)); return; }
        if (key == "satellite_account") { c.satellite_account = value; return; }
        if (key == "buyer") {
            if (!ctx.buyers_cleared) { c.buyers.clear(); ctx.buyers_cleared = true; }
            c.buyers.push_back(value);
            return;
        }
    } else if (section == "geometry") {
        if (key == "n_cells") { c.footprint.n_cells = parse_int(value, where); return; }
        if (key == "reuse_factor") { c.footprint.reuse_factor = parse_int(value, where); return; }
        if (key == "altitude_km") { c.footprint.sat_altitude_km = parse_double(value, where); return; }
        if (key == "cell_pitch_km") { c.footprint.cell_pitch_km = parse_double(value, where); return; }
        if (key == "earth_radius_km") { c.footprint.earth_radius_km = parse_double(value, where); return; }
        if (key == "users_per_cell") { c.users_per_cell = parse_int(value, where); return; }
        if (key == "cell") {
            auto t = tokens();
            if (t.size() != 5) throw ConfigError(where + ": expected 'id d_o_s color x y'");
            geometry::CellGeometry cell;
            cell.cell_id = parse_int(t[0], where);
            cell.center_to_sat_km = parse_double(t[1], where);
            cell.reuse_color = parse_int(t[2], where);
            cell.center.x_km = parse_double(t[3], where);
            cell.center.y_km = parse_double(t[4], where);
            c.explicit_cells.push_back(cell);
            return;
        }
    } else if (section == "channel") {
        if (key == "wavelength_m") { c.channel.wavelength_m = parse_double(value, where); return; }
        if (key == "user_tx_power_w") { c.channel.user_tx_power_w = parse_double(value, where); return; }
        if (key == "user_gain") { c.channel.user_gain = parse_double(value, where); return; }
        if (key == "sat_peak_gain") { c.channel.sat_pattern.peak_gain = parse_double(value, where); return; }
        if (key == "sat_rolloff_3db_rad") { c.channel.sat_pattern.rolloff_3db_rad = parse_double(value, where); return; }
        if (key == "sat_floor_gain") { c.channel.sat_pattern.floor_gain = parse_double(value, where); return; }
        if (key == "fading") { c.channel.fading = parse_double(value, where); return; }
        if (key == "activity") { c.channel.activity = parse_double(value, where); return; }
        if (key == "polarization_isolation") { c.channel.polarization_isolation = parse_double(value, where); return; }
        if (key == "noise_density") { c.channel.noise_density = parse_double(value, where); return; }
        if (key == "noise_bandwidth_hz") { c.channel.noise_bandwidth_hz = parse_double(value, where); return; }
    } else if (section == "reputation") {
        if (key == "indefinite_weight") { c.indefinite_weight = parse_double(value, where); return; }
        if (key == "threshold") { c.reputation_threshold = parse_double(value, where); return; }
        if (key == "operator_id") { c.operator_id = value; return; }
    } else if (section == "nodes") {
        if (key == "node") {
            auto t = tokens();
            if (t.size() != 3) throw ConfigError(where + ": expected 'id compute_power behavior'");
            if (!ctx.nodes_cleared) { c.nodes.clear(); ctx.nodes_cleared = true; }
            consensus::NodeConfig n;
            n.node_id = t[0];
            n.compute_power = parse_u64(t[1], where);
            n.behavior = behavior_from_string(t[2]);
            c.nodes.push_back(std::move(n));
            return;
        }
        if (key == "seed_interaction") {
            auto t = tokens();
            if (t.size() != 5) {
                throw ConfigError(where + ": expected 'node operator positive|negative quality count'");
            }
            const std::string& node_id = t[0];
            consensus::SeedInteraction s;
            s.operator_id = t[1];
            if (t[2] == "positive") s.positive = true;
            else if (t[2] == "negative") s.positive = false;
            else throw ConfigError(where + ": outcome must be positive or negative");
            s.quality = parse_double(t[3], where);
            std::uint64_t count = parse_u64(t[4], where);
            bool found = false;
            for (auto& n : c.nodes) {
                if (n.node_id == node_id) {
                    for (std::uint64_t i = 0; i < count; ++i) n.seed_log.push_back(s);
                    found = true;
                    break;
                }
            }
            if (!found) throw ConfigError(where + ": seed_interaction before node '" + node_id + "'");
            return;
        }
    } else if (section == "ledger") {
        if (key == "difficulty") { c.difficulty = std::uint32_t(parse_u64(value, where)); return; }
        if (key == "mining_reward_milli") { c.mining_reward_milli = parse_u64(value, where); return; }
        if (key == "balance") {
            auto t = tokens();
            if (t.size() != 2) throw ConfigError(where + ": expected 'account milli'");
            if (!ctx.balances_cleared) { c.initial_balances.clear(); ctx.balances_cleared = true; }
            c.initial_balances.emplace_back(t[0], parse_u64(t[1], where));
            return;
        }
    } else if (section == "market") {
        auto& m = c.market;
        if (key == "rate_value_coeff") { m.rate_value_coeff = parse_double(value, where); return; }
        if (key == "bandwidth_price") { m.bandwidth_price = parse_double(value, where); return; }
        if (key == "cost_coeff") { m.cost_coeff = parse_double(value, where); return; }
        if (key == "marginal_cost") { m.marginal_cost = parse_double(value, where); return; }
        if (key == "channel_count") { m.channel_count = parse_int(value, where); return; }
        if (key == "bandwidth") { m.bandwidth = parse_double(value, where); return; }
        if (key == "noise_bw_entrant") { m.noise_bw_entrant = parse_double(value, where); return; }
        if (key == "noise_bw_incumbent") { m.noise_bw_incumbent = parse_double(value, where); return; }
        if (key == "entrant_gain") { m.entrant_gain = parse_double(value, where); return; }
        if (key == "incumbent_gain") { m.incumbent_gain = parse_double(value, where); return; }
        if (key == "incumbent_power") { m.incumbent_power = parse_double(value, where); return; }
        if (key == "noise_density_entrant") { m.noise_density_entrant = parse_double(value, where); return; }
        if (key == "noise_density_incumbent") { m.noise_density_incumbent = parse_double(value, where); return; }
        if (key == "qos_threshold") { m.qos_threshold = parse_double(value, where); return; }
        if (key == "theta_density") {
            auto t = tokens();
            if (t.size() == 3 && t[0] == "uniform") {
                m.theta = market::ThetaDensity::uniform(parse_double(t[1], where), parse_double(t[2], where));
                return;
            }
            if (t.size() == 2 && t[0] == "point") {
                m.theta = market::ThetaDensity::point_mass(parse_double(t[1], where));
                return;
            }
            throw ConfigError(where + ": expected 'uniform lo hi' or 'point at'");
        }
        if (key == "price_range") {
            auto t = tokens();
            if (t.size() != 2) throw ConfigError(where + ": expected 'lo hi'");
            c.price_range = {parse_double(t[0], where), parse_double(t[1], where)};
            return;
        }
        if (key == "price_grid") { c.price_grid = parse_int(value, where); return; }
    } else if (section == "experiment") {
        auto parse_grid = [&](GridSpec& g) {
            auto t = tokens();
            if (t.size() != 3) throw ConfigError(where + ": expected 'lo hi n'");
            g.lo = parse_double(t[0], where);
            g.hi = parse_double(t[1], where);
            g.n = parse_int(t[2], where);
        };
        if (key == "qos_grid") { parse_grid(c.qos_grid); return; }
        if (key == "bandwidth_grid") { parse_grid(c.bandwidth_grid); return; }
        if (key == "price_grid") { parse_grid(c.sweep_price_grid); return; }
        if (key == "omega_list") {
            if (!ctx.omegas_cleared) { c.omega_list.clear(); ctx.omegas_cleared = true; }
            for (const std::string& t : tokens()) c.omega_list.push_back(parse_double(t, where));
            return;
        }
    } else {
        throw ConfigError("unknown config section [" + section + "]");
    }
    throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
}

ScenarioConfig parse_ini(const std::string& text) {
    IniHandlerCtx ctx;
    ctx.cfg = ScenarioConfig{};
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
            section = t.substr(1, t.size() - 2);
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (section.empty()) throw ConfigError("line " + std::to_string(lineno) + ": key outside a section");
        apply_kv(ctx, section, key, value);
    }
    return ctx.cfg;
}

// ---- JSON surface (identical schema) ----

void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
        }
    }
}

ScenarioConfig parse_json_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("JSON parse error: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("JSON config must be an object");
    require_keys(root, {"sim", "geometry", "channel", "reputation", "nodes", "ledger",
                        "market", "experiment"},
                 "top level");

    ScenarioConfig c;
    if (root.contains("sim")) {
        const json& s = root["sim"];
        require_keys(s, {"seed", "epochs", "max_retries", "satellite_account", "buyers"}, "sim");
        if (s.contains("seed")) c.seed = s["seed"].get<std::uint64_t>();
        if (s.contains("epochs")) c.epochs = s["epochs"].get<int>();
        if (s.contains("max_retries")) c.max_retries = s["max_retries"].get<std::uint32_t>();
        if (s.contains("satellite_account")) c.satellite_account = s["satellite_account"].get<std::string>();
        if (s.contains("buyers")) c.buyers = s["buyers"].get<std::vector<std::string>>();
    }
    if (root.contains("geometry")) {
        const json& g = root["geometry"];
        require_keys(g, {"n_cells", "reuse_factor", "altitude_km", "cell_pitch_km",
                         "earth_radius_km", "users_per_cell", "cells"},
                     "geometry");
        if (g.contains("n_cells")) c.footprint.n_cells = g["n_cells"].get<int>();
        if (g.contains("reuse_factor")) c.footprint.reuse_factor = g["reuse_factor"].get<int>();
        if (g.contains("altitude_km")) c.footprint.sat_altitude_km = g["altitude_km"].get<double>();
        if (g.contains("cell_pitch_km")) c.footprint.cell_pitch_km = g["cell_pitch_km"].get<double>();
        if (g.contains("earth_radius_km")) c.footprint.earth_radius_km = g["earth_radius_km"].get<double>();
        if (g.contains("users_per_cell")) c.users_per_cell = g["users_per_cell"].get<int>();
        if (g.contains("cells")) {
            for (const json& jc : g["cells"]) {
                require_keys(jc, {"id", "d_o_s", "color", "x", "y"}, "geometry.cells[]");
                geometry::CellGeometry cell;
                cell.cell_id = jc.at("id").get<int>();
                cell.center_to_sat_km = jc.at("d_o_s").get<double>();
                cell.reuse_color = jc.at("color").get<int>();
                cell.center.x_km = jc.at("x").get<double>();
                cell.center.y_km = jc.at("y").get<double>();
                c.explicit_cells.push_back(cell);
            }
        }
    }
    if (root.contains("channel")) {
        const json& ch = root["channel"];
        require_keys(ch, {"wavelength_m", "user_tx_power_w", "user_gain", "sat_peak_gain",
                          "sat_rolloff_3db_rad", "sat_floor_gain", "fading", "activity",
                          "polarization_isolation", "noise_density", "noise_bandwidth_hz"},
                     "channel");
        auto& k = c.channel;
        if (ch.contains("wavelength_m")) k.wavelength_m = ch["wavelength_m"].get<double>();
        if (ch.contains("user_tx_power_w")) k.user_tx_power_w = ch["user_tx_power_w"].get<double>();
        if (ch.contains("user_gain")) k.user_gain = ch["user_gain"].get<double>();
        if (ch.contains("sat_peak_gain")) k.sat_pattern.peak_gain = ch["sat_peak_gain"].get<double>();
        if (ch.contains("sat_rolloff_3db_rad")) k.sat_pattern.rolloff_3db_rad = ch["sat_rolloff_3db_rad"].get<double>();
        if (ch.contains("sat_floor_gain")) k.sat_pattern.floor_gain = ch["sat_floor_gain"].get<double>();
        if (ch.contains("fading")) k.fading = ch["fading"].get<double>();
        if (ch.contains("activity")) k.activity = ch["activity"].get<double>();
        if (ch.contains("polarization_isolation")) k.polarization_isolation = ch["polarization_isolation"].get<double>();
        if (ch.contains("noise_density")) k.noise_density = ch["noise_density"].get<double>();
        if (ch.contains("noise_bandwidth_hz")) k.noise_bandwidth_hz = ch["noise_bandwidth_hz"].get<double>();
    }
    if (root.contains("reputation")) {
        const json& r = root["reputation"];
        require_keys(r, {"indefinite_weight", "threshold", "operator_id"}, "reputation");
        if (r.contains("indefinite_weight")) c.indefinite_weight = r["indefinite_weight"].get<double>();
        if (r.contains("threshold")) c.reputation_threshold = r["threshold"].get<double>();
        if (r.contains("operator_id")) c.operator_id = r["operator_id"].get<std::string>();
    }
    if (root.contains("nodes")) {
        c.nodes.clear();
        for (const json& jn : root["nodes"]) {
            require_keys(jn, {"id", "compute_power", "behavior", "seed_log"}, "nodes[]");
            consensus::NodeConfig n;
            n.node_id = jn.at("id").get<std::string>();
            if (jn.contains("compute_power")) n.compute_power = jn["compute_power"].get<std::uint64_t>();
            if (jn.contains("behavior")) n.behavior = behavior_from_string(jn["behavior"].get<std::string>());
            if (jn.contains("seed_log")) {
                for (const json& js : jn["seed_log"]) {
                    require_keys(js, {"operator", "outcome", "quality", "count"}, "nodes[].seed_log[]");
                    consensus::SeedInteraction s;
                    s.operator_id = js.at("operator").get<std::string>();
                    std::string outcome = js.at("outcome").get<std::string>();
                    if (outcome == "positive") s.positive = true;
                    else if (outcome == "negative") s.positive = false;
                    else throw ConfigError("nodes[].seed_log[].outcome must be positive or negative");
                    if (js.contains("quality")) s.quality = js["quality"].get<double>();
                    std::uint64_t count = js.contains("count") ? js["count"].get<std::uint64_t>() : 1;
                    for (std::uint64_t i = 0; i < count; ++i) n.seed_log.push_back(s);
                }
            }
            c.nodes.push_back(std::move(n));
        }
    }
    if (root.contains("ledger")) {
        const json& l = root["ledger"];
        require_keys(l, {"difficulty", "mining_reward_milli", "balances"}, "ledger");
        if (l.contains("difficulty")) c.difficulty = l["difficulty"].get<std::uint32_t>();
        if (l.contains("mining_reward_milli")) c.mining_reward_milli = l["mining_reward_milli"].get<std::uint64_t>();
        if (l.contains("balances")) {
            c.initial_balances.clear();
            for (auto it = l["balances"].begin(); it != l["balances"].end(); ++it) {
                c.initial_balances.emplace_back(it.key(), it.value().get<std::uint64_t>());
            }
        }
    }
    if (root.contains("market")) {
        const json& m = root["market"];
        require_keys(m, {"rate_value_coeff", "bandwidth_price", "cost_coeff", "marginal_cost",
                         "channel_count", "bandwidth", "noise_bw_entrant", "noise_bw_incumbent",
                         "entrant_gain", "incumbent_gain", "incumbent_power",
                         "noise_density_entrant", "noise_density_incumbent", "qos_threshold",
                         "theta_density", "price_range", "price_grid"},
                     "market");
        auto& mp = c.market;
        if (m.contains("rate_value_coeff")) mp.rate_value_coeff = m["rate_value_coeff"].get<double>();
        if (m.contains("bandwidth_price")) mp.bandwidth_price = m["bandwidth_price"].get<double>();
        if (m.contains("cost_coeff")) mp.cost_coeff = m["cost_coeff"].get<double>();
        if (m.contains("marginal_cost")) mp.marginal_cost = m["marginal_cost"].get<double>();
        if (m.contains("channel_count")) mp.channel_count = m["channel_count"].get<int>();
        if (m.contains("bandwidth")) mp.bandwidth = m["bandwidth"].get<double>();
        if (m.contains("noise_bw_entrant")) mp.noise_bw_entrant = m["noise_bw_entrant"].get<double>();
        if (m.contains("noise_bw_incumbent")) mp.noise_bw_incumbent = m["noise_bw_incumbent"].get<double>();
        if (m.contains("entrant_gain")) mp.entrant_gain = m["entrant_gain"].get<double>();
        if (m.contains("incumbent_gain")) mp.incumbent_gain = m["incumbent_gain"].get<double>();
        if (m.contains("incumbent_power")) mp.incumbent_power = m["incumbent_power"].get<double>();
        if (m.contains("noise_density_entrant")) mp.noise_density_entrant = m["noise_density_entrant"].get<double>();
        if (m.contains("noise_density_incumbent")) mp.noise_density_incumbent = m["noise_density_incumbent"].get<double>();
        if (m.contains("qos_threshold")) mp.qos_threshold = m["qos_threshold"].get<double>();
        if (m.contains("theta_density")) {
            const json& td = m["theta_density"];
            require_keys(td, {"kind", "lo", "hi", "at"}, "market.theta_density");
            std::string kind = td.at("kind").get<std::string>();
            if (kind == "uniform") {
                mp.theta = market::ThetaDensity::uniform(td.at("lo").get<double>(), td.at("hi").get<double>());
            } else if (kind == "point") {
                mp.theta = market::ThetaDensity::point_mass(td.at("at").get<double>());
            } else {
                throw ConfigError("market.theta_density.kind must be uniform or point");
            }
        }
        if (m.contains("price_range")) {
            const json& pr = m["price_range"];
            require_keys(pr, {"lo", "hi"}, "market.price_range");
            c.price_range = {pr.at("lo").get<double>(), pr.at("hi").get<double>()};
        }
        if (m.contains("price_grid")) c.price_grid = m["price_grid"].get<int>();
    }
    if (root.contains("experiment")) {
        const json& e = root["experiment"];
        require_keys(e, {"qos_grid", "bandwidth_grid", "price_grid", "omega_list"}, "experiment");
        auto parse_grid = [&](const json& jg, GridSpec& g, const char* where) {
            require_keys(jg, {"lo", "hi", "n"}, where);
            g.lo = jg.at("lo").get<double>();
            g.hi = jg.at("hi").get<double>();
            g.n = jg.at("n").get<int>();
        };
        if (e.contains("qos_grid")) parse_grid(e["qos_grid"], c.qos_grid, "experiment.qos_grid");
        if (e.contains("bandwidth_grid")) parse_grid(e["bandwidth_grid"], c.bandwidth_grid, "experiment.bandwidth_grid");
        if (e.contains("price_grid")) parse_grid(e["price_grid"], c.sweep_price_grid, "experiment.price_grid");
        if (e.contains("omega_list")) c.omega_list = e["omega_list"].get<std::vector<double>>();
    }
    return c;
}

} // namespace

std::vector<double> make_grid(const GridSpec& g) {
    if (g.n < 1) throw ConfigError("grid needs at least one point");
    std::vector<double> out;
    out.reserve(g.n);
    if (g.n == 1) {
        out.push_back(g.lo);
        return out;
    }
    for (int i = 0; i < g.n; ++i) {
        out.push_back(g.lo + (g.hi - g.lo) * double(i) / double(g.n - 1));
    }
    return out;
}

void ScenarioConfig::validate() const {
    if (epochs < 0) throw ConfigError("sim.epochs must be >= 0");
    if (indefinite_weight < 0.0 || indefinite_weight > 1.0) {
        throw ConfigError("reputation.indefinite_weight outside [0,1]");
    }
    if (reputation_threshold < 0.0) throw ConfigError("reputation.threshold must be >= 0");
    if (footprint.n_cells < 1) throw ConfigError("geometry.n_cells must be >= 1");
    if (users_per_cell < 0) throw ConfigError("geometry.users_per_cell must be >= 0");
    market.validate();
    if (!(price_range.lo > 0.0) || !(price_range.hi > price_range.lo)) {
        throw ConfigError("market.price_range needs 0 < lo < hi");
    }
    if (price_grid < 3) throw ConfigError("market.price_grid must be >= 3");
    std::set<std::string> funded;
    for (const auto& [account, amount] : initial_balances) {
        (void)amount;
        if (!funded.insert(account).second) {
            throw ConfigError("ledger.balance repeats account " + account);
        }
    }
    for (const std::string& b : buyers) {
        if (!funded.count(b)) throw ConfigError("buyer " + b + " has no initial balance");
    }
    std::set<std::string> node_ids;
    for (const auto& n : nodes) {
        if (!node_ids.insert(n.node_id).second) {
            throw ConfigError("duplicate node id " + n.node_id);
        }
    }
    if (qos_grid.n < 1 || bandwidth_grid.n < 1 || sweep_price_grid.n < 1) {
        throw ConfigError("experiment grids need at least one point");
    }
}

ScenarioConfig parse_config_text(const std::string& text) {
    for (char ch : text) {
        if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') continue;
        if (ch == '{') return parse_json_config(text);
        break;
    }
    return parse_ini(text);
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
    std::ostringstream os;
    os << "[sim]\n";
    os << "seed = " << c.seed << "\n";
    os << "epochs = " << c.epochs << "\n";
    os << "max_retries = " << c.max_retries << "\n";
    os << "satellite_account = " << c.satellite_account << "\n";
    for (const auto& b : c.buyers) os << "buyer = " << b << "\n";

    os << "\n[geometry]\n";
    os << "n_cells = " << c.footprint.n_cells << "\n";
    os << "reuse_factor = " << c.footprint.reuse_factor << "\n";
    os << "altitude_km = " << fmt_double(c.footprint.sat_altitude_km) << "\n";
    os << "cell_pitch_km = " << fmt_double(c.footprint.cell_pitch_km) << "\n";
    os << "earth_radius_km = " << fmt_double(c.footprint.earth_radius_km) << "\n";
    os << "users_per_cell = " << c.users_per_cell << "\n";
    for (const auto& cell : c.explicit_cells) {
        os << "cell = " << cell.cell_id << ' ' << fmt_double(cell.center_to_sat_km) << ' '
           << cell.reuse_color << ' ' << fmt_double(cell.center.x_km) << ' '
           << fmt_double(cell.center.y_km) << "\n";
    }

    os << "\n[channel]\n";
    os << "wavelength_m = " << fmt_double(c.channel.wavelength_m) << "\n";
    os << "user_tx_power_w = " << fmt_double(c.channel.user_tx_power_w) << "\n";
    os << "user_gain = " << fmt_double(c.channel.user_gain) << "\n";
    os << "sat_peak_gain = " << fmt_double(c.channel.sat_pattern.peak_gain) << "\n";
    os << "sat_rolloff_3db_rad = " << fmt_double(c.channel.sat_pattern.rolloff_3db_rad) << "\n";
    os << "sat_floor_gain = " << fmt_double(c.channel.sat_pattern.floor_gain) << "\n";
    os << "fading = " << fmt_double(c.channel.fading) << "\n";
    os << "activity = " << fmt_double(c.channel.activity) << "\n";
    os << "polarization_isolation = " << fmt_double(c.channel.polarization_isolation) << "\n";
    os << "noise_density = " << fmt_double(c.channel.noise_density) << "\n";
    os << "noise_bandwidth_hz = " << fmt_double(c.channel.noise_bandwidth_hz) << "\n";

    os << "\n[reputation]\n";
    os << "indefinite_weight = " << fmt_double(c.indefinite_weight) << "\n";
    os << "threshold = " << fmt_double(c.reputation_threshold) << "\n";
    os << "operator_id = " << c.operator_id << "\n";

    os << "\n[nodes]\n";
    for (const auto& n : c.nodes) {
        os << "node = " << n.node_id << ' ' << n.compute_power << ' '
           << behavior_to_string(n.behavior) << "\n";
    }
    for (const auto& n : c.nodes) {
        // compress consecutive identical seed interactions into counts
        std::size_t i = 0;
        while (i < n.seed_log.size()) {
            const auto& s = n.seed_log[i];
            std::size_t j = i;
            while (j < n.seed_log.size() && n.seed_log[j].operator_id == s.operator_id &&
                   n.seed_log[j].positive == s.positive && n.seed_log[j].quality == s.quality) {
                ++j;
            }
            os << "seed_interaction = " << n.node_id << ' ' << s.operator_id << ' '
               << (s.positive ? "positive" : "negative") << ' ' << fmt_double(s.quality) << ' '
               << (j - i) << "\n";
            i = j;
        }
    }

    os << "\n[ledger]\n";
    os << "difficulty = " << c.difficulty << "\n";
    os << "mining_reward_milli = " << c.mining_reward_milli << "\n";
    for (const auto& [account, amount] : c.initial_balances) {
        os << "balance = " << account << ' ' << amount << "\n";
    }

    const auto& m = c.market;
    os << "\n[market]\n";
    os << "rate_value_coeff = " << fmt_double(m.rate_value_coeff) << "\n";
    os << "bandwidth_price = " << fmt_double(m.bandwidth_price) << "\n";
    os << "cost_coeff = " << fmt_double(m.cost_coeff) << "\n";
    os << "marginal_cost = " << fmt_double(m.marginal_cost) << "\n";
    os << "channel_count = " << m.channel_count << "\n";
    os << "bandwidth = " << fmt_double(m.bandwidth) << "\n";
    os << "noise_bw_entrant = " << fmt_double(m.noise_bw_entrant) << "\n";
    os << "noise_bw_incumbent = " << fmt_double(m.noise_bw_incumbent) << "\n";
    os << "entrant_gain = " << fmt_double(m.entrant_gain) << "\n";
    os << "incumbent_gain = " << fmt_double(m.incumbent_gain) << "\n";
    os << "incumbent_power = " << fmt_double(m.incumbent_power) << "\n";
    os << "noise_density_entrant = " << fmt_double(m.noise_density_entrant) << "\n";
    os << "noise_density_incumbent = " << fmt_double(m.noise_density_incumbent) << "\n";
    os << "qos_threshold = " << fmt_double(m.qos_threshold) << "\n";
    if (m.theta.kind == market::ThetaDensity::Kind::uniform) {
        os << "theta_density = uniform " << fmt_double(m.theta.lo) << ' ' << fmt_double(m.theta.hi) << "\n";
    } else {
        os << "theta_density = point " << fmt_double(m.theta.lo) << "\n";
    }
    os << "price_range = " << fmt_double(c.price_range.lo) << ' ' << fmt_double(c.price_range.hi) << "\n";
    os << "price_grid = " << c.price_grid << "\n";

    os << "\n[experiment]\n";
    os << "qos_grid = " << fmt_double(c.qos_grid.lo) << ' ' << fmt_double(c.qos_grid.hi) << ' ' << c.qos_grid.n << "\n";
    os << "bandwidth_grid = " << fmt_double(c.bandwidth_grid.lo) << ' ' << fmt_double(c.bandwidth_grid.hi) << ' ' << c.bandwidth_grid.n << "\n";
    os << "price_grid = " << fmt_double(c.sweep_price_grid.lo) << ' ' << fmt_double(c.sweep_price_grid.hi) << ' ' << c.sweep_price_grid.n << "\n";
    os << "omega_list =";
    for (double w : c.omega_list) os << ' ' << fmt_double(w);
    os << "\n";
    return os.str();
}

std::string serialize_config_json(const ScenarioConfig& c) {
    json root;
    root["sim"] = {{"seed", c.seed},
                   {"epochs", c.epochs},
                   {"max_retries", c.max_retries},
                   {"satellite_account", c.satellite_account},
                   {"buyers", c.buyers}};
    json geom = {{"n_cells", c.footprint.n_cells},
                 {"reuse_factor", c.footprint.reuse_factor},
                 {"altitude_km", c.footprint.sat_altitude_km},
                 {"cell_pitch_km", c.footprint.cell_pitch_km},
                 {"earth_radius_km", c.footprint.earth_radius_km},
                 {"users_per_cell", c.users_per_cell}};
    if (!c.explicit_cells.empty()) {
        json cells = json::array();
        for (const auto& cell : c.explicit_cells) {
            cells.push_back({{"id", cell.cell_id},
                             {"d_o_s", cell.center_to_sat_km},
                             {"color", cell.reuse_color},
                             {"x", cell.center.x_km},
                             {"y", cell.center.y_km}});
        }
        geom["cells"] = std::move(cells);
    }
    root["geometry"] = std::move(geom);
    root["channel"] = {{"wavelength_m", c.channel.wavelength_m},
                       {"user_tx_power_w", c.channel.user_tx_power_w},
                       {"user_gain", c.channel.user_gain},
                       {"sat_peak_gain", c.channel.sat_pattern.peak_gain},
                       {"sat_rolloff_3db_rad", c.channel.sat_pattern.rolloff_3db_rad},
                       {"sat_floor_gain", c.channel.sat_pattern.floor_gain},
                       {"fading", c.channel.fading},
                       {"activity", c.channel.activity},
                       {"polarization_isolation", c.channel.polarization_isolation},
                       {"noise_density", c.channel.noise_density},
                       {"noise_bandwidth_hz", c.channel.noise_bandwidth_hz}};
    root["reputation"] = {{"indefinite_weight", c.indefinite_weight},
                          {"threshold", c.reputation_threshold},
                          {"operator_id", c.operator_id}};
    json nodes = json::array();
    for (const auto& n : c.nodes) {
        json jn = {{"id", n.node_id},
                   {"compute_power", n.compute_power},
                   {"behavior", behavior_to_string(n.behavior)}};
        if (!n.seed_log.empty()) {
            json log = json::array();
            std::size_t i = 0;
            while (i < n.seed_log.size()) {
                const auto& s = n.seed_log[i];
                std::size_t j = i;
                while (j < n.seed_log.size() && n.seed_log[j].operator_id == s.operator_id &&
                       n.seed_log[j].positive == s.positive &&
                       n.seed_log[j].quality == s.quality) {
                    ++j;
                }
                log.push_back({{"operator", s.operator_id},
                               {"outcome", s.positive ? "positive" : "negative"},
                               {"quality", s.quality},
                               {"count", j - i}});
                i = j;
            }
            jn["seed_log"] = std::move(log);
        }
        nodes.push_back(std::move(jn));
    }
    root["nodes"] = std::move(nodes);
    json balances = json::object();
    for (const auto& [account, amount] : c.initial_balances) balances[account] = amount;
    root["ledger"] = {{"difficulty", c.difficulty},
                      {"mining_reward_milli", c.mining_reward_milli},
                      {"balances", std::move(balances)}};
    const auto& m = c.market;
    json theta;
    if (m.theta.kind == market::ThetaDensity::Kind::uniform) {
        theta = {{"kind", "uniform"}, {"lo", m.theta.lo}, {"hi", m.theta.hi}};
    } else {
        theta = {{"kind", "point"}, {"at", m.theta.lo}};
    }
    root["market"] = {{"rate_value_coeff", m.rate_value_coeff},
                      {"bandwidth_price", m.bandwidth_price},
                      {"cost_coeff", m.cost_coeff},
                      {"marginal_cost", m.marginal_cost},
                      {"channel_count", m.channel_count},
                      {"bandwidth", m.bandwidth},
                      {"noise_bw_entrant", m.noise_bw_entrant},
                      {"noise_bw_incumbent", m.noise_bw_incumbent},
                      {"entrant_gain", m.entrant_gain},
                      {"incumbent_gain", m.incumbent_gain},
                      {"incumbent_power", m.incumbent_power},
                      {"noise_density_entrant", m.noise_density_entrant},
                      {"noise_density_incumbent", m.noise_density_incumbent},
                      {"qos_threshold", m.qos_threshold},
                      {"theta_density", std::move(theta)},
                      {"price_range", {{"lo", c.price_range.lo}, {"hi", c.price_range.hi}}},
                      {"price_grid", c.price_grid}};
    auto grid_json = [](const GridSpec& g) {
        return json{{"lo", g.lo}, {"hi", g.hi}, {"n", g.n}};
    };
    root["experiment"] = {{"qos_grid", grid_json(c.qos_grid)},
                          {"bandwidth_grid", grid_json(c.bandwidth_grid)},
                          {"price_grid", grid_json(c.sweep_price_grid)},
                          {"omega_list", c.omega_list}};
    return root.dump(2) + "\n";
}

ScenarioConfig default_config() {
    ScenarioConfig c;
    c.seed = 42;
    c.epochs = 30;
    c.max_retries = 2;
    c.satellite_account = "sat-op";
    c.buyers = {"user-1", "user-2", "user-3"};

    c.footprint = geometry::FootprintParams{7, 3, 35786.0, 500.0, 6371.0};
    c.users_per_cell = 2;

    // nodes: four honest, two that always object
    auto seed_positive = [](const std::string& op, std::uint64_t n) {
        std::vector<consensus::SeedInteraction> log;
        for (std::uint64_t i = 0; i < n; ++i) log.push_back({op, true, 1.0});
        return log;
    };
    for (int i = 1; i <= 4; ++i) {
        consensus::NodeConfig n;
        n.node_id = "edge-h" + std::to_string(i);
        n.compute_power = 1u << 20;
        n.behavior = consensus::Behavior::honest;
        n.seed_log = seed_positive("sat-op", 6);
        c.nodes.push_back(std::move(n));
    }
    for (int i = 1; i <= 2; ++i) {
        consensus::NodeConfig n;
        n.node_id = "edge-m" + std::to_string(i);
        n.compute_power = 1u << 20;
        n.behavior = consensus::Behavior::malicious_reject;
        n.seed_log = seed_positive("sat-op", 4);
        c.nodes.push_back(std::move(n));
    }

    c.indefinite_weight = 0.5;
    c.reputation_threshold = 0.5;
    c.operator_id = "sat-op";

    c.difficulty = 8;
    c.mining_reward_milli = 10000;
    c.initial_balances = {{"user-1", 100000}, {"user-2", 100000}, {"user-3", 100000}};

    c.market = market::MarketParams{};
    c.market.theta = market::ThetaDensity::uniform(0.5, 1.5);
    c.price_range = {0.01, 0.45};
    c.price_grid = 64;

    c.qos_grid = {0.15, 0.33, 10};
    c.bandwidth_grid = {50.0, 400.0, 10};
    c.sweep_price_grid = {0.02, 0.60, 60};
    c.omega_list = {0.8, 1.0, 1.2};
    return c;
}

} // namespace spectrade::config
