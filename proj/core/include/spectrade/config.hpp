#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spectrade/channel.hpp"
#include "spectrade/consensus.hpp"
#include "spectrade/geometry.hpp"
#include "spectrade/market.hpp"

namespace spectrade::config {

// Physical uplink budget for the footprint diagnostic (Ka-band numbers).
struct ChannelConfig {
    double wavelength_m = 0.015;
    double user_tx_power_w = 10.0;
    double user_gain = 6300.0; // ~38 dBi terminal
    channel::AntennaPattern sat_pattern{158000.0, 0.01, 1.0}; // ~52 dBi spot beam
    double fading = 1.25;
    double activity = 0.5;
    double polarization_isolation = 0.8;
    double noise_density = 1e-20; // W/Hz at the satellite receiver
    double noise_bandwidth_hz = 1e6;
};

struct GridSpec {
    double lo = 0.0;
    double hi = 1.0;
    int n = 10;
};

std::vector<double> make_grid(const GridSpec& g);

// Whole scenario. Parsed from the sectioned key/value format or from JSON
// with the identical schema; unknown keys are rejected either way.
struct ScenarioConfig {
    // [sim]
    std::uint64_t seed = 42;
    int epochs = 10;
    std::uint32_t max_retries = 2;
    std::string satellite_account = "sat-op";
    std::vector<std::string> buyers;

    // [geometry]
    geometry::FootprintParams footprint;
    int users_per_cell = 2;
    std::vector<geometry::CellGeometry> explicit_cells; // overrides the generator

    // [channel]
    ChannelConfig channel;

    // [reputation]
    double indefinite_weight = 0.5;
    double reputation_threshold = 0.5;
    std::string operator_id = "sat-op";

    // [nodes]
    std::vector<consensus::NodeConfig> nodes;

    // [ledger]
    std::uint32_t difficulty = 8;
    std::uint64_t mining_reward_milli = 10000;
    std::vector<std::pair<std::string, std::uint64_t>> initial_balances;

    // [market]
    market::MarketParams market;
    market::Interval price_range{0.01, 0.45};
    int price_grid = 64;

    // [experiment]
    GridSpec qos_grid{0.15, 0.33, 10};
    GridSpec bandwidth_grid{50.0, 400.0, 10};
    GridSpec sweep_price_grid{0.02, 0.60, 60};
    std::vector<double> omega_list{0.8, 1.0, 1.2};

    void validate() const;
};

// Detects JSON by a leading '{'.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

// Canonical sectioned text; parse(serialize(c)) == c field for field.
std::string serialize_config(const ScenarioConfig& c);
std::string serialize_config_json(const ScenarioConfig& c);

// The shipped defaults (same values as configs/default.cfg).
ScenarioConfig default_config();

} // namespace spectrade::config
