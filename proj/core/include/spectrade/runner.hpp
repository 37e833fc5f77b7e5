#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spectrade/config.hpp"
#include "spectrade/consensus.hpp"
#include "spectrade/hash.hpp"
#include "spectrade/ledger.hpp"

namespace spectrade::runner {

struct RunReport {
    std::vector<ledger::Block> chain;
    ledger::BalanceMap balances;
    std::string chain_dump;
    std::string reputation_csv;
    std::string trace_text;
    std::string links_csv;
    Digest trace_hash{};
    int epochs_committed = 0;
    std::uint64_t trades_settled = 0;
    std::uint64_t trades_skipped = 0; // buyer would not participate or could not pay
    std::uint64_t total_trade_milli = 0;
};

// Seeded end-to-end run: footprint and link budgets, then per epoch one
// pricing solve, per-buyer preference draws and trades, a consensus round and
// the ledger commit. Aborts with SimulationError naming epoch and step.
RunReport run_scenario(const config::ScenarioConfig& cfg);

// Price/profit optimum per (QoS threshold, leased bandwidth) cell. The swept
// bandwidth drives the leased band and both noise bandwidths together.
// Columns: gamma_tar,B,pi_star,U_s_star.
std::string pricing_sweep_csv(const config::ScenarioConfig& cfg,
                              std::span<const double> qos_grid,
                              std::span<const double> bandwidth_grid, char delim = ',');

// Profit across the price grid for each rate-value coefficient.
// Columns: pi,omega,U_s.
std::string profit_sweep_csv(const config::ScenarioConfig& cfg,
                             std::span<const double> price_grid,
                             std::span<const double> omega_grid, char delim = ',');

} // namespace spectrade::runner
