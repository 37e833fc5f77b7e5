#include "spectrade/runner.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "spectrade/errors.hpp"
#include "spectrade/market.hpp"
#include "spectrade/numerics.hpp"
#include "spectrade/rng.hpp"

namespace spectrade::runner {

namespace {

struct PlacedUser {
    geometry::UserPosition position;
    geometry::ArcPosition arc; // absolute tangent-plane position
};

std::vector<geometry::CellGeometry> footprint_of(const config::ScenarioConfig& cfg) {
    if (!cfg.explicit_cells.empty()) return cfg.explicit_cells;
    return geometry::build_footprint(cfg.footprint, cfg.seed);
}

std::vector<PlacedUser> place_users(const config::ScenarioConfig& cfg,
                                    std::span<const geometry::CellGeometry> cells) {
    RandomStream rng = named_stream(cfg.seed, "geometry");
    std::vector<PlacedUser> users;
    int next_id = 0;
    const double cell_radius = cfg.footprint.cell_pitch_km / 2.0;
    for (const auto& cell : cells) {
        for (int u = 0; u < cfg.users_per_cell; ++u) {
            double radius = cell_radius * std::sqrt(rng.next_unit());
            double angle = 2.0 * std::numbers::pi * rng.next_unit();
            PlacedUser pu;
            pu.arc.x_km = cell.center.x_km + radius * std::cos(angle);
            pu.arc.y_km = cell.center.y_km + radius * std::sin(angle);
            pu.position.user_id = next_id++;
            pu.position.cell_id = cell.cell_id;
            pu.position.to_center_km = radius;
            pu.position.to_sat_km =
                geometry::slant_range_km(std::hypot(pu.arc.x_km, pu.arc.y_km),
                                         cfg.footprint.sat_altitude_km,
                                         cfg.footprint.earth_radius_km);
            users.push_back(pu);
        }
    }
    return users;
}

channel::LinkParams link_for(const config::ScenarioConfig& cfg,
                             const geometry::CellGeometry& cell,
                             const geometry::UserPosition& user, double deviation_rad) {
    channel::LinkParams link;
    link.tx_power_w = cfg.channel.user_tx_power_w;
    link.user_gain = cfg.channel.user_gain;
    link.sat_gain = cfg.channel.sat_pattern.gain(deviation_rad);
    link.distance_km = user.to_sat_km;
    link.wavelength_m = cfg.channel.wavelength_m;
    link.fading = cfg.channel.fading;
    link.activity = cfg.channel.activity;
    link.polarization_isolation = cfg.channel.polarization_isolation;
    link.reuse_color = cell.reuse_color;
    return link;
}

// Per-user link budgets across the footprint; exercises the geometry and
// channel stack and lands in the report for audit.
std::string build_links_csv(const config::ScenarioConfig& cfg,
                            std::span<const geometry::CellGeometry> cells,
                            std::span<const PlacedUser> users) {
    geometry::EarthModel earth{cfg.footprint.earth_radius_km};
    channel::NoiseModel noise{cfg.channel.noise_density, cfg.channel.noise_bandwidth_hz};

    auto cell_by_id = [&](int id) -> const geometry::CellGeometry& {
        for (const auto& c : cells) {
            if (c.cell_id == id) return c;
        }
        throw LookupError("links: unknown cell " + std::to_string(id));
    };

    std::ostringstream os;
    os << "user_id,cell_id,reuse_color,deviation_rad,receive_power_w,interference_w,sinr,capacity_bps_hz\n";
    for (const PlacedUser& pu : users) {
        const geometry::CellGeometry& cell = cell_by_id(pu.position.cell_id);
        double theta = geometry::deviation_angle(cell, pu.position, earth);
        channel::LinkParams signal = link_for(cfg, cell, pu.position, theta);
        signal.activity = 1.0;
        signal.polarization_isolation = 1.0;

        std::vector<channel::LinkParams> interferers;
        for (const PlacedUser& other : users) {
            if (other.position.user_id == pu.position.user_id) continue;
            const geometry::CellGeometry& other_cell = cell_by_id(other.position.cell_id);
            if (!geometry::cells_co_channel(cell, other_cell)) continue;
            double other_theta = geometry::deviation_angle(other_cell, other.position, earth);
            interferers.push_back(link_for(cfg, other_cell, other.position, other_theta));
        }

        channel::LinkBudget budget = channel::sinr_capacity(signal, interferers, noise);
        char row[256];
        std::snprintf(row, sizeof(row), "%d,%d,%d,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                      pu.position.user_id, pu.position.cell_id, cell.reuse_color, theta,
                      budget.receive_power_w, budget.interference_w, budget.sinr,
                      budget.capacity_bps_hz);
        os << row;
    }
    return os.str();
}

} // namespace

RunReport run_scenario(const config::ScenarioConfig& cfg) {
    cfg.validate();

    auto cells = footprint_of(cfg);
    auto users = place_users(cfg, cells);

    IdentityRegistry ids;
    ids.register_identity(ledger::kSystemAccount);
    ids.register_identity(cfg.satellite_account);
    for (const auto& b : cfg.buyers) ids.register_identity(b);

    reputation::ReputationTable table(cfg.indefinite_weight, cfg.reputation_threshold);

    ledger::ChainRules rules{cfg.mining_reward_milli};
    ledger::BalanceMap initial;
    for (const auto& [account, amount] : cfg.initial_balances) initial[account] = amount;
    ledger::Block genesis = ledger::make_genesis(initial, 0);

    consensus::ConsensusEngine::Options opts;
    opts.difficulty = cfg.difficulty;
    opts.max_retries = cfg.max_retries;
    opts.operator_id = cfg.operator_id;
    opts.network_seed = cfg.seed;
    consensus::ConsensusEngine engine(cfg.nodes, table, ids, rules, genesis, opts);

    RunReport report;
    report.links_csv = build_links_csv(cfg, cells, users);

    RandomStream market_rng = named_stream(cfg.seed, "market");

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        market::PricingSolution solution;
        try {
            solution = market::optimal_price(cfg.market, cfg.price_range, cfg.price_grid);
        } catch (const Error& e) {
            throw SimulationError("epoch " + std::to_string(epoch) +
                                  ", pricing step: " + e.what());
        }

        std::vector<ledger::Transaction> pending;
        ledger::BalanceMap projected = engine.balances();
        for (const std::string& buyer : cfg.buyers) {
            double theta = cfg.market.theta.sample(market_rng);
            auto trade = market::build_trade(cfg.market, solution, theta, buyer,
                                             cfg.satellite_account, ids,
                                             std::uint64_t(epoch));
            if (!trade) {
                ++report.trades_skipped;
                continue;
            }
            auto it = projected.find(buyer);
            if (it == projected.end() || it->second < trade->amount_milli) {
                ++report.trades_skipped;
                continue;
            }
            it->second -= trade->amount_milli;
            projected[cfg.satellite_account] += trade->amount_milli;
            report.total_trade_milli += trade->amount_milli;
            ++report.trades_settled;
            pending.push_back(std::move(*trade));
        }

        consensus::RoundResult round;
        try {
            round = engine.run_round(std::move(pending));
        } catch (const Error& e) {
            throw SimulationError("epoch " + std::to_string(epoch) +
                                  ", consensus step: " + e.what());
        }
        if (round.status != consensus::RoundStatus::committed) {
            throw SimulationError(
                "epoch " + std::to_string(epoch) + ", consensus step: " +
                (round.status == consensus::RoundStatus::failed_no_qualified
                     ? "no qualified node"
                     : "every qualified node exhausted its nonce budget"));
        }
        ++report.epochs_committed;
    }

    report.chain = engine.canonical_chain();
    report.balances = engine.balances();

    std::ostringstream chain_os;
    ledger::dump_chain(chain_os, report.chain, rules);
    report.chain_dump = chain_os.str();

    std::ostringstream rep_os;
    table.dump_csv(rep_os);
    report.reputation_csv = rep_os.str();

    report.trace_text = consensus::trace_to_text(engine.trace());

    Sha256 h;
    h.update(report.chain_dump);
    h.update(report.reputation_csv);
    h.update(report.trace_text);
    h.update(report.links_csv);
    report.trace_hash = h.finish();
    return report;
}

std::string pricing_sweep_csv(const config::ScenarioConfig& cfg,
                              std::span<const double> qos_grid,
                              std::span<const double> bandwidth_grid, char delim) {
    if (qos_grid.empty() || bandwidth_grid.empty()) {
        throw ConfigError("pricing sweep: empty grid");
    }
    std::ostringstream os;
    os << "gamma_tar" << delim << "B" << delim << "pi_star" << delim << "U_s_star\n";
    for (double qos : qos_grid) {
        for (double bw : bandwidth_grid) {
            market::MarketParams p = cfg.market;
            p.qos_threshold = qos;
            p.bandwidth = bw;
            p.noise_bw_entrant = bw;
            p.noise_bw_incumbent = bw;
            market::PricingSolution sol = market::optimal_price(p, cfg.price_range, cfg.price_grid);
            char row[192];
            std::snprintf(row, sizeof(row), "%.12g%c%.12g%c%.12g%c%.12g\n", qos, delim, bw,
                          delim, sol.price, delim, sol.profit);
            os << row;
        }
    }
    return os.str();
}

std::string profit_sweep_csv(const config::ScenarioConfig& cfg,
                             std::span<const double> price_grid,
                             std::span<const double> omega_grid, char delim) {
    if (price_grid.empty() || omega_grid.empty()) {
        throw ConfigError("profit sweep: empty grid");
    }
    std::ostringstream os;
    os << "pi" << delim << "omega" << delim << "U_s\n";
    for (double omega : omega_grid) {
        for (double price : price_grid) {
            market::MarketParams p = cfg.market;
            p.rate_value_coeff = omega;
            double us = market::satellite_utility(p, price);
            char row[160];
            std::snprintf(row, sizeof(row), "%.12g%c%.12g%c%.12g\n", price, delim, omega,
                          delim, us);
            os << row;
        }
    }
    return os.str();
}

} // namespace spectrade::runner
