#include <doctest.h>

#include <sstream>

#include "spectrade/errors.hpp"
#include "spectrade/market.hpp"
#include "spectrade/numerics.hpp"
#include "spectrade/rng.hpp"
#include "spectrade/runner.hpp"

using namespace spectrade;
using namespace spectrade::runner;

namespace {

config::ScenarioConfig small_scenario() {
    config::ScenarioConfig c = config::default_config();
    c.epochs = 3;
    c.difficulty = 4;
    c.footprint.n_cells = 7;
    c.users_per_cell = 1;
    return c;
}

} // namespace

TEST_CASE("zero epochs leaves a genesis-only chain") {
    config::ScenarioConfig c = small_scenario();
    c.epochs = 0;
    RunReport r = run_scenario(c);
    REQUIRE(r.chain.size() == 1);
    CHECK(r.chain[0].header.height == 0);
    CHECK(r.epochs_committed == 0);
    CHECK(r.balances.at("user-1") == 100000);
}

TEST_CASE("single epoch with one honest node debits the buyer by the recomputed charge") {
    config::ScenarioConfig c = small_scenario();
    c.epochs = 1;
    c.buyers = {"user-1"};
    c.initial_balances = {{"user-1", 100000}};
    c.nodes.clear();
    consensus::NodeConfig n;
    n.node_id = "edge-1";
    n.compute_power = 1u << 20;
    n.behavior = consensus::Behavior::honest;
    n.seed_log = {{"sat-op", true, 1.0}};
    c.nodes.push_back(n);

    RunReport r = run_scenario(c);
    REQUIRE(r.chain.size() == 2);

    // hand-step the epoch: one pricing solve, one theta draw for the buyer
    market::PricingSolution sol = market::optimal_price(c.market, c.price_range, c.price_grid);
    RandomStream market_rng = named_stream(c.seed, "market");
    double theta = c.market.theta.sample(market_rng);
    market::BestResponse br = market::best_response_power(c.market, sol.price, theta);
    REQUIRE(br.feasible);
    std::uint64_t amount =
        charge_to_millicoin(market::trade_charge(c.market, sol.price, theta, br.power_w));

    CHECK(r.trades_settled == 1);
    CHECK(r.balances.at("user-1") == 100000 - amount);
    CHECK(r.balances.at(c.satellite_account) == amount);
    CHECK(r.balances.at("edge-1") == c.mining_reward_milli);
}

TEST_CASE("identical configs produce identical trace hashes") {
    config::ScenarioConfig c = small_scenario();
    RunReport a = run_scenario(c);
    RunReport b = run_scenario(c);
    CHECK(a.trace_hash == b.trace_hash);
    CHECK(a.chain_dump == b.chain_dump);

    config::ScenarioConfig other = c;
    other.seed = c.seed + 1;
    RunReport d = run_scenario(other);
    CHECK(d.trace_hash != a.trace_hash);
}

TEST_CASE("end-to-end money conservation") {
    config::ScenarioConfig c = small_scenario();
    c.epochs = 5;
    RunReport r = run_scenario(c);
    REQUIRE(r.epochs_committed == 5);

    std::uint64_t initial_total = 0;
    for (const auto& [account, amount] : c.initial_balances) {
        (void)account;
        initial_total += amount;
    }
    std::uint64_t final_total = 0;
    for (const auto& [account, amount] : r.balances) {
        (void)account;
        final_total += amount;
    }
    CHECK(final_total == initial_total + 5 * c.mining_reward_milli);

    // buyer debits equal satellite credits; mining rewards stay with miners
    std::uint64_t debits = 0;
    for (const auto& [account, amount] : c.initial_balances) {
        debits += amount - r.balances.at(account);
    }
    CHECK(debits == r.balances.at(c.satellite_account));
    CHECK(debits == r.total_trade_milli);
}

TEST_CASE("reports carry the documented artifacts") {
    config::ScenarioConfig c = small_scenario();
    c.epochs = 2;
    RunReport r = run_scenario(c);
    CHECK(r.chain_dump.rfind("# spectrade-chain v1", 0) == 0);
    CHECK(r.reputation_csv.rfind("operator_id,node_id,", 0) == 0);
    CHECK(r.links_csv.rfind("user_id,cell_id,", 0) == 0);
    CHECK(r.trace_text.find("PROPOSE") != std::string::npos);
    // links cover every placed user
    int lines = 0;
    for (char ch : r.links_csv) {
        if (ch == '\n') ++lines;
    }
    CHECK(lines == c.footprint.n_cells * c.users_per_cell + 1);
}

TEST_CASE("an underfunded buyer is skipped, the epoch still commits") {
    config::ScenarioConfig c = small_scenario();
    c.epochs = 1;
    c.buyers = {"poor"};
    c.initial_balances = {{"poor", 1}};
    RunReport r = run_scenario(c);
    CHECK(r.epochs_committed == 1);
    CHECK(r.trades_settled == 0);
    CHECK(r.trades_skipped == 1);
    CHECK(r.balances.at("poor") == 1);
    REQUIRE(r.chain.size() == 2);
    CHECK(r.chain[1].transactions.size() == 1); // reward only
}

TEST_CASE("a scenario without qualified nodes aborts with epoch and step") {
    config::ScenarioConfig c = small_scenario();
    for (auto& n : c.nodes) n.seed_log.clear(); // nobody reaches the bar
    CHECK_THROWS_WITH_AS(run_scenario(c), doctest::Contains("epoch 1"), SimulationError);
}

TEST_CASE("pricing sweep emits the fixed column order and monotone trends") {
    config::ScenarioConfig c = small_scenario();
    auto qos = config::make_grid({0.2, 0.3, 3});
    auto bw = config::make_grid({100.0, 300.0, 3});
    std::string csv = pricing_sweep_csv(c, qos, bw);
    CHECK(csv.rfind("gamma_tar,B,pi_star,U_s_star\n", 0) == 0);
    int rows = -1;
    for (char ch : csv) {
        if (ch == '\n') ++rows;
    }
    CHECK(rows == 9);
}

TEST_CASE("profit sweep emits pi,omega,U_s rows") {
    config::ScenarioConfig c = small_scenario();
    auto prices = config::make_grid({0.1, 0.5, 5});
    std::vector<double> omegas{1.0, 1.2};
    std::string csv = profit_sweep_csv(c, prices, omegas);
    CHECK(csv.rfind("pi,omega,U_s\n", 0) == 0);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line); // header
    std::getline(is, line);
    CHECK(line.rfind("0.1,1,", 0) == 0);
}

TEST_CASE("custom csv delimiter") {
    config::ScenarioConfig c = small_scenario();
    auto prices = config::make_grid({0.1, 0.2, 2});
    std::vector<double> omegas{1.0};
    std::string csv = profit_sweep_csv(c, prices, omegas, ';');
    CHECK(csv.rfind("pi;omega;U_s\n", 0) == 0);
}

TEST_CASE("a single-point pricing sweep is one row matching optimal_price") {
    config::ScenarioConfig c = small_scenario();
    std::vector<double> qos{0.25};
    std::vector<double> bw{200.0};
    std::string csv = pricing_sweep_csv(c, qos, bw);

    market::MarketParams p = c.market;
    p.qos_threshold = 0.25;
    p.bandwidth = p.noise_bw_entrant = p.noise_bw_incumbent = 200.0;
    market::PricingSolution sol = market::optimal_price(p, c.price_range, c.price_grid);

    std::istringstream is(csv);
    std::string header, row, extra;
    std::getline(is, header);
    REQUIRE(std::getline(is, row));
    CHECK_FALSE(std::getline(is, extra));
    double g, b, pi, us;
    char comma;
    std::istringstream rs(row);
    rs >> g >> comma >> b >> comma >> pi >> comma >> us;
    CHECK(pi == doctest::Approx(sol.price).epsilon(1e-10));
    CHECK(us == doctest::Approx(sol.profit).epsilon(1e-10));
}

TEST_CASE("a single-point profit sweep equals satellite_utility") {
    config::ScenarioConfig c = small_scenario();
    std::vector<double> prices{0.3};
    std::vector<double> omegas{1.0};
    std::string csv = profit_sweep_csv(c, prices, omegas);
    std::istringstream is(csv);
    std::string header, row;
    std::getline(is, header);
    REQUIRE(std::getline(is, row));
    double pi, omega, us;
    char comma;
    std::istringstream rs(row);
    rs >> pi >> comma >> omega >> comma >> us;
    CHECK(us == doctest::Approx(market::satellite_utility(c.market, 0.3)).epsilon(1e-10));
}
