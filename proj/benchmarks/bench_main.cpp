#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "spectrade/config.hpp"
#include "spectrade/consensus.hpp"
#include "spectrade/hash.hpp"
#include "spectrade/ledger.hpp"
#include "spectrade/market.hpp"
#include "support/chain_fixture.hpp"

using namespace spectrade;

namespace {

void BM_Sha256(benchmark::State& state) {
    std::string payload(std::size_t(state.range(0)), 'x');
    for (auto _ : state) {
        benchmark::DoNotOptimize(Sha256::digest(payload));
    }
    state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sha256)->Arg(64)->Arg(4096)->Arg(1 << 16);

void BM_MineBlock(benchmark::State& state) {
    testing::ChainFixture fx(0);
    std::uint32_t difficulty = std::uint32_t(state.range(0));
    for (auto _ : state) {
        auto block = ledger::mine_block(fx.genesis, fx.state, {}, "miner-1", difficulty,
                                        1u << 24, fx.ids, fx.table, fx.rules, 1);
        benchmark::DoNotOptimize(block);
    }
}
BENCHMARK(BM_MineBlock)->Arg(4)->Arg(8)->Arg(12);

void BM_ValidateChain(benchmark::State& state) {
    testing::ChainFixture fx(std::uint64_t(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            ledger::validate_chain(fx.chain, fx.genesis, fx.ids, fx.rules));
    }
}
BENCHMARK(BM_ValidateChain)->Arg(8)->Arg(32);

void BM_BestResponse(benchmark::State& state) {
    config::ScenarioConfig cfg = config::default_config();
    double theta = 0.8;
    for (auto _ : state) {
        benchmark::DoNotOptimize(market::best_response_power(cfg.market, 0.3, theta));
        theta = theta < 1.5 ? theta + 1e-6 : 0.5;
    }
}
BENCHMARK(BM_BestResponse);

void BM_SatelliteUtility(benchmark::State& state) {
    config::ScenarioConfig cfg = config::default_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(market::satellite_utility(cfg.market, 0.33));
    }
}
BENCHMARK(BM_SatelliteUtility);

void BM_OptimalPrice(benchmark::State& state) {
    config::ScenarioConfig cfg = config::default_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            market::optimal_price(cfg.market, cfg.price_range, cfg.price_grid));
    }
}
BENCHMARK(BM_OptimalPrice);

void BM_ConsensusRound(benchmark::State& state) {
    for (auto _ : state) {
        state.PauseTiming();
        config::ScenarioConfig cfg = config::default_config();
        IdentityRegistry ids;
        ids.register_identity(ledger::kSystemAccount);
        reputation::ReputationTable table(cfg.indefinite_weight, cfg.reputation_threshold);
        ledger::Block genesis = ledger::make_genesis({}, 0);
        consensus::ConsensusEngine::Options opts;
        opts.difficulty = 8;
        opts.operator_id = cfg.operator_id;
        consensus::ConsensusEngine engine(cfg.nodes, table, ids,
                                          ledger::ChainRules{cfg.mining_reward_milli}, genesis,
                                          opts);
        state.ResumeTiming();
        benchmark::DoNotOptimize(engine.run_round({}));
    }
}
BENCHMARK(BM_ConsensusRound)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
