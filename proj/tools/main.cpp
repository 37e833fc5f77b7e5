#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "spectrade/config.hpp"
#include "spectrade/errors.hpp"
#include "spectrade/ledger.hpp"
#include "spectrade/runner.hpp"

namespace fs = std::filesystem;
using namespace spectrade;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSim = 3;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed_override = 0;
    bool has_seed_override = false;
    std::string csv_delim = ",";
};

char delim_of(const CommonOpts& o) {
    if (o.csv_delim.size() != 1) {
        throw ConfigError("--csv-delim must be a single character");
    }
    return o.csv_delim[0];
}

config::ScenarioConfig load(const CommonOpts& o) {
    config::ScenarioConfig cfg = config::parse_config_file(o.config_path);
    if (o.has_seed_override) cfg.seed = o.seed_override;
    cfg.validate();
    return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SimulationError("cannot write " + path.string());
    f << content;
}

int cmd_run(const CommonOpts& o) {
    config::ScenarioConfig cfg = load(o);
    runner::RunReport report = runner::run_scenario(cfg);

    fs::path out(o.out_dir);
    write_file(out / "chain.dump", report.chain_dump);
    write_file(out / "reputation.csv", report.reputation_csv);
    write_file(out / "trace.log", report.trace_text);
    write_file(out / "links.csv", report.links_csv);

    std::cout << "epochs committed: " << report.epochs_committed << "\n"
              << "chain height:     " << report.chain.back().header.height << "\n"
              << "head hash:        " << to_hex(ledger::block_digest(report.chain.back())) << "\n"
              << "trades settled:   " << report.trades_settled << " (skipped "
              << report.trades_skipped << ")\n"
              << "trade volume:     " << report.total_trade_milli << " milli-coin\n"
              << "trace hash:       " << to_hex(report.trace_hash) << "\n"
              << "outputs:          " << (out / "chain.dump").string() << ", reputation.csv, "
              << "trace.log, links.csv\n";
    return kExitOk;
}

int cmd_sweep_fig4(const CommonOpts& o) {
    config::ScenarioConfig cfg = load(o);
    auto qos = config::make_grid(cfg.qos_grid);
    auto bw = config::make_grid(cfg.bandwidth_grid);
    std::string csv = runner::pricing_sweep_csv(cfg, qos, bw, delim_of(o));
    fs::path path = fs::path(o.out_dir) / "pricing_sweep.csv";
    write_file(path, csv);
    std::cout << "wrote " << path.string() << " (" << qos.size() * bw.size() << " rows)\n";
    return kExitOk;
}

int cmd_sweep_fig5(const CommonOpts& o) {
    config::ScenarioConfig cfg = load(o);
    auto prices = config::make_grid(cfg.sweep_price_grid);
    std::string csv = runner::profit_sweep_csv(cfg, prices, cfg.omega_list, delim_of(o));
    fs::path path = fs::path(o.out_dir) / "profit_sweep.csv";
    write_file(path, csv);
    std::cout << "wrote " << path.string() << " (" << prices.size() * cfg.omega_list.size()
              << " rows)\n";
    return kExitOk;
}

int cmd_audit(const std::string& dump_path) {
    std::ifstream f(dump_path);
    if (!f) throw ConfigError("cannot open chain dump " + dump_path);
    ledger::ChainRules rules;
    std::vector<ledger::Block> chain = ledger::parse_chain_dump(f, &rules);
    if (chain.empty()) throw ValidationError("chain dump contains no blocks");

    // identities rederive from the names on the chain
    IdentityRegistry ids;
    for (const auto& b : chain) {
        ids.register_identity(b.header.miner_id);
        for (const auto& tx : b.transactions) {
            ids.register_identity(tx.payer);
            ids.register_identity(tx.payee);
        }
    }

    ledger::ChainValidation v = ledger::validate_chain(chain, chain.front(), ids, rules);
    if (v.ok) {
        std::cout << "chain OK: " << chain.size() << " blocks, head "
                  << to_hex(ledger::block_digest(chain.back())) << "\n";
        return kExitOk;
    }
    std::cout << "chain INVALID at height " << v.first_invalid_height << ": " << v.reason
              << "\n";
    return kExitSim;
}

int cmd_validate(const std::string& config_path) {
    config::ScenarioConfig cfg = config::parse_config_file(config_path);
    cfg.validate();
    std::cout << "config OK: " << cfg.nodes.size() << " nodes, " << cfg.buyers.size()
              << " buyers, " << cfg.epochs << " epochs, seed " << cfg.seed << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectrade - deterministic simulator of ledger-secured satellite spectrum trading"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string dump_path;

    auto add_common = [&](CLI::App* sub, bool wants_config) {
        if (wants_config) {
            sub->add_option("config", opts.config_path, "scenario config (.cfg or .json)")
                ->required();
        }
        sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
        sub->add_option("--csv-delim", opts.csv_delim, "CSV delimiter")->capture_default_str();
        auto* seed = sub->add_option("--seed", opts.seed_override, "override the scenario seed");
        sub->callback([&, seed]() {
            if (seed->count() > 0) opts.has_seed_override = true;
        });
    };

    CLI::App* run = app.add_subcommand("run", "run a scenario end to end");
    add_common(run, true);
    CLI::App* fig4 = app.add_subcommand("sweep-fig4", "optimal price across (QoS, bandwidth) grid");
    add_common(fig4, true);
    CLI::App* fig5 = app.add_subcommand("sweep-fig5", "profit across the price grid per omega");
    add_common(fig5, true);
    CLI::App* audit = app.add_subcommand("audit", "re-validate a chain dump");
    audit->add_option("chain-dump", dump_path, "chain dump file")->required();
    CLI::App* validate = app.add_subcommand("validate", "parse and schema-check a config");
    validate->add_option("config", opts.config_path, "scenario config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(opts);
        if (fig4->parsed()) return cmd_sweep_fig4(opts);
        if (fig5->parsed()) return cmd_sweep_fig5(opts);
        if (audit->parsed()) return cmd_audit(dump_path);
        if (validate->parsed()) return cmd_validate(opts.config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSim;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return kExitSim;
    }
    return kExitConfig;
}
