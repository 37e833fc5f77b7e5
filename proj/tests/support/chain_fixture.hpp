#pragma once

// Shared helpers for ledger-level tests: a funded chain builder and a
// uniform single-bit mutator over every serialized field of a block.

#include <string>
#include <vector>

#include "spectrade/identity.hpp"
#include "spectrade/ledger.hpp"
#include "spectrade/reputation.hpp"
#include "spectrade/rng.hpp"

namespace spectrade::testing {

struct ChainFixture {
    IdentityRegistry ids;
    reputation::ReputationTable table{0.5, 0.0}; // threshold 0: everyone mines
    ledger::ChainRules rules{10000};
    ledger::Block genesis;
    std::vector<ledger::Block> chain;
    ledger::BalanceMap state;

    explicit ChainFixture(std::uint64_t n_blocks, std::uint32_t difficulty = 0,
                          std::uint64_t funding = 1000000) {
        ids.register_identity(ledger::kSystemAccount);
        ids.register_identity("alice");
        ids.register_identity("bob");
        ids.register_identity("sat");
        ids.register_identity("miner-1");
        table.register_node("miner-1");

        ledger::BalanceMap initial{{"alice", funding}, {"bob", funding}};
        genesis = ledger::make_genesis(initial, 0);
        chain = {genesis};
        state = ledger::apply_block({}, genesis);

        for (std::uint64_t h = 1; h <= n_blocks; ++h) {
            std::vector<ledger::Transaction> txs;
            txs.push_back(ledger::make_purchase("alice", "sat", 100 + h, "trade:a", h, ids));
            if (h % 2 == 0) {
                txs.push_back(ledger::make_purchase("bob", "sat", 50 + h, "trade:b", h, ids));
            }
            auto block = ledger::mine_block(chain.back(), state, txs, "miner-1", difficulty,
                                            1u << 22, ids, table, rules, h);
            chain.push_back(*block);
            state = ledger::apply_block(state, *block);
        }
    }
};

// Flips one uniformly chosen bit across the mutable fields of one block.
// Returns a label describing the field that was hit.
inline std::string flip_random_bit(ledger::Block& b, RandomStream& rng) {
    struct Target {
        std::string label;
        std::uint8_t* bytes;
        std::size_t size;
    };
    std::vector<Target> targets;
    auto add_u64 = [&](const char* label, std::uint64_t& v) {
        targets.push_back({label, reinterpret_cast<std::uint8_t*>(&v), sizeof(v)});
    };
    auto add_u32 = [&](const char* label, std::uint32_t& v) {
        targets.push_back({label, reinterpret_cast<std::uint8_t*>(&v), sizeof(v)});
    };
    auto add_digest = [&](const char* label, Digest& d) {
        targets.push_back({label, d.data(), d.size()});
    };
    auto add_str = [&](const char* label, std::string& s) {
        if (!s.empty()) {
            targets.push_back({label, reinterpret_cast<std::uint8_t*>(s.data()), s.size()});
        }
    };

    add_u64("header.height", b.header.height);
    add_digest("header.prev_hash", b.header.prev_hash);
    add_digest("header.merkle_root", b.header.merkle_root);
    add_u64("header.timestamp", b.header.timestamp);
    add_str("header.miner_id", b.header.miner_id);
    add_u64("header.nonce", b.header.nonce);
    add_u32("header.difficulty", b.header.difficulty);
    add_digest("miner_signature", b.miner_signature);
    for (auto& tx : b.transactions) {
        add_digest("tx.tx_id", tx.tx_id);
        add_str("tx.payer", tx.payer);
        add_str("tx.payee", tx.payee);
        add_u64("tx.amount", tx.amount_milli);
        targets.push_back({"tx.kind", reinterpret_cast<std::uint8_t*>(&tx.kind), 1});
        add_str("tx.memo", tx.memo);
        add_digest("tx.signature", tx.signature);
        add_u64("tx.timestamp", tx.timestamp);
    }

    Target& t = targets[std::size_t(rng.next_below(targets.size()))];
    std::size_t byte = std::size_t(rng.next_below(t.size));
    int bit = int(rng.next_below(8));
    t.bytes[byte] ^= std::uint8_t(1u << bit);
    return t.label;
}

} // namespace spectrade::testing
