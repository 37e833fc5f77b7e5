#include "spectrade/ledger.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "spectrade/canonical.hpp"
#include "spectrade/errors.hpp"
#include "spectrade/reputation.hpp"

namespace spectrade::ledger {

namespace {

std::string short_hex(const Digest& d) {
    return to_hex(d).substr(0, 12);
}

void validate_pending(const std::vector<Transaction>& pending, const BalanceMap& state,
                      const IdentityRegistry& ids) {
    BalanceMap scratch = state;
    for (const Transaction& tx : pending) {
        if (tx.kind == TxKind::mining_reward) {
            throw ValidationError("mine_block: pending tx " + short_hex(tx.tx_id) +
                                  " is a reward transaction; miners add their own");
        }
        Digest expect = tx_signing_digest(tx);
        if (expect != tx.tx_id) {
            throw ValidationError("mine_block: tx " + short_hex(tx.tx_id) +
                                  " has a stale tx_id");
        }
        if (!ids.verify(tx.payer, std::span<const std::uint8_t>(tx.tx_id.data(), 32),
                        tx.signature)) {
            throw ValidationError("mine_block: tx " + short_hex(tx.tx_id) +
                                  " signature does not verify for payer " + tx.payer);
        }
        auto it = scratch.find(tx.payer);
        if (it == scratch.end() || it->second < tx.amount_milli) {
            throw ValidationError("mine_block: tx " + short_hex(tx.tx_id) + " overdraws " +
                                  tx.payer);
        }
        it->second -= tx.amount_milli;
        scratch[tx.payee] += tx.amount_milli;
    }
}

} // namespace

Digest tx_signing_digest(const Transaction& tx) {
    CanonicalWriter w;
    w.str(tx.payer);
    w.str(tx.payee);
    w.u64(tx.amount_milli);
    w.u8(std::uint8_t(tx.kind));
    w.str(tx.memo);
    w.u64(tx.timestamp);
    return w.hash();
}

Digest tx_wire_hash(const Transaction& tx) {
    CanonicalWriter w;
    w.digest(tx.tx_id);
    w.digest(tx.signature);
    return w.hash();
}

Digest merkle_root(std::span<const Transaction> txs) {
    if (txs.empty()) {
        return Sha256::digest(std::string_view{});
    }
    std::vector<Digest> level;
    level.reserve(txs.size());
    for (const Transaction& tx : txs) level.push_back(tx_wire_hash(tx));
    while (level.size() > 1) {
        std::vector<Digest> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i < level.size(); i += 2) {
            const Digest& left = level[i];
            const Digest& right = (i + 1 < level.size()) ? level[i + 1] : level[i];
            CanonicalWriter w;
            w.digest(left);
            w.digest(right);
            next.push_back(w.hash());
        }
        level = std::move(next);
    }
    return level.front();
}

Digest header_hash(const BlockHeader& h) {
    CanonicalWriter w;
    w.u64(h.height);
    w.digest(h.prev_hash);
    w.digest(h.merkle_root);
    w.u64(h.timestamp);
    w.str(h.miner_id);
    w.u64(h.nonce);
    w.u32(h.difficulty);
    return w.hash();
}

Digest block_digest(const Block& b) {
    CanonicalWriter w;
    w.digest(header_hash(b.header));
    w.digest(b.miner_signature);
    return w.hash();
}

Transaction make_purchase(const std::string& payer, const std::string& payee,
                          std::uint64_t amount_milli, const std::string& memo,
                          std::uint64_t timestamp, const IdentityRegistry& ids) {
    Transaction tx;
    tx.payer = payer;
    tx.payee = payee;
    tx.amount_milli = amount_milli;
    tx.kind = TxKind::spectrum_purchase;
    tx.memo = memo;
    tx.timestamp = timestamp;
    tx.tx_id = tx_signing_digest(tx);
    tx.signature = ids.sign(payer, std::span<const std::uint8_t>(tx.tx_id.data(), 32));
    return tx;
}

namespace {

Transaction make_mint(const std::string& payee, std::uint64_t amount_milli,
                      const std::string& memo, std::uint64_t timestamp) {
    Transaction tx;
    tx.payer = kSystemAccount;
    tx.payee = payee;
    tx.amount_milli = amount_milli;
    tx.kind = TxKind::mining_reward;
    tx.memo = memo;
    tx.timestamp = timestamp;
    tx.tx_id = tx_signing_digest(tx);
    // reward transactions are exempt from signature checks
    tx.signature = Digest{};
    return tx;
}

} // namespace

Block make_genesis(const BalanceMap& initial_balances, std::uint64_t timestamp) {
    Block b;
    for (const auto& [account, amount] : initial_balances) {
        b.transactions.push_back(make_mint(account, amount, "funding", timestamp));
    }
    b.header.height = 0;
    b.header.prev_hash = Digest{};
    b.header.merkle_root = merkle_root(b.transactions);
    b.header.timestamp = timestamp;
    b.header.miner_id = "genesis";
    b.header.nonce = 0;
    b.header.difficulty = 0;
    b.miner_signature = Digest{};
    return b;
}

std::optional<Block> mine_block(const Block& parent, const BalanceMap& parent_state,
                                std::vector<Transaction> pending,
                                const std::string& miner_id, std::uint32_t difficulty,
                                std::uint64_t nonce_budget, const IdentityRegistry& ids,
                                const reputation::ReputationTable& table,
                                const ChainRules& rules, std::uint64_t timestamp,
                                std::uint64_t start_nonce) {
    if (!table.is_qualified_miner(miner_id)) {
        throw QualificationError("mine_block: " + miner_id + " is below the reputation bar (" +
                                 std::to_string(table.node_reputation(miner_id)) + " < " +
                                 std::to_string(table.threshold()) + ")");
    }
    validate_pending(pending, parent_state, ids);

    Block b;
    b.transactions.reserve(pending.size() + 1);
    b.transactions.push_back(make_mint(miner_id, rules.mining_reward_milli, "reward", timestamp));
    for (auto& tx : pending) b.transactions.push_back(std::move(tx));

    b.header.height = parent.header.height + 1;
    b.header.prev_hash = header_hash(parent.header);
    b.header.merkle_root = merkle_root(b.transactions);
    b.header.timestamp = timestamp;
    b.header.miner_id = miner_id;
    b.header.difficulty = difficulty;

    for (std::uint64_t tried = 0; tried < nonce_budget; ++tried) {
        b.header.nonce = start_nonce + tried;
        Digest h = header_hash(b.header);
        if (leading_zero_bits(h) >= int(difficulty)) {
            b.miner_signature = ids.sign(miner_id, std::span<const std::uint8_t>(h.data(), 32));
            return b;
        }
    }
    return std::nullopt;
}

namespace {

struct BalanceWalker {
    BalanceMap balances;

    // Returns the payer that would overdraw, or empty string on success.
    std::string apply(const Block& block) {
        for (const Transaction& tx : block.transactions) {
            if (tx.kind == TxKind::mining_reward) {
                balances[tx.payee] += tx.amount_milli;
                continue;
            }
            auto it = balances.find(tx.payer);
            if (it == balances.end() || it->second < tx.amount_milli) {
                return tx.payer.empty() ? "<unknown>" : tx.payer;
            }
            it->second -= tx.amount_milli;
            balances[tx.payee] += tx.amount_milli;
        }
        return {};
    }
};

} // namespace

ChainValidation validate_chain(std::span<const Block> chain, const Block& genesis,
                               const IdentityRegistry& ids, const ChainRules& rules) {
    auto fail = [](std::uint64_t height, std::string reason) {
        return ChainValidation{false, height, std::move(reason)};
    };

    if (chain.empty()) return fail(genesis.header.height, "empty chain");
    if (block_digest(chain.front()) != block_digest(genesis)) {
        return fail(genesis.header.height, "genesis does not match the expected genesis");
    }
    // content of the genesis copy itself (the merkle leaf covers tx_id and
    // signature only, so recompute the digests to bind the payload)
    if (merkle_root(chain.front().transactions) != chain.front().header.merkle_root) {
        return fail(genesis.header.height, "genesis merkle root mismatch");
    }
    for (const Transaction& tx : chain.front().transactions) {
        if (tx_signing_digest(tx) != tx.tx_id) {
            return fail(genesis.header.height, "genesis transaction digest mismatch");
        }
    }

    BalanceWalker walker;
    if (!walker.apply(chain.front()).empty()) {
        return fail(genesis.header.height, "genesis overdraws an account");
    }

    for (std::size_t pos = 1; pos < chain.size(); ++pos) {
        const Block& b = chain[pos];
        const Block& prev = chain[pos - 1];
        const std::uint64_t expected_height = genesis.header.height + pos;

        // content rules first: a tampered block is named at its own position
        if (merkle_root(b.transactions) != b.header.merkle_root) {
            return fail(expected_height, "merkle root mismatch");
        }
        Digest hh = header_hash(b.header);
        if (leading_zero_bits(hh) < int(b.header.difficulty)) {
            return fail(expected_height, "proof-of-work below stated difficulty");
        }
        if (!ids.has(b.header.miner_id) ||
            !ids.verify(b.header.miner_id, std::span<const std::uint8_t>(hh.data(), 32),
                        b.miner_signature)) {
            return fail(expected_height, "miner signature does not verify");
        }
        std::size_t reward_count = 0;
        for (std::size_t t = 0; t < b.transactions.size(); ++t) {
            const Transaction& tx = b.transactions[t];
            if (tx_signing_digest(tx) != tx.tx_id) {
                return fail(expected_height, "transaction digest mismatch");
            }
            if (tx.kind == TxKind::mining_reward) {
                ++reward_count;
                if (t != 0) return fail(expected_height, "reward transaction not first");
                if (tx.payer != kSystemAccount) {
                    return fail(expected_height, "reward transaction with non-system payer");
                }
                if (tx.payee != b.header.miner_id) {
                    return fail(expected_height, "reward does not pay the miner");
                }
                if (tx.amount_milli != rules.mining_reward_milli) {
                    return fail(expected_height, "reward amount differs from the configured reward");
                }
                if (tx.signature != Digest{}) {
                    return fail(expected_height, "reward transaction carries a signature");
                }
            } else {
                if (!ids.has(tx.payer) ||
                    !ids.verify(tx.payer, std::span<const std::uint8_t>(tx.tx_id.data(), 32),
                                tx.signature)) {
                    return fail(expected_height, "transaction signature does not verify");
                }
            }
        }
        if (reward_count != 1) {
            return fail(expected_height, "block must carry exactly one reward transaction");
        }

        // linkage rules: an intact block in the wrong place keeps its own label
        if (b.header.prev_hash != header_hash(prev.header)) {
            return fail(b.header.height, "prev hash does not match parent");
        }
        if (b.header.height != prev.header.height + 1) {
            return fail(b.header.height, "height is not parent height + 1");
        }

        std::string overdrawn = walker.apply(b);
        if (!overdrawn.empty()) {
            return fail(expected_height, "balance of " + overdrawn + " would go negative");
        }
    }
    return ChainValidation{};
}

BalanceMap apply_block(const BalanceMap& state, const Block& block) {
    BalanceWalker walker{state};
    std::string overdrawn = walker.apply(block);
    if (!overdrawn.empty()) {
        throw ValidationError("apply_block: block " + std::to_string(block.header.height) +
                              " overdraws " + overdrawn + "; block rejected");
    }
    return std::move(walker.balances);
}

namespace {

std::string hex_str(const std::string& s) {
    return to_hex(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

std::string str_from_hex_or_throw(const std::string& hex, const char* what) {
    auto bytes = bytes_from_hex(hex);
    if (!bytes) throw ValidationError(std::string("chain dump: bad hex in ") + what);
    return std::string(bytes->begin(), bytes->end());
}

Digest digest_or_throw(const std::string& hex, const char* what) {
    auto d = digest_from_hex(hex);
    if (!d) throw ValidationError(std::string("chain dump: bad digest in ") + what);
    return *d;
}

} // namespace

void dump_chain(std::ostream& os, std::span<const Block> chain, const ChainRules& rules) {
    os << "# spectrade-chain v1 reward=" << rules.mining_reward_milli << "\n";
    for (const Block& b : chain) {
        os << b.header.height << ' ' << to_hex(b.header.prev_hash) << ' '
           << to_hex(b.header.merkle_root) << ' ' << b.header.timestamp << ' '
           << hex_str(b.header.miner_id) << ' ' << b.header.nonce << ' '
           << b.header.difficulty << ' ' << to_hex(b.miner_signature) << ' '
           << b.transactions.size();
        for (const Transaction& tx : b.transactions) {
            os << ' ' << to_hex(tx.tx_id) << ' ' << hex_str(tx.payer) << ' '
               << hex_str(tx.payee) << ' ' << tx.amount_milli << ' ' << int(tx.kind) << ' '
               << hex_str(tx.memo) << ' ' << tx.timestamp << ' ' << to_hex(tx.signature);
        }
        os << '\n';
    }
}

std::vector<Block> parse_chain_dump(std::istream& is, ChainRules* rules_out) {
    std::vector<Block> chain;
    std::string line;
    bool saw_header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("reward=");
            if (pos != std::string::npos && rules_out) {
                rules_out->mining_reward_milli =
                    std::strtoull(line.c_str() + pos + 7, nullptr, 10);
            }
            saw_header = true;
            continue;
        }
        std::istringstream ls(line);
        Block b;
        std::string prev_hex, merkle_hex, miner_hex, sig_hex;
        std::size_t n_tx = 0;
        if (!(ls >> b.header.height >> prev_hex >> merkle_hex >> b.header.timestamp >>
              miner_hex >> b.header.nonce >> b.header.difficulty >> sig_hex >> n_tx)) {
            throw ValidationError("chain dump: malformed block line");
        }
        b.header.prev_hash = digest_or_throw(prev_hex, "prev_hash");
        b.header.merkle_root = digest_or_throw(merkle_hex, "merkle_root");
        b.header.miner_id = str_from_hex_or_throw(miner_hex, "miner_id");
        b.miner_signature = digest_or_throw(sig_hex, "miner_signature");
        for (std::size_t t = 0; t < n_tx; ++t) {
            Transaction tx;
            std::string id_hex, payer_hex, payee_hex, memo_hex, tsig_hex;
            int kind = 0;
            if (!(ls >> id_hex >> payer_hex >> payee_hex >> tx.amount_milli >> kind >>
                  memo_hex >> tx.timestamp >> tsig_hex)) {
                throw ValidationError("chain dump: malformed transaction record");
            }
            tx.tx_id = digest_or_throw(id_hex, "tx_id");
            tx.payer = str_from_hex_or_throw(payer_hex, "payer");
            tx.payee = str_from_hex_or_throw(payee_hex, "payee");
            tx.kind = TxKind(std::uint8_t(kind));
            tx.memo = str_from_hex_or_throw(memo_hex, "memo");
            tx.signature = digest_or_throw(tsig_hex, "signature");
            b.transactions.push_back(std::move(tx));
        }
        chain.push_back(std::move(b));
    }
    if (!saw_header && chain.empty()) {
        throw ValidationError("chain dump: empty input");
    }
    return chain;
}

} // namespace spectrade::ledger
