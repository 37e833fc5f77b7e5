#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spectrade/hash.hpp"
#include "spectrade/identity.hpp"

namespace spectrade::reputation {
class ReputationTable;
}

namespace spectrade::ledger {

// Well-known payer for minting transactions (genesis funding, mining rewards).
inline const std::string kSystemAccount = "@system";

enum class TxKind : std::uint8_t {
    spectrum_purchase = 0,
    mining_reward = 1,
};

// Amounts are integer milli-coins; no floating-point money on the chain.
struct Transaction {
    Digest tx_id{};
    std::string payer;
    std::string payee;
    std::uint64_t amount_milli = 0;
    TxKind kind = TxKind::spectrum_purchase;
    std::string memo;
    Digest signature{};
    std::uint64_t timestamp = 0;
};

struct BlockHeader {
    std::uint64_t height = 0;
    Digest prev_hash{};
    Digest merkle_root{};
    std::uint64_t timestamp = 0;
    std::string miner_id;
    std::uint64_t nonce = 0;
    std::uint32_t difficulty = 0; // required leading zero bits of the header hash
};

struct Block {
    BlockHeader header;
    std::vector<Transaction> transactions;
    Digest miner_signature{};
};

struct ChainRules {
    std::uint64_t mining_reward_milli = 10000;
};

using BalanceMap = std::map<std::string, std::uint64_t>;

// Digest over the signed fields (everything except tx_id and signature).
Digest tx_signing_digest(const Transaction& tx);
// Merkle leaf: covers tx_id and signature, so any bit of the transaction is
// tamper-evident through the root.
Digest tx_wire_hash(const Transaction& tx);
Digest merkle_root(std::span<const Transaction> txs);
Digest header_hash(const BlockHeader& header);
Digest block_digest(const Block& block);

// Signed spectrum purchase; payer must be registered.
Transaction make_purchase(const std::string& payer, const std::string& payee,
                          std::uint64_t amount_milli, const std::string& memo,
                          std::uint64_t timestamp, const IdentityRegistry& ids);

// Height-0 block carrying the initial balances as system funding transactions.
Block make_genesis(const BalanceMap& initial_balances, std::uint64_t timestamp);

// Proof-of-work search from start_nonce, at most nonce_budget attempts (the
// miner's compute power). Returns nullopt when the budget is exhausted.
// Prepends the miner's reward transaction; the pending set must contain only
// signature-valid, balance-feasible purchases. The miner must pass the
// reputation gate.
std::optional<Block> mine_block(const Block& parent, const BalanceMap& parent_state,
                                std::vector<Transaction> pending,
                                const std::string& miner_id, std::uint32_t difficulty,
                                std::uint64_t nonce_budget, const IdentityRegistry& ids,
                                const reputation::ReputationTable& table,
                                const ChainRules& rules, std::uint64_t timestamp,
                                std::uint64_t start_nonce = 0);

struct ChainValidation {
    bool ok = true;
    std::uint64_t first_invalid_height = 0;
    std::string reason;
};

// Full re-validation of a chain (including its genesis, compared against the
// expected one). Per block the content rules (merkle root, proof-of-work,
// transaction digests and signatures, reward shape, miner signature) are
// checked before the linkage rules, so a tampered block is reported at its
// own position while a block merely out of place is reported under its stated
// height. Running balances may never go negative.
ChainValidation validate_chain(std::span<const Block> chain, const Block& genesis,
                               const IdentityRegistry& ids, const ChainRules& rules);

// Apply all transactions of a block in order, atomically: either the whole
// block settles or ValidationError is thrown and the input state is returned
// untouched. Reward transactions mint; purchases move balance.
BalanceMap apply_block(const BalanceMap& state, const Block& block);

// Line-delimited chain dump, one block per line; see README for the column
// order. Variable-length fields are hex-encoded so the format splits on
// spaces.
void dump_chain(std::ostream& os, std::span<const Block> chain, const ChainRules& rules);
std::vector<Block> parse_chain_dump(std::istream& is, ChainRules* rules_out = nullptr);

} // namespace spectrade::ledger
