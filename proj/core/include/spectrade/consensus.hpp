#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spectrade/hash.hpp"
#include "spectrade/identity.hpp"
#include "spectrade/ledger.hpp"
#include "spectrade/reputation.hpp"
#include "spectrade/rng.hpp"

namespace spectrade::consensus {

enum class Behavior {
    honest,
    malicious_reject, // objects to every proposal
    malicious_tamper, // approves but with a corrupted watermark
    offline,
};

struct SeedInteraction {
    std::string operator_id;
    bool positive = true;
    double quality = 1.0;
};

struct NodeConfig {
    std::string node_id;
    std::uint64_t compute_power = 1u << 20; // nonce budget per round
    Behavior behavior = Behavior::honest;
    std::vector<SeedInteraction> seed_log;
};

enum class MsgKind : std::uint8_t { propose = 0, verify_result = 1, commit = 2, retry = 3 };
enum class Verdict : std::uint8_t { none = 0, approve = 1, object = 2 };

struct ConsensusMessage {
    MsgKind kind = MsgKind::propose;
    std::uint64_t round = 0;
    std::string sender;
    Digest block_hash{};
    std::uint64_t beacon = 0; // the round's random number, bound into watermarks
    Verdict verdict = Verdict::none;
    Digest watermark{};
};

// Watermark preimage: (round, beacon, block hash, verdict).
Digest watermark_preimage_hash(std::uint64_t round, std::uint64_t beacon,
                               const Digest& block_hash, Verdict verdict);

// A node's verification reply to a proposal. Honest nodes vote the validity
// of chain + block; the malicious behaviors vote their nature.
ConsensusMessage verify_proposal(const NodeConfig& node, const ConsensusMessage& propose,
                                 std::span<const ledger::Block> local_chain,
                                 const ledger::Block& block, const ledger::Block& genesis,
                                 const IdentityRegistry& ids, const ledger::ChainRules& rules);

struct TraceRecord {
    std::uint64_t tick = 0;
    std::string sender;
    std::string receiver;
    MsgKind kind = MsgKind::propose;
    std::uint64_t round = 0;
    Verdict verdict = Verdict::none;
    bool watermark_valid = true;
};

std::string trace_to_text(std::span<const TraceRecord> trace);
Digest trace_hash(std::span<const TraceRecord> trace);

// Deterministic delivery: per-link delay (constant by default, optional
// seeded jitter), FIFO between any fixed pair, total order by (tick, seq).
class SimNetwork {
public:
    struct Envelope {
        std::uint64_t deliver_tick = 0;
        std::uint64_t seq = 0;
        std::string from;
        std::string to;
        ConsensusMessage msg;
    };

    explicit SimNetwork(std::uint64_t seed, std::uint64_t base_delay_ticks = 1,
                        std::uint64_t jitter_ticks = 0);

    void send(std::uint64_t now, const std::string& from, const std::string& to,
              ConsensusMessage msg);
    std::optional<Envelope> pop();
    bool idle() const { return queue_.empty(); }

private:
    std::uint64_t link_delay(const std::string& from, const std::string& to);

    std::uint64_t seed_;
    std::uint64_t base_delay_;
    std::uint64_t jitter_;
    std::uint64_t next_seq_ = 0;
    std::map<std::pair<std::string, std::string>, std::uint64_t> last_delivery_;
    std::deque<Envelope> queue_; // kept sorted by (deliver_tick, seq)
};

enum class RoundStatus { committed, failed_no_qualified, failed_mining };

struct VoteRecord {
    std::string node;
    Verdict verdict = Verdict::none;
    bool watermark_valid = false;
    std::uint32_t attempt = 0;
};

struct RoundResult {
    RoundStatus status = RoundStatus::committed;
    std::optional<ledger::Block> block;
    std::string leader;
    std::vector<VoteRecord> votes;
    std::uint32_t retries_used = 0;
};

// One commit round as in the trading protocol: the highest-reputation
// qualified node leads, mines, broadcasts the proposal with the round beacon,
// collects watermarked verification votes, retries objectors a bounded number
// of times, then commits over the approving set. Every vote feeds the
// reputation table under the configured operator identity.
class ConsensusEngine {
public:
    struct Options {
        std::uint32_t difficulty = 8;
        std::uint32_t max_retries = 2;
        std::string operator_id = "sat-op";
        std::uint64_t network_seed = 1;
        std::uint64_t base_delay_ticks = 1;
        std::uint64_t jitter_ticks = 0;
    };

    ConsensusEngine(std::vector<NodeConfig> roster, reputation::ReputationTable& table,
                    IdentityRegistry& ids, ledger::ChainRules rules, ledger::Block genesis,
                    Options options);

    RoundResult run_round(std::vector<ledger::Transaction> pending);

    const std::vector<ledger::Block>& canonical_chain() const { return canonical_chain_; }
    const ledger::BalanceMap& balances() const { return balances_; }
    const std::vector<ledger::Block>& chain_of(const std::string& node_id) const;
    const std::vector<TraceRecord>& trace() const { return trace_; }
    const std::vector<NodeConfig>& roster() const { return roster_; }
    std::uint64_t now() const { return now_; }
    std::uint64_t rounds_run() const { return round_; }

private:
    const NodeConfig& node(const std::string& node_id) const;
    std::vector<std::string> qualified_live_nodes() const;

    std::vector<NodeConfig> roster_;
    reputation::ReputationTable& table_;
    IdentityRegistry& ids_;
    ledger::ChainRules rules_;
    Options options_;
    SimNetwork net_;
    RandomStream beacon_stream_;
    std::map<std::string, std::vector<ledger::Block>> chains_;
    std::vector<ledger::Block> canonical_chain_;
    ledger::BalanceMap balances_;
    std::vector<TraceRecord> trace_;
    std::uint64_t now_ = 0;
    std::uint64_t round_ = 0;
};

} // namespace spectrade::consensus
