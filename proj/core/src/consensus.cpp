#include "spectrade/consensus.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "spectrade/canonical.hpp"
#include "spectrade/errors.hpp"

namespace spectrade::consensus {

namespace {

const char* kind_name(MsgKind k) {
    switch (k) {
        case MsgKind::propose: return "PROPOSE";
        case MsgKind::verify_result: return "VERIFY_RESULT";
        case MsgKind::commit: return "COMMIT";
        case MsgKind::retry: return "RETRY";
    }
    return "?";
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::none: return "-";
        case Verdict::approve: return "approve";
        case Verdict::object: return "object";
    }
    return "?";
}

} // namespace

Digest watermark_preimage_hash(std::uint64_t round, std::uint64_t beacon,
                               const Digest& block_hash, Verdict verdict) {
    CanonicalWriter w;
    w.u64(round);
    w.u64(beacon);
    w.digest(block_hash);
    w.u8(std::uint8_t(verdict));
    return w.hash();
}

ConsensusMessage verify_proposal(const NodeConfig& node, const ConsensusMessage& propose,
                                 std::span<const ledger::Block> local_chain,
                                 const ledger::Block& block, const ledger::Block& genesis,
                                 const IdentityRegistry& ids, const ledger::ChainRules& rules) {
    if (propose.kind != MsgKind::propose && propose.kind != MsgKind::retry) {
        throw ProtocolError("verify_proposal: message is not a proposal");
    }

    Verdict verdict = Verdict::object;
    bool corrupt_watermark = false;
    switch (node.behavior) {
        case Behavior::honest: {
            std::vector<ledger::Block> extended(local_chain.begin(), local_chain.end());
            extended.push_back(block);
            verdict = ledger::validate_chain(extended, genesis, ids, rules).ok
                          ? Verdict::approve
                          : Verdict::object;
            break;
        }
        case Behavior::malicious_reject:
            verdict = Verdict::object;
            break;
        case Behavior::malicious_tamper:
            verdict = Verdict::approve;
            corrupt_watermark = true;
            break;
        case Behavior::offline:
            throw ProtocolError("verify_proposal: offline node asked to verify");
    }

    ConsensusMessage reply;
    reply.kind = MsgKind::verify_result;
    reply.round = propose.round;
    reply.sender = node.node_id;
    reply.block_hash = propose.block_hash;
    reply.beacon = propose.beacon;
    reply.verdict = verdict;
    Digest preimage = watermark_preimage_hash(reply.round, reply.beacon, reply.block_hash, verdict);
    reply.watermark =
        ids.sign(node.node_id, std::span<const std::uint8_t>(preimage.data(), 32));
    if (corrupt_watermark) reply.watermark[0] ^= 0xAD;
    return reply;
}

std::string trace_to_text(std::span<const TraceRecord> trace) {
    std::ostringstream os;
    for (const TraceRecord& r : trace) {
        char line[256];
        std::snprintf(line, sizeof(line), "%llu %s %s %s %llu %s %d\n",
                      static_cast<unsigned long long>(r.tick), r.sender.c_str(),
                      r.receiver.c_str(), kind_name(r.kind),
                      static_cast<unsigned long long>(r.round), verdict_name(r.verdict),
                      r.watermark_valid ? 1 : 0);
        os << line;
    }
    return os.str();
}

Digest trace_hash(std::span<const TraceRecord> trace) {
    return Sha256::digest(trace_to_text(trace));
}

SimNetwork::SimNetwork(std::uint64_t seed, std::uint64_t base_delay_ticks,
                       std::uint64_t jitter_ticks)
    : seed_(seed), base_delay_(base_delay_ticks), jitter_(jitter_ticks) {}

std::uint64_t SimNetwork::link_delay(const std::string& from, const std::string& to) {
    if (jitter_ == 0) return base_delay_;
    CanonicalWriter w;
    w.u64(seed_);
    w.str(from);
    w.str(to);
    w.u64(next_seq_);
    Digest d = w.hash();
    std::uint64_t raw = 0;
    for (int i = 0; i < 8; ++i) raw = (raw << 8) | d[i];
    return base_delay_ + raw % (jitter_ + 1);
}

void SimNetwork::send(std::uint64_t now, const std::string& from, const std::string& to,
                      ConsensusMessage msg) {
    Envelope env;
    env.deliver_tick = now + std::max<std::uint64_t>(1, link_delay(from, to));
    // FIFO per ordered pair even under jitter
    auto& last = last_delivery_[{from, to}];
    env.deliver_tick = std::max(env.deliver_tick, last);
    last = env.deliver_tick;
    env.seq = next_seq_++;
    env.from = from;
    env.to = to;
    env.msg = std::move(msg);
    auto at = std::upper_bound(queue_.begin(), queue_.end(), env,
                               [](const Envelope& a, const Envelope& b) {
                                   return std::pair(a.deliver_tick, a.seq) <
                                          std::pair(b.deliver_tick, b.seq);
                               });
    queue_.insert(at, std::move(env));
}

std::optional<SimNetwork::Envelope> SimNetwork::pop() {
    if (queue_.empty()) return std::nullopt;
    Envelope env = std::move(queue_.front());
    queue_.pop_front();
    return env;
}

ConsensusEngine::ConsensusEngine(std::vector<NodeConfig> roster,
                                 reputation::ReputationTable& table, IdentityRegistry& ids,
                                 ledger::ChainRules rules, ledger::Block genesis,
                                 Options options)
    : roster_(std::move(roster)), table_(table), ids_(ids), rules_(rules),
      options_(options),
      net_(options.network_seed, options.base_delay_ticks, options.jitter_ticks),
      beacon_stream_(named_stream(options.network_seed, "consensus.beacon")) {
    std::sort(roster_.begin(), roster_.end(),
              [](const NodeConfig& a, const NodeConfig& b) { return a.node_id < b.node_id; });
    for (const NodeConfig& n : roster_) {
        ids_.register_identity(n.node_id);
        table_.register_node(n.node_id);
        for (const SeedInteraction& s : n.seed_log) {
            table_.record_interaction(s.operator_id, n.node_id,
                                      s.positive ? reputation::Outcome::positive
                                                 : reputation::Outcome::negative,
                                      s.quality);
        }
        chains_[n.node_id] = {genesis};
    }
    canonical_chain_ = {genesis};
    balances_ = ledger::apply_block({}, genesis);
}

const NodeConfig& ConsensusEngine::node(const std::string& node_id) const {
    for (const NodeConfig& n : roster_) {
        if (n.node_id == node_id) return n;
    }
    throw LookupError("ConsensusEngine: unknown node " + node_id);
}

const std::vector<ledger::Block>& ConsensusEngine::chain_of(const std::string& node_id) const {
    auto it = chains_.find(node_id);
    if (it == chains_.end()) throw LookupError("ConsensusEngine: unknown node " + node_id);
    return it->second;
}

std::vector<std::string> ConsensusEngine::qualified_live_nodes() const {
    // sorted by reputation descending, ties broken by lowest node id
    std::vector<std::string> out;
    for (const NodeConfig& n : roster_) {
        if (n.behavior == Behavior::offline) continue;
        if (table_.is_qualified_miner(n.node_id)) out.push_back(n.node_id);
    }
    std::stable_sort(out.begin(), out.end(), [this](const std::string& a, const std::string& b) {
        double ra = table_.node_reputation(a);
        double rb = table_.node_reputation(b);
        if (ra != rb) return ra > rb;
        return a < b;
    });
    return out;
}

RoundResult ConsensusEngine::run_round(std::vector<ledger::Transaction> pending) {
    const std::uint64_t round_no = ++round_;
    const std::uint64_t beacon = beacon_stream_.next_u64();

    std::vector<std::string> candidates = qualified_live_nodes();
    RoundResult result;
    if (candidates.empty()) {
        result.status = RoundStatus::failed_no_qualified;
        return result;
    }

    // leadership passes down the reputation order on nonce exhaustion
    std::optional<ledger::Block> mined;
    std::string leader;
    for (const std::string& candidate : candidates) {
        mined = ledger::mine_block(canonical_chain_.back(), balances_, pending, candidate,
                                   options_.difficulty, node(candidate).compute_power, ids_,
                                   table_, rules_, now_);
        if (mined) {
            leader = candidate;
            break;
        }
    }
    if (!mined) {
        result.status = RoundStatus::failed_mining;
        return result;
    }
    result.leader = leader;

    const ledger::Block& genesis = canonical_chain_.front();
    const Digest proposal_hash = ledger::block_digest(*mined);

    std::vector<std::string> voters;
    for (const std::string& id : candidates) {
        if (id != leader) voters.push_back(id);
    }
    std::sort(voters.begin(), voters.end());

    auto make_proposal = [&](MsgKind kind) {
        ConsensusMessage m;
        m.kind = kind;
        m.round = round_no;
        m.sender = leader;
        m.block_hash = proposal_hash;
        m.beacon = beacon;
        return m;
    };

    for (const std::string& v : voters) {
        net_.send(now_, leader, v, make_proposal(MsgKind::propose));
    }

    std::set<std::string> awaiting(voters.begin(), voters.end());
    std::set<std::string> objectors;
    std::uint32_t attempt = 1;
    bool committed = voters.empty(); // a lone leader commits trivially
    std::uint32_t retries_used = 0;

    auto record_vote = [&](const ConsensusMessage& vote) {
        Digest preimage =
            watermark_preimage_hash(vote.round, vote.beacon, vote.block_hash, vote.verdict);
        bool wm_ok = ids_.verify(vote.sender,
                                 std::span<const std::uint8_t>(preimage.data(), 32),
                                 vote.watermark);
        result.votes.push_back({vote.sender, vote.verdict, wm_ok, attempt});
        bool approve_ok = (vote.verdict == Verdict::approve) && wm_ok;
        table_.record_interaction(options_.operator_id, vote.sender,
                                  approve_ok ? reputation::Outcome::positive
                                             : reputation::Outcome::negative,
                                  1.0);
        if (!approve_ok) objectors.insert(vote.sender);
        return wm_ok;
    };

    auto broadcast_commit = [&]() {
        for (const std::string& v : voters) {
            auto m = make_proposal(MsgKind::commit);
            net_.send(now_, leader, v, m);
        }
        // the leader joins its own commit immediately
        chains_[leader].push_back(*mined);
        committed = true;
    };

    if (committed) broadcast_commit();

    while (auto env = net_.pop()) {
        now_ = env->deliver_tick;
        const NodeConfig& receiver = node(env->to);

        TraceRecord rec;
        rec.tick = now_;
        rec.sender = env->from;
        rec.receiver = env->to;
        rec.kind = env->msg.kind;
        rec.round = env->msg.round;
        rec.verdict = env->msg.verdict;
        rec.watermark_valid = true;

        switch (env->msg.kind) {
            case MsgKind::propose:
            case MsgKind::retry: {
                trace_.push_back(rec);
                ConsensusMessage reply =
                    verify_proposal(receiver, env->msg, chains_[receiver.node_id], *mined,
                                    genesis, ids_, rules_);
                net_.send(now_, receiver.node_id, leader, std::move(reply));
                break;
            }
            case MsgKind::verify_result: {
                rec.watermark_valid = record_vote(env->msg);
                trace_.push_back(rec);
                awaiting.erase(env->msg.sender);
                if (!awaiting.empty()) break;
                // full feedback for this attempt
                if (objectors.empty()) {
                    broadcast_commit();
                } else if (retries_used < options_.max_retries) {
                    ++retries_used;
                    ++attempt;
                    awaiting = objectors;
                    objectors.clear();
                    for (const std::string& o : awaiting) {
                        net_.send(now_, leader, o, make_proposal(MsgKind::retry));
                    }
                } else {
                    // proceed over the approving set; objectors were penalized
                    broadcast_commit();
                }
                break;
            }
            case MsgKind::commit: {
                trace_.push_back(rec);
                chains_[receiver.node_id].push_back(*mined);
                break;
            }
        }
    }

    if (!committed) {
        // cannot happen: every vote path ends in commit or retry, and retries
        // are bounded
        throw SimulationError("run_round: round " + std::to_string(round_no) +
                              " drained without commit");
    }

    canonical_chain_.push_back(*mined);
    balances_ = ledger::apply_block(balances_, *mined);
    result.status = RoundStatus::committed;
    result.block = std::move(mined);
    result.retries_used = retries_used;
    return result;
}

} // namespace spectrade::consensus
