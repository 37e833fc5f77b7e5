#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>

namespace spectrade::reputation {

struct InteractionLog {
    std::uint64_t positive = 0;
    std::uint64_t negative = 0;
    double quality = 0.0; // latest observed communication quality in [0,1]
};

// Trusted / untrusted / indefinite masses; they always sum to one.
struct TrustTriple {
    double trusted = 0.0;
    double untrusted = 0.0;
    double indefinite = 1.0;
};

// indefinite = 1 - quality, the rest splits (1 - indefinite) by the positive
// fraction. A pair with no interactions is all-indefinite by convention.
TrustTriple trust_triple(const InteractionLog& log);

enum class Outcome { positive, negative };

// Per-node reputation bookkeeping: one (operator -> node) entry per pair,
// each holding the raw counters and the derived triple. Single-writer.
class ReputationTable {
public:
    struct Entry {
        InteractionLog log;
        TrustTriple triple;
    };

    ReputationTable(double indefinite_weight, double threshold);

    void register_node(const std::string& node_id);
    bool is_registered(const std::string& node_id) const;

    void record_interaction(const std::string& operator_id, const std::string& node_id,
                            Outcome outcome, double quality);

    // Sum over operators of trusted + indefinite_weight * indefinite.
    // Registered node with no entries scores 0; unknown node raises LookupError.
    double node_reputation(const std::string& node_id) const;

    // Inclusive at the threshold.
    bool is_qualified_miner(const std::string& node_id) const;

    const Entry* find(const std::string& operator_id, const std::string& node_id) const;

    double indefinite_weight() const { return indefinite_weight_; }
    double threshold() const { return threshold_; }

    // Audit rows: operator_id,node_id,N_p,N_n,suc,Tru,Unt,Ind
    void dump_csv(std::ostream& os) const;

private:
    std::map<std::pair<std::string, std::string>, Entry> entries_;
    std::set<std::string> nodes_;
    double indefinite_weight_;
    double threshold_;
};

} // namespace spectrade::reputation
