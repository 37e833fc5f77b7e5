#include "spectrade/reputation.hpp"

#include <cstdio>
#include <ostream>

#include "spectrade/errors.hpp"

namespace spectrade::reputation {

TrustTriple trust_triple(const InteractionLog& log) {
    if (log.quality < 0.0 || log.quality > 1.0) {
        throw DomainError("trust_triple: quality outside [0,1]");
    }
    std::uint64_t total = log.positive + log.negative;
    if (total == 0) {
        return TrustTriple{0.0, 0.0, 1.0};
    }
    TrustTriple t;
    t.indefinite = 1.0 - log.quality;
    t.trusted = log.quality * double(log.positive) / double(total);
    t.untrusted = log.quality * double(log.negative) / double(total);
    return t;
}

ReputationTable::ReputationTable(double indefinite_weight, double threshold)
    : indefinite_weight_(indefinite_weight), threshold_(threshold) {
    if (indefinite_weight < 0.0 || indefinite_weight > 1.0) {
        throw ConfigError("ReputationTable: indefinite weight outside [0,1]");
    }
    if (threshold < 0.0) throw ConfigError("ReputationTable: negative threshold");
}

void ReputationTable::register_node(const std::string& node_id) {
    nodes_.insert(node_id);
}

bool ReputationTable::is_registered(const std::string& node_id) const {
    return nodes_.count(node_id) > 0;
}

void ReputationTable::record_interaction(const std::string& operator_id,
                                         const std::string& node_id, Outcome outcome,
                                         double quality) {
    if (quality < 0.0 || quality > 1.0) {
        throw DomainError("record_interaction: quality outside [0,1]");
    }
    nodes_.insert(node_id);
    Entry& e = entries_[{operator_id, node_id}];
    if (outcome == Outcome::positive) {
        ++e.log.positive;
    } else {
        ++e.log.negative;
    }
    e.log.quality = quality;
    e.triple = trust_triple(e.log);
}

double ReputationTable::node_reputation(const std::string& node_id) const {
    if (!is_registered(node_id)) {
        throw LookupError("node_reputation: unknown node " + node_id);
    }
    double score = 0.0;
    for (const auto& [key, entry] : entries_) {
        if (key.second != node_id) continue;
        score += entry.triple.trusted + indefinite_weight_ * entry.triple.indefinite;
    }
    return score;
}

bool ReputationTable::is_qualified_miner(const std::string& node_id) const {
    return node_reputation(node_id) >= threshold_;
}

const ReputationTable::Entry* ReputationTable::find(const std::string& operator_id,
                                                    const std::string& node_id) const {
    auto it = entries_.find({operator_id, node_id});
    return it == entries_.end() ? nullptr : &it->second;
}

void ReputationTable::dump_csv(std::ostream& os) const {
    os << "operator_id,node_id,N_p,N_n,suc,Tru,Unt,Ind\n";
    for (const auto& [key, e] : entries_) {
        char row[256];
        std::snprintf(row, sizeof(row), "%s,%s,%llu,%llu,%.12g,%.12g,%.12g,%.12g\n",
                      key.first.c_str(), key.second.c_str(),
                      static_cast<unsigned long long>(e.log.positive),
                      static_cast<unsigned long long>(e.log.negative), e.log.quality,
                      e.triple.trusted, e.triple.untrusted, e.triple.indefinite);
        os << row;
    }
}

} // namespace spectrade::reputation
