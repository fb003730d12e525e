#include "metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace prosa {

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Prosa: return "prosa";
        case Strategy::Flooding: return "flooding";
        case Strategy::RandomWalk: return "random_walk";
    }
    return "?";
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "prosa") return Strategy::Prosa;
    if (name == "flooding") return Strategy::Flooding;
    if (name == "random_walk") return Strategy::RandomWalk;
    throw std::invalid_argument("unknown strategy: " + name);
}

void EnergyParams::validate() const {
    if (b < 0.0 || c < 0.0) throw std::invalid_argument("energy params must be nonnegative");
    if (b == 0.0 && c == 0.0) throw std::invalid_argument("energy params must not both be zero");
}

std::set<std::pair<PeerId, DocId>> oracle_matching(const Network& network, const TermVector& q,
                                                   const RoutingParams& params,
                                                   const Corpus& corpus) {
    // Matching is a per-document property; score each document once, then
    // expand to the peers hosting it.
    std::vector<char> matches(corpus.num_docs(), -1);
    auto doc_matches = [&](DocId d) {
        if (matches[d] < 0) {
            matches[d] =
                cosine_similarity(corpus.documents[d].vector, q) >= params.doc_threshold;
        }
        return matches[d] == 1;
    };
    std::set<std::pair<PeerId, DocId>> out;
    for (const auto& [id, peer] : network.peers()) {
        for (DocId d : peer.resources) {
            if (doc_matches(d)) out.emplace(id, d);
        }
    }
    return out;
}

QueryRecord make_record(const QueryOutcome& outcome, Strategy strategy, PeerId issuer,
                        std::uint32_t n_r,
                        const std::set<std::pair<PeerId, DocId>>& oracle,
                        bool distinct_docs) {
    QueryRecord r;
    r.qid = outcome.qid;
    r.strategy = strategy;
    r.issuer = issuer;
    r.n_r = n_r;
    if (distinct_docs) {
        std::unordered_set<DocId> matched, retrieved;
        for (const auto& [p, d] : oracle) matched.insert(d);
        for (const auto& [p, d] : outcome.retrieved) retrieved.insert(d);
        r.matched_total = static_cast<std::uint32_t>(matched.size());
        r.retrieved_distinct = static_cast<std::uint32_t>(retrieved.size());
    } else {
        r.matched_total = static_cast<std::uint32_t>(oracle.size());
        r.retrieved_distinct = static_cast<std::uint32_t>(outcome.retrieved.size());
    }
    r.answered = outcome.answered;
    r.feasible = r.matched_total > 0;
    r.rare = r.feasible && r.matched_total < n_r;
    r.deepness = outcome.deepness;
    r.n_q = static_cast<std::uint32_t>(outcome.visited_nodes.size());
    r.l_q = outcome.used_links.size();
    r.link_kind_used = outcome.link_kind_used;
    return r;
}

double recall(const QueryRecord& record) {
    if (!record.feasible) {
        throw std::invalid_argument("recall is undefined for infeasible queries");
    }
    return static_cast<double>(record.retrieved_distinct) /
           static_cast<double>(record.matched_total);
}

QueryClass classify(const QueryRecord& record, std::uint32_t n_r) {
    if (record.matched_total == 0) return QueryClass::Infeasible;
    if (record.matched_total < n_r) return QueryClass::Rare;
    return QueryClass::Common;
}

double energy(const QueryRecord& record, const EnergyParams& p) {
    return p.b * static_cast<double>(record.l_q) + p.c * static_cast<double>(record.n_q);
}

namespace {

std::vector<double> recall_cdf(const std::vector<double>& recalls) {
    if (recalls.empty()) return {};
    std::vector<double> cdf(kRecallGridPoints, 0.0);
    for (std::size_t i = 0; i < kRecallGridPoints; ++i) {
        const double g = recall_grid_point(i);
        std::size_t count = 0;
        for (double r : recalls) {
            if (r <= g + 1e-12) ++count;
        }
        cdf[i] = static_cast<double>(count) / static_cast<double>(recalls.size());
    }
    cdf.back() = 1.0;
    return cdf;
}

double full_recall_frac(const std::vector<double>& recalls) {
    if (recalls.empty()) return 0.0;
    std::size_t full = 0;
    for (double r : recalls) {
        if (r >= 1.0 - 1e-12) ++full;
    }
    return static_cast<double>(full) / static_cast<double>(recalls.size());
}

}  // namespace

Report aggregate(const std::vector<QueryRecord>& records, const EnergyParams& p) {
    if (records.empty()) throw std::invalid_argument("aggregate: no records");
    p.validate();

    Report rep;
    rep.n_queries = records.size();
    double docs_sum = 0.0, docs_answered_sum = 0.0;
    double deep_sum = 0.0, nodes_sum = 0.0, links_sum = 0.0, energy_sum = 0.0;
    std::vector<double> recalls_all, recalls_rare, recalls_common;

    for (const auto& r : records) {
        docs_sum += r.retrieved_distinct;
        for (std::size_t k = 0; k < 3; ++k) rep.link_kind_used[k] += r.link_kind_used[k];
        if (r.answered) {
            rep.n_answered += 1;
            docs_answered_sum += r.retrieved_distinct;
            deep_sum += r.deepness;
            nodes_sum += r.n_q;
            links_sum += static_cast<double>(r.l_q);
            energy_sum += energy(r, p);
        }
        switch (classify(r, r.n_r)) {
            case QueryClass::Infeasible:
                rep.n_infeasible += 1;
                break;
            case QueryClass::Rare:
                rep.n_rare += 1;
                recalls_rare.push_back(recall(r));
                recalls_all.push_back(recalls_rare.back());
                break;
            case QueryClass::Common:
                rep.n_common += 1;
                recalls_common.push_back(recall(r));
                recalls_all.push_back(recalls_common.back());
                break;
        }
    }

    const double n = static_cast<double>(rep.n_queries);
    rep.pct_answered = 100.0 * static_cast<double>(rep.n_answered) / n;
    rep.pct_infeasible = 100.0 * static_cast<double>(rep.n_infeasible) / n;
    rep.avg_docs_per_query = docs_sum / n;
    if (rep.n_answered > 0) {
        const double na = static_cast<double>(rep.n_answered);
        rep.avg_docs_per_successful_query = docs_answered_sum / na;
        rep.avg_deepness = deep_sum / na;
        rep.avg_nodes = nodes_sum / na;
        rep.avg_links = links_sum / na;
        rep.avg_energy = energy_sum / na;
    }
    rep.recall_cdf_all = recall_cdf(recalls_all);
    rep.recall_cdf_rare = recall_cdf(recalls_rare);
    rep.recall_cdf_common = recall_cdf(recalls_common);
    rep.rare_full_recall_frac = full_recall_frac(recalls_rare);
    rep.common_full_recall_frac = full_recall_frac(recalls_common);
    return rep;
}

}  // namespace prosa
