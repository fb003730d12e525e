#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "overlay.hpp"
#include "routing.hpp"

namespace prosa {

enum class Strategy { Prosa, Flooding, RandomWalk };

const char* strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

enum class QueryClass { Infeasible, Rare, Common };

// Per-query outcome summary, the unit all aggregates are computed from.
struct QueryRecord {
    std::uint64_t qid = 0;
    Strategy strategy = Strategy::Prosa;
    PeerId issuer = 0;
    std::uint32_t n_r = 1;
    std::uint32_t matched_total = 0;      // oracle count of matching (peer,doc) pairs
    std::uint32_t retrieved_distinct = 0;
    bool answered = false;
    bool feasible = false;                // matched_total > 0
    bool rare = false;                    // feasible and matched_total < n_r
    std::uint32_t deepness = 0;
    std::uint32_t n_q = 0;                // nodes that processed the query
    std::uint64_t l_q = 0;                // link traversals
    std::array<std::uint64_t, 3> link_kind_used{};

    bool operator==(const QueryRecord&) const = default;
};

struct EnergyParams {
    double b = 1.0;  // per-link cost scale
    double c = 1.0;  // per-node cost scale

    void validate() const;
};

// Exhaustive topology-independent scan: every (peer, doc) pair whose document
// vector has cosine >= doc_threshold with q.
std::set<std::pair<PeerId, DocId>> oracle_matching(const Network& network, const TermVector& q,
                                                   const RoutingParams& params,
                                                   const Corpus& corpus);

// Builds a record from an outcome and its oracle match set. When
// distinct_docs is set, both retrieved and matched counts collapse replicas
// to distinct doc ids.
QueryRecord make_record(const QueryOutcome& outcome, Strategy strategy, PeerId issuer,
                        std::uint32_t n_r,
                        const std::set<std::pair<PeerId, DocId>>& oracle,
                        bool distinct_docs = false);

// retrieved_distinct / matched_total. Only defined for feasible queries.
double recall(const QueryRecord& record);

QueryClass classify(const QueryRecord& record, std::uint32_t n_r);

// E_q = b * L_q + c * N_q.
double energy(const QueryRecord& record, const EnergyParams& p);

// Recall CDF grid: 0, 0.05, ..., 1.0.
constexpr std::size_t kRecallGridPoints = 21;
constexpr double recall_grid_point(std::size_t i) { return 0.05 * static_cast<double>(i); }

struct Report {
    std::size_t n_queries = 0;
    std::size_t n_answered = 0;
    std::size_t n_infeasible = 0;
    std::size_t n_rare = 0;
    std::size_t n_common = 0;
    double pct_answered = 0.0;
    double pct_infeasible = 0.0;
    double avg_docs_per_query = 0.0;
    std::optional<double> avg_docs_per_successful_query;  // absent if nothing answered
    std::optional<double> avg_deepness;  // these four average over answered queries
    std::optional<double> avg_nodes;
    std::optional<double> avg_links;
    std::optional<double> avg_energy;
    // Fraction of feasible (resp. rare/common) queries with recall <= grid point.
    std::vector<double> recall_cdf_all;
    std::vector<double> recall_cdf_rare;
    std::vector<double> recall_cdf_common;
    double rare_full_recall_frac = 0.0;    // rare queries with recall == 1
    double common_full_recall_frac = 0.0;
    std::array<std::uint64_t, 3> link_kind_used{};  // summed traversals by kind
};

Report aggregate(const std::vector<QueryRecord>& records, const EnergyParams& p);

}  // namespace prosa
