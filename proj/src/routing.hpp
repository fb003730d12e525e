#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <unordered_set>
#include <utility>
#include <vector>

#include "corpus.hpp"
#include "overlay.hpp"
#include "term_vector.hpp"

namespace prosa {

struct QueryMessage {
    std::uint64_t qid = 0;
    TermVector q;
    PeerId source = 0;
    std::uint32_t n_r = 1;  // required results
};

struct RoutingParams {
    // Defaults are calibrated on the synthetic default corpus; the
    // calibration procedure is documented in the README.
    double doc_threshold = 0.3;    // document match cutoff (cosine)
    double flood_threshold = 0.66; // semantic-flooding link relevance cutoff
    std::uint32_t max_hops = 30;   // forwarding-depth guard
    std::uint32_t rw_ttl = 16;
    std::uint32_t flood_ttl = 8;

    void validate() const;
};

struct QueryOutcome {
    std::uint64_t qid = 0;
    std::set<std::pair<PeerId, DocId>> retrieved;
    std::vector<PeerId> visited_nodes;                    // first-processing order
    std::vector<std::pair<PeerId, PeerId>> used_links;    // every traversal, duplicates kept
    std::uint32_t deepness = 0;  // max forwarding level of any delivered copy
    bool answered = false;
    std::array<std::uint64_t, 3> link_kind_used{};  // traversals by label kind at send time
};

struct ResourceMatches {
    std::vector<DocId> matches;  // best-first, at most `needed`
    std::uint32_t num_res = 0;
};

// Resources of `peer` with cosine(doc vector, q) >= doc_threshold, sorted by
// descending similarity then ascending doc id, truncated to `needed`.
ResourceMatches resources_relevance(const Peer& peer, const TermVector& q,
                                    std::uint32_t needed, const RoutingParams& params,
                                    const Corpus& corpus);

// cosine(weight, q) for TSL/FSL; 0 for AL.
double peer_relevance(const LinkLabel& label, const TermVector& q);

// Best unvisited out-neighbor: highest positive semantic relevance if any
// (ties by ascending peer id), else a uniformly random unvisited target,
// else nothing.
std::optional<PeerId> select_next_peer(const Peer& peer, const TermVector& q,
                                       const std::unordered_set<PeerId>& visited, Rng& rng);

// The PROSA routing engine: single-path forwarding while nothing matches,
// then FSL creation back to the source and semantic flooding with the
// remaining result budget. Mutates link labels along the way.
QueryOutcome exec_query_prosa(Network& network, const QueryMessage& qm,
                              const RoutingParams& params, const Corpus& corpus);

// Baseline: breadth-first flooding up to flood_ttl levels; per-peer qid
// dedup; a level is only expanded while the source still needs results.
// Leaves the overlay untouched.
QueryOutcome exec_query_flood(const Network& network, const QueryMessage& qm,
                              const RoutingParams& params, const Corpus& corpus);

// Baseline: single random walker, unvisited neighbors preferred, stopping on
// budget, ttl, or dead end. Leaves the overlay untouched.
QueryOutcome exec_query_rw(const Network& network, const QueryMessage& qm,
                           const RoutingParams& params, const Corpus& corpus, Rng& rng);

}  // namespace prosa
