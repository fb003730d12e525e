#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "rng.hpp"
#include "term_vector.hpp"

namespace prosa {

using PeerId = std::uint32_t;

enum class LinkKind { AL, TSL, FSL };

const char* link_kind_name(LinkKind k);

// Typed directed edge annotation. AL carries no weight; TSL carries a running
// summary of queries received from the target (query_count of them); FSL
// carries the target's full peer knowledge.
struct LinkLabel {
    LinkKind kind = LinkKind::AL;
    TermVector weight;
    std::uint32_t query_count = 0;

    bool operator==(const LinkLabel&) const = default;
};

struct Peer {
    PeerId id = 0;
    std::vector<DocId> resources;  // sorted, distinct
    TermVector pk;                 // knowledge summary of `resources`
    std::map<PeerId, LinkLabel> out_links;
};

// Centroid of the resource vectors: sum, normalize, truncate to cap,
// renormalize. Empty resource set yields the empty vector.
TermVector peer_knowledge(const std::vector<DocId>& resources, const Corpus& corpus,
                          std::size_t cap);

// The overlay graph. Owns its RNG; join target selection draws from it.
class Network {
public:
    explicit Network(std::uint64_t seed, std::size_t vector_cap = kDefaultVectorCap)
        : rng_(seed), vector_cap_(vector_cap) {}

    const std::map<PeerId, Peer>& peers() const { return peers_; }
    std::size_t num_peers() const { return peers_.size(); }
    bool has_peer(PeerId id) const { return peers_.count(id) != 0; }
    Peer& peer(PeerId id);
    const Peer& peer(PeerId id) const;
    Rng& rng() { return rng_; }
    // Starts a fresh RNG stream, e.g. to isolate query execution from joins.
    void reseed(std::uint64_t seed) { rng_ = Rng(seed); }
    std::size_t vector_cap() const { return vector_cap_; }

    // Adds the peer and links it to min(n, existing) distinct peers chosen
    // uniformly at random, all labeled AL.
    void join(Peer p, std::size_t n);

    // Link maintenance on query receipt: no link or AL -> fresh TSL with
    // weight q; TSL -> running-mean update of the weight; FSL -> untouched.
    void update_link(PeerId cur, PeerId source, const TermVector& q);

    // Sets (or upgrades) source->target to FSL with the target's current pk.
    void add_fsl(PeerId source, PeerId target);

private:
    void require_peer(PeerId id) const;

    std::map<PeerId, Peer> peers_;
    Rng rng_;
    std::size_t vector_cap_;
};

struct TopologyStats {
    double clustering_coefficient = 0.0;
    double avg_shortest_path = 0.0;
    std::size_t unreachable_pairs = 0;
    std::array<std::size_t, 3> link_kind_counts{};  // indexed by LinkKind
};

// Directed clustering coefficient averaged over nodes (nodes with out-degree
// < 2 contribute 0) and average shortest path over reachable ordered pairs.
TopologyStats topology_stats(const Network& network);

// Debug/analysis snapshot: peers with resources and pk, plus all labeled links.
std::string network_snapshot_json(const Network& network);
void save_network_snapshot(const Network& network, const std::string& path);
std::uint64_t network_checksum(const Network& network);

}  // namespace prosa
