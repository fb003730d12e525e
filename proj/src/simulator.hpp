#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "metrics.hpp"
#include "overlay.hpp"
#include "routing.hpp"

namespace prosa {

struct CorpusSpec {
    enum class Kind { Synthetic, Ingest, File };
    Kind kind = Kind::Synthetic;
    SynthSpec synth;                    // Kind::Synthetic; seed 0 means "derive from run seed"
    bool synth_seed_explicit = false;
    std::string root;                   // Kind::Ingest
    std::string stopwords;              // Kind::Ingest, optional
    std::string path;                   // Kind::File
};

struct SimConfig {
    std::uint32_t num_peers = 200;
    std::uint32_t join_n = 2;
    std::uint32_t docs_per_peer_mean = 20;
    std::uint32_t docs_per_peer_spread = 5;
    std::uint32_t queries_per_peer_mean = 15;
    double same_topic_fraction = 0.8;
    std::uint32_t n_r = 10;
    std::uint32_t query_terms = 5;
    std::size_t vector_cap = kDefaultVectorCap;
    Strategy strategy = Strategy::Prosa;
    RoutingParams params;
    CorpusSpec corpus;
    EnergyParams energy;
    std::uint64_t seed = 1;
    bool interleave_joins = false;   // reserved, must stay false
    bool recall_distinct_docs = false;

    void validate() const;
};

// Strict JSON parsing: every field defaulted, unknown keys rejected.
SimConfig sim_config_from_json(const std::string& json_text);
std::string sim_config_to_json(const SimConfig& cfg);

// Independent per-phase seed streams, so a strategy change affects nothing
// upstream of query execution.
struct PhaseSeeds {
    std::uint64_t corpus, assign, join, workload, exec;
    static PhaseSeeds derive(std::uint64_t master);
};

// Each peer gets a home topic (alternating by id) and a uniform count in
// [mean-spread, mean+spread] of distinct docs from that topic; the same doc
// may land on several peers.
std::map<PeerId, std::vector<DocId>> assign_documents(const Corpus& corpus,
                                                      std::uint32_t num_peers,
                                                      const SimConfig& cfg, Rng& rng);

// Query vector: the query_terms highest-weight terms of a random document of
// the chosen topic (home topic with probability same_topic_fraction),
// renormalized.
TermVector generate_query(PeerId peer, std::size_t home_topic, const Corpus& corpus,
                          const SimConfig& cfg, Rng& rng);

// Sequential joins in id order, then document assignment and pk computation.
Network build_network(const Corpus& corpus, const SimConfig& cfg);

struct WorkloadItem {
    PeerId issuer;
    QueryMessage message;
};
std::vector<WorkloadItem> generate_workload(const Corpus& corpus, const SimConfig& cfg);

struct RunResult {
    Corpus corpus;
    Network network;  // post-run state
    std::vector<QueryRecord> records;
    std::vector<QueryOutcome> outcomes;  // only filled when keep_outcomes
    std::uint64_t corpus_hash = 0;
    std::uint64_t network_hash = 0;  // pre-run network state
};

Corpus build_corpus_for(const SimConfig& cfg);

// Full experiment: corpus, joins, assignment, workload, strictly sequential
// execution in qid order under cfg.strategy.
RunResult run_simulation(const SimConfig& cfg, bool keep_outcomes = false);

// Variant reusing an already-built corpus (must match cfg.corpus).
RunResult run_simulation_with_corpus(const SimConfig& cfg, Corpus corpus,
                                     bool keep_outcomes = false);

}  // namespace prosa
