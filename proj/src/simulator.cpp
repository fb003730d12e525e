#include "simulator.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace prosa {

using nlohmann::json;

void SimConfig::validate() const {
    if (num_peers < 1 || join_n < 1 || docs_per_peer_mean < 1 || queries_per_peer_mean < 1 ||
        n_r < 1 || query_terms < 1 || vector_cap < 1) {
        throw std::invalid_argument("sim config: all counts must be >= 1");
    }
    if (same_topic_fraction < 0.0 || same_topic_fraction > 1.0) {
        throw std::invalid_argument("sim config: same_topic_fraction must lie in [0,1]");
    }
    if (docs_per_peer_spread >= docs_per_peer_mean) {
        throw std::invalid_argument("sim config: docs_per_peer_spread must be < mean");
    }
    if (interleave_joins) {
        throw std::invalid_argument("sim config: interleave_joins is reserved and must be false");
    }
    params.validate();
    energy.validate();
}

namespace {

void reject_unknown_keys(const json& j, const std::vector<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw std::invalid_argument("unknown key '" + key + "' in " + where);
        }
    }
}

template <class T>
void get_if_present(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

CorpusSpec corpus_spec_from_json(const json& j) {
    CorpusSpec spec;
    std::string type = "synthetic";
    get_if_present(j, "type", type);
    if (type == "synthetic") {
        spec.kind = CorpusSpec::Kind::Synthetic;
        reject_unknown_keys(j,
                            {"type", "n_docs_per_topic", "vocab_per_topic", "shared_vocab",
                             "doc_len", "zipf_exponent", "seed", "topics"},
                            "corpus");
        get_if_present(j, "n_docs_per_topic", spec.synth.n_docs_per_topic);
        get_if_present(j, "vocab_per_topic", spec.synth.vocab_per_topic);
        get_if_present(j, "shared_vocab", spec.synth.shared_vocab);
        get_if_present(j, "doc_len", spec.synth.doc_len);
        get_if_present(j, "zipf_exponent", spec.synth.zipf_exponent);
        get_if_present(j, "topics", spec.synth.topic_names);
        if (j.contains("seed")) {
            spec.synth.seed = j.at("seed").get<std::uint64_t>();
            spec.synth_seed_explicit = true;
        }
    } else if (type == "ingest") {
        spec.kind = CorpusSpec::Kind::Ingest;
        reject_unknown_keys(j, {"type", "root", "stopwords"}, "corpus");
        spec.root = j.at("root").get<std::string>();
        get_if_present(j, "stopwords", spec.stopwords);
    } else if (type == "file") {
        spec.kind = CorpusSpec::Kind::File;
        reject_unknown_keys(j, {"type", "path"}, "corpus");
        spec.path = j.at("path").get<std::string>();
    } else {
        throw std::invalid_argument("unknown corpus type: " + type);
    }
    return spec;
}

json corpus_spec_to_json(const CorpusSpec& spec) {
    json j;
    switch (spec.kind) {
        case CorpusSpec::Kind::Synthetic:
            j["type"] = "synthetic";
            j["n_docs_per_topic"] = spec.synth.n_docs_per_topic;
            j["vocab_per_topic"] = spec.synth.vocab_per_topic;
            j["shared_vocab"] = spec.synth.shared_vocab;
            j["doc_len"] = spec.synth.doc_len;
            j["zipf_exponent"] = spec.synth.zipf_exponent;
            j["topics"] = spec.synth.topic_names;
            if (spec.synth_seed_explicit) j["seed"] = spec.synth.seed;
            break;
        case CorpusSpec::Kind::Ingest:
            j["type"] = "ingest";
            j["root"] = spec.root;
            if (!spec.stopwords.empty()) j["stopwords"] = spec.stopwords;
            break;
        case CorpusSpec::Kind::File:
            j["type"] = "file";
            j["path"] = spec.path;
            break;
    }
    return j;
}

}  // namespace

SimConfig sim_config_from_json(const std::string& json_text) {
    const json j = json::parse(json_text);
    reject_unknown_keys(j,
                        {"num_peers", "join_n", "docs_per_peer_mean", "docs_per_peer_spread",
                         "queries_per_peer_mean", "same_topic_fraction", "n_r", "query_terms",
                         "vector_cap", "strategy", "params", "corpus", "energy", "seed",
                         "interleave_joins", "recall_distinct_docs"},
                        "config");
    SimConfig cfg;
    get_if_present(j, "num_peers", cfg.num_peers);
    get_if_present(j, "join_n", cfg.join_n);
    get_if_present(j, "docs_per_peer_mean", cfg.docs_per_peer_mean);
    get_if_present(j, "docs_per_peer_spread", cfg.docs_per_peer_spread);
    get_if_present(j, "queries_per_peer_mean", cfg.queries_per_peer_mean);
    get_if_present(j, "same_topic_fraction", cfg.same_topic_fraction);
    get_if_present(j, "n_r", cfg.n_r);
    get_if_present(j, "query_terms", cfg.query_terms);
    get_if_present(j, "vector_cap", cfg.vector_cap);
    get_if_present(j, "seed", cfg.seed);
    get_if_present(j, "interleave_joins", cfg.interleave_joins);
    get_if_present(j, "recall_distinct_docs", cfg.recall_distinct_docs);
    if (j.contains("strategy")) {
        cfg.strategy = strategy_from_name(j.at("strategy").get<std::string>());
    }
    if (j.contains("params")) {
        const json& p = j.at("params");
        reject_unknown_keys(
            p, {"doc_threshold", "flood_threshold", "max_hops", "rw_ttl", "flood_ttl"}, "params");
        get_if_present(p, "doc_threshold", cfg.params.doc_threshold);
        get_if_present(p, "flood_threshold", cfg.params.flood_threshold);
        get_if_present(p, "max_hops", cfg.params.max_hops);
        get_if_present(p, "rw_ttl", cfg.params.rw_ttl);
        get_if_present(p, "flood_ttl", cfg.params.flood_ttl);
    }
    if (j.contains("energy")) {
        const json& e = j.at("energy");
        reject_unknown_keys(e, {"b", "c"}, "energy");
        get_if_present(e, "b", cfg.energy.b);
        get_if_present(e, "c", cfg.energy.c);
    }
    if (j.contains("corpus")) cfg.corpus = corpus_spec_from_json(j.at("corpus"));
    cfg.validate();
    return cfg;
}

std::string sim_config_to_json(const SimConfig& cfg) {
    json j;
    j["num_peers"] = cfg.num_peers;
    j["join_n"] = cfg.join_n;
    j["docs_per_peer_mean"] = cfg.docs_per_peer_mean;
    j["docs_per_peer_spread"] = cfg.docs_per_peer_spread;
    j["queries_per_peer_mean"] = cfg.queries_per_peer_mean;
    j["same_topic_fraction"] = cfg.same_topic_fraction;
    j["n_r"] = cfg.n_r;
    j["query_terms"] = cfg.query_terms;
    j["vector_cap"] = cfg.vector_cap;
    j["strategy"] = strategy_name(cfg.strategy);
    j["params"] = {{"doc_threshold", cfg.params.doc_threshold},
                   {"flood_threshold", cfg.params.flood_threshold},
                   {"max_hops", cfg.params.max_hops},
                   {"rw_ttl", cfg.params.rw_ttl},
                   {"flood_ttl", cfg.params.flood_ttl}};
    j["energy"] = {{"b", cfg.energy.b}, {"c", cfg.energy.c}};
    j["corpus"] = corpus_spec_to_json(cfg.corpus);
    j["seed"] = cfg.seed;
    j["interleave_joins"] = cfg.interleave_joins;
    j["recall_distinct_docs"] = cfg.recall_distinct_docs;
    return j.dump(2);
}

PhaseSeeds PhaseSeeds::derive(std::uint64_t master) {
    return {mix_seed(master, 1), mix_seed(master, 2), mix_seed(master, 3), mix_seed(master, 4),
            mix_seed(master, 5)};
}

std::map<PeerId, std::vector<DocId>> assign_documents(const Corpus& corpus,
                                                      std::uint32_t num_peers,
                                                      const SimConfig& cfg, Rng& rng) {
    for (const auto& t : corpus.topics) {
        if (t.doc_ids.empty()) {
            throw std::invalid_argument("assign_documents: topic '" + t.name + "' has no docs");
        }
    }
    std::map<PeerId, std::vector<DocId>> out;
    const std::uint32_t lo = cfg.docs_per_peer_mean - cfg.docs_per_peer_spread;
    const std::uint32_t hi = cfg.docs_per_peer_mean + cfg.docs_per_peer_spread;
    for (PeerId id = 0; id < num_peers; ++id) {
        const auto& topic_docs = corpus.topics[id % corpus.topics.size()].doc_ids;
        const std::uint32_t k = static_cast<std::uint32_t>(rng.between(lo, hi));
        std::set<DocId> docs;
        // Distinct within the peer; resample collisions. Capped by topic size.
        const std::size_t want = std::min<std::size_t>(k, topic_docs.size());
        while (docs.size() < want) {
            docs.insert(topic_docs[rng.below(topic_docs.size())]);
        }
        out.emplace(id, std::vector<DocId>(docs.begin(), docs.end()));
    }
    return out;
}

TermVector generate_query(PeerId peer, std::size_t home_topic, const Corpus& corpus,
                          const SimConfig& cfg, Rng& rng) {
    (void)peer;
    std::size_t topic = home_topic;
    if (rng.u01() >= cfg.same_topic_fraction) {
        // Pick uniformly among the other topics.
        const std::size_t other = rng.below(corpus.topics.size() - 1);
        topic = (other >= home_topic) ? other + 1 : other;
    }
    const auto& docs = corpus.topics[topic].doc_ids;

    // A degenerate (empty-vector) document cannot seed a query; redraw.
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const DocId d = docs[rng.below(docs.size())];
        TermVector q = corpus.documents[d].vector;
        if (q.empty()) continue;
        q.truncate(cfg.query_terms);
        q.normalize();
        return q;
    }
    throw std::runtime_error("generate_query: topic has no non-degenerate documents");
}

Corpus build_corpus_for(const SimConfig& cfg) {
    const PhaseSeeds seeds = PhaseSeeds::derive(cfg.seed);
    switch (cfg.corpus.kind) {
        case CorpusSpec::Kind::Synthetic: {
            SynthSpec spec = cfg.corpus.synth;
            if (!cfg.corpus.synth_seed_explicit) spec.seed = seeds.corpus;
            return synth_corpus(spec, cfg.vector_cap);
        }
        case CorpusSpec::Kind::Ingest:
            return ingest_corpus(cfg.corpus.root, cfg.corpus.stopwords, cfg.vector_cap);
        case CorpusSpec::Kind::File:
            return load_corpus(cfg.corpus.path);
    }
    throw std::logic_error("unreachable");
}

Network build_network(const Corpus& corpus, const SimConfig& cfg) {
    const PhaseSeeds seeds = PhaseSeeds::derive(cfg.seed);
    Network network(seeds.join, cfg.vector_cap);
    for (PeerId id = 0; id < cfg.num_peers; ++id) {
        Peer p;
        p.id = id;
        network.join(std::move(p), cfg.join_n);
    }
    Rng assign_rng(seeds.assign);
    auto assignment = assign_documents(corpus, cfg.num_peers, cfg, assign_rng);
    for (auto& [id, docs] : assignment) {
        Peer& p = network.peer(id);
        p.resources = std::move(docs);
        p.pk = peer_knowledge(p.resources, corpus, cfg.vector_cap);
    }
    return network;
}

std::vector<WorkloadItem> generate_workload(const Corpus& corpus, const SimConfig& cfg) {
    const PhaseSeeds seeds = PhaseSeeds::derive(cfg.seed);
    Rng rng(seeds.workload);
    const std::uint64_t total =
        static_cast<std::uint64_t>(cfg.num_peers) * cfg.queries_per_peer_mean;
    std::vector<WorkloadItem> out;
    out.reserve(total);
    for (std::uint64_t qid = 0; qid < total; ++qid) {
        const PeerId issuer = static_cast<PeerId>(rng.below(cfg.num_peers));
        const std::size_t home_topic = issuer % corpus.topics.size();
        QueryMessage qm;
        qm.qid = qid;
        qm.source = issuer;
        qm.n_r = cfg.n_r;
        qm.q = generate_query(issuer, home_topic, corpus, cfg, rng);
        out.push_back({issuer, std::move(qm)});
    }
    return out;
}

RunResult run_simulation_with_corpus(const SimConfig& cfg, Corpus corpus, bool keep_outcomes) {
    cfg.validate();
    const PhaseSeeds seeds = PhaseSeeds::derive(cfg.seed);

    Network network = build_network(corpus, cfg);
    const std::uint64_t corpus_hash = corpus_checksum(corpus);
    const std::uint64_t network_hash = network_checksum(network);
    auto workload = generate_workload(corpus, cfg);

    // All strategies are measured on the overlay PROSA built, per the
    // evaluation setup ("on the same PROSA network"): the workload first
    // evolves the links under PROSA, then the measured strategy re-executes
    // it on the evolved overlay (PROSA keeps refining links while measured;
    // the baselines are side-effect free).
    network.reseed(mix_seed(cfg.seed, 6));
    for (const auto& item : workload) {
        exec_query_prosa(network, item.message, cfg.params, corpus);
    }

    network.reseed(seeds.exec);
    Rng exec_rng(seeds.exec);
    std::vector<QueryRecord> records;
    records.reserve(workload.size());
    std::vector<QueryOutcome> outcomes;
    if (keep_outcomes) outcomes.reserve(workload.size());

    for (const auto& item : workload) {
        QueryOutcome outcome;
        switch (cfg.strategy) {
            case Strategy::Prosa:
                outcome = exec_query_prosa(network, item.message, cfg.params, corpus);
                break;
            case Strategy::Flooding:
                outcome = exec_query_flood(network, item.message, cfg.params, corpus);
                break;
            case Strategy::RandomWalk:
                outcome = exec_query_rw(network, item.message, cfg.params, corpus, exec_rng);
                break;
        }
        const auto oracle = oracle_matching(network, item.message.q, cfg.params, corpus);
        records.push_back(make_record(outcome, cfg.strategy, item.issuer, cfg.n_r, oracle,
                                      cfg.recall_distinct_docs));
        if (keep_outcomes) outcomes.push_back(std::move(outcome));
    }

    return RunResult{std::move(corpus), std::move(network), std::move(records),
                     std::move(outcomes), corpus_hash, network_hash};
}

RunResult run_simulation(const SimConfig& cfg, bool keep_outcomes) {
    return run_simulation_with_corpus(cfg, build_corpus_for(cfg), keep_outcomes);
}

}  // namespace prosa
