#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "term_vector.hpp"

namespace prosa {

using DocId = std::uint32_t;

constexpr std::size_t kDefaultVectorCap = 100;

struct Document {
    DocId doc_id = 0;
    std::string topic;
    std::map<TermId, std::uint32_t> term_counts;  // raw occurrence counts, >= 1
    TermVector vector;                            // filled by the corpus build
};

struct Topic {
    std::string name;
    std::vector<DocId> doc_ids;
};

// Optional token rewrite hook (e.g. a stemmer). Applied after the standard
// tokenization rules; returning an empty string drops the token.
using TokenMapper = std::function<std::string(const std::string&)>;

struct Corpus {
    std::vector<Document> documents;                   // indexed by doc_id
    std::unordered_map<std::string, TermId> vocabulary;
    std::vector<std::string> term_names;               // term_id -> term
    std::vector<std::uint32_t> doc_freq;               // term_id -> document frequency
    std::vector<Topic> topics;
    std::size_t vector_cap = kDefaultVectorCap;
    bool degenerate = false;  // at least one document vectorized to empty

    std::size_t num_docs() const { return documents.size(); }
    // Index into topics, or throws std::invalid_argument for an unknown name.
    std::size_t topic_index(const std::string& name) const;
};

// Lowercase alphabetic tokens; punctuation and digits split tokens, stopwords
// and tokens shorter than 2 characters are dropped. Order preserved.
std::vector<std::string> tokenize(const std::string& text,
                                  const std::unordered_set<std::string>& stopwords,
                                  const TokenMapper& mapper = {});

// One input document: topic label plus term occurrence counts.
using CountedDoc = std::pair<std::string, std::vector<std::pair<std::string, std::uint32_t>>>;

// Core build: assigns term ids in first-occurrence order, fills doc_freq and
// per-document TF-IDF vectors. Rejects empty inputs and empty documents.
Corpus build_corpus_from_counts(const std::vector<CountedDoc>& docs,
                                std::size_t vector_cap = kDefaultVectorCap);

// Text path: tokenizes each (topic, text) pair, then builds as above.
// A document that tokenizes to zero terms is rejected, naming its index.
Corpus build_corpus(const std::vector<std::pair<std::string, std::string>>& docs,
                    const std::unordered_set<std::string>& stopwords = {},
                    std::size_t vector_cap = kDefaultVectorCap,
                    const TokenMapper& mapper = {});

// weight(t) = tf(t) * ln(N / df(t)); keeps the `cap` largest weights (ties by
// ascending term id), drops zeros, L2-normalizes the survivors. May be empty.
TermVector tfidf_vector(const Document& doc, const Corpus& corpus, std::size_t cap);

struct SynthSpec {
    std::uint32_t n_docs_per_topic = 745;
    std::uint32_t vocab_per_topic = 2000;
    std::uint32_t shared_vocab = 500;
    std::uint32_t doc_len = 200;
    double zipf_exponent = 1.0;
    std::uint64_t seed = 0;
    std::vector<std::string> topic_names = {"math", "philosophy"};
};

// Deterministic two-(or more-)topic generator: each document samples doc_len
// term occurrences from a Zipf-weighted topic vocabulary merged with a shared
// vocabulary.
Corpus synth_corpus(const SynthSpec& spec, std::size_t vector_cap = kDefaultVectorCap);

// Reads `<root>/<topic>/<docname>.txt`, one UTF-8 document per file.
// stopwords_path may be empty; the file holds one term per line.
Corpus ingest_corpus(const std::string& root_dir, const std::string& stopwords_path,
                     std::size_t vector_cap = kDefaultVectorCap);

// Single-file JSON export/import. Weights are serialized as decimal strings
// with enough digits to round-trip exactly.
std::string corpus_to_json(const Corpus& corpus);
Corpus corpus_from_json(const std::string& json_text);
void save_corpus(const Corpus& corpus, const std::string& path);
Corpus load_corpus(const std::string& path);

// FNV-1a over the canonical JSON form; used to compare runs cheaply.
std::uint64_t fnv1a(const std::string& s);
std::uint64_t corpus_checksum(const Corpus& corpus);

// Mean pairwise cosine within / across topics on a per-topic sample.
struct TopicSeparation {
    double mean_intra = 0.0;
    double mean_inter = 0.0;
};
TopicSeparation topic_separation(const Corpus& corpus, std::size_t sample_per_topic,
                                 std::uint64_t seed);

}  // namespace prosa
