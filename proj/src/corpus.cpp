#include "corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rng.hpp"

namespace prosa {

namespace fs = std::filesystem;
using nlohmann::json;

std::size_t Corpus::topic_index(const std::string& name) const {
    for (std::size_t i = 0; i < topics.size(); ++i) {
        if (topics[i].name == name) return i;
    }
    throw std::invalid_argument("unknown topic: " + name);
}

std::vector<std::string> tokenize(const std::string& text,
                                  const std::unordered_set<std::string>& stopwords,
                                  const TokenMapper& mapper) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (cur.size() < 2) {
            cur.clear();
            return;
        }
        if (mapper) cur = mapper(cur);
        if (cur.size() >= 2 && !stopwords.count(cur)) out.push_back(cur);
        cur.clear();
    };
    for (unsigned char c : text) {
        if (std::isalpha(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

TermVector tfidf_vector(const Document& doc, const Corpus& corpus, std::size_t cap) {
    if (cap < 1) throw std::invalid_argument("tfidf_vector: cap must be >= 1");
    const double n = static_cast<double>(corpus.num_docs());
    std::vector<TermVector::Entry> entries;
    entries.reserve(doc.term_counts.size());
    for (const auto& [term, count] : doc.term_counts) {
        const double idf = std::log(n / static_cast<double>(corpus.doc_freq[term]));
        const double w = static_cast<double>(count) * idf;
        if (w > 0.0) entries.emplace_back(term, w);
    }
    TermVector v(std::move(entries));
    v.truncate(cap);
    v.normalize();
    return v;
}

Corpus build_corpus_from_counts(const std::vector<CountedDoc>& docs, std::size_t vector_cap) {
    if (docs.empty()) throw std::invalid_argument("build_corpus: no documents");
    Corpus corpus;
    corpus.vector_cap = vector_cap;
    corpus.documents.reserve(docs.size());

    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto& [topic, counts] = docs[i];
        if (counts.empty()) {
            throw std::invalid_argument("build_corpus: document " + std::to_string(i) +
                                        " has no terms");
        }
        Document d;
        d.doc_id = static_cast<DocId>(i);
        d.topic = topic;
        for (const auto& [term, count] : counts) {
            if (count < 1) {
                throw std::invalid_argument("build_corpus: document " + std::to_string(i) +
                                            " has a zero count for term " + term);
            }
            auto [it, inserted] =
                corpus.vocabulary.emplace(term, static_cast<TermId>(corpus.term_names.size()));
            if (inserted) {
                corpus.term_names.push_back(term);
                corpus.doc_freq.push_back(0);
            }
            d.term_counts[it->second] += count;
        }
        for (const auto& [term_id, count] : d.term_counts) corpus.doc_freq[term_id] += 1;

        auto topic_it = std::find_if(corpus.topics.begin(), corpus.topics.end(),
                                     [&](const Topic& t) { return t.name == topic; });
        if (topic_it == corpus.topics.end()) {
            corpus.topics.push_back({topic, {}});
            topic_it = corpus.topics.end() - 1;
        }
        topic_it->doc_ids.push_back(d.doc_id);
        corpus.documents.push_back(std::move(d));
    }

    for (auto& d : corpus.documents) {
        d.vector = tfidf_vector(d, corpus, vector_cap);
        if (d.vector.empty()) corpus.degenerate = true;
    }
    return corpus;
}

Corpus build_corpus(const std::vector<std::pair<std::string, std::string>>& docs,
                    const std::unordered_set<std::string>& stopwords,
                    std::size_t vector_cap, const TokenMapper& mapper) {
    std::vector<CountedDoc> counted;
    counted.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto tokens = tokenize(docs[i].second, stopwords, mapper);
        if (tokens.empty()) {
            throw std::invalid_argument("build_corpus: document " + std::to_string(i) +
                                        " tokenizes to zero terms");
        }
        std::map<std::string, std::uint32_t> counts;
        for (const auto& t : tokens) counts[t] += 1;
        CountedDoc cd;
        cd.first = docs[i].first;
        cd.second.assign(counts.begin(), counts.end());
        counted.push_back(std::move(cd));
    }
    return build_corpus_from_counts(counted, vector_cap);
}

Corpus synth_corpus(const SynthSpec& spec, std::size_t vector_cap) {
    if (spec.n_docs_per_topic < 1 || spec.vocab_per_topic < 1 || spec.doc_len < 1) {
        throw std::invalid_argument("synth_corpus: all sizes must be >= 1");
    }
    if (spec.topic_names.size() < 2) {
        throw std::invalid_argument("synth_corpus: need at least 2 topics");
    }
    Rng rng(spec.seed);

    // Per-topic sampling distribution: topic vocabulary followed by the shared
    // vocabulary, each block Zipf-weighted by in-block rank.
    const std::size_t block = spec.vocab_per_topic + spec.shared_vocab;
    std::vector<double> cum(block);
    double acc = 0.0;
    for (std::size_t i = 0; i < block; ++i) {
        const std::size_t rank = (i < spec.vocab_per_topic) ? i + 1 : i + 1 - spec.vocab_per_topic;
        acc += 1.0 / std::pow(static_cast<double>(rank), spec.zipf_exponent);
        cum[i] = acc;
    }

    auto term_name = [&](const std::string& topic, std::size_t slot) {
        char buf[32];
        if (slot < spec.vocab_per_topic) {
            std::snprintf(buf, sizeof(buf), "t%05zu", slot);
            return topic + "_" + buf;
        }
        std::snprintf(buf, sizeof(buf), "shared_%05zu", slot - spec.vocab_per_topic);
        return std::string(buf);
    };

    std::vector<CountedDoc> docs;
    docs.reserve(spec.topic_names.size() * spec.n_docs_per_topic);
    for (const auto& topic : spec.topic_names) {
        for (std::uint32_t d = 0; d < spec.n_docs_per_topic; ++d) {
            std::map<std::size_t, std::uint32_t> slots;
            for (std::uint32_t t = 0; t < spec.doc_len; ++t) {
                const double u = rng.u01() * acc;
                const auto it = std::lower_bound(cum.begin(), cum.end(), u);
                slots[static_cast<std::size_t>(it - cum.begin())] += 1;
            }
            CountedDoc cd;
            cd.first = topic;
            for (const auto& [slot, count] : slots) {
                cd.second.emplace_back(term_name(topic, slot), count);
            }
            docs.push_back(std::move(cd));
        }
    }
    return build_corpus_from_counts(docs, vector_cap);
}

Corpus ingest_corpus(const std::string& root_dir, const std::string& stopwords_path,
                     std::size_t vector_cap) {
    std::unordered_set<std::string> stopwords;
    if (!stopwords_path.empty()) {
        std::ifstream in(stopwords_path);
        if (!in) throw std::runtime_error("cannot open stopword list: " + stopwords_path);
        std::string line;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (!line.empty()) stopwords.insert(line);
        }
    }

    if (!fs::is_directory(root_dir)) {
        throw std::runtime_error("corpus root is not a directory: " + root_dir);
    }
    std::vector<fs::path> topic_dirs;
    for (const auto& e : fs::directory_iterator(root_dir)) {
        if (e.is_directory()) topic_dirs.push_back(e.path());
    }
    std::sort(topic_dirs.begin(), topic_dirs.end());

    std::vector<std::pair<std::string, std::string>> docs;
    for (const auto& dir : topic_dirs) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(dir)) {
            if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            std::ifstream in(f);
            if (!in) throw std::runtime_error("cannot read document: " + f.string());
            std::ostringstream ss;
            ss << in.rdbuf();
            docs.emplace_back(dir.filename().string(), ss.str());
        }
    }
    if (docs.empty()) throw std::runtime_error("no documents under " + root_dir);
    return build_corpus(docs, stopwords, vector_cap);
}

namespace {

std::string format_weight(double w) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", w);
    return buf;
}

json vector_to_json(const TermVector& v) {
    json j = json::array();
    for (const auto& [id, w] : v.entries()) {
        j.push_back(json::array({id, format_weight(w)}));
    }
    return j;
}

TermVector vector_from_json(const json& j) {
    std::vector<TermVector::Entry> entries;
    entries.reserve(j.size());
    for (const auto& e : j) {
        entries.emplace_back(e.at(0).get<TermId>(), std::stod(e.at(1).get<std::string>()));
    }
    return TermVector(std::move(entries));
}

}  // namespace

std::string corpus_to_json(const Corpus& corpus) {
    json j;
    j["vector_cap"] = corpus.vector_cap;
    j["degenerate"] = corpus.degenerate;
    j["terms"] = corpus.term_names;
    j["doc_freq"] = corpus.doc_freq;
    json topics = json::array();
    for (const auto& t : corpus.topics) {
        topics.push_back({{"name", t.name}, {"docs", t.doc_ids}});
    }
    j["topics"] = std::move(topics);
    json documents = json::array();
    for (const auto& d : corpus.documents) {
        json counts = json::array();
        for (const auto& [term, count] : d.term_counts) {
            counts.push_back(json::array({term, count}));
        }
        documents.push_back({{"id", d.doc_id},
                             {"topic", d.topic},
                             {"counts", std::move(counts)},
                             {"vector", vector_to_json(d.vector)}});
    }
    j["documents"] = std::move(documents);
    return j.dump();
}

Corpus corpus_from_json(const std::string& json_text) {
    const json j = json::parse(json_text);
    Corpus corpus;
    corpus.vector_cap = j.at("vector_cap").get<std::size_t>();
    corpus.degenerate = j.at("degenerate").get<bool>();
    corpus.term_names = j.at("terms").get<std::vector<std::string>>();
    corpus.doc_freq = j.at("doc_freq").get<std::vector<std::uint32_t>>();
    for (TermId i = 0; i < corpus.term_names.size(); ++i) {
        corpus.vocabulary.emplace(corpus.term_names[i], i);
    }
    for (const auto& t : j.at("topics")) {
        corpus.topics.push_back(
            {t.at("name").get<std::string>(), t.at("docs").get<std::vector<DocId>>()});
    }
    for (const auto& dj : j.at("documents")) {
        Document d;
        d.doc_id = dj.at("id").get<DocId>();
        d.topic = dj.at("topic").get<std::string>();
        for (const auto& c : dj.at("counts")) {
            d.term_counts[c.at(0).get<TermId>()] = c.at(1).get<std::uint32_t>();
        }
        d.vector = vector_from_json(dj.at("vector"));
        corpus.documents.push_back(std::move(d));
    }
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write corpus file: " + path);
    out << corpus_to_json(corpus) << "\n";
    if (!out) throw std::runtime_error("failed writing corpus file: " + path);
}

Corpus load_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return corpus_from_json(ss.str());
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t corpus_checksum(const Corpus& corpus) { return fnv1a(corpus_to_json(corpus)); }

TopicSeparation topic_separation(const Corpus& corpus, std::size_t sample_per_topic,
                                 std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<DocId>> samples;
    for (const auto& t : corpus.topics) {
        samples.push_back(rng.sample(t.doc_ids, sample_per_topic));
    }
    double intra = 0.0, inter = 0.0;
    std::size_t n_intra = 0, n_inter = 0;
    for (std::size_t a = 0; a < samples.size(); ++a) {
        for (std::size_t b = a; b < samples.size(); ++b) {
            for (std::size_t i = 0; i < samples[a].size(); ++i) {
                const std::size_t j0 = (a == b) ? i + 1 : 0;
                for (std::size_t j = j0; j < samples[b].size(); ++j) {
                    const double s = cosine_similarity(corpus.documents[samples[a][i]].vector,
                                                       corpus.documents[samples[b][j]].vector);
                    if (a == b) {
                        intra += s;
                        ++n_intra;
                    } else {
                        inter += s;
                        ++n_inter;
                    }
                }
            }
        }
    }
    TopicSeparation sep;
    if (n_intra) sep.mean_intra = intra / static_cast<double>(n_intra);
    if (n_inter) sep.mean_inter = inter / static_cast<double>(n_inter);
    return sep;
}

}  // namespace prosa
