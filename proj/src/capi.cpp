#include "prosa/prosa.h"

#include <json.hpp>

#include <exception>
#include <new>
#include <stdexcept>
#include <string>

#include "corpus.hpp"
#include "reporting.hpp"
#include "simulator.hpp"

namespace {

thread_local std::string g_last_error = "no error";

prosa_status fail(prosa_status status, const char* what) {
    g_last_error = what ? what : "unknown error";
    return status;
}

template <class Fn>
prosa_status guarded(Fn&& fn) {
    try {
        fn();
        return PROSA_OK;
    } catch (const nlohmann::json::exception& e) {
        return fail(PROSA_ERR_PARSE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(PROSA_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::runtime_error& e) {
        return fail(PROSA_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(PROSA_ERR_INTERNAL, e.what());
    }
}

prosa::SynthSpec synth_spec_from_json(const char* config_json) {
    const auto j = nlohmann::json::parse(config_json ? config_json : "{}");
    prosa::SynthSpec spec;
    for (const auto& [key, value] : j.items()) {
        if (key == "n_docs_per_topic") {
            spec.n_docs_per_topic = value.get<std::uint32_t>();
        } else if (key == "vocab_per_topic") {
            spec.vocab_per_topic = value.get<std::uint32_t>();
        } else if (key == "shared_vocab") {
            spec.shared_vocab = value.get<std::uint32_t>();
        } else if (key == "doc_len") {
            spec.doc_len = value.get<std::uint32_t>();
        } else if (key == "zipf_exponent") {
            spec.zipf_exponent = value.get<double>();
        } else if (key == "seed") {
            spec.seed = value.get<std::uint64_t>();
        } else if (key == "topics") {
            spec.topic_names = value.get<std::vector<std::string>>();
        } else {
            throw std::invalid_argument("unknown key '" + key + "' in synth corpus config");
        }
    }
    return spec;
}

}  // namespace

struct prosa_corpus {
    prosa::Corpus corpus;
};

extern "C" {

const char* prosa_status_name(prosa_status status) {
    switch (status) {
        case PROSA_OK: return "ok";
        case PROSA_ERR_INVALID_ARGUMENT: return "invalid argument";
        case PROSA_ERR_IO: return "i/o error";
        case PROSA_ERR_PARSE: return "parse error";
        case PROSA_ERR_INTERNAL: return "internal error";
    }
    return "?";
}

const char* prosa_last_error(void) { return g_last_error.c_str(); }

prosa_status prosa_corpus_synth(const char* config_json, const uint64_t* seed_override,
                                prosa_corpus** out) {
    if (!out) return fail(PROSA_ERR_INVALID_ARGUMENT, "out handle is NULL");
    return guarded([&] {
        auto spec = synth_spec_from_json(config_json);
        if (seed_override) spec.seed = *seed_override;
        *out = new prosa_corpus{prosa::synth_corpus(spec)};
    });
}

prosa_status prosa_corpus_ingest(const char* root_dir, const char* stopwords_path,
                                 prosa_corpus** out) {
    if (!out || !root_dir) return fail(PROSA_ERR_INVALID_ARGUMENT, "NULL argument");
    return guarded([&] {
        *out = new prosa_corpus{
            prosa::ingest_corpus(root_dir, stopwords_path ? stopwords_path : "")};
    });
}

prosa_status prosa_corpus_load(const char* path, prosa_corpus** out) {
    if (!out || !path) return fail(PROSA_ERR_INVALID_ARGUMENT, "NULL argument");
    return guarded([&] { *out = new prosa_corpus{prosa::load_corpus(path)}; });
}

prosa_status prosa_corpus_save(const prosa_corpus* corpus, const char* path) {
    if (!corpus || !path) return fail(PROSA_ERR_INVALID_ARGUMENT, "NULL argument");
    return guarded([&] { prosa::save_corpus(corpus->corpus, path); });
}

void prosa_corpus_free(prosa_corpus* corpus) { delete corpus; }

size_t prosa_corpus_num_docs(const prosa_corpus* corpus) {
    return corpus ? corpus->corpus.num_docs() : 0;
}

size_t prosa_corpus_vocab_size(const prosa_corpus* corpus) {
    return corpus ? corpus->corpus.term_names.size() : 0;
}

size_t prosa_corpus_num_topics(const prosa_corpus* corpus) {
    return corpus ? corpus->corpus.topics.size() : 0;
}

prosa_status prosa_corpus_topic_separation(const prosa_corpus* corpus,
                                           size_t sample_per_topic, uint64_t seed,
                                           double* mean_intra, double* mean_inter) {
    if (!corpus || !mean_intra || !mean_inter) {
        return fail(PROSA_ERR_INVALID_ARGUMENT, "NULL argument");
    }
    return guarded([&] {
        const auto sep = prosa::topic_separation(corpus->corpus, sample_per_topic, seed);
        *mean_intra = sep.mean_intra;
        *mean_inter = sep.mean_inter;
    });
}

prosa_status prosa_run(const char* config_json, const char* out_dir, int write_trace,
                       const uint64_t* seed_override) {
    if (!config_json || !out_dir) return fail(PROSA_ERR_INVALID_ARGUMENT, "NULL argument");
    return guarded([&] {
        auto cfg = prosa::sim_config_from_json(config_json);
        if (seed_override) cfg.seed = *seed_override;
        prosa::cmd_run(cfg, out_dir, write_trace != 0);
    });
}

prosa_status prosa_sweep(const char* sweep_json, const char* out_dir, unsigned jobs) {
    if (!sweep_json || !out_dir) return fail(PROSA_ERR_INVALID_ARGUMENT, "NULL argument");
    return guarded([&] {
        const auto spec = prosa::sweep_spec_from_json(sweep_json);
        prosa::cmd_sweep(spec, out_dir, jobs);
    });
}

prosa_status prosa_report(const char* records_path, const char* out_dir) {
    if (!records_path || !out_dir) return fail(PROSA_ERR_INVALID_ARGUMENT, "NULL argument");
    return guarded([&] { prosa::cmd_report(records_path, out_dir); });
}

}  // extern "C"
