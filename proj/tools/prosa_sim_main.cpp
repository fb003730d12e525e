// prosa-sim: corpus generation, single runs, sweeps and report extraction.
// Only talks to the simulator through the public C API.

#include <prosa/prosa.h>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace {

bool read_file(const std::string& path, std::string& out, std::string& error) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        error = "cannot open config file: " + path;
        return false;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

int fail(prosa_status status) {
    std::fprintf(stderr, "error (%s): %s\n", prosa_status_name(status), prosa_last_error());
    // Validation, parse and I/O problems are usage errors.
    return (status == PROSA_ERR_INVALID_ARGUMENT || status == PROSA_ERR_PARSE ||
            status == PROSA_ERR_IO)
               ? 2
               : 1;
}

int fail_usage(const std::string& message) {
    std::fprintf(stderr, "error: %s\n", message.c_str());
    return 2;
}

int summarize_and_save(prosa_corpus* corpus, const std::string& out_path, uint64_t seed) {
    prosa_status st = prosa_corpus_save(corpus, out_path.c_str());
    if (st != PROSA_OK) {
        prosa_corpus_free(corpus);
        return fail(st);
    }
    double intra = 0.0, inter = 0.0;
    st = prosa_corpus_topic_separation(corpus, 50, seed, &intra, &inter);
    if (st != PROSA_OK) {
        prosa_corpus_free(corpus);
        return fail(st);
    }
    std::printf("corpus: %zu docs, %zu terms, %zu topics\n", prosa_corpus_num_docs(corpus),
                prosa_corpus_vocab_size(corpus), prosa_corpus_num_topics(corpus));
    std::printf("mean cosine: intra-topic %.4f, inter-topic %.4f\n", intra, inter);
    std::printf("wrote %s\n", out_path.c_str());
    prosa_corpus_free(corpus);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PROSA overlay network simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path, records_path;
    std::optional<std::uint64_t> seed;
    bool trace = false;
    unsigned jobs = 1;

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus file");
    synth->add_option("--config", config_path, "synthetic corpus config JSON");
    synth->add_option("--out", out_path, "output corpus file")->required();
    synth->add_option("--seed", seed, "override the corpus seed");

    std::string ingest_root, stopwords_path;
    auto* ingest = app.add_subcommand("ingest", "build a corpus from <root>/<topic>/*.txt");
    ingest->add_option("--root", ingest_root, "document tree root")->required();
    ingest->add_option("--stopwords", stopwords_path, "stopword list, one term per line");
    ingest->add_option("--out", out_path, "output corpus file")->required();

    auto* run = app.add_subcommand("run", "run one simulation and write reports");
    run->add_option("--config", config_path, "simulation config JSON")->required();
    run->add_option("--out", out_path, "output directory")->required();
    run->add_option("--seed", seed, "override the config seed");
    run->add_flag("--trace", trace, "also write per-query trace.jsonl");

    auto* sweep = app.add_subcommand("sweep", "run a sizes x strategies x seeds sweep");
    sweep->add_option("--config", config_path, "sweep spec JSON")->required();
    sweep->add_option("--out", out_path, "output directory")->required();
    sweep->add_option("--jobs", jobs, "parallel sweep cells")->check(CLI::PositiveNumber);

    auto* report = app.add_subcommand("report", "recompute reports from records.jsonl");
    report->add_option("--records", records_path, "records.jsonl from a previous run")
        ->required();
    report->add_option("--out", out_path, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (synth->parsed()) {
        std::string config = "{}";
        std::string error;
        if (!config_path.empty() && !read_file(config_path, config, error)) {
            return fail_usage(error);
        }
        prosa_corpus* corpus = nullptr;
        const std::uint64_t seed_value = seed.value_or(0);
        prosa_status st =
            prosa_corpus_synth(config.c_str(), seed ? &seed_value : nullptr, &corpus);
        if (st != PROSA_OK) return fail(st);
        return summarize_and_save(corpus, out_path, 0);
    }

    if (ingest->parsed()) {
        prosa_corpus* corpus = nullptr;
        prosa_status st = prosa_corpus_ingest(
            ingest_root.c_str(), stopwords_path.empty() ? nullptr : stopwords_path.c_str(),
            &corpus);
        if (st != PROSA_OK) return fail(st);
        return summarize_and_save(corpus, out_path, 0);
    }

    if (run->parsed()) {
        std::string config, error;
        if (!read_file(config_path, config, error)) return fail_usage(error);
        const std::uint64_t seed_value = seed.value_or(0);
        prosa_status st = prosa_run(config.c_str(), out_path.c_str(), trace ? 1 : 0,
                                    seed ? &seed_value : nullptr);
        if (st != PROSA_OK) return fail(st);
        std::printf("wrote reports to %s\n", out_path.c_str());
        return 0;
    }

    if (sweep->parsed()) {
        std::string config, error;
        if (!read_file(config_path, config, error)) return fail_usage(error);
        prosa_status st = prosa_sweep(config.c_str(), out_path.c_str(), jobs);
        if (st != PROSA_OK) return fail(st);
        std::printf("wrote %s/combined.csv\n", out_path.c_str());
        return 0;
    }

    if (report->parsed()) {
        prosa_status st = prosa_report(records_path.c_str(), out_path.c_str());
        if (st != PROSA_OK) return fail(st);
        std::printf("wrote reports to %s\n", out_path.c_str());
        return 0;
    }

    return fail_usage("no subcommand");
}
