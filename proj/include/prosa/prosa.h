/* C API for the PROSA overlay simulator.
 *
 * All functions return prosa_status; on failure prosa_last_error() holds a
 * human-readable message for the calling thread. Handles are opaque and must
 * be released with their matching _free function.
 */
#ifndef PROSA_PROSA_H
#define PROSA_PROSA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum prosa_status {
    PROSA_OK = 0,
    PROSA_ERR_INVALID_ARGUMENT = 1,
    PROSA_ERR_IO = 2,
    PROSA_ERR_PARSE = 3,
    PROSA_ERR_INTERNAL = 4
} prosa_status;

const char* prosa_status_name(prosa_status status);

/* Message for the most recent failure on this thread; never NULL. */
const char* prosa_last_error(void);

/* ---- Corpus ------------------------------------------------------------ */

typedef struct prosa_corpus prosa_corpus;

/* config_json: synthetic-corpus spec (all keys optional):
 *   {"n_docs_per_topic":745,"vocab_per_topic":2000,"shared_vocab":500,
 *    "doc_len":200,"zipf_exponent":1.0,"seed":0,"topics":["math","philosophy"]}
 */
prosa_status prosa_corpus_synth(const char* config_json, const uint64_t* seed_override,
                                prosa_corpus** out);

/* Reads <root>/<topic>/<doc>.txt, one document per file. stopwords_path may
 * be NULL. */
prosa_status prosa_corpus_ingest(const char* root_dir, const char* stopwords_path,
                                 prosa_corpus** out);

prosa_status prosa_corpus_load(const char* path, prosa_corpus** out);
prosa_status prosa_corpus_save(const prosa_corpus* corpus, const char* path);
void prosa_corpus_free(prosa_corpus* corpus);

size_t prosa_corpus_num_docs(const prosa_corpus* corpus);
size_t prosa_corpus_vocab_size(const prosa_corpus* corpus);
size_t prosa_corpus_num_topics(const prosa_corpus* corpus);

/* Mean pairwise cosine within / across topics over a per-topic sample. */
prosa_status prosa_corpus_topic_separation(const prosa_corpus* corpus,
                                           size_t sample_per_topic, uint64_t seed,
                                           double* mean_intra, double* mean_inter);

/* ---- Simulation -------------------------------------------------------- */

/* Runs one simulation described by the config JSON and writes report.csv,
 * recall_cdf_{all,rare,common}.csv, records.jsonl, config_resolved.json and
 * (optionally) trace.jsonl under out_dir. seed_override may be NULL. */
prosa_status prosa_run(const char* config_json, const char* out_dir, int write_trace,
                       const uint64_t* seed_override);

/* Sweep JSON: {"sizes":[...],"strategies":["prosa",...],"seeds":[...],
 * "base":{...sim config overrides...}}. Writes combined.csv under out_dir. */
prosa_status prosa_sweep(const char* sweep_json, const char* out_dir, unsigned jobs);

/* Recomputes report.csv and the recall CDFs from a records.jsonl file. */
prosa_status prosa_report(const char* records_path, const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PROSA_PROSA_H */
