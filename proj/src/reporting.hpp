#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metrics.hpp"
#include "simulator.hpp"

namespace prosa {

// One combined-report CSV row: scalar aggregates plus run identification.
struct ReportRow {
    std::string strategy;
    std::uint32_t num_peers = 0;
    std::uint64_t seed = 0;
    Report report;
    std::uint64_t corpus_hash = 0;
    std::uint64_t network_hash = 0;
    double clustering_coefficient = 0.0;
    double avg_shortest_path = 0.0;
    std::array<std::size_t, 3> link_kind_counts{};
};

ReportRow make_report_row(const SimConfig& cfg, const RunResult& run);

// Fixed, documented column set; see README.
std::string report_csv_header();
std::string report_csv_line(const ReportRow& row);

void write_report_csv(const std::vector<ReportRow>& rows, const std::string& path);
void write_recall_cdf_csv(const std::vector<double>& cdf, const std::string& path);

// Per-query record stream (JSON lines); the raw material for `report`.
void write_records_jsonl(const std::vector<QueryRecord>& records, const std::string& path);
std::vector<QueryRecord> read_records_jsonl(const std::string& path);

// Optional per-query trace: visited nodes, used links, retrieved pairs.
void write_trace_jsonl(const std::vector<QueryOutcome>& outcomes, const std::string& path);

// End-to-end `run` command: simulation plus all output files under out_dir.
void cmd_run(const SimConfig& cfg, const std::string& out_dir, bool write_trace);

// Recomputes report.csv and the recall CDFs from a records.jsonl file.
void cmd_report(const std::string& records_path, const std::string& out_dir,
                const EnergyParams& energy = {});

struct SweepSpec {
    std::vector<std::uint32_t> sizes;
    std::vector<Strategy> strategies;
    std::vector<std::uint64_t> seeds;
    SimConfig base;

    void validate() const;
};

SweepSpec sweep_spec_from_json(const std::string& json_text);

// Cross product of sizes x strategies x seeds, each cell an independent run.
// Cells may execute on up to `jobs` threads; the combined CSV is written once
// at the end in deterministic cell order.
std::vector<ReportRow> run_sweep(const SweepSpec& spec, unsigned jobs);
void cmd_sweep(const SweepSpec& spec, const std::string& out_dir, unsigned jobs);

}  // namespace prosa
