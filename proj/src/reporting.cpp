#include "reporting.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace prosa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string fmt_hash(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void open_out(std::ofstream& out, const std::string& path) {
    out.open(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
}

}  // namespace

ReportRow make_report_row(const SimConfig& cfg, const RunResult& run) {
    ReportRow row;
    row.strategy = strategy_name(cfg.strategy);
    row.num_peers = cfg.num_peers;
    row.seed = cfg.seed;
    row.report = aggregate(run.records, cfg.energy);
    row.corpus_hash = run.corpus_hash;
    row.network_hash = run.network_hash;
    const TopologyStats stats = topology_stats(run.network);
    row.clustering_coefficient = stats.clustering_coefficient;
    row.avg_shortest_path = stats.avg_shortest_path;
    row.link_kind_counts = stats.link_kind_counts;
    return row;
}

std::string report_csv_header() {
    return "strategy,num_peers,seed,n_queries,n_answered,n_infeasible,n_rare,n_common,"
           "pct_answered,pct_infeasible,avg_docs_per_query,avg_docs_per_successful_query,"
           "avg_deepness,avg_nodes,avg_links,avg_energy,rare_full_recall_frac,"
           "common_full_recall_frac,al_links,tsl_links,fsl_links,al_used,tsl_used,fsl_used,"
           "clustering_coefficient,avg_shortest_path,corpus_hash,network_hash";
}

std::string report_csv_line(const ReportRow& row) {
    const Report& r = row.report;
    std::ostringstream out;
    out << row.strategy << ',' << row.num_peers << ',' << row.seed << ',' << r.n_queries << ','
        << r.n_answered << ',' << r.n_infeasible << ',' << r.n_rare << ',' << r.n_common << ','
        << fmt(r.pct_answered) << ',' << fmt(r.pct_infeasible) << ','
        << fmt(r.avg_docs_per_query) << ',' << fmt_opt(r.avg_docs_per_successful_query) << ','
        << fmt_opt(r.avg_deepness) << ',' << fmt_opt(r.avg_nodes) << ','
        << fmt_opt(r.avg_links) << ',' << fmt_opt(r.avg_energy) << ','
        << fmt(r.rare_full_recall_frac) << ',' << fmt(r.common_full_recall_frac) << ','
        << row.link_kind_counts[0] << ',' << row.link_kind_counts[1] << ','
        << row.link_kind_counts[2] << ',' << r.link_kind_used[0] << ',' << r.link_kind_used[1]
        << ',' << r.link_kind_used[2] << ',' << fmt(row.clustering_coefficient) << ','
        << fmt(row.avg_shortest_path) << ',' << fmt_hash(row.corpus_hash) << ','
        << fmt_hash(row.network_hash);
    return out.str();
}

void write_report_csv(const std::vector<ReportRow>& rows, const std::string& path) {
    std::ofstream out;
    open_out(out, path);
    out << report_csv_header() << "\n";
    for (const auto& row : rows) out << report_csv_line(row) << "\n";
}

void write_recall_cdf_csv(const std::vector<double>& cdf, const std::string& path) {
    std::ofstream out;
    open_out(out, path);
    out << "grid_point,fraction\n";
    for (std::size_t i = 0; i < cdf.size(); ++i) {
        out << fmt(recall_grid_point(i)) << ',' << fmt(cdf[i]) << "\n";
    }
}

namespace {

json record_to_json(const QueryRecord& r) {
    return json{{"qid", r.qid},
                {"strategy", strategy_name(r.strategy)},
                {"issuer", r.issuer},
                {"n_r", r.n_r},
                {"matched_total", r.matched_total},
                {"retrieved_distinct", r.retrieved_distinct},
                {"answered", r.answered},
                {"feasible", r.feasible},
                {"rare", r.rare},
                {"deepness", r.deepness},
                {"n_q", r.n_q},
                {"l_q", r.l_q},
                {"al_used", r.link_kind_used[0]},
                {"tsl_used", r.link_kind_used[1]},
                {"fsl_used", r.link_kind_used[2]}};
}

QueryRecord record_from_json(const json& j) {
    QueryRecord r;
    r.qid = j.at("qid").get<std::uint64_t>();
    r.strategy = strategy_from_name(j.at("strategy").get<std::string>());
    r.issuer = j.at("issuer").get<PeerId>();
    r.n_r = j.at("n_r").get<std::uint32_t>();
    r.matched_total = j.at("matched_total").get<std::uint32_t>();
    r.retrieved_distinct = j.at("retrieved_distinct").get<std::uint32_t>();
    r.answered = j.at("answered").get<bool>();
    r.feasible = j.at("feasible").get<bool>();
    r.rare = j.at("rare").get<bool>();
    r.deepness = j.at("deepness").get<std::uint32_t>();
    r.n_q = j.at("n_q").get<std::uint32_t>();
    r.l_q = j.at("l_q").get<std::uint64_t>();
    r.link_kind_used = {j.at("al_used").get<std::uint64_t>(),
                        j.at("tsl_used").get<std::uint64_t>(),
                        j.at("fsl_used").get<std::uint64_t>()};
    return r;
}

}  // namespace

void write_records_jsonl(const std::vector<QueryRecord>& records, const std::string& path) {
    std::ofstream out;
    open_out(out, path);
    for (const auto& r : records) out << record_to_json(r).dump() << "\n";
}

std::vector<QueryRecord> read_records_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open records file: " + path);
    std::vector<QueryRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(record_from_json(json::parse(line)));
    }
    return records;
}

void write_trace_jsonl(const std::vector<QueryOutcome>& outcomes, const std::string& path) {
    std::ofstream out;
    open_out(out, path);
    for (const auto& o : outcomes) {
        json links = json::array();
        for (const auto& [a, b] : o.used_links) links.push_back(json::array({a, b}));
        json retrieved = json::array();
        for (const auto& [p, d] : o.retrieved) retrieved.push_back(json::array({p, d}));
        out << json{{"qid", o.qid},
                    {"visited_nodes", o.visited_nodes},
                    {"used_links", std::move(links)},
                    {"retrieved", std::move(retrieved)},
                    {"deepness", o.deepness},
                    {"answered", o.answered}}
                   .dump()
            << "\n";
    }
}

void cmd_run(const SimConfig& cfg, const std::string& out_dir, bool write_trace) {
    cfg.validate();
    fs::create_directories(out_dir);
    const RunResult run = run_simulation(cfg, write_trace);
    const ReportRow row = make_report_row(cfg, run);

    const fs::path dir(out_dir);
    write_report_csv({row}, (dir / "report.csv").string());
    write_recall_cdf_csv(row.report.recall_cdf_all, (dir / "recall_cdf_all.csv").string());
    write_recall_cdf_csv(row.report.recall_cdf_rare, (dir / "recall_cdf_rare.csv").string());
    write_recall_cdf_csv(row.report.recall_cdf_common, (dir / "recall_cdf_common.csv").string());
    write_records_jsonl(run.records, (dir / "records.jsonl").string());
    if (write_trace) write_trace_jsonl(run.outcomes, (dir / "trace.jsonl").string());

    std::ofstream echo;
    open_out(echo, (dir / "config_resolved.json").string());
    echo << sim_config_to_json(cfg) << "\n";
}

void cmd_report(const std::string& records_path, const std::string& out_dir,
                const EnergyParams& energy) {
    const auto records = read_records_jsonl(records_path);
    if (records.empty()) throw std::runtime_error("no records in " + records_path);
    const Report rep = aggregate(records, energy);

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    // Identification columns are not recoverable from records alone; reuse the
    // full row shape with strategy from the records and zeroed topology.
    ReportRow row;
    row.strategy = strategy_name(records.front().strategy);
    row.report = rep;
    std::ofstream out;
    open_out(out, (dir / "report.csv").string());
    out << report_csv_header() << "\n" << report_csv_line(row) << "\n";
    write_recall_cdf_csv(rep.recall_cdf_all, (dir / "recall_cdf_all.csv").string());
    write_recall_cdf_csv(rep.recall_cdf_rare, (dir / "recall_cdf_rare.csv").string());
    write_recall_cdf_csv(rep.recall_cdf_common, (dir / "recall_cdf_common.csv").string());
}

void SweepSpec::validate() const {
    if (sizes.empty() || strategies.empty() || seeds.empty()) {
        throw std::invalid_argument("sweep spec: sizes, strategies and seeds must be nonempty");
    }
    base.validate();
}

SweepSpec sweep_spec_from_json(const std::string& json_text) {
    const json j = json::parse(json_text);
    for (const auto& [key, value] : j.items()) {
        if (key != "sizes" && key != "strategies" && key != "seeds" && key != "base") {
            throw std::invalid_argument("unknown key '" + key + "' in sweep spec");
        }
    }
    SweepSpec spec;
    spec.sizes = j.at("sizes").get<std::vector<std::uint32_t>>();
    for (const auto& s : j.at("strategies")) {
        spec.strategies.push_back(strategy_from_name(s.get<std::string>()));
    }
    spec.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    spec.base = sim_config_from_json(j.value("base", json::object()).dump());
    spec.validate();
    return spec;
}

std::vector<ReportRow> run_sweep(const SweepSpec& spec, unsigned jobs) {
    spec.validate();
    struct Cell {
        SimConfig cfg;
    };
    std::vector<Cell> cells;
    for (std::uint32_t size : spec.sizes) {
        for (Strategy strategy : spec.strategies) {
            for (std::uint64_t seed : spec.seeds) {
                SimConfig cfg = spec.base;
                cfg.num_peers = size;
                cfg.strategy = strategy;
                cfg.seed = seed;
                cells.push_back({std::move(cfg)});
            }
        }
    }

    std::vector<ReportRow> rows(cells.size());
    std::vector<std::string> errors(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                const RunResult run = run_simulation(cells[i].cfg);
                rows[i] = make_report_row(cells[i].cfg, run);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (jobs < 1) jobs = 1;
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs && t < cells.size(); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!errors[i].empty()) {
            const auto& cfg = cells[i].cfg;
            throw std::runtime_error("sweep cell failed (size=" + std::to_string(cfg.num_peers) +
                                     ", strategy=" + strategy_name(cfg.strategy) +
                                     ", seed=" + std::to_string(cfg.seed) + "): " + errors[i]);
        }
    }
    return rows;
}

void cmd_sweep(const SweepSpec& spec, const std::string& out_dir, unsigned jobs) {
    const auto rows = run_sweep(spec, jobs);
    fs::create_directories(out_dir);
    write_report_csv(rows, (fs::path(out_dir) / "combined.csv").string());
}

}  // namespace prosa
