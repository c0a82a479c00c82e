#pragma once

// Command implementations behind the pmbench executable, kept as plain
// functions so they can be exercised directly in tests. Exit-code
// contract: 0 success, 1 usage/config error, 2 data error, 3 benchmark
// finished but some (pipeline, seed) cells failed.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pmbench/bench/runner.hpp"
#include "pmbench/data.hpp"
#include "pmbench/errors.hpp"
#include "pmbench/report/json_io.hpp"
#include "pmbench/report/render.hpp"

namespace pmbench::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitPartialFailure = 3;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
}

// --- validate ---------------------------------------------------------

inline int cmd_validate(const std::string& dataset_path, std::ostream& out, std::ostream& err) {
    std::string text;
    try {
        text = read_file(dataset_path);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    try {
        const std::vector<MachineRecord> records = parse_dataset(text);
        if (records.empty()) throw SchemaError("no data rows");
        std::size_t twf = 0, hdf = 0, pwf = 0, osf = 0, rnf = 0, machine_failure = 0;
        for (const auto& r : records) {
            twf += r.twf;
            hdf += r.hdf;
            pwf += r.pwf;
            osf += r.osf;
            rnf += r.rnf;
            machine_failure += r.machine_failure;
        }
        const std::vector<LabeledRecord> labeled = build_labeled(records);
        std::size_t positives = 0;
        for (const auto& lr : labeled) positives += lr.label ? 1 : 0;

        out << "rows: " << records.size() << "\n";
        out << "failure flags: TWF " << twf << ", HDF " << hdf << ", PWF " << pwf << ", OSF "
            << osf << ", RNF " << rnf << " (machine failure column: " << machine_failure
            << ")\n";
        out << "rows after RNF filter: " << labeled.size() << "\n";
        out << "deterministic-failure positives: " << positives << "\n";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", prevalence(labeled));
        out << "prevalence: " << buf << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "schema error: " << e.what() << "\n";
        return kExitData;
    }
}

// --- run ---------------------------------------------------------------

struct RunOptions {
    std::string dataset;
    std::vector<std::uint64_t> seeds = {42, 43, 44, 45, 46};
    std::vector<std::string> pipelines = {"L0", "L1", "L2", "L3", "L4", "L5", "L6"};
    BenchConfig bench;
    std::string dag_path;  // empty keeps the built-in graph
    std::string out_dir = "pmbench_out";
    std::vector<std::string> formats = {"table-text", "csv", "json"};
    bool quiet = false;
};

namespace detail {

inline bool wants(const RunOptions& opts, const std::string& format) {
    for (const auto& f : opts.formats) {
        if (f == format) return true;
    }
    return false;
}

inline void write_report_files(const BenchmarkReport& report, const RunOptions& opts) {
    namespace fs = std::filesystem;
    fs::create_directories(opts.out_dir);
    const auto path = [&](const char* name) { return (fs::path(opts.out_dir) / name).string(); };

    if (wants(opts, "table-text")) {
        write_file(path("performance.txt"), render_performance_text(report));
        write_file(path("generalization.txt"), render_generalization_text(report));
    }
    if (wants(opts, "csv")) {
        write_file(path("performance.csv"), render_performance_csv(report));
        write_file(path("generalization.csv"), render_generalization_csv(report));
    }
    if (wants(opts, "json")) {
        write_file(path("performance.json"), render_performance_json(report));
        write_file(path("generalization.json"), render_generalization_json(report));
    }
    write_file(path("causal_insights.txt"), render_causal_insights_text(report));
    write_file(path("results.json"), dump_report(report));
}

}  // namespace detail

inline int cmd_run(RunOptions opts, std::ostream& out, std::ostream& err) {
    // config checks first: they are usage errors, not data errors
    std::vector<PipelineId> pipeline_ids;
    try {
        if (opts.dataset.empty()) {
            throw ConfigError("no dataset given (positional argument or config file key)");
        }
        if (opts.seeds.empty()) throw ConfigError("at least one seed is required");
        if (opts.pipelines.empty()) throw ConfigError("at least one pipeline is required");
        for (const auto& code : opts.pipelines) {
            const auto id = parse_pipeline_id(code);
            if (!id) throw ConfigError("unknown pipeline \"" + code + "\" (expected L0..L6)");
            pipeline_ids.push_back(*id);
        }
        if (!opts.bench.schedule.valid()) throw ConfigError("cost schedule entries must be >= 0");
        for (const auto& f : opts.formats) {
            if (f != "table-text" && f != "csv" && f != "json") {
                throw ConfigError("unknown format \"" + f + "\"");
            }
        }
        if (!opts.dag_path.empty()) {
            const Dag dag = Dag::from_edge_list(read_file(opts.dag_path));
            const DagValidation v = validate_dag(dag);
            if (!v.ok) throw ConfigError("dag file " + opts.dag_path + ": " + v.message());
            opts.bench.dag = dag;
            opts.bench.dag_source = opts.dag_path;
        }
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::vector<LabeledRecord> labeled;
    try {
        const std::string text = read_file(opts.dataset);
        const std::vector<MachineRecord> records = parse_dataset(text);
        if (records.empty()) throw SchemaError("no data rows");
        labeled = build_labeled(records);
    } catch (const std::exception& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    }

    BenchmarkReport report;
    try {
        report = run_benchmark(labeled, pipeline_ids, opts.seeds, opts.bench);
        report.config.dataset = opts.dataset;
        detail::write_report_files(report, opts);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }

    if (!opts.quiet) {
        out << render_performance_text(report) << "\n";
        out << render_generalization_text(report) << "\n";
        out << "report files written to " << opts.out_dir << "\n";
    }
    if (report.has_errors()) {
        for (const auto& c : report.cells) {
            if (!c.ok) {
                err << "cell failed: " << pipeline_code(c.pipeline) << " seed " << c.seed << ": "
                    << c.error << "\n";
            }
        }
        return kExitPartialFailure;
    }
    return kExitOk;
}

// --- report ------------------------------------------------------------

struct ReportOptions {
    std::string dump_path;
    std::vector<std::string> formats = {"table-text"};
    std::string out_dir;  // empty renders to stdout
};

inline int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err) {
    for (const auto& f : opts.formats) {
        if (f != "table-text" && f != "csv" && f != "json") {
            err << "config error: unknown format \"" << f << "\"\n";
            return kExitUsage;
        }
    }
    BenchmarkReport report;
    try {
        report = load_report(read_file(opts.dump_path));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }

    if (!opts.out_dir.empty()) {
        RunOptions write_opts;
        write_opts.out_dir = opts.out_dir;
        write_opts.formats = opts.formats;
        try {
            detail::write_report_files(report, write_opts);
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return kExitData;
        }
        out << "report files written to " << opts.out_dir << "\n";
        return kExitOk;
    }

    for (const auto& f : opts.formats) {
        if (f == "table-text") {
            out << render_performance_text(report) << "\n";
            out << render_generalization_text(report) << "\n";
            out << render_causal_insights_text(report);
        } else if (f == "csv") {
            out << render_performance_csv(report);
            out << render_generalization_csv(report);
        } else {
            out << render_performance_json(report);
            out << render_generalization_json(report);
        }
    }
    return kExitOk;
}

}  // namespace pmbench::cli
