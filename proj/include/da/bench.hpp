#pragma once

#include <optional>
#include <string>
#include <vector>

#include "da/engine.hpp"
#include "da/synthetic.hpp"
#include "da/turntable.hpp"

namespace da {

/// Where a task's data comes from: a file on disk (resolved against
/// DA_DATA_DIR when relative), a synthetic generator spec, or one half of
/// the procedural turntable benchmark.
struct DataRef {
    enum class Kind { file, synthetic, turntable };
    Kind kind = Kind::file;
    std::string path;              // file: dataset path; synthetic: spec path or "builtin"
    FileFormat format = FileFormat::csv;
    PoseHalf half = PoseHalf::quad13;       // turntable
    std::uint64_t turntable_seed = 9041;    // turntable
};

struct TaskSpec {
    std::string name;  // arrow naming, e.g. "COIL1->COIL2"
    DataRef source;
    DataRef target;
    std::string preset = "";
    AdaptationConfig config;  // preset with per-task overrides applied
    std::vector<Method> methods;
};

struct SuiteConfig {
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string out_dir = ".";
    std::vector<TaskSpec> tasks;
};

/// Parse a suite config file ([task.<name>] sections; see configs/).
SuiteConfig parse_suite_config(const std::string& path);

struct ReportRow {
    std::string task;
    std::string method;
    double final_accuracy = -1.0;  // -1 when the target has no ground truth
    int iterations_run = 0;
    std::vector<IterationStats> per_iteration;
    double wall_clock_seconds = 0.0;
    AdaptationConfig config;
    std::uint64_t task_seed = 0;
    std::string source_hash;
    std::string target_hash;
};

struct Report {
    std::uint64_t suite_seed = 0;
    std::vector<ReportRow> rows;
};

/// Execute every (task, method) pair, up to `jobs` tasks in parallel.
/// Throws on the first task failure.
Report run_suite(const SuiteConfig& suite);

/// Serialize the report. JSON carries the full payload (config echo, traces,
/// hashes); CSV carries the accuracy table. Timing fields ("generated_at",
/// "wall_clock_seconds") are the only run-dependent content.
std::string report_to_json(const Report& report, const std::string& timestamp);
std::string report_to_csv(const Report& report);
void write_report(const Report& report, const std::string& out_dir);

/// Resolve a dataset path against DA_DATA_DIR when it is relative.
std::string resolve_data_path(const std::string& path);

/// Load (or generate) the datasets a task refers to.
std::pair<DomainDataset, DomainDataset> materialize_task_data(const TaskSpec& task,
                                                              std::uint64_t task_seed);

/// Per-task deterministic seed fan-out.
std::uint64_t task_seed_for(std::uint64_t suite_seed, const std::string& task_name);

/// Provenance hash of a dataset: FNV-1a over the feature bytes folded with
/// the label bytes. Identical inputs hash identically regardless of origin.
std::string dataset_hash(const DomainDataset& ds);

/// CSV with columns sample_id, domain, class, z1..zk; values at 17
/// significant digits. `labels` has one entry per joint sample (source block
/// first); k is capped at max_dims when given.
void export_embedding(const AdaptationResult& result, const IntVector& labels,
                      const std::string& path, std::optional<int> max_dims = {});

}  // namespace da
