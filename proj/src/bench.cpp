#include "da/bench.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "da/config.hpp"

namespace da {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string hash_to_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

FileFormat parse_format(const std::string& value, const std::string& key) {
    if (value == "csv") return FileFormat::csv;
    if (value == "rawbinary") return FileFormat::rawbinary;
    throw ParseError("config: key '" + key + "': unknown format '" + value + "'");
}

DataRef parse_data_ref(const ConfigSection& section, const std::string& key) {
    DataRef ref;
    const std::string value = section.get(key);
    if (value.rfind("synthetic:", 0) == 0) {
        ref.kind = DataRef::Kind::synthetic;
        ref.path = value.substr(10);
        if (ref.path.empty()) {
            throw ParseError("config: key '" + key + "': synthetic ref needs a spec path or "
                             "'builtin'");
        }
        return ref;
    }
    if (value.rfind("turntable:", 0) == 0) {
        ref.kind = DataRef::Kind::turntable;
        const std::string half = value.substr(10);
        if (half == "quad13") {
            ref.half = PoseHalf::quad13;
        } else if (half == "quad24") {
            ref.half = PoseHalf::quad24;
        } else {
            throw ParseError("config: key '" + key + "': unknown turntable half '" + half + "'");
        }
        if (section.has("turntable_seed")) {
            ref.turntable_seed =
                static_cast<std::uint64_t>(to_int(section.get("turntable_seed"),
                                                  "turntable_seed"));
        }
        return ref;
    }
    ref.kind = DataRef::Kind::file;
    ref.path = value;
    ref.format = parse_format(section.get_or(key + "_format", "csv"), key + "_format");
    return ref;
}

void apply_overrides(AdaptationConfig& cfg, const ConfigSection& section) {
    if (section.has("k")) cfg.k = to_int(section.get("k"), "k");
    if (section.has("lambda")) cfg.lambda = to_double(section.get("lambda"), "lambda");
    if (section.has("alpha")) cfg.alpha = to_double(section.get("alpha"), "alpha");
    if (section.has("iterations")) cfg.iterations = to_int(section.get("iterations"),
                                                           "iterations");
    if (section.has("kernel")) {
        const std::string kind = section.get("kernel");
        if (kind == "none" || kind == "linear-raw") {
            cfg.kernel.reset();
        } else if (kind == "linear") {
            cfg.kernel = KernelSpec::linear();
        } else if (kind == "rbf") {
            cfg.kernel = KernelSpec::rbf(to_double(section.get_or("gamma", "1"), "gamma"));
        } else if (kind == "polynomial") {
            cfg.kernel = KernelSpec::polynomial(to_int(section.get_or("degree", "2"), "degree"),
                                                to_double(section.get_or("coef", "1"), "coef"));
        } else {
            throw ParseError("config: key 'kernel': unknown kernel '" + kind + "'");
        }
    }
    if (section.has("sigma")) {
        const std::string s = section.get("sigma");
        cfg.sigma_rule = s == "median" ? SigmaRule::median()
                                       : SigmaRule::fixed(to_double(s, "sigma"));
    }
    if (section.has("knn")) cfg.knn = to_int(section.get("knn"), "knn");
    if (section.has("standardize")) {
        cfg.standardize = to_bool(section.get("standardize"), "standardize");
    }
    if (section.has("normalize_mmd")) {
        cfg.normalize_mmd = to_bool(section.get("normalize_mmd"), "normalize_mmd");
    }
}

json kernel_to_json(const std::optional<KernelSpec>& kernel) {
    if (!kernel) return nullptr;
    json j;
    switch (kernel->kind) {
        case KernelSpec::Kind::linear:
            j["kind"] = "linear";
            break;
        case KernelSpec::Kind::rbf:
            j["kind"] = "rbf";
            j["gamma"] = kernel->gamma;
            break;
        case KernelSpec::Kind::polynomial:
            j["kind"] = "polynomial";
            j["degree"] = kernel->degree;
            j["coef"] = kernel->coef;
            break;
    }
    return j;
}

json config_to_json(const AdaptationConfig& cfg) {
    json j;
    j["method"] = method_name(cfg.method);
    j["k"] = cfg.k;
    j["lambda"] = cfg.lambda;
    j["alpha"] = cfg.alpha;
    j["iterations"] = cfg.iterations;
    j["kernel"] = kernel_to_json(cfg.kernel);
    if (cfg.sigma_rule.kind == SigmaRule::Kind::median) {
        j["sigma"] = "median";
    } else {
        j["sigma"] = cfg.sigma_rule.value;
    }
    j["knn"] = cfg.knn ? json(*cfg.knn) : json(nullptr);
    j["standardize"] = cfg.standardize;
    j["normalize_mmd"] = cfg.normalize_mmd;
    j["seed"] = std::to_string(cfg.seed);  // string: JSON numbers lose u64 precision
    return j;
}

}  // namespace

std::uint64_t task_seed_for(std::uint64_t suite_seed, const std::string& task_name) {
    return suite_seed ^ fnv1a64(task_name);
}

std::string resolve_data_path(const std::string& path) {
    namespace fs = std::filesystem;
    if (path.empty() || fs::path(path).is_absolute()) return path;
    const char* root = std::getenv("DA_DATA_DIR");
    if (root == nullptr || *root == '\0') return path;
    return (fs::path(root) / path).string();
}

SuiteConfig parse_suite_config(const std::string& path) {
    ConfigFile cfg = parse_config_file(path);
    SuiteConfig suite;

    const ConfigSection* global = cfg.find("");
    if (global != nullptr) {
        if (global->has("seed")) {
            long long s = 0;
            const std::string& v = global->get("seed");
            try {
                s = std::stoll(v);
            } catch (const std::exception&) {
                throw ParseError("config: key 'seed': '" + v + "' is not an integer");
            }
            suite.seed = static_cast<std::uint64_t>(s);
        }
        if (global->has("jobs")) suite.jobs = to_int(global->get("jobs"), "jobs");
        if (global->has("out_dir")) suite.out_dir = global->get("out_dir");
    }
    if (suite.jobs < 1) throw ParseError("config: key 'jobs': must be >= 1");

    for (const auto& section : cfg.sections) {
        if (section.name.empty()) continue;
        if (section.name.rfind("task.", 0) != 0) {
            throw ParseError(path + ": unknown section [" + section.name +
                             "] (expected [task.<name>])");
        }
        TaskSpec task;
        task.name = section.name.substr(5);
        if (task.name.empty()) throw ParseError(path + ": task section with empty name");
        task.source = parse_data_ref(section, "source");
        task.target = parse_data_ref(section, "target");

        task.preset = section.get_or("preset", "");
        task.config = task.preset.empty() ? AdaptationConfig{} : AdaptationConfig::preset(
                                                                     task.preset);
        apply_overrides(task.config, section);

        for (const auto& m : split_list(section.get("methods"))) {
            task.methods.push_back(parse_method(m));
        }
        if (task.methods.empty()) {
            throw ParseError(path + ": task '" + task.name + "' lists no methods");
        }
        suite.tasks.push_back(std::move(task));
    }
    if (suite.tasks.empty()) throw ParseError(path + ": no [task.<name>] sections");
    return suite;
}

std::pair<DomainDataset, DomainDataset> materialize_task_data(const TaskSpec& task,
                                                              std::uint64_t task_seed) {
    const DataRef& s = task.source;
    const DataRef& t = task.target;
    if (s.kind == DataRef::Kind::synthetic || t.kind == DataRef::Kind::synthetic) {
        if (s.kind != t.kind) {
            throw ValidationError("task '" + task.name +
                                  "': synthetic source and target must pair up");
        }
        SyntheticSpec spec = s.path == "builtin" ? SyntheticSpec::four_class_default()
                                                 : parse_synthetic_spec(resolve_data_path(s.path));
        return make_synthetic_pair(spec, task_seed);
    }
    if (s.kind == DataRef::Kind::turntable || t.kind == DataRef::Kind::turntable) {
        if (s.kind != t.kind) {
            throw ValidationError("task '" + task.name +
                                  "': turntable source and target must pair up");
        }
        if (s.half == t.half) {
            throw ValidationError("task '" + task.name +
                                  "': turntable source and target use the same half");
        }
        TurntableSpec spec;
        spec.seed = s.turntable_seed;
        return make_turntable_pair(spec, s.half);
    }
    DomainDataset source =
        load_dataset(resolve_data_path(s.path), s.format, Role::source, task.name + ":source");
    DomainDataset target =
        load_dataset(resolve_data_path(t.path), t.format, Role::target, task.name + ":target");
    return {std::move(source), std::move(target)};
}

std::string dataset_hash(const DomainDataset& ds) {
    const Matrix& X = ds.features();
    std::uint64_t h = fnv1a64(X.data(), sizeof(double) * static_cast<size_t>(X.size()));
    auto fold = [&h](const IntVector& v) {
        const std::uint64_t lh = fnv1a64(v.data(), sizeof(int) * static_cast<size_t>(v.size()));
        h ^= lh + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    if (ds.has_training_labels()) fold(ds.training_labels());
    if (ds.has_evaluation_labels()) fold(ds.evaluation_labels());
    return hash_to_hex(h);
}

Report run_suite(const SuiteConfig& suite) {
    Report report;
    report.suite_seed = suite.seed;

    // One slot per (task, method); row order is fixed by the config, not by
    // the scheduling of the worker threads.
    struct Cell {
        size_t task = 0;
        Method method = Method::tca;
    };
    std::vector<Cell> cells;
    for (size_t ti = 0; ti < suite.tasks.size(); ++ti) {
        for (Method m : suite.tasks[ti].methods) cells.push_back({ti, m});
    }
    report.rows.resize(cells.size());

    std::atomic<size_t> next_task{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto run_task = [&](size_t ti) {
        const TaskSpec& task = suite.tasks[ti];
        const std::uint64_t task_seed = task_seed_for(suite.seed, task.name);
        auto [source, target] = materialize_task_data(task, task_seed);
        const std::string source_hash = dataset_hash(source);
        const std::string target_hash = dataset_hash(target);

        for (size_t ci = 0; ci < cells.size(); ++ci) {
            if (cells[ci].task != ti) continue;
            AdaptationConfig cfg = task.config;
            cfg.method = cells[ci].method;
            cfg.seed = task_seed;

            const auto t0 = std::chrono::steady_clock::now();
            AdaptationResult result = run_adaptation(source, target, cfg);
            const auto t1 = std::chrono::steady_clock::now();

            ReportRow& row = report.rows[ci];
            row.task = task.name;
            row.method = method_name(cfg.method);
            row.final_accuracy = result.final_accuracy.value_or(-1.0);
            row.iterations_run = static_cast<int>(result.per_iteration.size());
            row.per_iteration = result.per_iteration;
            row.wall_clock_seconds = std::chrono::duration<double>(t1 - t0).count();
            row.config = cfg;
            row.task_seed = task_seed;
            row.source_hash = source_hash;
            row.target_hash = target_hash;
        }
    };

    auto worker = [&]() {
        for (;;) {
            const size_t ti = next_task.fetch_add(1);
            if (ti >= suite.tasks.size()) return;
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error) return;  // fail fast: stop picking up work
            }
            try {
                run_task(ti);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    const int jobs = std::min<int>(suite.jobs, static_cast<int>(suite.tasks.size()));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return report;
}

std::string report_to_json(const Report& report, const std::string& timestamp) {
    json j;
    j["suite_seed"] = std::to_string(report.suite_seed);
    j["generated_at"] = timestamp;
    j["rows"] = json::array();
    for (const auto& row : report.rows) {
        json r;
        r["task"] = row.task;
        r["method"] = row.method;
        r["final_accuracy"] = row.final_accuracy;
        r["iterations_run"] = row.iterations_run;
        r["wall_clock_seconds"] = row.wall_clock_seconds;
        r["task_seed"] = std::to_string(row.task_seed);
        r["source_hash"] = row.source_hash;
        r["target_hash"] = row.target_hash;
        r["config"] = config_to_json(row.config);
        r["per_iteration"] = json::array();
        for (const auto& it : row.per_iteration) {
            json s;
            s["iteration"] = it.iteration;
            s["pseudo_label_changes"] = it.pseudo_label_changes;
            s["accuracy"] = it.accuracy ? json(*it.accuracy) : json(nullptr);
            s["laplacian_energy"] =
                it.laplacian_energy ? json(*it.laplacian_energy) : json(nullptr);
            r["per_iteration"].push_back(std::move(s));
        }
        j["rows"].push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

std::string report_to_csv(const Report& report) {
    std::string out =
        "task,method,final_accuracy,iterations_run,wall_clock_seconds,task_seed,source_hash,"
        "target_hash\n";
    for (const auto& row : report.rows) {
        out += row.task + "," + row.method + "," + format_double(row.final_accuracy) + "," +
               std::to_string(row.iterations_run) + "," + format_double(row.wall_clock_seconds) +
               "," + std::to_string(row.task_seed) + "," + row.source_hash + "," +
               row.target_hash + "\n";
    }
    return out;
}

void write_report(const Report& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::tm tm_utc{};
    gmtime_r(&tt, &tm_utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);

    auto write_file = [&](const std::string& name, const std::string& content) {
        const std::string path = (fs::path(out_dir) / name).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write '" + path + "'");
        out << content;
        if (!out) throw IoError("write failed for '" + path + "'");
    };
    write_file("report.json", report_to_json(report, stamp));
    write_file("report.csv", report_to_csv(report));
}

void export_embedding(const AdaptationResult& result, const IntVector& labels,
                      const std::string& path, std::optional<int> max_dims) {
    const Matrix& Z = result.projection.Z;
    if (Z.size() == 0) throw ValidationError("export: result carries no embedding");
    if (labels.size() != Z.cols()) {
        throw ValidationError("export: label count does not match embedding columns");
    }
    const Eigen::Index n_t = result.target_predictions.size();
    const Eigen::Index n_s = Z.cols() - n_t;
    if (n_s < 0) throw ValidationError("export: more predictions than embedded samples");
    Eigen::Index k = Z.rows();
    if (max_dims) {
        if (*max_dims < 1) throw ValidationError("export: dimension cap must be positive");
        k = std::min<Eigen::Index>(k, *max_dims);
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "sample_id,domain,class";
    for (Eigen::Index d = 0; d < k; ++d) out << ",z" << (d + 1);
    out << "\n";
    for (Eigen::Index i = 0; i < Z.cols(); ++i) {
        out << i << "," << (i < n_s ? "source" : "target") << "," << labels(i);
        for (Eigen::Index d = 0; d < k; ++d) out << "," << format_double(Z(d, i));
        out << "\n";
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace da
