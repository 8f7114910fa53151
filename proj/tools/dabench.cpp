// dabench: cross-domain adaptation benchmark harness.
//
// Subcommands:
//   run              execute a suite config, write report.json/report.csv
//   export-embedding run one (task, method) cell and dump its embedding
//   gen-synthetic    materialize a synthetic source/target pair as CSV
//
// Exit codes: 0 success, 1 config error, 2 runtime failure.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "da/bench.hpp"
#include "da/config.hpp"

namespace {

int run_command(const std::string& config_path, std::optional<int> jobs,
                std::optional<std::string> out_dir) {
    da::SuiteConfig suite;
    try {
        suite = da::parse_suite_config(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    }
    if (jobs) suite.jobs = *jobs;
    if (out_dir) suite.out_dir = *out_dir;
    if (suite.jobs < 1) {
        std::fprintf(stderr, "config error: --jobs must be >= 1\n");
        return 1;
    }

    try {
        da::Report report = da::run_suite(suite);
        da::write_report(report, suite.out_dir);
        std::printf("%-24s %-8s %10s %6s\n", "task", "method", "accuracy", "iters");
        for (const auto& row : report.rows) {
            if (row.final_accuracy >= 0.0) {
                std::printf("%-24s %-8s %9.2f%% %6d\n", row.task.c_str(), row.method.c_str(),
                            100.0 * row.final_accuracy, row.iterations_run);
            } else {
                std::printf("%-24s %-8s %10s %6d\n", row.task.c_str(), row.method.c_str(), "n/a",
                            row.iterations_run);
            }
        }
        std::printf("report written to %s\n", suite.out_dir.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "run failed: %s\n", e.what());
        return 2;
    }
}

int export_command(const std::string& config_path, const std::string& task_name,
                   const std::string& method_name, const std::string& out_path,
                   std::optional<int> dims) {
    da::SuiteConfig suite;
    da::Method method;
    const da::TaskSpec* task = nullptr;
    try {
        suite = da::parse_suite_config(config_path);
        method = da::parse_method(method_name);
        for (const auto& t : suite.tasks) {
            if (t.name == task_name) task = &t;
        }
        if (task == nullptr) {
            throw da::ValidationError("config has no task named '" + task_name + "'");
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    }

    try {
        const std::uint64_t seed = da::task_seed_for(suite.seed, task->name);
        auto [source, target] = da::materialize_task_data(*task, seed);
        da::AdaptationConfig cfg = task->config;
        cfg.method = method;
        cfg.seed = seed;
        da::AdaptationResult result = da::run_adaptation(source, target, cfg);

        da::IntVector labels(source.sample_count() + target.sample_count());
        labels.head(source.sample_count()) = source.training_labels();
        labels.tail(target.sample_count()) = result.target_predictions;
        da::export_embedding(result, labels, out_path, dims);
        std::printf("embedding written to %s\n", out_path.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "run failed: %s\n", e.what());
        return 2;
    }
}

int gen_synthetic_command(const std::string& spec_path, std::uint64_t seed,
                          const std::string& out_dir) {
    da::SyntheticSpec spec;
    try {
        spec = spec_path == "builtin" ? da::SyntheticSpec::four_class_default()
                                      : da::parse_synthetic_spec(spec_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    }

    try {
        auto [source, target] = da::make_synthetic_pair(spec, seed);
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw da::IoError("cannot create '" + out_dir + "': " + ec.message());
        const std::string src_path = (fs::path(out_dir) / "source.csv").string();
        const std::string tgt_path = (fs::path(out_dir) / "target.csv").string();
        da::save_csv(source.features(), source.training_labels(), src_path);
        da::save_csv(target.features(), target.evaluation_labels(), tgt_path);
        std::printf("wrote %s and %s\n", src_path.c_str(), tgt_path.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "run failed: %s\n", e.what());
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cross-domain adaptation benchmark harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<int> jobs;
    std::optional<std::string> out_dir;
    auto* run = app.add_subcommand("run", "execute a suite config");
    run->add_option("--config", config_path, "suite config file")->required();
    run->add_option("--jobs", jobs, "max tasks run in parallel");
    run->add_option("--out", out_dir, "report output directory");

    std::string task_name, method_name, export_out;
    std::optional<int> dims;
    auto* exp = app.add_subcommand("export-embedding", "dump one cell's embedding as CSV");
    exp->add_option("--config", config_path, "suite config file")->required();
    exp->add_option("--task", task_name, "task name from the config")->required();
    exp->add_option("--method", method_name, "tca|jda|cdda|gada|dgada")->required();
    exp->add_option("--out", export_out, "output CSV path")->required();
    exp->add_option("--dims", dims, "cap on exported dimensions");

    std::string spec_path, gen_out;
    std::uint64_t seed = 0;
    auto* gen = app.add_subcommand("gen-synthetic", "materialize a synthetic pair as CSV");
    gen->add_option("--spec", spec_path, "synthetic spec file, or 'builtin'")->required();
    gen->add_option("--seed", seed, "generator seed")->required();
    gen->add_option("--out", gen_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (run->parsed()) return run_command(config_path, jobs, out_dir);
    if (exp->parsed()) {
        return export_command(config_path, task_name, method_name, export_out, dims);
    }
    return gen_synthetic_command(spec_path, seed, gen_out);
}
