// Acceptance harness: every shipped guarantee is checked by one criterion
// and reported as a single [PASS]/[FAIL]/[SKIP] line with its runtime.
// The process exit code is the number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "da/bench.hpp"
#include "da/engine.hpp"
#include "da/graph.hpp"
#include "da/mmd.hpp"
#include "da/subspace.hpp"
#include "da/synthetic.hpp"
#include "da/turntable.hpp"
#include "oracles.hpp"

using namespace da;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

void report(int id, const std::string& name, const std::string& status, double seconds,
            const std::string& detail) {
    std::printf("[%s] %d %s (%.1fs) %s\n", status.c_str(), id, name.c_str(), seconds,
                detail.c_str());
    std::fflush(stdout);
    if (status == "FAIL") ++g_failures;
}

/// Runs one criterion, timing it and turning exceptions into failures.
/// `fn` returns a detail string on success and throws std::runtime_error
/// (or any std::exception) on failure.
template <typename Fn>
void criterion(int id, const std::string& name, double budget_seconds, Fn&& fn) {
    const auto start = Clock::now();
    std::string status = "PASS";
    std::string detail;
    try {
        detail = fn();
    } catch (const std::exception& e) {
        status = "FAIL";
        detail = e.what();
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (status == "PASS" && budget_seconds > 0.0 && seconds > budget_seconds) {
        status = "FAIL";
        detail += " [exceeded " + fmt("%.0f", budget_seconds) + "s budget]";
    }
    report(id, name, status, seconds, detail);
}

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// ---------------------------------------------------------------------------
// Random instances shared by the coefficient-matrix criteria.

struct MmdInstance {
    Matrix X;
    Matrix A;
    IntVector ys;
    IntVector yt;
    int C = 0;
};

std::vector<MmdInstance> make_mmd_instances(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<MmdInstance> out;
    for (int rep = 0; rep < count; ++rep) {
        MmdInstance inst;
        inst.C = 2 + static_cast<int>(rng() % 3);  // 2..4
        std::uniform_int_distribution<int> m_draw(2, 10);
        const int m = m_draw(rng);
        std::uniform_int_distribution<int> n_draw(inst.C, 40);
        const int n_s = n_draw(rng);
        const int n_t = n_draw(rng);

        inst.X = Matrix(m, n_s + n_t);
        for (int i = 0; i < inst.X.size(); ++i) inst.X.data()[i] = normal(rng);
        const int k = 1 + static_cast<int>(rng() % m);
        inst.A = Matrix(m, k);
        for (int i = 0; i < inst.A.size(); ++i) inst.A.data()[i] = normal(rng);

        // every class present on both sides so no estimator degenerates
        inst.ys = IntVector(n_s);
        inst.yt = IntVector(n_t);
        for (int i = 0; i < n_s; ++i) {
            inst.ys(i) = i < inst.C ? i + 1 : 1 + static_cast<int>(rng() % inst.C);
        }
        for (int j = 0; j < n_t; ++j) {
            inst.yt(j) = j < inst.C ? j + 1 : 1 + static_cast<int>(rng() % inst.C);
        }
        out.push_back(std::move(inst));
    }
    return out;
}

double trace_objective(const Matrix& A, const Matrix& X, const MmdMatrix& M) {
    return (A.transpose() * X * M.coefficients * X.transpose() * A).trace();
}

std::string check_trace_identities(const std::vector<MmdInstance>& instances) {
    double worst = 0.0;
    for (const MmdInstance& inst : instances) {
        const int n_s = static_cast<int>(inst.ys.size());
        const int n_t = static_cast<int>(inst.yt.size());
        SubdomainIndex idx = SubdomainIndex::build(inst.ys, inst.yt, inst.C);
        const Matrix Z = inst.A.transpose() * inst.X;

        const double tr0 = trace_objective(inst.A, inst.X, build_marginal(n_s, n_t));
        worst = std::max(worst, rel_err(tr0, oracle::marginal_distance(Z, n_s, n_t)));

        for (int c = 1; c <= inst.C; ++c) {
            const double trc = trace_objective(inst.A, inst.X, build_conditional(idx, c));
            worst = std::max(worst, rel_err(trc, oracle::conditional_distance(Z, idx, c)));
        }

        const double trr = trace_objective(inst.A, inst.X, build_repulsive(idx));
        worst = std::max(worst, rel_err(trr, oracle::repulsive_distance(Z, idx)));
    }
    if (worst > 1e-10) fail("trace identity rel err " + fmt("%.2e", worst) + " > 1e-10");
    return "max rel err " + fmt("%.2e", worst) + " over " +
           std::to_string(instances.size()) + " instances";
}

std::string check_matrix_properties(const std::vector<MmdInstance>& instances) {
    double worst_sym = 0.0, worst_row = 0.0, worst_eig = 0.0;
    for (const MmdInstance& inst : instances) {
        const int n_s = static_cast<int>(inst.ys.size());
        const int n_t = static_cast<int>(inst.yt.size());
        SubdomainIndex idx = SubdomainIndex::build(inst.ys, inst.yt, inst.C);

        std::vector<MmdMatrix> mats;
        mats.push_back(build_marginal(n_s, n_t));
        for (int c = 1; c <= inst.C; ++c) mats.push_back(build_conditional(idx, c));
        mats.push_back(build_repulsive_s2t(idx));
        mats.push_back(build_repulsive_t2s(idx));

        for (const MmdMatrix& M : mats) {
            const Matrix& W = M.coefficients;
            worst_sym = std::max(worst_sym, (W - W.transpose()).cwiseAbs().maxCoeff());
            worst_row = std::max(worst_row, W.rowwise().sum().cwiseAbs().maxCoeff());
            Eigen::SelfAdjointEigenSolver<Matrix> es(W, Eigen::EigenvaluesOnly);
            worst_eig = std::min(worst_eig, es.eigenvalues().minCoeff());
        }
    }
    if (worst_sym > 1e-12) fail("symmetry defect " + fmt("%.2e", worst_sym) + " > 1e-12");
    if (worst_row > 1e-12) fail("row sum defect " + fmt("%.2e", worst_row) + " > 1e-12");
    if (worst_eig < -1e-10) fail("min eigenvalue " + fmt("%.2e", worst_eig) + " < -1e-10");
    return "sym " + fmt("%.1e", worst_sym) + ", row sum " + fmt("%.1e", worst_row) +
           ", min eig " + fmt("%.1e", worst_eig);
}

std::string check_pencil_contract() {
    std::mt19937_64 rng(202608);
    std::normal_distribution<double> normal;
    double worst_res = 0.0, worst_con = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 5 + static_cast<int>(rng() % 56);  // 5..60
        Matrix R(n, n), Q(n, n);
        for (int i = 0; i < R.size(); ++i) R.data()[i] = normal(rng);
        for (int i = 0; i < Q.size(); ++i) Q.data()[i] = normal(rng);
        Matrix S1 = 0.5 * (R + R.transpose());
        Matrix S2 = Q * Q.transpose() + (0.1 + 0.9 * (rng() % 100) / 100.0) *
                                            Matrix::Identity(n, n);
        const int k = 1 + static_cast<int>(rng() % n);

        PencilSolution sol = solve_symmetric_pencil(S1, S2, k);
        const Matrix lhs = S1 * sol.vectors;
        const Matrix rhs = S2 * sol.vectors * sol.values.asDiagonal();
        worst_res = std::max(worst_res, (lhs - rhs).norm() / lhs.norm());
        worst_con = std::max(
            worst_con,
            (sol.vectors.transpose() * S2 * sol.vectors - Matrix::Identity(k, k)).norm());
    }
    if (worst_res > 1e-8) fail("residual " + fmt("%.2e", worst_res) + " > 1e-8");
    if (worst_con > 1e-8) fail("constraint defect " + fmt("%.2e", worst_con) + " > 1e-8");

    double worst_val = 0.0;
    for (int rep = 0; rep < 12; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 7);  // 2..8
        Matrix R(n, n), Q(n, n);
        for (int i = 0; i < R.size(); ++i) R.data()[i] = normal(rng);
        for (int i = 0; i < Q.size(); ++i) Q.data()[i] = normal(rng);
        Matrix S1 = 0.5 * (R + R.transpose());
        Matrix S2 = Q * Q.transpose() + 0.5 * Matrix::Identity(n, n);
        PencilSolution sol = solve_symmetric_pencil(S1, S2, n);
        const std::vector<double> want = oracle::pencil_eigenvalues(S1, S2);
        for (int i = 0; i < n; ++i) {
            worst_val = std::max(worst_val, rel_err(sol.values(i), want[i]));
        }
    }
    if (worst_val > 1e-8) fail("oracle eigenvalue gap " + fmt("%.2e", worst_val) + " > 1e-8");
    return "residual " + fmt("%.1e", worst_res) + ", constraint " + fmt("%.1e", worst_con) +
           ", oracle gap " + fmt("%.1e", worst_val);
}

std::string check_propagation_oracle() {
    std::mt19937_64 rng(404212);
    std::normal_distribution<double> normal;
    double worst_solve = 0.0, worst_limit = 0.0, worst_energy = 0.0;
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 3 + static_cast<int>(rng() % 8);  // 3..10
        const int C = 1 + static_cast<int>(rng() % 3);
        Matrix Z(2, n);
        for (int i = 0; i < Z.size(); ++i) Z.data()[i] = normal(rng);
        AffinityGraph g = build_affinity(Z, SigmaRule::median());

        LabelMatrix y0;
        y0.stage = LabelMatrix::Stage::initial;
        y0.values = Matrix::Zero(n, C);
        for (int i = 0; i < n; ++i) y0.values(i, static_cast<int>(rng() % C)) = 1.0;

        const double alpha = 0.05 + 0.9 * (rng() % 100) / 100.0;
        LabelMatrix ystar = propagate(g, y0, alpha);
        const Matrix want = oracle::propagate_by_inverse(g.W, alpha, y0.values);
        worst_solve = std::max(worst_solve, (ystar.values - want).cwiseAbs().maxCoeff());

        LabelMatrix tiny = propagate(g, y0, 1e-12);
        const Matrix unsmoothed = g.degrees.cwiseInverse().asDiagonal() * y0.values;
        worst_limit = std::max(worst_limit, (tiny.values - unsmoothed).cwiseAbs().maxCoeff());

        const double energy = laplacian_energy(y0, g);
        const double want_energy = oracle::laplacian_double_sum(y0.values, g.W);
        worst_energy = std::max(worst_energy, std::abs(energy - want_energy));
    }
    if (worst_solve > 1e-10) fail("solve vs inverse " + fmt("%.2e", worst_solve) + " > 1e-10");
    if (worst_limit > 1e-9) fail("alpha->0 limit " + fmt("%.2e", worst_limit) + " > 1e-9");
    if (worst_energy > 1e-10) {
        fail("energy forms differ by " + fmt("%.2e", worst_energy) + " > 1e-10");
    }
    return "solve " + fmt("%.1e", worst_solve) + ", limit " + fmt("%.1e", worst_limit) +
           ", energy " + fmt("%.1e", worst_energy);
}

// ---------------------------------------------------------------------------
// Benchmark-scale criteria. Per-run convergence traces feed the convergence
// criterion, which covers the methods that iterate (the marginal-only
// baseline runs a single pass by contract and has no convergence notion).

struct RunTrace {
    Method method;
    std::vector<int> changes;  // pseudo-label changes per recorded iteration
};

std::vector<RunTrace> g_traces;

bool converged_within(const RunTrace& trace, int limit) {
    for (size_t i = 0; i < trace.changes.size(); ++i) {
        if (static_cast<int>(i) + 1 <= limit && trace.changes[i] == 0) return true;
    }
    return false;
}

void record_trace(Method m, const AdaptationResult& result) {
    if (m == Method::tca) return;
    RunTrace t;
    t.method = m;
    for (const IterationStats& it : result.per_iteration) {
        t.changes.push_back(it.pseudo_label_changes);
    }
    g_traces.push_back(std::move(t));
}

std::string check_synthetic_ordering() {
    const std::vector<Method> methods{Method::tca, Method::jda, Method::gada, Method::cdda,
                                      Method::dgada};
    std::vector<double> sums(methods.size(), 0.0);
    const int n_seeds = 20;
    SyntheticSpec spec = SyntheticSpec::four_class_default();
    for (int seed = 1; seed <= n_seeds; ++seed) {
        auto [src, tgt] = make_synthetic_pair(spec, static_cast<std::uint64_t>(seed));
        for (size_t mi = 0; mi < methods.size(); ++mi) {
            AdaptationConfig cfg = AdaptationConfig::preset("synthetic");
            cfg.method = methods[mi];
            AdaptationResult res = run_adaptation(src, tgt, cfg);
            sums[mi] += res.final_accuracy.value();
            record_trace(methods[mi], res);
        }
    }
    const double tca = sums[0] / n_seeds, jda = sums[1] / n_seeds, gada = sums[2] / n_seeds,
                 cdda = sums[3] / n_seeds, dgada = sums[4] / n_seeds;
    const std::string means = "means tca " + fmt("%.3f", tca) + ", jda " + fmt("%.3f", jda) +
                              ", gada " + fmt("%.3f", gada) + ", cdda " + fmt("%.3f", cdda) +
                              ", dgada " + fmt("%.3f", dgada);
    const double slack = 0.01;  // one accuracy point
    if (dgada < cdda - slack) fail(means + "; dgada trails cdda by more than one point");
    if (dgada < gada - slack) fail(means + "; dgada trails gada by more than one point");
    if (gada < jda - slack) fail(means + "; gada trails jda by more than one point");
    if (jda < tca - slack) fail(means + "; jda trails tca by more than one point");
    return means;
}

std::string check_turntable_reproduction() {
    TurntableSpec spec;  // fixed default seed, 20 objects, 1024 features
    double cdda_sum = 0.0, dgada_sum = 0.0;
    for (PoseHalf source_half : {PoseHalf::quad13, PoseHalf::quad24}) {
        auto [src, tgt] = make_turntable_pair(spec, source_half);
        for (Method m : {Method::cdda, Method::dgada}) {
            AdaptationConfig cfg = AdaptationConfig::preset("coil");
            cfg.method = m;
            AdaptationResult res = run_adaptation(src, tgt, cfg);
            record_trace(m, res);
            (m == Method::cdda ? cdda_sum : dgada_sum) += res.final_accuracy.value();
        }
    }
    const double cdda = cdda_sum / 2.0, dgada = dgada_sum / 2.0;
    const std::string means = "mean cdda " + fmt("%.4f", cdda) + ", dgada " + fmt("%.4f", dgada);
    if (dgada < 0.98) fail(means + "; dgada mean below 0.98");
    if (std::abs(cdda - 0.9271) > 0.03) fail(means + "; cdda mean outside 0.9271 +- 0.03");
    return means;
}

bool usps_files_present(std::string& usps, std::string& mnist) {
    usps = resolve_data_path("usps_mnist/usps.csv");
    mnist = resolve_data_path("usps_mnist/mnist.csv");
    return std::filesystem::exists(usps) && std::filesystem::exists(mnist);
}

std::string check_usps_mnist(const std::string& usps_path, const std::string& mnist_path) {
    DomainDataset usps_s = load_dataset(usps_path, FileFormat::csv, Role::source, "usps");
    DomainDataset usps_t = load_dataset(usps_path, FileFormat::csv, Role::target, "usps");
    DomainDataset mnist_s = load_dataset(mnist_path, FileFormat::csv, Role::source, "mnist");
    DomainDataset mnist_t = load_dataset(mnist_path, FileFormat::csv, Role::target, "mnist");

    double cdda_sum = 0.0, dgada_sum = 0.0;
    struct Direction {
        const DomainDataset* src;
        const DomainDataset* tgt;
    };
    for (const Direction& d :
         {Direction{&usps_s, &mnist_t}, Direction{&mnist_s, &usps_t}}) {
        for (Method m : {Method::cdda, Method::dgada}) {
            AdaptationConfig cfg = AdaptationConfig::preset("uspsmnist");
            cfg.method = m;
            AdaptationResult res = run_adaptation(*d.src, *d.tgt, cfg);
            (m == Method::cdda ? cdda_sum : dgada_sum) += res.final_accuracy.value();
        }
    }
    const double cdda = cdda_sum / 2.0, dgada = dgada_sum / 2.0;
    const std::string means = "mean cdda " + fmt("%.4f", cdda) + ", dgada " + fmt("%.4f", dgada);
    if (std::abs(dgada - 0.7654) > 0.03) fail(means + "; dgada mean outside 0.7654 +- 0.03");
    if (std::abs(cdda - 0.6914) > 0.03) fail(means + "; cdda mean outside 0.6914 +- 0.03");
    return means;
}

std::string check_convergence() {
    if (g_traces.empty()) fail("no convergence traces were collected");
    int converged = 0;
    for (const RunTrace& t : g_traces) {
        if (converged_within(t, 5)) ++converged;
    }
    const double rate = static_cast<double>(converged) / static_cast<double>(g_traces.size());
    const std::string detail = std::to_string(converged) + "/" +
                               std::to_string(g_traces.size()) +
                               " iterative runs reach zero label changes within 5 iterations";
    if (rate < 0.90) fail(detail + " (< 90%)");
    return detail;
}

std::string check_determinism() {
    SuiteConfig suite;
    suite.seed = 20260818;
    suite.jobs = 1;
    TaskSpec task;
    task.name = "synthA->synthB";
    task.source.kind = task.target.kind = DataRef::Kind::synthetic;
    task.source.path = task.target.path = "builtin";
    task.preset = "synthetic";
    task.config = AdaptationConfig::preset("synthetic");
    task.methods = {Method::jda, Method::dgada};
    suite.tasks.push_back(task);

    Report r1 = run_suite(suite);
    Report r2 = run_suite(suite);
    for (Report* r : {&r1, &r2}) {
        for (ReportRow& row : r->rows) row.wall_clock_seconds = 0.0;
    }
    const std::string ts = "1970-01-01T00:00:00Z";
    if (report_to_json(r1, ts) != report_to_json(r2, ts)) {
        fail("JSON payloads differ between identical runs");
    }
    if (report_to_csv(r1) != report_to_csv(r2)) {
        fail("CSV payloads differ between identical runs");
    }

    const std::uint64_t task_seed = task_seed_for(suite.seed, task.name);
    auto [src, tgt] = materialize_task_data(task, task_seed);
    AdaptationConfig cfg = task.config;
    cfg.method = Method::dgada;
    cfg.seed = task_seed;
    AdaptationResult a = run_adaptation(src, tgt, cfg);
    AdaptationResult b = run_adaptation(src, tgt, cfg);
    if (a.target_predictions.size() != b.target_predictions.size() ||
        !(a.target_predictions == b.target_predictions)) {
        fail("predictions differ between identical runs");
    }
    return "reports and predictions are bit-identical across repeated runs";
}

}  // namespace

int main() {
    const auto instances = make_mmd_instances(100, 91501);

    criterion(1, "trace identities: coefficient matrices reproduce mean-gap norms", 5.0,
              [&] { return check_trace_identities(instances); });
    criterion(2, "coefficient matrix properties: symmetric, zero row sums, PSD parts", 0.0,
              [&] { return check_matrix_properties(instances); });
    criterion(3, "pencil solver: residual, constraint, and small-size oracle match", 0.0,
              [] { return check_pencil_contract(); });
    criterion(4, "label propagation: linear solve vs dense inverse, limits, energy", 0.0,
              [] { return check_propagation_oracle(); });
    criterion(5, "synthetic benchmark: discriminative and graph variants order correctly",
              120.0, [] { return check_synthetic_ordering(); });
    criterion(6, "turntable benchmark: repulsive and graph variants hit target accuracy",
              600.0, [] { return check_turntable_reproduction(); });

    std::string usps, mnist;
    if (usps_files_present(usps, mnist)) {
        criterion(7, "digit benchmark: cross-dataset accuracy near reference", 900.0,
                  [&] { return check_usps_mnist(usps, mnist); });
    } else {
        report(7, "digit benchmark: cross-dataset accuracy near reference", "SKIP", 0.0,
               "canonical feature files not found under DA_DATA_DIR (usps_mnist/usps.csv, "
               "usps_mnist/mnist.csv)");
    }

    criterion(8, "convergence: pseudo-labels stabilize within five iterations", 0.0,
              [] { return check_convergence(); });
    criterion(9, "determinism: identical suite runs produce identical payloads", 0.0,
              [] { return check_determinism(); });

    std::printf("acceptance: %d failed\n", g_failures);
    return g_failures;
}
