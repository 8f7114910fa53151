#pragma once

#include <optional>
#include <string>
#include <vector>

#include "da/dataset.hpp"
#include "da/graph.hpp"
#include "da/subspace.hpp"

namespace da {

/// tca: marginal alignment only, NN inference, single pass.
/// jda: marginal + conditional alignment, NN inference.
/// cdda: jda + repulsive force term, NN inference.
/// gada: jda + graph label propagation (no repulsive force).
/// dgada: repulsive force + graph label propagation.
enum class Method { tca, jda, cdda, gada, dgada };

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct AdaptationConfig {
    Method method = Method::dgada;
    int k = 100;
    double lambda = 0.1;
    double alpha = 0.99;
    int iterations = 10;
    std::optional<KernelSpec> kernel;
    SigmaRule sigma_rule = SigmaRule::median();
    std::optional<int> knn;
    bool standardize = false;
    bool normalize_mmd = false;
    std::uint64_t seed = 0;

    void validate() const;

    /// Named presets: "coil" and "uspsmnist" use lambda=0.1, alpha=0.99;
    /// "office" uses lambda=1; "synthetic" uses k=4 with an rbf kernel and
    /// a sparsified affinity graph.
    static AdaptationConfig preset(const std::string& name);
};

struct IterationStats {
    int iteration = 0;
    std::optional<double> accuracy;  // present when the target has ground truth
    int pseudo_label_changes = 0;
    std::optional<double> laplacian_energy;  // present for graph-inference methods
};

struct AdaptationResult {
    ProjectionResult projection;
    IntVector target_predictions;
    std::vector<IterationStats> per_iteration;
    std::optional<double> final_accuracy;

    // Instrumentation: how often each builder ran, for ablation checks.
    int repulsive_builds = 0;
    int affinity_builds = 0;
};

/// 1-NN with Euclidean distance; ties go to the lowest source column index.
IntVector nn_classify(const Matrix& Zs, const IntVector& labels_s, const Matrix& Zt);

/// Fraction of exact matches.
double accuracy(const IntVector& predictions, const IntVector& truth);

/// Full adaptation loop: warm start with the marginal-only projection and NN
/// pseudo-labels, then alternate subspace solves and label inference until
/// the pseudo-labels stop changing or the iteration cap is reached.
AdaptationResult run_adaptation(const DomainDataset& source, const DomainDataset& target,
                                const AdaptationConfig& cfg);

}  // namespace da
