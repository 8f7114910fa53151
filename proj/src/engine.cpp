#include "da/engine.hpp"

#include <cmath>
#include <string>

#include "da/mmd.hpp"

namespace da {

std::string method_name(Method m) {
    switch (m) {
        case Method::tca: return "tca";
        case Method::jda: return "jda";
        case Method::cdda: return "cdda";
        case Method::gada: return "gada";
        case Method::dgada: return "dgada";
    }
    throw ValidationError("unknown method enum value");
}

Method parse_method(const std::string& name) {
    if (name == "tca") return Method::tca;
    if (name == "jda") return Method::jda;
    if (name == "cdda") return Method::cdda;
    if (name == "gada") return Method::gada;
    if (name == "dgada") return Method::dgada;
    throw ValidationError("unknown method '" + name + "'");
}

void AdaptationConfig::validate() const {
    if (k < 1) throw ValidationError("config: k must be >= 1");
    if (!(lambda >= 0.0)) throw ValidationError("config: lambda must be non-negative");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("config: alpha must lie in (0,1)");
    if (iterations < 1) throw ValidationError("config: iterations must be >= 1");
    if (knn && *knn < 1) throw ValidationError("config: knn must be >= 1");
    if (kernel && kernel->kind == KernelSpec::Kind::rbf && !(kernel->gamma > 0.0)) {
        throw ValidationError("config: rbf gamma must be positive");
    }
}

AdaptationConfig AdaptationConfig::preset(const std::string& name) {
    AdaptationConfig cfg;
    if (name == "coil" || name == "uspsmnist") {
        cfg.k = 100;
        cfg.lambda = 0.1;
        cfg.alpha = 0.99;
        cfg.knn = 5;
    } else if (name == "office") {
        cfg.k = 100;
        cfg.lambda = 1.0;
        cfg.alpha = 0.99;
    } else if (name == "synthetic") {
        cfg.k = 4;
        cfg.lambda = 0.1;
        cfg.alpha = 0.95;
        cfg.knn = 20;
        cfg.kernel = KernelSpec::rbf(0.2);
    } else {
        throw ValidationError("unknown preset '" + name + "'");
    }
    return cfg;
}

IntVector nn_classify(const Matrix& Zs, const IntVector& labels_s, const Matrix& Zt) {
    if (Zs.cols() == 0) throw ValidationError("nn: source embedding is empty");
    if (Zs.rows() != Zt.rows()) throw ValidationError("nn: embedding dimensions disagree");
    if (labels_s.size() != Zs.cols()) throw ValidationError("nn: label count mismatch");

    // d^2(t, s) = |z_t|^2 + |z_s|^2 - 2 z_t . z_s; the |z_t|^2 term is
    // constant per target sample and cannot change the argmin.
    Vector sq_s = Zs.colwise().squaredNorm();
    Matrix cross = Zt.transpose() * Zs;  // n_t x n_s
    IntVector out(Zt.cols());
    for (Eigen::Index t = 0; t < Zt.cols(); ++t) {
        Eigen::Index best = 0;
        double best_val = sq_s(0) - 2.0 * cross(t, 0);
        for (Eigen::Index s = 1; s < Zs.cols(); ++s) {
            const double val = sq_s(s) - 2.0 * cross(t, s);
            if (val < best_val) {  // strict: ties go to the lowest source index
                best_val = val;
                best = s;
            }
        }
        out(t) = labels_s(best);
    }
    return out;
}

double accuracy(const IntVector& predictions, const IntVector& truth) {
    if (predictions.size() != truth.size()) {
        throw ValidationError("accuracy: prediction and truth lengths disagree");
    }
    if (predictions.size() == 0) throw ValidationError("accuracy: empty input");
    int hits = 0;
    for (Eigen::Index i = 0; i < predictions.size(); ++i) {
        if (predictions(i) == truth(i)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

AdaptationResult run_adaptation(const DomainDataset& source, const DomainDataset& target,
                                const AdaptationConfig& cfg) {
    cfg.validate();
    if (source.feature_count() != target.feature_count()) {
        throw ValidationError("adaptation: source and target feature dimensions disagree");
    }

    DomainDataset src_store = cfg.standardize ? source.standardized() : source;
    DomainDataset tgt_store = cfg.standardize ? target.standardized() : target;

    JointData joint = JointData::from(src_store, tgt_store);
    const int n_s = joint.n_s;
    const int n_t = joint.n_t;
    const IntVector& y_s = src_store.training_labels();
    const int C = joint.C;

    const Matrix B = cfg.kernel ? gram_matrix(joint.X, *cfg.kernel) : joint.X;

    const bool graph_method = cfg.method == Method::gada || cfg.method == Method::dgada;
    const bool repulsive_method = cfg.method == Method::cdda || cfg.method == Method::dgada;
    CompositeMode mode = CompositeMode::jda;
    if (cfg.method == Method::tca) mode = CompositeMode::tca;
    if (repulsive_method) mode = CompositeMode::cdda;

    AdaptationResult result;
    MmdMatrix M0 = build_marginal(n_s, n_t);

    // Warm start: marginal-only projection, then nearest-neighbour
    // pseudo-labels in that embedding.
    ProjectionResult proj = solve_projection(B, M0, cfg.lambda, cfg.k);
    IntVector pseudo = nn_classify(proj.Z.leftCols(n_s), y_s, proj.Z.rightCols(n_t));

    const int T = cfg.method == Method::tca ? 1 : cfg.iterations;
    for (int t = 1; t <= T; ++t) {
        try {
            SubdomainIndex idx = SubdomainIndex::build(y_s, pseudo, C);

            std::vector<MmdMatrix> conditionals;
            if (cfg.method != Method::tca) {
                conditionals.reserve(C);
                for (int c = 1; c <= C; ++c) conditionals.push_back(build_conditional(idx, c));
            }
            MmdMatrix repulsive;
            if (repulsive_method) {
                repulsive = build_repulsive(idx);
                ++result.repulsive_builds;
            }
            MmdMatrix M = assemble_composite(M0, conditionals,
                                             repulsive_method ? &repulsive : nullptr, mode,
                                             cfg.normalize_mmd);

            proj = solve_projection(B, M, cfg.lambda, cfg.k);
            Matrix Zs = proj.Z.leftCols(n_s);
            Matrix Zt = proj.Z.rightCols(n_t);

            IterationStats stats;
            stats.iteration = t;
            IntVector next;
            if (graph_method) {
                AffinityGraph graph = build_affinity(proj.Z, cfg.sigma_rule, cfg.knn);
                ++result.affinity_builds;
                LabelMatrix y0 = build_initial_labels(y_s, pseudo, C);
                LabelMatrix ystar = propagate(graph, y0, cfg.alpha);
                next = argmax_labels(ystar, n_s, n_s + n_t);
                stats.laplacian_energy = laplacian_energy(ystar, graph);
            } else {
                next = nn_classify(Zs, y_s, Zt);
            }

            int changes = 0;
            for (int i = 0; i < n_t; ++i) {
                if (next(i) != pseudo(i)) ++changes;
            }
            stats.pseudo_label_changes = changes;
            if (target.has_evaluation_labels()) {
                stats.accuracy = accuracy(next, target.evaluation_labels());
            }
            result.per_iteration.push_back(stats);
            pseudo = next;
            if (changes == 0) break;
        } catch (const NumericError& e) {
            throw NumericError("iteration " + std::to_string(t) + ": " + e.what());
        }
    }

    result.projection = std::move(proj);
    result.target_predictions = pseudo;
    if (target.has_evaluation_labels()) {
        result.final_accuracy = accuracy(pseudo, target.evaluation_labels());
    }
    return result;
}

}  // namespace da
