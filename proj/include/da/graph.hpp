#pragma once

#include <optional>

#include "da/types.hpp"

namespace da {

/// Gaussian affinity graph over embedded samples: w_ij = exp(-|z_i - z_j|^2 /
/// (2 sigma^2)), w_ii = 0, with degree diagonal d_ii = sum_j w_ij.
struct AffinityGraph {
    Matrix W;
    Vector degrees;
    double sigma = 0.0;

    int size() const { return static_cast<int>(W.rows()); }
};

struct SigmaRule {
    enum class Kind { median, fixed };
    Kind kind = Kind::median;
    double value = 0.0;  // used when kind == fixed

    static SigmaRule median() { return {Kind::median, 0.0}; }
    static SigmaRule fixed(double sigma) { return {Kind::fixed, sigma}; }
};

/// Build the affinity graph on an embedding Z (k x n, one column per sample).
/// The median rule sets sigma to the median pairwise Euclidean distance.
/// With knn = p the support is sparsified to symmetric p-nearest-neighbor
/// pairs (kept if either endpoint ranks the other among its p nearest) and
/// degrees are recomputed.
AffinityGraph build_affinity(const Matrix& Z, SigmaRule rule, std::optional<int> knn = {});

/// n x C soft label assignment.
struct LabelMatrix {
    enum class Stage { initial, propagated };
    Matrix values;
    Stage stage = Stage::initial;

    int rows() const { return static_cast<int>(values.rows()); }
    int cols() const { return static_cast<int>(values.cols()); }
};

/// One-hot rows from source labels (true) and target pseudo-labels, in joint
/// column order.
LabelMatrix build_initial_labels(const IntVector& source_labels, const IntVector& target_pseudo,
                                 int C);

/// Solve (D - alpha W) Y* = Y0 directly (never via an explicit inverse).
/// alpha in (0,1) makes D - alpha W strictly diagonally dominant; on a
/// near-singular system a ridge of 1e-10 * mean(d_ii) is added once and the
/// solve retried.
LabelMatrix propagate(const AffinityGraph& graph, const LabelMatrix& Y0, double alpha);

/// tr(Y^T (I - D^{-1/2} W D^{-1/2}) Y); diagnostic used by tests and
/// convergence traces. Nonnegative up to round-off.
double laplacian_energy(const LabelMatrix& Y, const AffinityGraph& graph);

/// Per-row argmax over rows [row_begin, row_end), ties broken toward the
/// lowest class index; returns labels in 1..C.
IntVector argmax_labels(const LabelMatrix& Y, int row_begin, int row_end);

}  // namespace da
