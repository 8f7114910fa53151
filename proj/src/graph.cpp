#include "da/graph.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace da {

namespace {

Matrix pairwise_squared_distances(const Matrix& Z) {
    const Eigen::Index n = Z.cols();
    Vector sq = Z.colwise().squaredNorm();
    Matrix D = sq.replicate(1, n) + sq.transpose().replicate(n, 1) - 2.0 * (Z.transpose() * Z);
    return D.cwiseMax(0.0);
}

double median_pairwise_distance(const Matrix& D2) {
    const Eigen::Index n = D2.rows();
    std::vector<double> dists;
    dists.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j + 1; i < n; ++i) {
            dists.push_back(std::sqrt(D2(i, j)));
        }
    }
    if (dists.empty()) throw ValidationError("affinity: need at least two samples");
    const size_t mid = dists.size() / 2;
    std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
    double hi = dists[mid];
    if (dists.size() % 2 == 0) {
        double lo = *std::max_element(dists.begin(), dists.begin() + mid);
        return 0.5 * (lo + hi);
    }
    return hi;
}

// Keep w_ij when j is among i's p nearest neighbours or i among j's, then
// re-symmetrize by max.
void knn_sparsify(Matrix& W, const Matrix& D2, int p) {
    const Eigen::Index n = W.rows();
    Eigen::MatrixXi near = Eigen::MatrixXi::Zero(n, n);  // near(i,j): i in j's p nearest
    std::vector<int> order;
    for (Eigen::Index j = 0; j < n; ++j) {
        order.resize(static_cast<size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        order.erase(std::remove(order.begin(), order.end(), static_cast<int>(j)), order.end());
        const int take = std::min<int>(p, static_cast<int>(order.size()));
        std::partial_sort(order.begin(), order.begin() + take, order.end(),
                          [&](int a, int b) { return D2(a, j) < D2(b, j); });
        for (int t = 0; t < take; ++t) near(order[t], j) = 1;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!(near(i, j) || near(j, i))) W(i, j) = 0.0;
        }
    }
    W = W.cwiseMax(W.transpose().eval());
}

}  // namespace

AffinityGraph build_affinity(const Matrix& Z, SigmaRule rule, std::optional<int> knn) {
    const Eigen::Index n = Z.cols();
    if (n < 2) throw ValidationError("affinity: need at least two samples");
    if (knn && *knn < 1) throw ValidationError("affinity: neighbour count must be positive");
    if (rule.kind == SigmaRule::Kind::fixed && !(rule.value > 0.0)) {
        throw ValidationError("affinity: fixed sigma must be positive");
    }

    Matrix D2 = pairwise_squared_distances(Z);
    double sigma = rule.kind == SigmaRule::Kind::fixed ? rule.value : median_pairwise_distance(D2);
    if (!(sigma > 0.0)) {
        throw NumericError(
            "affinity: median pairwise distance is zero (identical samples); use a fixed sigma");
    }

    Matrix W = (-D2.array() / (2.0 * sigma * sigma)).exp().matrix();
    W.diagonal().setZero();
    if (knn) knn_sparsify(W, D2, *knn);

    AffinityGraph g;
    g.W = std::move(W);
    g.degrees = g.W.rowwise().sum();
    g.sigma = sigma;
    return g;
}

LabelMatrix build_initial_labels(const IntVector& source_labels, const IntVector& target_pseudo,
                                 int C) {
    if (C < 1) throw ValidationError("labels: class count must be positive");
    Matrix Y = Matrix::Zero(source_labels.size() + target_pseudo.size(), C);
    auto fill = [&](const IntVector& lab, Eigen::Index offset) {
        for (Eigen::Index i = 0; i < lab.size(); ++i) {
            const int c = lab(i);
            if (c < 1 || c > C) {
                throw ValidationError("labels: label " + std::to_string(c) + " outside 1.." +
                                      std::to_string(C));
            }
            Y(offset + i, c - 1) = 1.0;
        }
    };
    fill(source_labels, 0);
    fill(target_pseudo, source_labels.size());
    return {Y, LabelMatrix::Stage::initial};
}

LabelMatrix propagate(const AffinityGraph& graph, const LabelMatrix& Y0, double alpha) {
    if (Y0.stage != LabelMatrix::Stage::initial) {
        throw ValidationError("propagate: expected an initial label matrix");
    }
    const Eigen::Index n = graph.size();
    if (Y0.values.rows() != n) {
        throw ValidationError("propagate: label matrix and graph size disagree");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("propagate: alpha must lie in (0,1)");
    }

    Matrix S = Matrix(graph.degrees.asDiagonal()) - alpha * graph.W;
    Eigen::LLT<Matrix> llt(S);
    if (llt.info() != Eigen::Success) {
        // Disconnected vertices or heavy sparsification can leave S
        // near-singular; retry once with a relative ridge before giving up.
        const double ridge = 1e-10 * graph.degrees.mean();
        S += ridge * Matrix::Identity(n, n);
        llt.compute(S);
        if (llt.info() != Eigen::Success) {
            throw NumericError("propagate: propagation system is not positive definite");
        }
    }
    return {llt.solve(Y0.values), LabelMatrix::Stage::propagated};
}

double laplacian_energy(const LabelMatrix& Y, const AffinityGraph& graph) {
    const Eigen::Index n = graph.size();
    if (Y.values.rows() != n) throw ValidationError("energy: label matrix and graph size disagree");
    Vector dinv_sqrt(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = graph.degrees(i);
        dinv_sqrt(i) = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
    }
    Matrix Yn = dinv_sqrt.asDiagonal() * Y.values;  // D^{-1/2} Y
    Matrix WYn = graph.W * Yn;
    return (Y.values.array() * Y.values.array()).sum() - (Yn.array() * WYn.array()).sum();
}

IntVector argmax_labels(const LabelMatrix& Y, int row_begin, int row_end) {
    if (row_begin < 0 || row_end > Y.rows() || row_begin >= row_end) {
        throw ValidationError("argmax: invalid row range");
    }
    IntVector out(row_end - row_begin);
    for (int i = row_begin; i < row_end; ++i) {
        Eigen::Index best = 0;
        double best_val = Y.values(i, 0);
        for (Eigen::Index c = 1; c < Y.values.cols(); ++c) {
            if (Y.values(i, c) > best_val) {  // strict: ties resolve to the lowest class
                best_val = Y.values(i, c);
                best = c;
            }
        }
        out(i - row_begin) = static_cast<int>(best) + 1;
    }
    return out;
}

}  // namespace da
