// Independent scalar-loop reference implementations used to cross-check the
// library's matrix algebra. Everything here is written with plain loops and
// textbook formulas on purpose: these are oracles, not production code.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "da/dataset.hpp"

namespace oracle {

using da::IntVector;
using da::Matrix;
using da::Vector;

/// Mean of the listed columns of Z, by scalar accumulation.
inline Vector column_mean(const Matrix& Z, const std::vector<int>& cols) {
    Vector mu = Vector::Zero(Z.rows());
    for (int c : cols) {
        for (Eigen::Index d = 0; d < Z.rows(); ++d) mu(d) += Z(d, c);
    }
    if (!cols.empty()) mu /= static_cast<double>(cols.size());
    return mu;
}

inline double squared_norm(const Vector& v) {
    double s = 0.0;
    for (Eigen::Index d = 0; d < v.size(); ++d) s += v(d) * v(d);
    return s;
}

/// Marginal distribution distance of an embedding: squared norm of the
/// difference between the source-block and target-block column means.
inline double marginal_distance(const Matrix& Z, int n_s, int n_t) {
    std::vector<int> src, tgt;
    for (int i = 0; i < n_s; ++i) src.push_back(i);
    for (int j = 0; j < n_t; ++j) tgt.push_back(n_s + j);
    return squared_norm(column_mean(Z, src) - column_mean(Z, tgt));
}

/// Per-class alignment distance for class c; zero when either side is empty.
inline double conditional_distance(const Matrix& Z, const da::SubdomainIndex& idx, int c) {
    const auto& src = idx.source_by_class.at(c - 1);
    const auto& tgt = idx.target_by_class.at(c - 1);
    if (src.empty() || tgt.empty()) return 0.0;
    return squared_norm(column_mean(Z, src) - column_mean(Z, tgt));
}

/// Sum over classes of the distance between the class-c mean on one side and
/// the pooled mean of all off-class samples on the other side, both
/// directions.
inline double repulsive_distance(const Matrix& Z, const da::SubdomainIndex& idx) {
    double total = 0.0;
    for (int c = 1; c <= idx.C; ++c) {
        const auto& src = idx.source_by_class.at(c - 1);
        std::vector<int> off_target;
        for (int r = 1; r <= idx.C; ++r) {
            if (r == c) continue;
            for (int j : idx.target_by_class.at(r - 1)) off_target.push_back(j);
        }
        if (!src.empty() && !off_target.empty()) {
            total += squared_norm(column_mean(Z, src) - column_mean(Z, off_target));
        }

        const auto& tgt = idx.target_by_class.at(c - 1);
        std::vector<int> off_source;
        for (int r = 1; r <= idx.C; ++r) {
            if (r == c) continue;
            for (int i : idx.source_by_class.at(r - 1)) off_source.push_back(i);
        }
        if (!tgt.empty() && !off_source.empty()) {
            total += squared_norm(column_mean(Z, tgt) - column_mean(Z, off_source));
        }
    }
    return total;
}

/// Accumulate the rank-one pattern v v^T (v sparse, given as index/value
/// pairs) into M, entry by entry.
inline void add_vvt(Matrix& M, const std::vector<std::pair<int, double>>& v) {
    for (const auto& [i, vi] : v) {
        for (const auto& [j, vj] : v) M(i, j) += vi * vj;
    }
}

/// Composite coefficient matrix assembled directly from the defining
/// rank-one patterns (never via da::assemble_composite).
inline Matrix composite_matrix(const da::SubdomainIndex& idx, bool with_conditionals,
                               bool with_repulsive) {
    const int n = idx.n_s + idx.n_t;
    Matrix M = Matrix::Zero(n, n);

    std::vector<std::pair<int, double>> v;
    for (int i = 0; i < idx.n_s; ++i) v.push_back({i, 1.0 / idx.n_s});
    for (int j = 0; j < idx.n_t; ++j) v.push_back({idx.n_s + j, -1.0 / idx.n_t});
    add_vvt(M, v);

    if (with_conditionals) {
        for (int c = 1; c <= idx.C; ++c) {
            const auto& src = idx.source_by_class.at(c - 1);
            const auto& tgt = idx.target_by_class.at(c - 1);
            if (src.empty() || tgt.empty()) continue;
            v.clear();
            for (int i : src) v.push_back({i, 1.0 / static_cast<double>(src.size())});
            for (int j : tgt) v.push_back({j, -1.0 / static_cast<double>(tgt.size())});
            add_vvt(M, v);
        }
    }
    if (with_repulsive) {
        Matrix R = Matrix::Zero(n, n);
        for (int c = 1; c <= idx.C; ++c) {
            const auto& src = idx.source_by_class.at(c - 1);
            std::vector<int> off_t;
            for (int r = 1; r <= idx.C; ++r) {
                if (r == c) continue;
                for (int j : idx.target_by_class.at(r - 1)) off_t.push_back(j);
            }
            if (!src.empty() && !off_t.empty()) {
                v.clear();
                for (int i : src) v.push_back({i, 1.0 / static_cast<double>(src.size())});
                for (int j : off_t) v.push_back({j, -1.0 / static_cast<double>(off_t.size())});
                add_vvt(R, v);
            }
            const auto& tgt = idx.target_by_class.at(c - 1);
            std::vector<int> off_s;
            for (int r = 1; r <= idx.C; ++r) {
                if (r == c) continue;
                for (int i : idx.source_by_class.at(r - 1)) off_s.push_back(i);
            }
            if (!tgt.empty() && !off_s.empty()) {
                v.clear();
                for (int j : tgt) v.push_back({j, 1.0 / static_cast<double>(tgt.size())});
                for (int i : off_s) v.push_back({i, -1.0 / static_cast<double>(off_s.size())});
                add_vvt(R, v);
            }
        }
        M -= R;
    }
    return M;
}

/// Median pairwise Euclidean distance by sorting the full list.
inline double median_pairwise(const Matrix& Z) {
    std::vector<double> d;
    for (Eigen::Index j = 0; j < Z.cols(); ++j) {
        for (Eigen::Index i = j + 1; i < Z.cols(); ++i) {
            double s = 0.0;
            for (Eigen::Index r = 0; r < Z.rows(); ++r) {
                const double diff = Z(r, i) - Z(r, j);
                s += diff * diff;
            }
            d.push_back(std::sqrt(s));
        }
    }
    std::sort(d.begin(), d.end());
    const size_t n = d.size();
    return n % 2 == 1 ? d[n / 2] : 0.5 * (d[n / 2 - 1] + d[n / 2]);
}

/// Normalized-Laplacian energy as the explicit double sum
/// (1/2) sum_ij w_ij || y_i/sqrt(d_i) - y_j/sqrt(d_j) ||^2.
inline double laplacian_double_sum(const Matrix& Y, const Matrix& W) {
    const Eigen::Index n = W.rows();
    std::vector<double> d(n, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) d[i] += W(i, j);
    }
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (W(i, j) == 0.0) continue;
            double term = 0.0;
            for (Eigen::Index c = 0; c < Y.cols(); ++c) {
                const double diff = Y(i, c) / std::sqrt(d[i]) - Y(j, c) / std::sqrt(d[j]);
                term += diff * diff;
            }
            total += W(i, j) * term;
        }
    }
    return 0.5 * total;
}

/// Generalized eigenvalues of (S1, S2) via the non-symmetric route
/// eig(S2^-1 S1), sorted ascending — deliberately a different algorithm from
/// the library's Cholesky reduction.
inline std::vector<double> pencil_eigenvalues(const Matrix& S1, const Matrix& S2) {
    Matrix P = S2.inverse() * S1;
    Eigen::EigenSolver<Matrix> es(P);
    if (es.info() != Eigen::Success) throw std::runtime_error("oracle: eigensolver failed");
    std::vector<double> vals;
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
        vals.push_back(es.eigenvalues()(i).real());
    }
    std::sort(vals.begin(), vals.end());
    return vals;
}

/// 1-NN by exhaustive scalar distance evaluation.
inline IntVector nn_bruteforce(const Matrix& Zs, const IntVector& ys, const Matrix& Zt) {
    IntVector out(Zt.cols());
    for (Eigen::Index t = 0; t < Zt.cols(); ++t) {
        double best = std::numeric_limits<double>::infinity();
        Eigen::Index best_s = 0;
        for (Eigen::Index s = 0; s < Zs.cols(); ++s) {
            double dist = 0.0;
            for (Eigen::Index d = 0; d < Zs.rows(); ++d) {
                const double diff = Zt(d, t) - Zs(d, s);
                dist += diff * diff;
            }
            if (dist < best) {
                best = dist;
                best_s = s;
            }
        }
        out(t) = ys(best_s);
    }
    return out;
}

/// Label propagation by explicit dense inversion of (D - alpha W).
inline Matrix propagate_by_inverse(const Matrix& W, double alpha, const Matrix& Y0) {
    const Eigen::Index n = W.rows();
    Matrix D = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) D(i, i) = W.row(i).sum();
    return (D - alpha * W).inverse() * Y0;
}

}  // namespace oracle
