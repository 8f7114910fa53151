#include "da/mmd.hpp"

#include <cmath>
#include <string>

namespace da {

namespace {

void check_class(const SubdomainIndex& idx, int c) {
    if (c < 1 || c > idx.C) {
        throw ValidationError("mmd: class " + std::to_string(c) + " outside 1.." +
                              std::to_string(idx.C));
    }
}

/// Accumulate v v^T into M, where v is sparse: value `a` on indices `pos`
/// and value `b` on indices `neg`.
void add_rank_one(Matrix& M, const std::vector<int>& pos, double a, const std::vector<int>& neg,
                  double b) {
    for (int i : pos) {
        for (int j : pos) M(i, j) += a * a;
        for (int j : neg) {
            M(i, j) += a * b;
            M(j, i) += a * b;
        }
    }
    for (int i : neg) {
        for (int j : neg) M(i, j) += b * b;
    }
}

}  // namespace

MmdMatrix build_marginal(int n_s, int n_t) {
    if (n_s < 1 || n_t < 1) {
        throw ValidationError("marginal mmd: both domains need at least one sample");
    }
    const int n = n_s + n_t;
    Matrix M(n, n);
    const double ss = 1.0 / (static_cast<double>(n_s) * n_s);
    const double tt = 1.0 / (static_cast<double>(n_t) * n_t);
    const double st = -1.0 / (static_cast<double>(n_s) * n_t);
    M.topLeftCorner(n_s, n_s).setConstant(ss);
    M.bottomRightCorner(n_t, n_t).setConstant(tt);
    M.topRightCorner(n_s, n_t).setConstant(st);
    M.bottomLeftCorner(n_t, n_s).setConstant(st);
    return {std::move(M), MmdKind::marginal, 0};
}

MmdMatrix build_conditional(const SubdomainIndex& idx, int c) {
    check_class(idx, c);
    const int n = idx.n_s + idx.n_t;
    Matrix M = Matrix::Zero(n, n);
    const auto& src = idx.source_by_class[c - 1];
    const auto& tgt = idx.target_by_class[c - 1];
    if (!src.empty() && !tgt.empty()) {
        add_rank_one(M, src, 1.0 / static_cast<double>(src.size()), tgt,
                     -1.0 / static_cast<double>(tgt.size()));
    }
    return {std::move(M), MmdKind::conditional, c};
}

MmdMatrix repulsive_s2t_class_term(const SubdomainIndex& idx, int c) {
    check_class(idx, c);
    const int n = idx.n_s + idx.n_t;
    Matrix M = Matrix::Zero(n, n);
    const auto& src = idx.source_by_class[c - 1];
    std::vector<int> pooled;  // target samples with pseudo-label != c
    for (int r = 1; r <= idx.C; ++r) {
        if (r == c) continue;
        const auto& part = idx.target_by_class[r - 1];
        pooled.insert(pooled.end(), part.begin(), part.end());
    }
    if (!src.empty() && !pooled.empty()) {
        add_rank_one(M, src, 1.0 / static_cast<double>(src.size()), pooled,
                     -1.0 / static_cast<double>(pooled.size()));
    }
    return {std::move(M), MmdKind::repulsive_s2t, c};
}

MmdMatrix repulsive_t2s_class_term(const SubdomainIndex& idx, int c) {
    check_class(idx, c);
    const int n = idx.n_s + idx.n_t;
    Matrix M = Matrix::Zero(n, n);
    const auto& tgt = idx.target_by_class[c - 1];
    std::vector<int> pooled;  // source samples with label != c
    for (int r = 1; r <= idx.C; ++r) {
        if (r == c) continue;
        const auto& part = idx.source_by_class[r - 1];
        pooled.insert(pooled.end(), part.begin(), part.end());
    }
    if (!tgt.empty() && !pooled.empty()) {
        add_rank_one(M, tgt, 1.0 / static_cast<double>(tgt.size()), pooled,
                     -1.0 / static_cast<double>(pooled.size()));
    }
    return {std::move(M), MmdKind::repulsive_t2s, c};
}

MmdMatrix build_repulsive_s2t(const SubdomainIndex& idx) {
    const int n = idx.n_s + idx.n_t;
    Matrix M = Matrix::Zero(n, n);
    for (int c = 1; c <= idx.C; ++c) M += repulsive_s2t_class_term(idx, c).coefficients;
    return {std::move(M), MmdKind::repulsive_s2t, 0};
}

MmdMatrix build_repulsive_t2s(const SubdomainIndex& idx) {
    const int n = idx.n_s + idx.n_t;
    Matrix M = Matrix::Zero(n, n);
    for (int c = 1; c <= idx.C; ++c) M += repulsive_t2s_class_term(idx, c).coefficients;
    return {std::move(M), MmdKind::repulsive_t2s, 0};
}

MmdMatrix build_repulsive(const SubdomainIndex& idx) {
    Matrix M = build_repulsive_s2t(idx).coefficients + build_repulsive_t2s(idx).coefficients;
    return {std::move(M), MmdKind::repulsive_total, 0};
}

MmdMatrix assemble_composite(const MmdMatrix& marginal, const std::vector<MmdMatrix>& conditionals,
                             const MmdMatrix* repulsive, CompositeMode mode,
                             bool normalize_terms) {
    const int n = marginal.dim();
    auto check_dim = [&](const MmdMatrix& m, const char* what) {
        if (m.dim() != n) {
            throw ValidationError(std::string("composite mmd: ") + what + " has dimension " +
                                  std::to_string(m.dim()) + ", expected " + std::to_string(n));
        }
    };
    auto scaled = [&](const Matrix& M) -> Matrix {
        if (!normalize_terms) return M;
        const double f = M.norm();
        return f > 0.0 ? Matrix(M / f) : M;
    };

    Matrix M = scaled(marginal.coefficients);
    if (mode != CompositeMode::tca) {
        for (const auto& cond : conditionals) {
            check_dim(cond, "conditional term");
            M += scaled(cond.coefficients);
        }
    }
    if (mode == CompositeMode::cdda) {
        if (repulsive == nullptr) {
            throw ValidationError("composite mmd: cdda mode needs the repulsive matrix");
        }
        check_dim(*repulsive, "repulsive term");
        M -= scaled(repulsive->coefficients);
    }
    return {std::move(M), MmdKind::composite, 0};
}

}  // namespace da
