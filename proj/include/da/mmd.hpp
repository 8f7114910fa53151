#pragma once

#include <vector>

#include "da/dataset.hpp"
#include "da/types.hpp"

namespace da {

enum class MmdKind {
    marginal,
    conditional,
    repulsive_s2t,
    repulsive_t2s,
    repulsive_total,
    composite,
};

/// Symmetric (n_s+n_t) x (n_s+n_t) MMD coefficient matrix. Every kind has
/// zero row sums; all kinds except composite are positive semidefinite
/// (sums of rank-1 terms v v^T).
struct MmdMatrix {
    Matrix coefficients;
    MmdKind kind = MmdKind::marginal;
    int class_label = 0;  // set for kind == conditional

    int dim() const { return static_cast<int>(coefficients.rows()); }
};

/// Coefficients 1/(n_s*n_s) on source-source, 1/(n_t*n_t) on target-target,
/// -1/(n_s*n_t) across.
MmdMatrix build_marginal(int n_s, int n_t);

/// Class-c sub-domain alignment term. When class c is empty on either side
/// the matrix is all zero (the estimator is undefined there; dropping the
/// term keeps the objective finite).
MmdMatrix build_conditional(const SubdomainIndex& idx, int c);

/// One class term of the source-to-target repulsive sum: source sub-domain c
/// against all target samples whose pseudo-label differs from c, pooled into
/// a single mean. Zero when either side is empty.
MmdMatrix repulsive_s2t_class_term(const SubdomainIndex& idx, int c);
MmdMatrix repulsive_t2s_class_term(const SubdomainIndex& idx, int c);

MmdMatrix build_repulsive_s2t(const SubdomainIndex& idx);
MmdMatrix build_repulsive_t2s(const SubdomainIndex& idx);

/// Repulsive force matrix: sum of both directed repulsive sums.
MmdMatrix build_repulsive(const SubdomainIndex& idx);

enum class CompositeMode { tca, jda, cdda };

/// tca -> marginal alone; jda -> marginal + sum of conditionals;
/// cdda -> marginal + sum of conditionals - repulsive.
/// `repulsive` may be null except in cdda mode. With normalize_terms each
/// nonzero component is scaled to unit Frobenius norm before summing
/// (ablation flag; off by default — the model is the literal signed sum).
MmdMatrix assemble_composite(const MmdMatrix& marginal, const std::vector<MmdMatrix>& conditionals,
                             const MmdMatrix* repulsive, CompositeMode mode,
                             bool normalize_terms = false);

}  // namespace da
