#pragma once

#include "da/mmd.hpp"
#include "da/types.hpp"

namespace da {

/// Apply the centering projection H = I - (1/n) 11^T on the right:
/// X -> X - rowmean(X). H is never materialized on the hot path.
Matrix apply_centering(const Matrix& X);

/// Materialized H for tests and oracles.
Matrix centering_matrix(int n);

struct KernelSpec {
    enum class Kind { linear, rbf, polynomial };
    Kind kind = Kind::linear;
    double gamma = 1.0;  // rbf
    int degree = 2;      // polynomial
    double coef = 1.0;   // polynomial

    static KernelSpec linear() { return {Kind::linear, 0.0, 0, 0.0}; }
    static KernelSpec rbf(double gamma);
    static KernelSpec polynomial(int degree, double coef);
};

/// K_ij = kappa(x_i, x_j); the linear kernel gives X^T X exactly.
Matrix gram_matrix(const Matrix& X, const KernelSpec& spec);

/// Output of a subspace solve. A is m x k in linear mode (n x k in kernel
/// mode), columns normalized so A^T S2 A = I; Z = A^T B.
struct ProjectionResult {
    Matrix A;
    Vector eigenvalues;  // ascending for pencil solves, descending for PCA
    Matrix Z;
    int requested_k = 0;
    int effective_k = 0;
};

/// Top-k principal directions of X H X^T; eigenvalues descending
/// (variance order), Z = A^T X.
ProjectionResult pca_embed(const Matrix& X, int k);

/// Eigenpairs of the k algebraically smallest eigenvalues of the symmetric
/// pencil S1 V = S2 V diag(values), S2 positive definite. Solved by Cholesky
/// reduction of S2 to a standard symmetric eigenproblem; columns satisfy
/// V^T S2 V = I and have their largest-magnitude entry positive.
struct PencilSolution {
    Matrix vectors;
    Vector values;
};
PencilSolution solve_symmetric_pencil(const Matrix& S1, const Matrix& S2, int k);

/// Adaptation projection: S1 = B M B^T + lambda I, S2 = B H B^T + eps I with
/// eps = 1e-9 tr(B H B^T)/dim (S2 alone is only PSD: H annihilates the ones
/// vector). B is the data matrix X in linear mode or the Gram matrix K in
/// kernel mode. k is clamped to the pencil dimension with a warning.
ProjectionResult solve_projection(const Matrix& B, const MmdMatrix& M, double lambda, int k);

/// Z = A^T B.
Matrix project(const Matrix& A, const Matrix& B);

}  // namespace da
