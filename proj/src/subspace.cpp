#include "da/subspace.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace da {

Matrix apply_centering(const Matrix& X) {
    if (X.cols() == 0) throw ValidationError("centering: empty matrix");
    // X H with H = I - 11^T/n is exactly row-mean removal; never form H.
    return X.colwise() - X.rowwise().mean();
}

Matrix centering_matrix(int n) {
    if (n < 1) throw ValidationError("centering matrix: n must be positive");
    Matrix H = Matrix::Identity(n, n);
    H.array() -= 1.0 / static_cast<double>(n);
    return H;
}

KernelSpec KernelSpec::rbf(double gamma) {
    if (!(gamma > 0.0)) throw ValidationError("rbf kernel: gamma must be positive");
    return {Kind::rbf, gamma, 0, 0.0};
}

KernelSpec KernelSpec::polynomial(int degree, double coef) {
    if (degree < 1) throw ValidationError("polynomial kernel: degree must be >= 1");
    return {Kind::polynomial, 0.0, degree, coef};
}

Matrix gram_matrix(const Matrix& X, const KernelSpec& spec) {
    const Eigen::Index n = X.cols();
    if (n == 0) throw ValidationError("gram matrix: empty input");
    Matrix G = X.transpose() * X;
    switch (spec.kind) {
        case KernelSpec::Kind::linear:
            return G;
        case KernelSpec::Kind::polynomial:
            return ((G.array() + spec.coef).pow(spec.degree)).matrix();
        case KernelSpec::Kind::rbf: {
            Vector sq = X.colwise().squaredNorm();
            Matrix D = sq.replicate(1, n) + sq.transpose().replicate(n, 1) - 2.0 * G;
            D = D.cwiseMax(0.0);  // clamp tiny negatives from cancellation
            return (-spec.gamma * D.array()).exp().matrix();
        }
    }
    throw ValidationError("gram matrix: unknown kernel kind");
}

ProjectionResult pca_embed(const Matrix& X, int k) {
    const Eigen::Index m = X.rows();
    const Eigen::Index n = X.cols();
    if (n < 2) throw ValidationError("pca: need at least two samples");
    if (k < 1 || k > std::min(m, n)) {
        throw ValidationError("pca: k must lie in 1..min(m, n)");
    }
    Matrix Xc = apply_centering(X);
    Matrix S = (Xc * Xc.transpose()) / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Matrix> es(S);
    if (es.info() != Eigen::Success) throw NumericError("pca: eigendecomposition failed");
    const int keff = k;
    // SelfAdjointEigenSolver sorts ascending; take the top keff in descending order.
    Matrix A(m, keff);
    Vector vals(keff);
    for (int i = 0; i < keff; ++i) {
        const Eigen::Index src = m - 1 - i;
        Vector v = es.eigenvectors().col(src);
        Eigen::Index imax;
        v.cwiseAbs().maxCoeff(&imax);
        if (v(imax) < 0.0) v = -v;
        A.col(i) = v;
        vals(i) = es.eigenvalues()(src);
    }
    return {A, vals, A.transpose() * X, k, keff};
}

PencilSolution solve_symmetric_pencil(const Matrix& S1, const Matrix& S2, int k) {
    const Eigen::Index d = S1.rows();
    if (S1.cols() != d || S2.rows() != d || S2.cols() != d) {
        throw ValidationError("pencil: S1 and S2 must be square and equally sized");
    }
    if (k < 1) throw ValidationError("pencil: k must be positive");
    int keff = k;
    if (keff > d) {
        std::fprintf(stderr, "warning: subspace dimension %d exceeds pencil size %lld, clamping\n",
                     k, static_cast<long long>(d));
        keff = static_cast<int>(d);
    }

    // Reduce (S1, S2) to a standard symmetric problem via S2 = L L^T:
    //   S1 v = phi S2 v  <=>  (L^-1 S1 L^-T) u = phi u,  v = L^-T u.
    Eigen::LLT<Matrix> llt(S2);
    if (llt.info() != Eigen::Success) {
        throw NumericError("pencil: right-hand matrix is not positive definite");
    }
    Matrix L = llt.matrixL();
    Matrix C = L.triangularView<Eigen::Lower>().solve(S1);
    C = L.triangularView<Eigen::Lower>().solve(C.transpose()).transpose();
    C = 0.5 * (C + C.transpose());  // kill asymmetry from round-off

    Eigen::SelfAdjointEigenSolver<Matrix> es(C);
    if (es.info() != Eigen::Success) throw NumericError("pencil: eigendecomposition failed");

    PencilSolution out;
    out.vectors.resize(d, keff);
    out.values.resize(keff);
    for (int i = 0; i < keff; ++i) {  // ascending order = smallest first
        Vector u = es.eigenvectors().col(i);
        Vector v = L.transpose().triangularView<Eigen::Upper>().solve(u);
        Eigen::Index imax;
        v.cwiseAbs().maxCoeff(&imax);
        if (v(imax) < 0.0) v = -v;
        out.vectors.col(i) = v;
        out.values(i) = es.eigenvalues()(i);
    }
    return out;
}

ProjectionResult solve_projection(const Matrix& B, const MmdMatrix& M, double lambda, int k) {
    const Eigen::Index d = B.rows();
    const Eigen::Index n = B.cols();
    if (M.coefficients.rows() != n || M.coefficients.cols() != n) {
        throw ValidationError("projection: coefficient matrix must be n x n");
    }
    if (!(lambda >= 0.0)) throw ValidationError("projection: lambda must be non-negative");

    Matrix S1 = B * M.coefficients * B.transpose();
    S1 = 0.5 * (S1 + S1.transpose());
    S1 += lambda * Matrix::Identity(d, d);

    Matrix Bc = apply_centering(B);  // B H
    Matrix S2 = Bc * B.transpose();  // B H B^T (H idempotent/symmetric)
    S2 = 0.5 * (S2 + S2.transpose());
    const double eps = 1e-9 * S2.trace() / static_cast<double>(d);
    S2 += eps * Matrix::Identity(d, d);

    PencilSolution sol = solve_symmetric_pencil(S1, S2, k);
    ProjectionResult out;
    out.A = sol.vectors;
    out.eigenvalues = sol.values;
    out.Z = sol.vectors.transpose() * B;
    out.requested_k = k;
    out.effective_k = static_cast<int>(sol.vectors.cols());
    return out;
}

Matrix project(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows()) {
        throw ValidationError("project: projection and data dimensions disagree");
    }
    return A.transpose() * B;
}

}  // namespace da
