#pragma once

// Small dense 3x3 kernels shared by every module: validated rotation/stretch
// constructors, symmetric eigendecomposition, det-corrected (signed) SVD and
// trace maximization over SO(3).

#include <Eigen/Dense>
#include <cmath>

#include "marten/errors.hpp"

namespace marten {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

inline bool is_rotation(const Mat3& R, double tol = 1e-12) {
    return (R.transpose() * R - Mat3::Identity()).norm() <= tol * 10.0 &&
           std::abs(R.determinant() - 1.0) <= tol * 10.0;
}

inline bool is_symmetric(const Mat3& S, double tol = 1e-10) {
    return (S - S.transpose()).norm() <= tol * std::max(1.0, S.norm());
}

// Validated constructor for elements of SO(3).
inline Mat3 as_rotation(const Mat3& R) {
    if ((R.transpose() * R - Mat3::Identity()).norm() > 1e-12 * 10.0 ||
        std::abs(R.determinant() - 1.0) > 1e-12 * 10.0)
        throw PreconditionError("matrix is not a rotation (R^T R = 1, det R = 1 within 1e-12)");
    return R;
}

// Validated constructor for symmetric positive definite stretches.
inline Mat3 as_stretch(const Mat3& U) {
    if ((U - U.transpose()).norm() > 1e-12 * std::max(1.0, U.norm()))
        throw PreconditionError("stretch is not symmetric within 1e-12");
    Eigen::SelfAdjointEigenSolver<Mat3> es(U);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw PreconditionError("stretch has a non-positive eigenvalue");
    return U;
}

// Eigenvalues ascending, eigenvector frame proper (det = +1).
struct EigenSystem {
    Vec3 eigenvalues;
    Mat3 eigenvectors; // columns, orthonormal
};

inline EigenSystem sym_eigen(const Mat3& S) {
    if (!is_symmetric(S, 1e-10))
        throw PreconditionError("sym_eigen: input not symmetric within 1e-10");
    Mat3 sym = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Mat3> es(sym);
    if (es.info() != Eigen::Success)
        throw NumericError("sym_eigen: eigensolver failed");
    EigenSystem out{es.eigenvalues(), es.eigenvectors()};
    if (out.eigenvectors.determinant() < 0.0) out.eigenvectors.col(2) *= -1.0;
    double resid = 0.0;
    for (int i = 0; i < 3; ++i)
        resid = std::max(resid,
                         (sym * out.eigenvectors.col(i) -
                          out.eigenvalues[i] * out.eigenvectors.col(i)).norm());
    if (resid > 1e-10 * std::max(1.0, S.norm()))
        throw NumericError("sym_eigen: reconstruction residual exceeds 1e-10*|S|");
    return out;
}

// M = R1 * diag(sigma) * R2^T with R1, R2 in SO(3); sigma[2] carries the sign
// of det M (sigma[0] >= sigma[1] >= |sigma[2]|).
struct SignedSvd {
    Mat3 R1, R2;
    Vec3 sigma;
};

inline SignedSvd signed_svd(const Mat3& M) {
    Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 U = svd.matrixU(), V = svd.matrixV();
    Vec3 s = svd.singularValues();
    if (U.determinant() < 0.0) { U.col(2) *= -1.0; s[2] *= -1.0; }
    if (V.determinant() < 0.0) { V.col(2) *= -1.0; s[2] *= -1.0; }
    return {U, V, s};
}

struct TraceMax {
    Mat3 rotation;   // R* attaining the maximum of tr(R M)
    double value;    // sigma1 + sigma2 + sign(det M) * sigma3
    bool unique;     // false when the maximizer is a continuum
};

// max over R in SO(3) of tr(R M).  With M = U diag(sigma) V^T the maximizer is
// R* = V diag(1,1,s) U^T, s = det(U) det(V).  Non-unique exactly when the two
// smallest singular values coincide and det M <= 0 (rank <= 1 included).
inline TraceMax max_trace_rotation(const Mat3& M) {
    Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Mat3& U = svd.matrixU();
    const Mat3& V = svd.matrixV();
    Vec3 sig = svd.singularValues();
    double s = U.determinant() * V.determinant(); // +-1
    Mat3 R = V * Vec3(1.0, 1.0, s).asDiagonal() * U.transpose();
    double value = sig[0] + sig[1] + s * sig[2];
    double scale = std::max(sig[0], 1e-300);
    bool degenerate_pair = (sig[1] - sig[2]) <= 1e-13 * scale;
    bool rank_le_1 = sig[1] <= 1e-13 * scale;
    bool unique = !((degenerate_pair && s < 0.0) || rank_le_1);
    return {R, value, unique};
}

// Rotation factor of the polar decomposition F = R U (nearest rotation to F).
inline Mat3 polar_rotation(const Mat3& F) {
    SignedSvd f = signed_svd(F);
    return f.R1 * f.R2.transpose();
}

} // namespace marten
