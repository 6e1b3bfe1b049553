#pragma once

// Rank-one compatibility: numerical rank-one tests, the middle-eigenvalue
// criterion, the two-solution twinning solver and the habit-plane chain
// (austenite meeting a two-variant laminate across a planar interface).

#include <algorithm>
#include <vector>

#include "marten/linalg.hpp"

namespace marten {

template <int N>
struct RankOneResult {
    bool connected = false;
    int rank = 0;                      // numerical rank of B - A when disconnected
    Eigen::Matrix<double, N, 1> a;     // B - A = a (x) n when connected
    Eigen::Matrix<double, N, 1> n;     // unit normal
    bool degenerate = false;           // B == A (a = 0)
};

// Numerical rank-one test on B - A: connected iff the second singular value is
// below 1e-10 times the first.
template <int N>
RankOneResult<N> rank_one_test(const Eigen::Matrix<double, N, N>& A,
                               const Eigen::Matrix<double, N, N>& B) {
    RankOneResult<N> out;
    out.a.setZero();
    out.n.setZero();
    Eigen::Matrix<double, N, N> D = B - A;
    Eigen::JacobiSVD<Eigen::Matrix<double, N, N>> svd(
        D, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s[0] == 0.0) {
        out.connected = true;
        out.degenerate = true;
        out.n[0] = 1.0;
        return out;
    }
    if (s[1] <= 1e-10 * s[0]) {
        out.connected = true;
        out.a = s[0] * svd.matrixU().col(0);
        out.n = svd.matrixV().col(0);
        return out;
    }
    out.rank = 1;
    for (int i = 1; i < N; ++i)
        if (s[i] > 1e-10 * s[0]) ++out.rank;
    return out;
}

struct MiddleEigenvalue {
    double lambda2 = 0.0;
    double gap = 0.0;            // lambda2 - 1
    bool compatible = false;     // |gap| <= tol
    bool degenerate = false;     // U == 1 within tol (C = 1)
    Vec3 eigenvalues;            // ascending
};

// lambda2 = 1 is necessary and sufficient for a rank-one connection between
// SO(3) and SO(3)U.
inline MiddleEigenvalue middle_eigenvalue_gap(const Mat3& U, double tol = 1e-8) {
    Mat3 Uc = as_stretch(U);
    EigenSystem es = sym_eigen(Uc);
    MiddleEigenvalue out;
    out.eigenvalues = es.eigenvalues;
    out.lambda2 = es.eigenvalues[1];
    out.gap = out.lambda2 - 1.0;
    out.compatible = std::abs(out.gap) <= tol;
    out.degenerate = (Uc - Mat3::Identity()).norm() <= tol;
    return out;
}

struct TwinSolution {
    Mat3 R;          // rotation with R G = F + a (x) n
    Vec3 a;          // shear vector (carries the magnitude)
    Vec3 n;          // unit interface normal
    double residual; // |R G - F - a (x) n| / |F|
};

namespace detail {

// All rank-one connections R G = F0 + a (x) n between the well SO(3)G and the
// fixed matrix F0: with C = F0^{-T} G^T G F0^{-1} and eigenvalues
// l1 <= l2 <= l3, solutions exist iff l2 = 1, and come in two sign branches
// built from the extreme eigenpairs.
inline std::vector<TwinSolution> rank_one_connections(const Mat3& G, const Mat3& F0,
                                                      double lambda2_tol = 1e-8) {
    if (std::abs(F0.determinant()) < 1e-14)
        throw PreconditionError("rank-one connection solver: F is singular");
    Mat3 Finv = F0.inverse();
    Mat3 C = Finv.transpose() * (G.transpose() * G) * Finv;
    C = 0.5 * (C + C.transpose());
    if ((C - Mat3::Identity()).norm() <= lambda2_tol)
        throw RegimeError("rank-one connection solver: wells coincide at F (C = 1)");
    EigenSystem es = sym_eigen(C);
    double l1 = es.eigenvalues[0], l2 = es.eigenvalues[1], l3 = es.eigenvalues[2];
    std::vector<TwinSolution> out;
    if (std::abs(l2 - 1.0) > lambda2_tol) return out;
    double d1 = std::max(1.0 - l1, 0.0);
    double d3 = std::max(l3 - 1.0, 0.0);
    double span = l3 - l1;
    Vec3 e1 = es.eigenvectors.col(0), e3 = es.eigenvectors.col(2);
    double fnorm = F0.norm();
    for (double kappa : {+1.0, -1.0}) {
        Vec3 a = std::sqrt(l3 * d1 / span) * e1 + kappa * std::sqrt(l1 * d3 / span) * e3;
        Vec3 m = (std::sqrt(l3) - std::sqrt(l1)) / std::sqrt(span) *
                 (-std::sqrt(d1) * e1 + kappa * std::sqrt(d3) * e3);
        Vec3 n = F0.transpose() * m;
        double nn = n.norm();
        if (nn < 1e-14)
            throw NumericError("rank-one connection solver: degenerate normal");
        a *= nn;
        n /= nn;
        Mat3 R = polar_rotation((F0 + a * n.transpose()) * G.inverse());
        double resid = (R * G - F0 - a * n.transpose()).norm() / fnorm;
        if (resid > 1e-10)
            throw NumericError("rank-one connection solver: residual exceeds 1e-10*|F|");
        out.push_back({R, a, n, resid});
    }
    return out;
}

} // namespace detail

// The two matrices in SO(3)U differing from F by rank one (empty when the
// middle eigenvalue of C = F^{-T} U^T U F^{-1} is not 1).
inline std::vector<TwinSolution> twin_solutions(const Mat3& F, const Mat3& U,
                                                double lambda2_tol = 1e-8) {
    return detail::rank_one_connections(as_stretch(U), F, lambda2_tol);
}

struct TwinPair {
    Mat3 Ui, Uj;       // stretches; twin satisfies R Uj = Ui + a (x) n
    TwinSolution twin;
};

struct HabitSolution {
    double fraction;   // volume fraction lambda in (0,1)
    Mat3 R;            // rotation with R F(lambda) = 1 + b (x) m
    Vec3 b;            // shape vector
    Vec3 m;            // unit habit-plane normal
    TwinSolution twin; // underlying variant pair connection
    double residual;   // |R (Ui + lambda a(x)n) - 1 - b(x)m|
};

// Crystallographic-theory chain: find lambda in (0,1) with the middle
// eigenvalue of F(lambda)^T F(lambda) equal to 1, F(lambda) = Ui + lambda
// a(x)n, then attach the two rank-one connections of F(lambda) to the
// identity well. Empty result is a valid outcome (no habit plane).
inline std::vector<HabitSolution> habit_solutions(const TwinPair& pair,
                                                  int grid = 512,
                                                  double root_tol = 1e-12) {
    const Mat3& Ui = pair.Ui;
    Mat3 shear = pair.twin.a * pair.twin.n.transpose();
    {
        double resid = (pair.twin.R * pair.Uj - Ui - shear).norm();
        if (resid > 1e-8 * std::max(1.0, Ui.norm()))
            throw PreconditionError("habit_solutions: twin pair fails its residual identity");
    }
    // degenerate a = 0 twin: F(lambda) is constant, any connection sits at the
    // lambda = 0 boundary, which the open interval excludes
    if (shear.norm() <= 1e-12 * Ui.norm()) return {};
    auto F_of = [&](double lam) -> Mat3 { return Ui + lam * shear; };
    auto g = [&](double lam) {
        Mat3 F = F_of(lam);
        return (F.transpose() * F - Mat3::Identity()).determinant();
    };

    std::vector<double> roots;
    double prev_lam = 0.0, prev_g = g(0.0);
    for (int i = 1; i <= grid; ++i) {
        double lam = static_cast<double>(i) / grid;
        double gi = g(lam);
        if (prev_g == 0.0) roots.push_back(prev_lam);
        else if (gi != 0.0 && std::signbit(gi) != std::signbit(prev_g)) {
            double lo = prev_lam, hi = lam, glo = prev_g;
            while (hi - lo > root_tol) {
                double mid = 0.5 * (lo + hi), gm = g(mid);
                if (gm == 0.0) { lo = hi = mid; break; }
                if (std::signbit(gm) == std::signbit(glo)) { lo = mid; glo = gm; }
                else hi = mid;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_lam = lam;
        prev_g = gi;
    }

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                roots.end());

    std::vector<HabitSolution> out;
    for (double lam : roots) {
        if (lam <= 1e-9 || lam >= 1.0 - 1e-9) continue; // open interval only
        Mat3 F = F_of(lam);
        Mat3 C = F.transpose() * F;
        EigenSystem es = sym_eigen(0.5 * (C + C.transpose()));
        if (std::abs(es.eigenvalues[1] - 1.0) > 1e-8) continue; // extreme eigenvalue crossed 1
        if ((C - Mat3::Identity()).norm() <= 1e-8) continue;
        for (const TwinSolution& sol : detail::rank_one_connections(F, Mat3::Identity())) {
            double resid = (sol.R * F - Mat3::Identity() - sol.a * sol.n.transpose()).norm();
            if (resid > 1e-9)
                throw NumericError("habit_solutions: residual exceeds 1e-9");
            out.push_back({lam, sol.R, sol.a, sol.n, pair.twin, resid});
        }
    }
    return out;
}

} // namespace marten
