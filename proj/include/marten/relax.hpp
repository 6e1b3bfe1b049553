#pragma once

// Desk-scale relaxation probe: piecewise-affine energy minimization on a
// crossed triangulation of the unit square, with nucleation trials testing
// whether a small product nucleus can lower the energy.

#include <array>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

#include "marten/compatibility.hpp"
#include "marten/linalg.hpp"
#include "marten/rng.hpp"
#include "marten/wells.hpp"

namespace marten {

// Smoothed two-well density on 2x2 gradients:
//   W(A) = softmin_s(|A - A1|^p, |A - A2|^p - delta).
struct DoubleWell2D {
    Mat2 A1, A2;
    double delta = 0.0;
    double smoothing = 1e-2;
    double p = 2.0;

    void validate() const {
        require((A2 - A1).norm() > 1e-12, "DoubleWell2D: wells must be distinct");
        require(delta >= 0.0, "DoubleWell2D: delta must be nonnegative");
        require(p >= 2.0, "DoubleWell2D: p >= 2 required for a smooth gradient");
        require(smoothing > 0.0, "DoubleWell2D: smoothing width must be positive");
    }

    int rank_gap() const { // 1: connected wells, 2: incompatible
        return rank_one_test<2>(A1, A2).connected ? 1 : 2;
    }

    double value(const Mat2& A) const {
        return double_well_value(A, A1, A2, delta, smoothing, p);
    }

    // value and dW/dA in one pass; the softmin weight underflows to exactly
    // 0/1 once the branch gap exceeds ~40 smoothing widths
    double value_and_gradient(const Mat2& A, Mat2& grad) const {
        Mat2 D1 = A - A1, D2 = A - A2;
        double q1 = D1.squaredNorm(), q2 = D2.squaredNorm();
        double u, v;
        Mat2 g1, g2;
        if (p == 2.0) {
            u = q1;
            v = q2 - delta;
            g1 = 2.0 * D1;
            g2 = 2.0 * D2;
        } else {
            u = std::pow(q1, 0.5 * p);
            v = std::pow(q2, 0.5 * p) - delta;
            g1 = (q1 > 0.0) ? Mat2(p * std::pow(q1, 0.5 * p - 1.0) * D1) : Mat2(Mat2::Zero());
            g2 = (q2 > 0.0) ? Mat2(p * std::pow(q2, 0.5 * p - 1.0) * D2) : Mat2(Mat2::Zero());
        }
        double gap = v - u;
        if (gap > 40.0 * smoothing) { grad = g1; return u; }
        if (gap < -40.0 * smoothing) { grad = g2; return v; }
        double m = std::min(u, v);
        double eu = std::exp(-(u - m) / smoothing), ev = std::exp(-(v - m) / smoothing);
        double wsum = eu + ev;
        grad = (eu / wsum) * g1 + (ev / wsum) * g2;
        return m - smoothing * std::log(wsum);
    }
};

// Structured crossed triangulation of the unit square: (n+1)^2 corner nodes,
// n^2 cell centres, 4 triangles per cell.
struct MeshDeformation {
    int n = 0;                                // cells per side
    std::vector<Vec2> nodes;                  // reference positions
    std::vector<Vec2> values;                 // nodal images
    std::vector<std::array<int, 3>> triangles;
    std::vector<Mat2> ref_inverse;            // per-triangle inverse edge matrix
    std::vector<double> area;

    static MeshDeformation structured(int n) {
        require(n >= 1, "MeshDeformation: need at least one cell");
        MeshDeformation m;
        m.n = n;
        double h = 1.0 / n;
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) m.nodes.push_back(Vec2(i * h, j * h));
        int centre0 = static_cast<int>(m.nodes.size());
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) m.nodes.push_back(Vec2((i + 0.5) * h, (j + 0.5) * h));
        auto corner = [n](int i, int j) { return j * (n + 1) + i; };
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                int c00 = corner(i, j), c10 = corner(i + 1, j);
                int c01 = corner(i, j + 1), c11 = corner(i + 1, j + 1);
                int mid = centre0 + j * n + i;
                m.triangles.push_back({c00, c10, mid});
                m.triangles.push_back({c10, c11, mid});
                m.triangles.push_back({c11, c01, mid});
                m.triangles.push_back({c01, c00, mid});
            }
        m.values = m.nodes;
        m.finalize();
        return m;
    }

    void finalize() {
        ref_inverse.clear();
        area.clear();
        for (auto& t : triangles) {
            Mat2 P;
            P.col(0) = nodes[t[1]] - nodes[t[0]];
            P.col(1) = nodes[t[2]] - nodes[t[0]];
            double det = P.determinant();
            if (det <= 0.0) throw PreconditionError("MeshDeformation: degenerate triangle");
            ref_inverse.push_back(P.inverse());
            area.push_back(0.5 * det);
        }
    }

    void set_affine(const Mat2& A) {
        for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = A * nodes[i];
    }

    Mat2 element_gradient(std::size_t e) const {
        const auto& t = triangles[e];
        Mat2 Y;
        Y.col(0) = values[t[1]] - values[t[0]];
        Y.col(1) = values[t[2]] - values[t[0]];
        return Y * ref_inverse[e];
    }
};

inline double total_energy(const MeshDeformation& mesh, const DoubleWell2D& W) {
    W.validate();
    double E = 0.0;
    for (std::size_t e = 0; e < mesh.triangles.size(); ++e)
        E += mesh.area[e] * W.value(mesh.element_gradient(e));
    return E;
}

// Energy plus the analytic nodal gradient (chain rule through the per-element
// affine map).
inline double energy_and_gradient(const MeshDeformation& mesh, const DoubleWell2D& W,
                                  std::vector<Vec2>& grad) {
    grad.assign(mesh.values.size(), Vec2::Zero());
    double E = 0.0;
    Mat2 dW;
    for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
        const auto& t = mesh.triangles[e];
        Mat2 Y;
        Y.col(0) = mesh.values[t[1]] - mesh.values[t[0]];
        Y.col(1) = mesh.values[t[2]] - mesh.values[t[0]];
        double w = W.value_and_gradient(Y * mesh.ref_inverse[e], dW);
        E += mesh.area[e] * w;
        Mat2 dY = mesh.area[e] * dW * mesh.ref_inverse[e].transpose();
        grad[t[1]] += dY.col(0);
        grad[t[2]] += dY.col(1);
        grad[t[0]] -= dY.col(0) + dY.col(1);
    }
    return E;
}

struct DescentResult {
    double energy;
    int steps_taken;
    bool stalled;   // line search failed before the budget ran out
    bool diverged;  // energy became non-finite
};

// Monotone gradient descent with a backtracking line search.
inline DescentResult descend(MeshDeformation& mesh, const DoubleWell2D& W, int steps,
                             double initial_step = 0.1, int max_backtracks = 30,
                             std::vector<double>* trace = nullptr) {
    std::vector<Vec2> grad;
    std::vector<Vec2> trial(mesh.values.size());
    double E = energy_and_gradient(mesh, W, grad);
    double step = initial_step;
    DescentResult res{E, 0, false, false};
    if (trace) trace->push_back(E);
    int flat_steps = 0;
    for (int it = 0; it < steps; ++it) {
        if (!std::isfinite(E)) { res.diverged = true; break; }
        double gnorm2 = 0.0;
        for (auto& g : grad) gnorm2 += g.squaredNorm();
        if (gnorm2 == 0.0) break;
        bool accepted = false;
        double Eprev = E;
        for (int bt = 0; bt < max_backtracks; ++bt) {
            for (std::size_t i = 0; i < trial.size(); ++i)
                trial[i] = mesh.values[i] - step * grad[i];
            std::swap(mesh.values, trial);
            double Enew = total_energy(mesh, W);
            if (std::isfinite(Enew) && Enew < E) {
                E = Enew;
                accepted = true;
                break;
            }
            std::swap(mesh.values, trial); // revert
            step *= 0.5;
        }
        if (!accepted) { res.stalled = true; break; }
        E = energy_and_gradient(mesh, W, grad);
        step *= 1.5;
        res.steps_taken = it + 1;
        if (trace) trace->push_back(E);
        // converged: two consecutive steps without meaningful progress
        flat_steps = (Eprev - E < 1e-15 * (1.0 + std::abs(E))) ? flat_steps + 1 : 0;
        if (flat_steps >= 2) break;
    }
    res.energy = E;
    return res;
}

// Nucleus of product phase: values A2 x inside the disc, parent A1 x outside,
// one blending band of width `band` (continuous piecewise-linear indicator).
inline void plant_nucleus(MeshDeformation& mesh, const Mat2& A1, const Mat2& A2,
                          const Vec2& centre, double radius, double band) {
    Mat2 dA = A2 - A1;
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const Vec2& x = mesh.nodes[i];
        double r = (x - centre).norm();
        double phi = (r <= radius) ? 1.0 : (r >= radius + band ? 0.0 : (radius + band - r) / band);
        mesh.values[i] = A1 * x + phi * (dA * (x - centre));
    }
}

// Laminate strip spanning the square: gradient A1 + a (x) e1 inside
// x1 in [x_lo, x_hi] (snapped to mesh lines), parent outside. Exactly
// representable on the crossed mesh.
inline void strip_state(MeshDeformation& mesh, const Mat2& A1, const Vec2& a, double x_lo,
                        double x_hi) {
    require(x_lo < x_hi, "strip_state: empty strip");
    auto ramp = [&](double x1) { return std::clamp(x1, x_lo, x_hi) - x_lo; };
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const Vec2& x = mesh.nodes[i];
        mesh.values[i] = A1 * x + ramp(x[0]) * a;
    }
}

struct NucleationReport {
    int trials = 0;
    int lowered_count = 0;     // trials ending strictly below -tol
    int aborted = 0;           // descent diverged
    double min_energy_gap = 0.0; // min over trials of final energy - I(y*)
    double tol = 0.0;
    int well_rank_gap = 0;     // rank(A2 - A1): 1 connected, 2 incompatible
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d4a9d6eb53afebULL;
    return x ^ (x >> 31);
}
} // namespace detail

// Seeded nucleation trials, parallel over independent per-trial streams.
// `traces`, when given, receives one energy-per-step row per trial.
inline NucleationReport nucleation_trial(const DoubleWell2D& W, double nucleus_radius,
                                         int mesh_size, int trials, std::uint64_t seed,
                                         int descent_budget, int threads = 0,
                                         std::vector<std::vector<double>>* traces = nullptr) {
    W.validate();
    require(nucleus_radius > 0.0 && nucleus_radius < 0.25,
            "nucleation_trial: nucleus radius must lie in (0, 1/4)");
    NucleationReport rep;
    rep.trials = trials;
    rep.well_rank_gap = W.rank_gap();
    rep.tol = 1e-9; // 1e-9 * vol, vol = 1
    MeshDeformation proto = MeshDeformation::structured(mesh_size);
    double band = 1.5 / mesh_size;

    std::vector<double> final_energy(trials, 0.0);
    std::vector<char> bad(trials, 0);
    if (traces) traces->assign(trials, {});
    std::atomic<int> next{0};
    int nthreads = threads > 0 ? threads
                               : std::max(1u, std::thread::hardware_concurrency());
    auto worker = [&]() {
        MeshDeformation mesh = proto;
        for (;;) {
            int t = next.fetch_add(1);
            if (t >= trials) break;
            Rng rng(detail::splitmix64(seed ^ (0x517cc1b727220a95ULL * (t + 1))));
            double margin = nucleus_radius + band + 2.0 / mesh_size;
            Vec2 centre(uniform(rng, margin, 1.0 - margin), uniform(rng, margin, 1.0 - margin));
            plant_nucleus(mesh, W.A1, W.A2, centre, nucleus_radius, band);
            DescentResult res =
                descend(mesh, W, descent_budget, 0.1, 30, traces ? &(*traces)[t] : nullptr);
            final_energy[t] = res.energy;
            bad[t] = res.diverged ? 1 : 0;
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    double min_gap = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        if (bad[t]) { ++rep.aborted; continue; }
        min_gap = std::min(min_gap, final_energy[t]);
        if (final_energy[t] < -rep.tol) ++rep.lowered_count;
    }
    rep.min_energy_gap = std::isfinite(min_gap) ? min_gap : 0.0;
    return rep;
}

} // namespace marten
