#pragma once

// Energy wells and energy-density families: symmetry-generated variant lists,
// the constrained dead-load density, an isotropic dilatational construction
// with explicit convexity control, and a sampling-based checker for the
// two-well hypotheses (zero parent well, product well depth, floor outside
// both neighbourhoods, growth).

#include <algorithm>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "marten/linalg.hpp"
#include "marten/rng.hpp"

namespace marten {

struct Well {
    Mat3 U; // the well is the orbit SO(3)U
};

struct WellFamily {
    std::vector<Mat3> variants;
    std::string group_name;
};

// Proper rotation groups with exact {-1,0,1} entries.
inline std::vector<Mat3> rotation_group(const std::string& name) {
    auto rot = [](int axis, int quarter_turns) {
        Mat3 R = Mat3::Identity();
        int c[4] = {1, 0, -1, 0}, s[4] = {0, 1, 0, -1};
        int q = ((quarter_turns % 4) + 4) % 4;
        int i = (axis + 1) % 3, j = (axis + 2) % 3;
        R.setZero();
        R(axis, axis) = 1.0;
        R(i, i) = c[q]; R(i, j) = -s[q];
        R(j, i) = s[q]; R(j, j) = c[q];
        return R;
    };
    if (name == "identity") return {Mat3::Identity()};
    if (name == "orthorhombic")
        return {Mat3::Identity(), rot(0, 2), rot(1, 2), rot(2, 2)};
    if (name == "tetragonal") {
        std::vector<Mat3> g;
        for (int q = 0; q < 4; ++q) g.push_back(rot(2, q));
        for (int q = 0; q < 4; ++q) g.push_back(rot(0, 2) * rot(2, q));
        return g;
    }
    if (name == "cubic") {
        // closure of the two quarter-turn generators; 24 elements
        std::vector<Mat3> g{Mat3::Identity()};
        auto contains = [&](const Mat3& R) {
            for (const auto& Q : g)
                if ((Q - R).norm() < 0.5) return true;
            return false;
        };
        std::vector<Mat3> gens{rot(0, 1), rot(2, 1)};
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t i = 0; i < g.size(); ++i)
                for (const auto& s : gens) {
                    Mat3 cand = s * g[i];
                    for (int r = 0; r < 3; ++r)
                        for (int c = 0; c < 3; ++c) cand(r, c) = std::round(cand(r, c));
                    if (!contains(cand)) { g.push_back(cand); grew = true; }
                }
        }
        if (g.size() != 24)
            throw NumericError("cubic group closure did not reach 24 elements");
        return g;
    }
    throw ParseError("unknown symmetry group '" + name + "'");
}

// Distinct stretches Q U1 Q^T over the group, deduplicated at Frobenius
// distance 1e-8.
inline WellFamily variants(const Mat3& U1, const std::string& group) {
    Mat3 U = as_stretch(U1);
    WellFamily fam;
    fam.group_name = group;
    for (const Mat3& Q : rotation_group(group)) {
        Mat3 V = Q * U * Q.transpose();
        bool fresh = true;
        for (const Mat3& W : fam.variants)
            if ((W - V).norm() <= 1e-8) { fresh = false; break; }
        if (fresh) fam.variants.push_back(V);
    }
    return fam;
}

inline double dist_to_rotation_well(const Mat3& A, const Mat3& U) {
    // direct residual against the optimal rotation; the squared-norm identity
    // cancels catastrophically for on-well points
    Mat3 R = max_trace_rotation(U * A.transpose()).rotation;
    return (A - R * U).norm();
}

inline double dist_to_well_union(const Mat3& A, const WellFamily& fam) {
    double d = std::numeric_limits<double>::infinity();
    for (const Mat3& U : fam.variants) d = std::min(d, dist_to_rotation_well(A, U));
    return d;
}

constexpr double kInfiniteEnergy = std::numeric_limits<double>::infinity();

// Constrained-theory density: -T . (A - R1tau U1) on the well union, +inf off
// it. The +inf branch is the contract, not an error.
inline double constrained_energy(const Mat3& A, const Mat3& T, const Mat3& R1tau_U1,
                                 const WellFamily& wellset, double membership_tol = 1e-8) {
    if (dist_to_well_union(A, wellset) > membership_tol) return kInfiniteEnergy;
    return -(T.cwiseProduct(A - R1tau_U1)).sum();
}

// ---------------------------------------------------------------------------
// Dilatational construction
// ---------------------------------------------------------------------------

// Finite union of points and closed intervals on the positive axis.
struct RealSet {
    std::vector<std::pair<double, double>> components; // lo <= hi, sorted, disjoint

    static RealSet points(std::initializer_list<double> ts) {
        RealSet s;
        for (double t : ts) s.components.push_back({t, t});
        s.normalize();
        return s;
    }
    void normalize() {
        std::sort(components.begin(), components.end());
        std::vector<std::pair<double, double>> merged;
        for (auto c : components) {
            if (!merged.empty() && c.first <= merged.back().second)
                merged.back().second = std::max(merged.back().second, c.second);
            else
                merged.push_back(c);
        }
        components = std::move(merged);
    }
    bool empty() const { return components.empty(); }
    double min() const { return components.front().first; }
    double max() const { return components.back().second; }
    double dist(double t) const {
        double d = std::numeric_limits<double>::infinity();
        for (auto& c : components) {
            if (t < c.first) d = std::min(d, c.first - t);
            else if (t > c.second) d = std::min(d, t - c.second);
            else return 0.0;
        }
        return d;
    }
    RealSet cubed() const {
        RealSet s;
        for (auto& c : components)
            s.components.push_back({c.first * c.first * c.first, c.second * c.second * c.second});
        s.normalize();
        return s;
    }
    static double gap(const RealSet& a, const RealSet& b) {
        double g = std::numeric_limits<double>::infinity();
        for (auto& ca : a.components)
            for (auto& cb : b.components) {
                if (cb.first > ca.second) g = std::min(g, cb.first - ca.second);
                else if (ca.first > cb.second) g = std::min(g, ca.first - cb.second);
                else return 0.0;
            }
        return g;
    }
};

inline double quintic_smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

// Specification of the isotropic two-well density
//   W0(A) = c1 (l1^a + l2^a + l3^a) + h(l1 l2 l3),    h = hbar + htilde,
// with wells K1 = k1 SO(3), K2 = k2 SO(3).
//
// hbar vanishes exactly on Z = {k^3 : k in k1 u k2}: convex cubic arms outside
// [min Z, max Z], a C2 sextic bump on each internal gap, and a convex barrier
// blowing up at t = 0. The bump curvature is bounded below by -6 cw, so
// choosing cw <= 0.9/(6) * min htilde'' on [a,b] keeps the assembled h convex.
//
// htilde equals -3 c1 t^{a/3} on (a,b) and flattens to a constant on
// [b, b+1] by damping its derivative with a quintic smoothstep; the damped
// derivative is still nondecreasing, so htilde stays convex and C2 by
// construction. The plateau value (reported as c0) is computed in closed form.
struct DilatationalSpec {
    RealSet k1, k2;       // compact stretch sets, disjoint
    double alpha = 2.0;   // exponent in (1,3)
    double c1 = 1.0;      // growth coefficient
    double a = 0.0, b = 0.0; // bracket of the zero set of hbar
    double cw = 0.0;      // hbar scale (auto when 0)
    double cb = 0.0;      // barrier scale (auto when 0)
    double eps = 0.0;     // neighbourhood radius in matrix space (auto when 0)

    // derived
    RealSet Z;            // zero set of hbar (t-space)
    RealSet N2;           // {k^3 : k in k2}
    double rho = 0.0;     // bump support width for H
    double c0 = 0.0;      // plateau value of htilde = inf h
    std::array<double, 6> chi_poly{}; // chi(s) on [b,b+1] as sum c_k s^k
};

inline double dilatational_well_gap(const DilatationalSpec& s) {
    // dist(k1 SO(3), k2 SO(3)) in Frobenius norm
    return std::sqrt(3.0) * RealSet::gap(s.k1, s.k2);
}

inline DilatationalSpec make_dilatational(RealSet k1, RealSet k2, double alpha,
                                          double c1 = 1.0, double cw = 0.0,
                                          double eps = 0.0) {
    if (k1.empty() || k2.empty()) throw PreconditionError("dilatational: empty well set");
    if (k1.min() <= 0.0 || k2.min() <= 0.0)
        throw PreconditionError("dilatational: wells must lie in (0, inf)");
    if (RealSet::gap(k1, k2) <= 0.0)
        throw PreconditionError("dilatational: k1 and k2 must be disjoint");
    if (!(alpha > 1.0 && alpha < 3.0))
        throw PreconditionError("dilatational: alpha must lie in (1,3)");
    if (!(c1 > 0.0)) throw PreconditionError("dilatational: c1 must be positive");

    DilatationalSpec s;
    s.k1 = k1; s.k2 = k2; s.alpha = alpha; s.c1 = c1;
    RealSet ku = k1; // union
    for (auto& c : k2.components) ku.components.push_back(c);
    ku.normalize();
    s.Z = ku.cubed();
    s.N2 = k2.cubed();
    s.a = 0.5 * s.Z.min();
    s.b = s.Z.max() + 0.5;

    // convexity: bump curvature >= -6 cw, htilde'' on [a,b] minimized at t=b
    double kmin = (1.0 / 3.0) * c1 * alpha * (3.0 - alpha) * std::pow(s.b, alpha / 3.0 - 2.0);
    double cw_cap = 0.15 * kmin; // 0.9 * kmin / 6
    s.cw = (cw > 0.0) ? std::min(cw, cw_cap) : cw_cap;
    s.cb = s.cw;

    // bump support for H: stay clear of N1, of internal N2 gaps, and of 0
    RealSet N1 = k1.cubed();
    double half_gap = 0.5 * RealSet::gap(N1, s.N2);
    double internal = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < s.N2.components.size(); ++i)
        internal = std::min(internal,
                            0.5 * (s.N2.components[i].first - s.N2.components[i - 1].second));
    double eps_matrix = (eps > 0.0) ? eps : 0.2 * dilatational_well_gap(s);
    s.eps = eps_matrix;
    s.rho = std::min({eps_matrix, half_gap, internal, 0.5 * s.N2.min()});

    // chi(s) = 1 - S2(s - b) expanded in powers of s on [b, b+1]
    // S2(u) = 10 u^3 - 15 u^4 + 6 u^5
    std::array<double, 6> su{0.0, 0.0, 0.0, 10.0, -15.0, 6.0};
    std::array<double, 6> cs{};
    for (int k = 3; k <= 5; ++k) {
        // expand (s - b)^k
        double binom = 1.0;
        for (int j = 0; j <= k; ++j) {
            cs[j] += su[k] * binom * std::pow(-s.b, k - j);
            binom = binom * (k - j) / (j + 1.0);
        }
    }
    s.chi_poly = {1.0 - cs[0], -cs[1], -cs[2], -cs[3], -cs[4], -cs[5]};

    // plateau: c0 = htilde(b+1) = -3 c1 b^{a/3} - c1 a * I(b..b+1)
    // with I = sum_k chi_k s^{a/3-1+k} integrated in closed form
    double I = 0.0;
    for (int k = 0; k <= 5; ++k) {
        double e = alpha / 3.0 + k;
        I += s.chi_poly[k] * (std::pow(s.b + 1.0, e) - std::pow(s.b, e)) / e;
    }
    s.c0 = -3.0 * c1 * std::pow(s.b, alpha / 3.0) - c1 * alpha * I;
    return s;
}

inline double dilat_hbar(const DilatationalSpec& s, double t) {
    if (t <= 0.0) return kInfiniteEnergy;
    double L = s.Z.min(), R = s.Z.max();
    double v = 0.0;
    if (t < L) v += std::pow(L - t, 3);
    if (t > R) v += std::pow(t - R, 3);
    for (std::size_t i = 1; i < s.Z.components.size(); ++i) {
        double r = s.Z.components[i - 1].second, l = s.Z.components[i].first;
        if (t > r && t < l) {
            double w = l - r, u = (t - r) / w;
            double q = u * (1.0 - u);
            v += 16.0 * w * w * q * q * q;
        }
    }
    double barrier = (t < s.a) ? std::pow(s.a - t, 3) / t : 0.0;
    return s.cw * v + s.cb * barrier;
}

// -3 c1 t^{alpha/3} on all of (0, b]; the AM-GM inequality then makes
// W0 = hbar + c1(sum li^alpha - 3 t^{alpha/3}) >= hbar >= 0 pointwise, with
// zero set exactly the wells. Above b the derivative is damped to zero by a
// quintic smoothstep, which keeps it nondecreasing (convexity) and C2.
inline double dilat_htilde(const DilatationalSpec& s, double t) {
    if (t <= 0.0) return 0.0; // masked by hbar = +inf
    double e = s.alpha / 3.0;
    auto base = [&](double x) { return -3.0 * s.c1 * std::pow(x, e); };
    if (t >= s.b + 1.0) return s.c0;
    if (t > s.b) {
        double I = 0.0;
        for (int k = 0; k <= 5; ++k) {
            double ek = e + k;
            I += s.chi_poly[k] * (std::pow(t, ek) - std::pow(s.b, ek)) / ek;
        }
        return base(s.b) - s.c1 * s.alpha * I;
    }
    return base(t);
}

inline double dilat_h(const DilatationalSpec& s, double t) {
    if (t <= 0.0) return kInfiniteEnergy;
    return dilat_hbar(s, t) + dilat_htilde(s, t);
}

// Smooth bump H: 1 on N2 = {k^3 : k in k2}, 0 at distance rho and beyond.
inline double dilat_bump(const DilatationalSpec& s, double t) {
    double d = s.N2.dist(t);
    return 1.0 - quintic_smoothstep(d / s.rho);
}

// W_tau(A) = c1 sum li^alpha + h(l1 l2 l3) - tau H(det A); +inf for det A <= 0.
inline double dilatational_energy(const Mat3& A, const DilatationalSpec& s, double tau = 0.0) {
    require(tau >= 0.0, "dilatational_energy: tau must be >= 0");
    double det = A.determinant();
    if (det <= 0.0) return kInfiniteEnergy;
    Eigen::JacobiSVD<Mat3> svd(A);
    const Vec3& l = svd.singularValues();
    double w = s.c1 * (std::pow(l[0], s.alpha) + std::pow(l[1], s.alpha) +
                       std::pow(l[2], s.alpha)) +
               dilat_h(s, l[0] * l[1] * l[2]);
    if (tau > 0.0) w -= tau * dilat_bump(s, det);
    return w;
}

// ---------------------------------------------------------------------------
// Hypothesis checking
// ---------------------------------------------------------------------------

enum class EnergyKind { constrained, dilatational, double_well_2d };

// A well-based energy specification bundling the evaluation rule with enough
// geometry to sample on and around its two well sets.
struct EnergyDensity {
    EnergyKind kind = EnergyKind::dilatational;
    int dim = 3;
    std::function<double(const Eigen::MatrixXd&)> eval;
    std::function<double(const Eigen::MatrixXd&, int)> well_dist;    // which = 1 or 2
    std::function<Eigen::MatrixXd(Rng&, int)> well_sample;           // a point of K_which
    std::function<Eigen::MatrixXd(Rng&)> ambient_sample;             // admissible global draw
    double eps = 0.0;
    double delta = 0.0;
    double alpha_floor = 0.0;
    double p = 2.0;
    double c0 = 0.0, c1 = 1.0;
    double tau = 0.0;
    double box_radius = 0.0;
    double well_separation = 0.0;
};

inline EnergyDensity dilatational_density(const DilatationalSpec& spec, double tau) {
    EnergyDensity W;
    W.kind = EnergyKind::dilatational;
    W.dim = 3;
    W.eval = [spec, tau](const Eigen::MatrixXd& A) {
        return dilatational_energy(Mat3(A), spec, tau);
    };
    W.well_dist = [spec](const Eigen::MatrixXd& A, int which) {
        Mat3 A3 = A;
        Eigen::JacobiSVD<Mat3> svd(A3);
        Vec3 l = svd.singularValues();
        if (A.determinant() < 0.0) l[2] = -l[2];
        const RealSet& ks = (which == 1) ? spec.k1 : spec.k2;
        double best = std::numeric_limits<double>::infinity();
        for (auto& c : ks.components) {
            for (double k : {c.first, c.second, std::clamp(l.sum() / 3.0, c.first, c.second)}) {
                double d2 = 0.0;
                for (int i = 0; i < 3; ++i) d2 += (l[i] - k) * (l[i] - k);
                best = std::min(best, std::sqrt(d2));
            }
        }
        return best;
    };
    W.well_sample = [spec](Rng& rng, int which) {
        const RealSet& ks = (which == 1) ? spec.k1 : spec.k2;
        auto& c = ks.components[rng() % ks.components.size()];
        double k = uniform(rng, c.first, c.second);
        return Eigen::MatrixXd(k * random_rotation(rng));
    };
    double kmax = std::max(spec.k1.max(), spec.k2.max());
    W.box_radius = 3.0 * kmax * std::sqrt(3.0);
    W.ambient_sample = [r = W.box_radius](Rng& rng) {
        Mat3 A;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) A(i, j) = uniform(rng, -1.0, 1.0);
        A *= uniform01(rng) * r / std::max(A.norm(), 1e-12);
        if (A.determinant() < 0.0) A.col(0) *= -1.0;
        return Eigen::MatrixXd(A);
    };
    W.eps = spec.eps;
    W.delta = tau;
    W.p = spec.alpha;
    W.c0 = spec.c0;
    W.c1 = spec.c1;
    W.tau = tau;
    W.well_separation = dilatational_well_gap(spec);
    return W;
}

// Smoothed 2x2 double well used by the relaxation probe:
//   W(A) = softmin_s(|A - A1|^p, |A - A2|^p - delta),
//   softmin_s(u, v) = -s log(exp(-u/s) + exp(-v/s)).
inline double double_well_value(const Mat2& A, const Mat2& A1, const Mat2& A2,
                                double delta, double smoothing, double p) {
    double u = std::pow((A - A1).squaredNorm(), 0.5 * p);
    double v = std::pow((A - A2).squaredNorm(), 0.5 * p) - delta;
    double m = std::min(u, v);
    return m - smoothing * std::log(std::exp(-(u - m) / smoothing) +
                                    std::exp(-(v - m) / smoothing));
}

inline EnergyDensity double_well_density(const Mat2& A1, const Mat2& A2, double delta,
                                         double smoothing = 1e-2, double p = 2.0) {
    EnergyDensity W;
    W.kind = EnergyKind::double_well_2d;
    W.dim = 2;
    W.eval = [=](const Eigen::MatrixXd& A) {
        return double_well_value(Mat2(A), A1, A2, delta, smoothing, p);
    };
    W.well_dist = [=](const Eigen::MatrixXd& A, int which) {
        return (Mat2(A) - (which == 1 ? A1 : A2)).norm();
    };
    W.well_sample = [=](Rng&, int which) {
        return Eigen::MatrixXd(which == 1 ? A1 : A2);
    };
    W.well_separation = (A2 - A1).norm();
    W.box_radius = 3.0 * std::max({A1.norm(), A2.norm(), 1.0});
    W.ambient_sample = [r = W.box_radius](Rng& rng) {
        Mat2 A;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) A(i, j) = uniform(rng, -1.0, 1.0);
        A *= uniform01(rng) * r / std::max(A.norm(), 1e-12);
        return Eigen::MatrixXd(A);
    };
    W.delta = delta;
    W.p = p;
    // growth floor for the softmin of shifted p-th powers
    W.c1 = std::pow(0.5, p);
    W.c0 = -delta - smoothing * std::log(2.0) - std::pow(0.5, p) -
           std::max(A1.squaredNorm(), A2.squaredNorm());
    return W;
}

struct HypothesisReport {
    double min_w_near_k1 = 0.0; // should be ~0 (H3)
    double delta_measured = 0.0; // -min W on N_eps(K2) (H4)
    double alpha_measured = 0.0; // floor outside both neighbourhoods (H5)
    bool growth_ok = true;       // sampled H2
    double eps = 0.0;
};

// Seeded global sampling plus local pattern-search refinement.
inline HypothesisReport check_hypotheses(const EnergyDensity& W, double eps,
                                         int sample_budget, std::uint64_t seed) {
    require(eps > 0.0 && eps < 0.5 * W.well_separation,
            "check_hypotheses: eps must be below half the well separation");
    Rng rng(seed);
    const int dim = W.dim;
    for (int which : {1, 2}) {
        Eigen::MatrixXd P = W.well_sample(rng, which);
        if (P.norm() > W.box_radius)
            throw PreconditionError("check_hypotheses: search box too small to contain both wells");
    }

    auto perturbed_min = [&](int which, double radius) {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < sample_budget; ++i) {
            Eigen::MatrixXd A = W.well_sample(rng, which);
            if (i > 0) { // keep the exact well point in the pool
                Eigen::MatrixXd D(dim, dim);
                for (int r = 0; r < dim; ++r)
                    for (int c = 0; c < dim; ++c) D(r, c) = normal01(rng);
                D *= uniform01(rng) * radius / std::max(D.norm(), 1e-300);
                A += D;
            }
            if (W.well_dist(A, which) > radius) continue;
            best = std::min(best, W.eval(A));
        }
        return best;
    };

    HypothesisReport rep;
    rep.eps = eps;
    rep.min_w_near_k1 = perturbed_min(1, 0.5 * eps);
    rep.delta_measured = -perturbed_min(2, eps);

    // (H5): floor outside both eps-neighbourhoods inside the box
    auto admissible = [&](const Eigen::MatrixXd& A) {
        return A.norm() <= W.box_radius && W.well_dist(A, 1) > eps && W.well_dist(A, 2) > eps;
    };
    double alpha = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd best_pt;
    bool growth_ok = true;
    for (int i = 0; i < sample_budget; ++i) {
        Eigen::MatrixXd A = W.ambient_sample(rng);
        double w = W.eval(A);
        if (std::isfinite(w) &&
            w < W.c0 + W.c1 * std::pow(A.norm(), W.p) - 1e-9 * std::max(1.0, std::abs(w)))
            growth_ok = false;
        if (!admissible(A)) continue;
        if (w < alpha) { alpha = w; best_pt = A; }
    }
    // boundary candidates: points at distance just above eps from either well
    for (int which : {1, 2}) {
        for (int i = 0; i < sample_budget / 4; ++i) {
            Eigen::MatrixXd A = W.well_sample(rng, which);
            Eigen::MatrixXd D(dim, dim);
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c) D(r, c) = normal01(rng);
            A += D * (1.02 * eps / std::max(D.norm(), 1e-300));
            if (!admissible(A)) continue;
            double w = W.eval(A);
            if (w < alpha) { alpha = w; best_pt = A; }
        }
    }
    // local pattern search from the incumbent, sweeps capped for determinism
    if (best_pt.size() > 0) {
        double step = 0.25 * eps;
        int sweeps = 0;
        while (step > 1e-7 && ++sweeps <= 400) {
            bool improved = false;
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c)
                    for (double sgn : {+1.0, -1.0}) {
                        Eigen::MatrixXd A = best_pt;
                        A(r, c) += sgn * step;
                        if (!admissible(A)) continue;
                        double w = W.eval(A);
                        if (w < alpha) { alpha = w; best_pt = A; improved = true; }
                    }
            if (!improved) step *= 0.5;
        }
    }
    rep.alpha_measured = alpha;
    rep.growth_ok = growth_ok;
    return rep;
}

} // namespace marten
