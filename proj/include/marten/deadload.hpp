#pragma once

// Biaxial dead-load pipeline: per-well minimizers of -T.A, the equal-energy
// curve sigma2 = f(sigma1), the metastability-loss bound tau+ with its Schmid
// residual, and the explicit laminate counterexample beyond tau+.

#include <functional>
#include <vector>

#include "marten/compatibility.hpp"
#include "marten/linalg.hpp"
#include "marten/wells.hpp"

namespace marten {

struct BiaxialLoad {
    double sigma1, sigma2;
    Vec3 e1 = Vec3::UnitX();
    Vec3 e2 = Vec3::UnitY();

    BiaxialLoad(double s1, double s2, Vec3 a1 = Vec3::UnitX(), Vec3 a2 = Vec3::UnitY())
        : sigma1(s1), sigma2(s2), e1(a1), e2(a2) {
        require(sigma1 > 0.0 && sigma2 > 0.0, "BiaxialLoad: tractions must be positive");
        require(std::abs(e1.norm() - 1.0) < 1e-12 && std::abs(e2.norm() - 1.0) < 1e-12 &&
                    std::abs(e1.dot(e2)) < 1e-12,
                "BiaxialLoad: axes must be orthonormal");
    }
    Mat3 tensor() const {
        return sigma1 * e1 * e1.transpose() + sigma2 * e2 * e2.transpose();
    }
};

// Machine-frame components of a material-frame tensor: U_mach = R U R^T.
struct Orientation {
    Mat3 R = Mat3::Identity();

    static Orientation aligned() { return {}; }

    static Orientation axis_angle(const Vec3& axis, double radians) {
        Orientation o;
        o.R = Eigen::AngleAxisd(radians, axis.normalized()).toRotationMatrix();
        return o;
    }

    // Machine axes along the principal stretches of U1, largest first. For a
    // variant pair sharing an eigenbasis this diagonalizes both wells.
    static Orientation u1_eigenframe(const Mat3& U1) {
        EigenSystem es = sym_eigen(as_stretch(U1));
        Orientation o;
        for (int i = 0; i < 3; ++i) {
            Vec3 v = es.eigenvectors.col(2 - i);
            int big;
            v.cwiseAbs().maxCoeff(&big);
            if (v[big] < 0.0) v = -v;
            o.R.row(i) = v.transpose();
        }
        if (o.R.determinant() < 0.0) o.R.row(2) *= -1.0;
        return o;
    }

    Mat3 to_machine(const Mat3& U_material) const { return R * U_material * R.transpose(); }
};

struct WellMinimizer {
    Mat3 rotation; // R* minimizing -T . R U
    double value;  // min of -T . A over SO(3)U
    bool unique;
};

// Delegates to the trace maximizer: -T.RU = -tr(R U T) for symmetric T.
inline WellMinimizer well_minimizer(const Mat3& T, const Mat3& U_machine) {
    TraceMax mtr = max_trace_rotation(U_machine * T);
    return {mtr.rotation, -mtr.value, mtr.unique};
}

inline WellMinimizer well_minimizer(const BiaxialLoad& load, const Mat3& U_material,
                                    const Orientation& orient) {
    return well_minimizer(load.tensor(), orient.to_machine(U_material));
}

struct CurvePoint {
    double sigma1;
    double f_sigma1;  // sigma2 on the equal-energy curve
    double rank_gap;  // second singular value of R2 U2 - R1 U1 there
};

struct CurveResult {
    std::vector<CurvePoint> points;
    bool swapped = false; // wells were reordered so variant 1 is favoured below
};

namespace detail {

// Equal-energy root in sigma2 for one sigma1, bisected to 1e-10 relative.
inline double curve_root(const Mat3& U1m, const Mat3& U2m, const BiaxialLoad& axes,
                         double sigma1) {
    auto g = [&](double sigma2) {
        Mat3 T = BiaxialLoad(sigma1, sigma2, axes.e1, axes.e2).tensor();
        return well_minimizer(T, U1m).value - well_minimizer(T, U2m).value;
    };
    double lo = 1e-6 * sigma1, hi = sigma1;
    double glo = g(lo);
    double scale = sigma1 * std::max(U1m.norm(), U2m.norm());
    if (std::abs(glo) < 1e-13 * scale && std::abs(g(4.0 * sigma1)) < 1e-13 * scale)
        throw RegimeError("equal_energy_curve: wells are load-degenerate, no curve exists");
    if (glo > 0.0)
        throw RegimeError("equal_energy_curve: variant 1 not favoured at small sigma2");
    double ghi = g(hi);
    while (ghi < 0.0) {
        hi *= 2.0;
        if (hi > 1e6 * sigma1)
            throw RegimeError("equal_energy_curve: wells never exchange stability");
        ghi = g(hi);
    }
    while (hi - lo > 1e-10 * hi) {
        double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

// Tabulates sigma2 = f(sigma1) where the two wells exchange stability, with
// the second singular value of R2 U2 - R1 U1 at each point. Wells are
// ordered so variant 1 is favoured for small sigma2 (swapped and flagged
// otherwise); the emitted table must be strictly increasing.
inline CurveResult equal_energy_curve(const Mat3& U1_material, const Mat3& U2_material,
                                      const Orientation& orient,
                                      const std::vector<double>& sigma1_grid,
                                      const BiaxialLoad& axes = BiaxialLoad(1.0, 1.0)) {
    require(!sigma1_grid.empty(), "equal_energy_curve: empty grid");
    for (double s : sigma1_grid)
        require(s > 0.0, "equal_energy_curve: grid values must be positive");
    Mat3 U1m = orient.to_machine(as_stretch(U1_material));
    Mat3 U2m = orient.to_machine(as_stretch(U2_material));

    CurveResult out;
    { // favour check at the first grid point
        double s1 = sigma1_grid.front();
        Mat3 T = BiaxialLoad(s1, 1e-6 * s1, axes.e1, axes.e2).tensor();
        if (well_minimizer(T, U1m).value > well_minimizer(T, U2m).value) {
            std::swap(U1m, U2m);
            out.swapped = true;
        }
    }
    for (double s1 : sigma1_grid) {
        double f = detail::curve_root(U1m, U2m, axes, s1);
        Mat3 T = BiaxialLoad(s1, f, axes.e1, axes.e2).tensor();
        Mat3 D = well_minimizer(T, U2m).rotation * U2m - well_minimizer(T, U1m).rotation * U1m;
        Eigen::JacobiSVD<Mat3> svd(D);
        out.points.push_back({s1, f, svd.singularValues()[1]});
    }
    for (std::size_t i = 1; i < out.points.size(); ++i)
        if (!(out.points[i].f_sigma1 > out.points[i - 1].f_sigma1) &&
            out.points[i].sigma1 > out.points[i - 1].sigma1)
            throw NumericError("equal_energy_curve: table is not strictly increasing");
    return out;
}

// Equal-energy crossing along a general load path t -> (sigma1, sigma2)
// crossing the curve transversally.
inline double equal_energy_crossing(const Mat3& U1m, const Mat3& U2m,
                                    const std::function<std::pair<double, double>(double)>& path,
                                    double t_lo, double t_hi,
                                    const BiaxialLoad& axes = BiaxialLoad(1.0, 1.0)) {
    auto g = [&](double t) {
        auto [s1, s2] = path(t);
        Mat3 T = BiaxialLoad(s1, s2, axes.e1, axes.e2).tensor();
        return well_minimizer(T, U1m).value - well_minimizer(T, U2m).value;
    };
    double glo = g(t_lo), ghi = g(t_hi);
    if (glo == 0.0) return t_lo;
    if (ghi == 0.0) return t_hi;
    if (std::signbit(glo) == std::signbit(ghi))
        throw RegimeError("equal_energy_crossing: path does not cross the curve");
    while (t_hi - t_lo > 1e-12 * std::max(1.0, std::abs(t_hi))) {
        double mid = 0.5 * (t_lo + t_hi);
        double gm = g(mid);
        if (gm == 0.0) return mid;
        if (std::signbit(gm) == std::signbit(glo)) { t_lo = mid; glo = gm; }
        else t_hi = mid;
    }
    return 0.5 * (t_lo + t_hi);
}

struct HysteresisBound {
    double tau_plus;        // smallest tau with a favourable rank-one partner
    Mat3 B;                 // the preferred partner on the second well
    Vec3 a, n;              // its twin data, B - R1 U1 = a (x) n
    double schmid_residual; // |a . T_{tau+} n|
    double partner_gap;     // |W(partner a) - W(partner b)| at tau+
    double f_sigma1;        // curve height at sigma1
    double c2;              // loading rate actually used
    Mat3 R1_tau;            // well-1 minimizer rotation at tau+
    bool swapped = false;   // wells reordered so the parent is favoured below the curve
};

// tau+ via phi(tau) = min over the two twin partners of W_tau(partner) -
// W_tau(R1^tau U1) = -a.(T_tau n), bracketed from tau = 0 and bisected.
inline HysteresisBound hysteresis_bound(const Mat3& U1_material, const Mat3& U2_material,
                                        const Orientation& orient, double sigma1,
                                        double c2 = 0.0, double tau_max = 1.0,
                                        const BiaxialLoad& axes = BiaxialLoad(1.0, 1.0)) {
    require(sigma1 > 0.0, "hysteresis_bound: sigma1 must be positive");
    Mat3 U1m = orient.to_machine(as_stretch(U1_material));
    Mat3 U2m = orient.to_machine(as_stretch(U2_material));
    bool swapped = false;
    { // parent phase = well favoured below the curve
        Mat3 T0 = BiaxialLoad(sigma1, 1e-6 * sigma1, axes.e1, axes.e2).tensor();
        if (well_minimizer(T0, U1m).value > well_minimizer(T0, U2m).value) {
            std::swap(U1m, U2m);
            swapped = true;
        }
    }
    double f = detail::curve_root(U1m, U2m, axes, sigma1);

    auto T_of = [&](double tau, double c2v) {
        return BiaxialLoad(sigma1, c2v * tau + f, axes.e1, axes.e2).tensor();
    };
    Mat3 R10U1 = well_minimizer(T_of(0.0, 0.0), U1m).rotation * U1m;
    Mat3 R20U2 = well_minimizer(T_of(0.0, 0.0), U2m).rotation * U2m;
    double eps = 0.2 * (R20U2 - R10U1).norm();

    auto stays_near_K1 = [&](double c2v) {
        for (int i = 0; i <= 64; ++i) {
            double tau = tau_max * i / 64.0;
            Mat3 F = well_minimizer(T_of(tau, c2v), U1m).rotation * U1m;
            if ((F - R10U1).norm() > eps) return false;
        }
        return true;
    };
    if (c2 > 0.0) {
        require(stays_near_K1(c2),
                "hysteresis_bound: c2 too large, R1^tau U1 leaves N_eps(K1) on [0, tau_max]");
    } else {
        c2 = std::pow(2.0, std::floor(std::log2(0.1 * f)));
        while (c2 > 1e-12 && !stays_near_K1(c2)) c2 *= 0.5;
        if (c2 <= 1e-12)
            throw NumericError("hysteresis_bound: no admissible c2 found");
    }

    struct Eval {
        double phi;
        double other;
        TwinSolution preferred;
        Mat3 R1;
    };
    auto eval = [&](double tau) -> Eval {
        Mat3 T = T_of(tau, c2);
        Mat3 R1 = well_minimizer(T, U1m).rotation;
        Mat3 F = R1 * U1m;
        auto partners = twin_solutions(F, U2m);
        if (partners.size() != 2)
            throw RegimeError("hysteresis_bound: twin partners absent at tau = " +
                              std::to_string(tau));
        double w0 = -(partners[0].a.dot(T * partners[0].n));
        double w1 = -(partners[1].a.dot(T * partners[1].n));
        int best = (w0 <= w1) ? 0 : 1;
        return {std::min(w0, w1), std::max(w0, w1), partners[best], R1};
    };

    if (eval(0.0).phi < -1e-12)
        throw NumericError("hysteresis_bound: phi(0) negative, curve solve inconsistent");

    const int scan = 64;
    double lo = 0.0, hi = -1.0;
    double prev = eval(0.0).phi;
    for (int i = 1; i <= scan; ++i) {
        double tau = tau_max * i / scan;
        double phi = eval(tau).phi;
        if (phi <= 0.0) {
            lo = tau_max * (i - 1) / scan;
            hi = tau;
            break;
        }
        prev = phi;
    }
    (void)prev;
    if (hi < 0.0)
        throw RegimeError("hysteresis_bound: no metastability loss in range (0, tau_max]");
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        if (eval(mid).phi <= 0.0) hi = mid;
        else lo = mid;
    }
    double tau_plus = 0.5 * (lo + hi);
    Eval at = eval(tau_plus);
    HysteresisBound out;
    out.tau_plus = tau_plus;
    out.a = at.preferred.a;
    out.n = at.preferred.n;
    out.B = at.R1 * U1m + out.a * out.n.transpose();
    out.schmid_residual = std::abs(out.a.dot(T_of(tau_plus, c2) * out.n));
    out.partner_gap = at.other - at.phi;
    out.f_sigma1 = f;
    out.c2 = c2;
    out.R1_tau = at.R1;
    out.swapped = swapped;
    return out;
}

// ---------------------------------------------------------------------------
// Laminate counterexample
// ---------------------------------------------------------------------------

// Exact plane-slab volumes in an axis-aligned box via the Irwin-Hall
// piecewise-polynomial form of the halfspace-box intersection.
struct BoxSlab {
    Vec3 lo, hi; // box corners
    Vec3 n;      // unit normal
    Vec3 x0;     // slab anchor: slab is {0 <= (x - x0).n <= xi}

    double box_volume() const { return (hi - lo).prod(); }

    // vol{x in box : n.(x - x0) <= c}
    double vol_below(double c) const { return cdf_like(c, 0); }

    // integral over s in [c0, c1] of vol_below(s)
    double integral_vol_below(double c0, double c1) const {
        return cdf_like(c1, 1) - cdf_like(c0, 1);
    }

private:
    // moment = 0: volume; moment = 1: antiderivative in c
    double cdf_like(double c, int moment) const {
        double z = c - n.dot(lo - x0);
        double L[3], m[3];
        int d = 0;
        double vol = 1.0;
        for (int i = 0; i < 3; ++i) {
            L[i] = hi[i] - lo[i];
            vol *= L[i];
            double mi = n[i] * L[i];
            if (mi < 0.0) z -= mi;
            if (std::abs(mi) > 1e-14) m[d++] = std::abs(mi);
        }
        double norm = vol;
        double fact = 1.0;
        for (int i = 0; i < d; ++i) {
            norm /= m[i];
            fact *= (i + 1.0);
        }
        double acc = 0.0;
        for (int mask = 0; mask < (1 << d); ++mask) {
            double zs = z;
            int bits = 0;
            for (int i = 0; i < d; ++i)
                if (mask & (1 << i)) { zs -= m[i]; ++bits; }
            if (zs <= 0.0) continue;
            double term = std::pow(zs, d + moment);
            if (moment == 1) term /= (d + 1.0);
            acc += ((bits & 1) ? -1.0 : 1.0) * term;
        }
        return norm / fact * acc;
    }
};

struct LaminateCounterexample {
    double energy_gap;   // E(y_xi) - E(y*), closed form
    double l1_distance;  // |y_xi - y*|_L1
    double slab_volume;  // measure of the middle piece
    double c_omega;      // constant with l1 <= C xi |a|
    double w_partner;    // W_tau1 of the preferred partner
    double w_parent;     // W_tau1 of R1 U1 (zero by construction)
};

// Three-piece competitor y_xi: parent gradient below the slab, the rank-one
// partner B inside, parent shifted by xi a above. The energy gap is the slab
// volume times the well-value difference.
inline LaminateCounterexample laminate_counterexample(
    const Mat3& U1_material, const Mat3& U2_material, const Orientation& orient,
    double sigma1, double c2, double tau1, double xi, const Vec3& x0, const Vec3& box_lo,
    const Vec3& box_hi, const BiaxialLoad& axes = BiaxialLoad(1.0, 1.0)) {
    require(xi > 0.0, "laminate_counterexample: xi must be positive");
    require(tau1 > 0.0, "laminate_counterexample: tau1 must be positive");
    Mat3 U1m = orient.to_machine(as_stretch(U1_material));
    Mat3 U2m = orient.to_machine(as_stretch(U2_material));
    { // same parent ordering as hysteresis_bound
        Mat3 T0 = BiaxialLoad(sigma1, 1e-6 * sigma1, axes.e1, axes.e2).tensor();
        if (well_minimizer(T0, U1m).value > well_minimizer(T0, U2m).value)
            std::swap(U1m, U2m);
    }
    double f = detail::curve_root(U1m, U2m, axes, sigma1);
    require(c2 > 0.0, "laminate_counterexample: c2 must be positive");
    Mat3 T = BiaxialLoad(sigma1, c2 * tau1 + f, axes.e1, axes.e2).tensor();
    Mat3 R1 = well_minimizer(T, U1m).rotation;
    Mat3 F = R1 * U1m;
    auto partners = twin_solutions(F, U2m);
    if (partners.size() != 2)
        throw RegimeError("laminate_counterexample: no rank-one partner at tau1");
    double w0 = -(partners[0].a.dot(T * partners[0].n));
    double w1 = -(partners[1].a.dot(T * partners[1].n));
    const TwinSolution& pref = (w0 <= w1) ? partners[0] : partners[1];
    double w = std::min(w0, w1);

    BoxSlab slab{box_lo, box_hi, pref.n, x0};
    double tmin = std::numeric_limits<double>::infinity();
    double tmax = -std::numeric_limits<double>::infinity();
    for (int corner = 0; corner < 8; ++corner) {
        Vec3 x;
        for (int i = 0; i < 3; ++i) x[i] = (corner & (1 << i)) ? box_hi[i] : box_lo[i];
        double t = pref.n.dot(x - x0);
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    if (!(tmin < 0.0 && tmax > xi))
        throw PreconditionError("laminate_counterexample: slab exits the domain");

    LaminateCounterexample out;
    out.slab_volume = slab.vol_below(xi) - slab.vol_below(0.0);
    out.energy_gap = out.slab_volume * w;
    out.l1_distance =
        pref.a.norm() * (xi * slab.box_volume() - slab.integral_vol_below(0.0, xi));
    out.c_omega = slab.box_volume();
    out.w_partner = w;
    out.w_parent = 0.0;
    return out;
}

} // namespace marten
