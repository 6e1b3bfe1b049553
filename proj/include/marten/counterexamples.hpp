#pragma once

// Exact constructions that probe the sharpness of the transition-layer
// estimate: the rooms-and-passages domain, the zero-gradient layer between
// two incompatible matrices, and the L1-bounded splitting sequence.

#include <vector>

#include "marten/linalg.hpp"
#include "marten/quadrature.hpp"
#include "marten/rng.hpp"

namespace marten {

// Rooms Q_j of half-side h_j joined by corridors C_j of length l_j and
// half-thickness d_j (C_j connects Q_j to Q_{j+1}); 0 < d_j < h_{j+1}.
struct RoomsPassages {
    std::vector<double> h; // J rooms, h[0] = h_1
    std::vector<double> l; // J-1 corridors
    std::vector<double> d; // J-1 corridor half-thicknesses

    int rooms() const { return static_cast<int>(h.size()); }

    void validate() const {
        if (h.size() < 3 || l.size() != h.size() - 1 || d.size() != h.size() - 1)
            throw PreconditionError("rooms: need J >= 3 rooms with J-1 corridors");
        double total = 0.0;
        for (std::size_t j = 0; j < h.size(); ++j) {
            if (h[j] <= 0.0) throw PreconditionError("rooms: room sizes must be positive");
            total += 2.0 * h[j];
        }
        for (std::size_t j = 0; j + 1 < h.size(); ++j) {
            if (l[j] <= 0.0) throw PreconditionError("rooms: corridor lengths must be positive");
            if (!(d[j] > 0.0 && d[j] < h[j + 1]))
                throw PreconditionError("rooms: need 0 < d_j < h_{j+1}");
            total += l[j];
        }
        if (!std::isfinite(total)) throw PreconditionError("rooms: domain not bounded");
    }

    // h_j = l_j = 2^{-j}; d_j = d_frac * h_{j+1}
    static RoomsPassages dyadic(int J, double d_frac = 0.5) {
        RoomsPassages g;
        for (int j = 1; j <= J; ++j) g.h.push_back(std::pow(2.0, -j));
        for (int j = 1; j < J; ++j) {
            g.l.push_back(std::pow(2.0, -j));
            g.d.push_back(d_frac * g.h[j]);
        }
        g.validate();
        return g;
    }

    // centre abscissa of room j (1-based)
    double room_centre(int j) const {
        double a = 0.0;
        for (int i = 1; i < j; ++i) a += h[i - 1] + l[i - 1] + h[i];
        return a;
    }
};

struct RoomsRatio {
    double layer_energy;
    double nucleus_volume; // 4 h_j^2
    double ratio;
};

// Energy of the two corridor transition layers against the nucleus volume of
// room j. The corridor gradient is affine in x1; the integral uses the
// corridor centre line, so the energy is exactly linear in the thickness d.
inline RoomsRatio rooms_ratio(const RoomsPassages& geom, const Mat2& A1, const Mat2& A2,
                              double p, int j) {
    geom.validate();
    if (j < 2 || j > geom.rooms() - 1)
        throw PreconditionError("rooms_ratio: need 2 <= j <= J-1");
    if (!(p > 1.0)) throw PreconditionError("rooms_ratio: p must exceed 1");
    {
        Eigen::JacobiSVD<Mat2> svd(A2 - A1);
        if (svd.singularValues()(1) <= 1e-10 * svd.singularValues()(0))
            throw PreconditionError("rooms_ratio: rank(A1 - A2) must exceed 1");
    }

    static const GaussRule rule = gauss_legendre(24);
    // corridor from the room with gradient G_from to the room with G_to,
    // starting at abscissa x0, length len, half-thickness dhalf
    auto corridor_energy = [&](const Mat2& G_from, const Mat2& G_to, double x0, double len,
                               double dhalf) {
        Mat2 dG = G_to - G_from;
        auto integrand = [&](double x1) {
            double s = (x1 - x0) / len;
            Mat2 D = s * G_to + (1.0 - s) * G_from;
            D.col(0) += dG * Vec2(x1, 0.0) / len;
            return 1.0 + std::pow(D.squaredNorm(), 0.5 * p);
        };
        return 2.0 * dhalf * gauss_integrate(integrand, x0, x0 + len, rule);
    };

    int jm = j - 1; // 1-based corridor indices: C_{j-1} and C_j
    double aj = geom.room_centre(j);
    double x_prev = geom.room_centre(jm) + geom.h[jm - 1];         // start of C_{j-1}
    double x_next = aj + geom.h[j - 1];                            // start of C_j
    RoomsRatio out;
    out.layer_energy =
        corridor_energy(A1, A2, x_prev, geom.l[jm - 1], geom.d[jm - 1]) +
        corridor_energy(A2, A1, x_next, geom.l[j - 1], geom.d[j - 1]);
    out.nucleus_volume = 4.0 * geom.h[j - 1] * geom.h[j - 1];
    out.ratio = out.layer_energy / out.nucleus_volume;
    return out;
}

// ---------------------------------------------------------------------------

struct ZeroGradientLayer {
    double layer_gradient_energy; // integral of |Dy|^p over the zero-gradient set
    double layer_measure;         // area of the middle region
    double min_phase_volume;      // delta^2 / 2
};

// Three-piece deformation on (0,1)^2 interpolating A1 = e2(x)e2 and
// A2 = (e1+e2)(x)(e1+e2) through a region of zero gradient.
inline Vec2 zero_gradient_deformation(const Vec2& x, double delta) {
    if (x[1] < 1.0 - delta) return Vec2(0.0, x[1]);
    if (x[0] + x[1] <= 2.0 - delta) return Vec2(0.0, 1.0 - delta);
    double t = x[0] + x[1];
    return Vec2(t + delta - 2.0, t - 1.0);
}

inline int zero_gradient_region(const Vec2& x, double delta) {
    if (x[1] < 1.0 - delta) return 1;          // gradient A1
    if (x[0] + x[1] <= 2.0 - delta) return 0;  // zero gradient
    return 2;                                  // gradient A2
}

inline ZeroGradientLayer zero_gradient_layer(double delta) {
    require(delta > 0.0 && delta < 1.0, "zero_gradient_layer: need 0 < delta < 1");
    ZeroGradientLayer out;
    out.layer_gradient_energy = 0.0;
    out.layer_measure = delta * (1.0 - delta) + 0.5 * delta * delta;
    out.min_phase_volume = 0.5 * delta * delta;
    return out;
}

// ---------------------------------------------------------------------------

struct L1Sequence {
    double l1_norm;            // integral of |Dy^{(j)}| over [-1,1]^n
    double strip_measure;      // measure of {0 < x1 < 1/j}
    double gradient_residual;  // max |finite difference - formula| over samples
};

// y^{(j)} = Ax for x1 <= 0, (j x1) Bx + (1 - j x1) Ax in the strip, Bx beyond;
// the strip gradient is j x1 B + (1 - j x1) A + j (B - A) x (x) e1.
inline Eigen::VectorXd l1_sequence_deformation(const Eigen::VectorXd& x,
                                               const Eigen::MatrixXd& A,
                                               const Eigen::MatrixXd& B, int j) {
    double x1 = x[0];
    if (x1 <= 0.0) return A * x;
    if (x1 >= 1.0 / j) return B * x;
    double s = j * x1;
    return s * (B * x) + (1.0 - s) * (A * x);
}

inline Eigen::MatrixXd l1_sequence_gradient(const Eigen::VectorXd& x,
                                            const Eigen::MatrixXd& A,
                                            const Eigen::MatrixXd& B, int j) {
    double s = j * x[0];
    Eigen::MatrixXd G = s * B + (1.0 - s) * A;
    G.col(0) += static_cast<double>(j) * ((B - A) * x);
    return G;
}

inline L1Sequence l1_sequence(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int j,
                              int fd_samples = 1000, std::uint64_t seed = 20240901) {
    require(j >= 1, "l1_sequence: j must be >= 1");
    require(A.rows() == A.cols() && A.rows() == B.rows() && B.rows() == B.cols(),
            "l1_sequence: A and B must be square and of equal size");
    const int n = static_cast<int>(A.rows());
    require(n >= 1 && n <= 3, "l1_sequence: dimensions 1..3 supported");

    L1Sequence out;
    out.strip_measure = std::pow(2.0, n - 1) / j;

    // bulk pieces have constant gradients
    double cross = std::pow(2.0, n - 1);
    out.l1_norm = A.norm() * cross * 1.0 + B.norm() * cross * (1.0 - 1.0 / j);

    // strip by tensor Gauss quadrature
    static const GaussRule rule = gauss_legendre(24);
    const int m = static_cast<int>(rule.nodes.size());
    double strip = 0.0;
    Eigen::VectorXd x(n);
    std::vector<int> idx(n, 0);
    double a1 = 0.0, b1 = 1.0 / j;
    while (true) {
        double w = 1.0;
        x[0] = 0.5 * (a1 + b1) + 0.5 * (b1 - a1) * rule.nodes[idx[0]];
        w *= 0.5 * (b1 - a1) * rule.weights[idx[0]];
        for (int dim = 1; dim < n; ++dim) {
            x[dim] = rule.nodes[idx[dim]];
            w *= rule.weights[idx[dim]];
        }
        strip += w * l1_sequence_gradient(x, A, B, j).norm();
        int dim = 0;
        while (dim < n && ++idx[dim] == m) idx[dim++] = 0;
        if (dim == n) break;
    }
    out.l1_norm += strip;

    // central differences are exact for the quadratic strip pieces; residual
    // is pure roundoff
    Rng rng(seed);
    double hstep = std::min(1e-2, 0.25 / j);
    double worst = 0.0;
    for (int samp = 0; samp < fd_samples; ++samp) {
        Eigen::VectorXd pt(n);
        pt[0] = uniform(rng, 2.0 * hstep, 1.0 / j - 2.0 * hstep);
        for (int dim = 1; dim < n; ++dim) pt[dim] = uniform(rng, -0.9, 0.9);
        Eigen::MatrixXd G = l1_sequence_gradient(pt, A, B, j);
        for (int dim = 0; dim < n; ++dim) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
            e[dim] = hstep;
            Eigen::VectorXd diff =
                (l1_sequence_deformation(pt + e, A, B, j) -
                 l1_sequence_deformation(pt - e, A, B, j)) /
                (2.0 * hstep);
            worst = std::max(worst, (diff - G.col(dim)).norm());
        }
    }
    out.gradient_residual = worst;
    return out;
}

} // namespace marten
