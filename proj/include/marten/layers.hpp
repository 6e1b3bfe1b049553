#pragma once

// Transition-layer constants: domain geometry (inner/outer radius,
// eccentricity), the gamma lower bound built on the Vitali constant 5^{-n},
// the optimal radial transition layer between dilatational wells, and the
// metastability threshold constants.

#include <cmath>
#include <functional>

#include "marten/errors.hpp"

namespace marten {

inline double ball_volume(int n, double radius) {
    return std::pow(3.14159265358979323846264338328, 0.5 * n) /
           std::tgamma(0.5 * n + 1.0) * std::pow(radius, n);
}

struct ConvexBody {
    double inner_radius;
    double outer_radius;
    double volume;
    int dimension;

    static ConvexBody make(double r, double R, double volume, int n) {
        require(n >= 1, "ConvexBody: dimension must be >= 1");
        require(r > 0.0 && r <= R, "ConvexBody: need 0 < r <= R");
        require(volume >= ball_volume(n, r) * (1.0 - 1e-12) &&
                    volume <= ball_volume(n, R) * (1.0 + 1e-12),
                "ConvexBody: volume must lie between the inscribed and circumscribed ball volumes");
        return {r, R, volume, n};
    }
    static ConvexBody ball(int n, double radius) {
        return {radius, radius, ball_volume(n, radius), n};
    }
};

// E(C) = sqrt(1 - r^2 / R^2)
inline double eccentricity(const ConvexBody& body) {
    double q = body.inner_radius / body.outer_radius;
    return std::sqrt(std::max(0.0, 1.0 - q * q));
}

// gamma = min(gamma1 vol(C)/vol(Omega), gamma0 5^{-n} (1 - E^2)^{n/2}),
// gamma1 = min(gamma0, 1/4). gamma0 comes from a compactness argument and is
// user-supplied.
inline double gamma_lower_bound(double gamma0, const ConvexBody& body, double vol_domain,
                                int n) {
    require(gamma0 > 0.0, "gamma_lower_bound: gamma0 must be positive");
    require(body.volume <= vol_domain * (1.0 + 1e-12),
            "gamma_lower_bound: body volume exceeds domain volume");
    double gamma1 = std::min(gamma0, 0.25);
    double E = eccentricity(body);
    double vitali = std::pow(5.0, -n);
    return std::min(gamma1 * body.volume / vol_domain,
                    gamma0 * vitali * std::pow(1.0 - E * E, 0.5 * n));
}

struct LayerProfile {
    double lambda;  // well dilatation inside the nucleus
    double mu;      // well dilatation outside the layer
    int n = 3;      // space dimension >= 2
    double eps = 1.0; // inner radius of the layer
};

struct RadialLayer {
    double k_star = 1.0;     // optimal layer width ratio
    double rho_min = 0.0;    // rho(k_star)
    double gamma_upper = 0.0; // symmetrised upper bound for gamma
    bool degenerate = false;  // lambda == mu
    // optimal profile r(R) on [eps, k eps]: r = A R + B R^{1-n}
    double coef_linear = 0.0;
    double coef_power = 0.0;
};

// Layer/nucleus energy ratio of the optimal radial profile,
// rho(k) = (k^n - 1)/n + (k^n mu - lambda)^2/(k^n - 1)
//        + (n-1)(lambda - mu)^2 k^n/(k^n - 1).
inline double radial_rho(const LayerProfile& p, double k) {
    require(k > 1.0, "radial_rho: k must exceed 1");
    double kn = std::pow(k, p.n);
    double d = kn - 1.0;
    return d / p.n + std::pow(kn * p.mu - p.lambda, 2) / d +
           (p.n - 1) * std::pow(p.lambda - p.mu, 2) * kn / d;
}

// Optimal transition-layer profile of Laplace type, r = A R + B R^{1-n},
// matching r(eps) = lambda eps and r(k eps) = mu k eps.
inline std::function<double(double)> radial_profile(const LayerProfile& p, double k) {
    double kn = std::pow(k, p.n);
    double A = (kn * p.mu - p.lambda) / (kn - 1.0);
    double B = (p.lambda - p.mu) * std::pow(p.eps * k, p.n) / (kn - 1.0);
    int n = p.n;
    return [A, B, n](double R) { return A * R + B * std::pow(R, 1 - n); };
}

inline std::function<double(double)> radial_profile_derivative(const LayerProfile& p, double k) {
    double kn = std::pow(k, p.n);
    double A = (kn * p.mu - p.lambda) / (kn - 1.0);
    double B = (p.lambda - p.mu) * std::pow(p.eps * k, p.n) / (kn - 1.0);
    int n = p.n;
    return [A, B, n](double R) { return A + (1 - n) * B * std::pow(R, -n); };
}

// Exact minimum over k > 1. Writing tau = k^n, rho(tau) splits into
// (tau-1)(1+n mu^2)/n + n(lambda-mu)^2/(tau-1) + 2 mu(mu-lambda)
// + (n-1)(lambda-mu)^2, minimized at tau - 1 = n|lambda-mu|/sqrt(1+n mu^2).
inline RadialLayer radial_layer(const LayerProfile& p) {
    require(p.n >= 2, "radial_layer: dimension must be >= 2");
    require(p.lambda > 0.0 && p.mu > 0.0, "radial_layer: dilatations must be positive");
    RadialLayer out;
    double diff = p.lambda - p.mu;
    if (diff == 0.0) {
        out.degenerate = true;
        out.coef_linear = p.mu;
        return out;
    }
    int n = p.n;
    auto branch = [n](double lam, double mu) {
        double root = std::sqrt(1.0 + n * mu * mu);
        double sgn = (lam > mu) ? 1.0 : -1.0;
        return (n - 1) * (lam - mu) * (lam - mu) +
               2.0 * (root - mu * sgn) * std::abs(lam - mu);
    };
    double tau = 1.0 + n * std::abs(diff) / std::sqrt(1.0 + n * p.mu * p.mu);
    out.k_star = std::pow(tau, 1.0 / n);
    out.rho_min = branch(p.lambda, p.mu);
    out.gamma_upper = std::min(branch(p.lambda, p.mu), branch(p.mu, p.lambda));
    double kn = tau;
    out.coef_linear = (kn * p.mu - p.lambda) / (kn - 1.0);
    out.coef_power = (p.lambda - p.mu) * std::pow(p.eps * out.k_star, p.n) / (kn - 1.0);
    return out;
}

struct MetastabilityThreshold {
    double K;      // growth constant of the transition-layer bound
    double delta0; // largest admissible product-well depth
};

// Three-branch growth constant K; delta0 = (K/2) min(gamma, Delta min(1, gamma)).
inline MetastabilityThreshold metastability_threshold(double c0, double c1, double alpha,
                                                      double p, double gamma, double Delta) {
    require(c1 > 0.0, "metastability_threshold: c1 must be positive");
    require(alpha > 0.0, "metastability_threshold: alpha must be positive");
    require(gamma > 0.0, "metastability_threshold: gamma must be positive");
    require(Delta > 0.0, "metastability_threshold: Delta must be positive");
    require(p > 1.0, "metastability_threshold: p must exceed 1");
    double K;
    if (c0 >= c1) K = c1;
    else if (alpha <= c0) K = c0;
    else K = alpha * c1 / (alpha + c1 - c0);
    double delta0 = 0.5 * K * std::min(gamma, Delta * std::min(1.0, gamma));
    return {K, delta0};
}

} // namespace marten
