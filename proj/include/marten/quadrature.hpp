#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace marten {

struct GaussRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre nodes by Newton iteration on the Legendre recurrence.
inline GaussRule gauss_legendre(int m) {
    GaussRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    for (int i = 0; i < m; ++i) {
        double x = std::cos(3.14159265358979323846 * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

template <typename F>
double gauss_integrate(const F& f, double a, double b, const GaussRule& rule) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a), acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * acc;
}

namespace detail {
template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
} // namespace detail

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-12, int depth = 48) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

} // namespace marten
