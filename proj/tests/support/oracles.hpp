#pragma once

// Reference computations for the tests. Nothing here calls into the library's
// numerical code: norms, moduli and dual norms are recomputed from scratch by
// brute force so that agreement is evidence rather than tautology.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double pnorm(const std::vector<double>& v, double p) {
    double s = 0.0;
    for (double c : v) s += std::pow(std::abs(c), p);
    return std::pow(s, 1.0 / p);
}

inline double euclid(const std::vector<double>& v) { return pnorm(v, 2.0); }

/// 1 - sqrt(1 - eps^2/4), written out via the parallelogram law.
inline double inner_product_modulus(double eps) {
    const double half_sum_sq = 1.0 - eps * eps / 4.0;  // ||(x+y)/2||^2 when ||x||=||y||=1, ||x-y||=eps
    return 1.0 - std::sqrt(std::max(0.0, half_sum_sq));
}

using Norm2 = std::function<double(double, double)>;

inline Norm2 planar_pnorm(double p) {
    return [p](double a, double b) { return std::pow(std::pow(std::abs(a), p) + std::pow(std::abs(b), p), 1.0 / p); };
}

/// Brute-force modulus of a planar norm: every pair of n angles on the unit
/// sphere, keeping those with gap >= eps. Accurate to O(1/n) from above.
inline double angle_grid_modulus(const Norm2& norm, double eps, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n)), ys(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * i / n;
        const double r = norm(std::cos(t), std::sin(t));
        xs[static_cast<std::size_t>(i)] = std::cos(t) / r;
        ys[static_cast<std::size_t>(i)] = std::sin(t) / r;
    }
    double best = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
            if (norm(xs[a] - xs[b], ys[a] - ys[b]) < eps) continue;
            best = std::min(best, 1.0 - norm((xs[a] + xs[b]) / 2.0, (ys[a] + ys[b]) / 2.0));
        }
    return best;
}

/// sup of <f, u> over the unit sphere of a planar norm, by angle grid.
inline double planar_dual_norm(const Norm2& norm, double f1, double f2, int n) {
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * i / n;
        const double r = norm(std::cos(t), std::sin(t));
        best = std::max(best, (f1 * std::cos(t) + f2 * std::sin(t)) / r);
    }
    return best;
}

}  // namespace oracle
