#pragma once

// Minimizes 1 - ||(x+y)/2|| over pairs in a finite-dimensional normed space
// subject to a gap constraint ||x - y|| >= eps or == eps, with x, y on the
// unit sphere or in the unit ball.
//
// Pairs are searched in 2-D sections: a plane spanned by orthonormal e1, e2,
// x = r1 * a/||a|| with a at angle theta, and y = r2 * c/||c|| with c at
// angle theta + phi. The angle phi is scanned over the full circle and every
// sign change of the gap constraint is bisected, so equality-constrained
// pairs are located to machine precision.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rnm::detail {

using NormFn = std::function<double(std::span<const double>)>;

struct PairSearchOptions {
    double eps = 1.0;
    bool equality = false;  ///< ||x - y|| == eps instead of >= eps
    bool ball = false;      ///< ||x||, ||y|| <= 1 instead of == 1
    int theta_points = 2048;
    int phi_points = 64;
    int random_planes = 0;  ///< ignored in dimension 2
    int refine_iters = 200;
    std::uint64_t seed = 0;
    /// Planes always searched in addition to the random ones (dimension >= 3).
    bool coordinate_planes = true;
};

struct PairSearchResult {
    bool found = false;
    double value = 1.0;
    std::vector<double> x, y;
    long evaluations = 0;
};

/// Gap slack for ">=" feasibility and tolerance for "==" feasibility.
inline constexpr double kGapSlack = 1e-12;
inline constexpr double kEqualityTol = 1e-9;

PairSearchResult search_pairs(const NormFn& norm, std::size_t dim, const PairSearchOptions& opt);

}  // namespace rnm::detail
