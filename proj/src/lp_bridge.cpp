#include "rnm/lp_bridge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rnm/detail/pair_search.hpp"
#include "rnm/errors.hpp"

namespace rnm {

namespace {

void require_p(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw PreconditionError("L^p(S) requires 1 < p < inf");
}

void require_eps(double eps) {
    if (!(eps > 0.0 && eps <= 2.0)) throw PreconditionError("eps must lie in (0, 2]");
}

// (sum_w P(w) N_w(x_w)^p)^(1/p) over the concatenated fiber coordinates.
struct FlatLpNorm {
    const RnModuleSpec* spec;
    double p;
    std::vector<std::size_t> offsets;

    FlatLpNorm(const RnModuleSpec& s, double p_) : spec(&s), p(p_) {
        std::size_t off = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            offsets.push_back(off);
            off += static_cast<std::size_t>(s.dim(i));
        }
        offsets.push_back(off);
    }

    std::size_t dim() const { return offsets.back(); }

    double operator()(std::span<const double> v) const {
        double s = 0.0;
        for (std::size_t i = 0; i < spec->size(); ++i) {
            const auto len = offsets[i + 1] - offsets[i];
            if (len == 0) continue;
            const double n = spec->norm(i).norm(v.subspan(offsets[i], len));
            s += spec->space()->weight(i) * std::pow(n, p);
        }
        return std::pow(s, 1.0 / p);
    }
};

double estimate_once(const RnModuleSpec& spec, double p, double eps, const SearchConfig& cfg) {
    const FlatLpNorm norm(spec, p);
    const std::size_t dim = norm.dim();
    if (dim == 0) throw PreconditionError("L^p(S) of a module with empty support");
    if (dim == 1) return 1.0;
    bool strictly_convex = true;
    for (std::size_t i = 0; i < spec.size(); ++i)
        if (spec.dim(i) > 1 && !spec.norm(i).strictly_convex()) strictly_convex = false;
    if (eps == 2.0 && strictly_convex) return 1.0;

    detail::PairSearchOptions opt;
    opt.eps = eps;
    opt.refine_iters = cfg.refine_iters;
    opt.seed = cfg.seed;
    opt.theta_points = dim == 2 ? cfg.grid_points : std::max(8, cfg.grid_points / 32);
    opt.random_planes = cfg.random_restarts;
    const auto r = detail::search_pairs(norm, dim, opt);
    return std::clamp(r.value, 0.0, 1.0);
}

// ------------------------------------------------------------------ sampling

using Vec = std::vector<double>;

struct FiberSampler {
    const FiberNorm& norm;
    std::size_t dim;
    std::mt19937_64& rng;
    std::normal_distribution<double> gauss{0.0, 1.0};
    std::uniform_real_distribution<double> unif{0.0, 1.0};

    Vec random_unit() {
        Vec v(dim);
        double n = 0.0;
        while (n == 0.0) {
            for (auto& c : v) c = gauss(rng);
            n = norm.norm(v);
        }
        for (auto& c : v) c /= n;
        return v;
    }

    // Pair with gap at least eps in one of two shapes: a ball point moved by
    // a chord of random length, or two sphere points at a prescribed gap in a
    // random plane through the first.
    std::pair<Vec, Vec> draw(double eps) {
        const double t = eps + (2.0 - eps) * std::pow(unif(rng), 3.0);
        if (unif(rng) < 0.5 || dim == 1) {
            Vec x = random_unit();
            const double r = std::pow(unif(rng), 0.25);
            for (auto& c : x) c *= r;
            const Vec d = random_unit();
            Vec y(dim);
            for (std::size_t k = 0; k < dim; ++k) y[k] = x[k] - t * d[k];
            if (dim == 1 && unif(rng) < 0.5) y = {-x[0]};
            return {std::move(x), std::move(y)};
        }
        const Vec x = random_unit();
        Vec b = random_unit();
        double xb = 0.0, xx = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            xb += x[k] * b[k];
            xx += x[k] * x[k];
        }
        for (std::size_t k = 0; k < dim; ++k) b[k] -= xb / xx * x[k];
        auto point = [&](double phi) {
            Vec c(dim);
            for (std::size_t k = 0; k < dim; ++k) c[k] = std::cos(phi) * x[k] + std::sin(phi) * b[k];
            const double n = norm.norm(c);
            for (auto& v : c) v /= n;
            return c;
        };
        auto gap = [&](double phi) {
            const Vec y = point(phi);
            Vec d(dim);
            for (std::size_t k = 0; k < dim; ++k) d[k] = x[k] - y[k];
            return norm.norm(d);
        };
        double lo = 0.0, hi = std::numbers::pi;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (gap(mid) < t ? lo : hi) = mid;
        }
        return {x, point(hi)};
    }
};

double ratio(double nx, double ny, double nmid, double p) {
    return std::pow(nmid, p) / ((std::pow(nx, p) + std::pow(ny, p)) / 2.0);
}

// relative == false: ||x||, ||y|| <= 1 and ||x - y|| >= eps.
// relative == true:  ||x - y|| >= eps * max(||x||, ||y||).
ConvexityBatch run_batch(const RnModuleSpec& spec, double p, double eps, int samples, std::uint64_t seed,
                         std::uint64_t stream, bool relative) {
    std::seed_seq seq{seed, stream};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    ConvexityBatch b;
    b.worst_ratio = -1.0;
    const EventSet support = spec.support();
    for (int s = 0; s < samples; ++s) {
        bool any = false;
        for (std::size_t i : support.indices()) {
            const FiberNorm& norm = spec.norm(i);
            FiberSampler sampler{norm, static_cast<std::size_t>(spec.dim(i)), rng};
            auto [x, y] = sampler.draw(eps);
            if (relative) {
                const double scale = std::exp(std::log(10.0) * (2.0 * unif(rng) - 1.0));
                for (auto& c : x) c *= scale;
                for (auto& c : y) c *= scale;
            }
            Vec diff(x.size()), mid(x.size());
            for (std::size_t k = 0; k < x.size(); ++k) {
                diff[k] = x[k] - y[k];
                mid[k] = 0.5 * (x[k] + y[k]);
            }
            const double nx = norm.norm(x), ny = norm.norm(y), nd = norm.norm(diff);
            if (nx == 0.0 || ny == 0.0 || nd == 0.0) continue;
            const bool ok = relative ? nd >= eps * std::max(nx, ny) : (nx <= 1.0 && ny <= 1.0 && nd >= eps);
            if (!ok) continue;
            any = true;
            const double r = ratio(nx, ny, norm.norm(mid), p);
            if (r > b.worst_ratio) {
                b.worst_ratio = r;
                b.worst_atom = spec.space()->id(i);
            }
        }
        (any ? b.samples_accepted : b.samples_rejected) += 1;
    }
    if (b.samples_accepted == 0) throw Error("uniform convexity audit: generator produced no feasible sample");
    b.delta_p = 1.0 - b.worst_ratio;
    return b;
}

}  // namespace

double lp_norm(const ModuleElement& x, double p) {
    require_p(p);
    const L0Real n = random_norm(x);
    double s = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) s += x.space()->weight(i) * std::pow(n[i], p);
    return std::pow(s, 1.0 / p);
}

LpModulusEstimate lp_modulus_estimate(const RnModuleSpec& spec, double p, double eps, const SearchConfig& cfg) {
    require_p(p);
    require_eps(eps);
    cfg.validate();
    LpModulusEstimate r;
    r.estimate = estimate_once(spec, p, eps, cfg);
    r.doubled_budget_estimate = estimate_once(spec, p, eps, cfg.doubled());
    r.budget_delta = std::abs(r.estimate - r.doubled_budget_estimate);
    return r;
}

bool UniformConvexityReport::passed() const noexcept {
    const auto in_unit = [](double d) { return d > 0.0 && d < 1.0; };
    return in_unit(bounded.delta_p) && in_unit(relative.delta_p) && stability_delta < 0.25;
}

UniformConvexityReport uniform_convexity_audit(const RnModuleSpec& spec, double p, double eps, int samples,
                                               std::uint64_t seed) {
    require_p(p);
    require_eps(eps);
    if (samples < 1) throw PreconditionError("uniform convexity audit needs at least one sample");
    const EventSet support = spec.support();
    if (support.empty()) throw PreconditionError("uniform convexity audit: module has empty support");
    for (std::size_t i : support.indices())
        if (!spec.norm(i).strictly_convex())
            throw PreconditionError("uniform convexity audit: fiber at atom '" + spec.space()->id(i) +
                                    "' is not uniformly convex");

    UniformConvexityReport r;
    r.p = p;
    r.eps = eps;
    r.seed = seed;
    r.samples = samples;
    r.bounded = run_batch(spec, p, eps, samples, seed, 0, false);
    r.bounded_check = run_batch(spec, p, eps, samples, seed, 1, false);
    r.relative = run_batch(spec, p, eps, samples, seed, 2, true);
    const double hi = std::max(r.bounded.delta_p, r.bounded_check.delta_p);
    r.stability_delta = hi > 0.0 ? std::abs(r.bounded.delta_p - r.bounded_check.delta_p) / hi : 0.0;
    return r;
}

}  // namespace rnm
