#include "rnm/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <tuple>

#include "rnm/detail/pair_search.hpp"
#include "rnm/errors.hpp"
#include "rnm/ivt.hpp"
#include "rnm/rank.hpp"

namespace rnm {

namespace {

constexpr double kNormTol = 1e-9;
constexpr double kConstructionTol = 1e-12;
constexpr double kUnitTol = 1e-12;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

Vec unit(const Vec& v, const FiberNorm& norm) {
    const double n = norm.norm(v);
    Vec u(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) u[i] = v[i] / n;
    return u;
}

Vec combine(double a, const Vec& x, double b, const Vec& y) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i] + b * y[i];
    return r;
}

const std::string& atom_id(const ModuleElement& x, std::size_t i) { return x.space()->id(i); }

// Orthonormal (Euclidean) basis of span{x, y} with y on the positive side of
// b2. Directions are swept as cos(t) b1 + sin(t) b2: the same arcs as
// cos(a) x + sin(a) y, but well conditioned when x and y are nearly parallel.
struct PlaneFrame {
    Vec b1, b2;
};

PlaneFrame plane_frame(const Vec& x, const Vec& y) {
    double xx = 0.0, xy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        xx += x[k] * x[k];
        xy += x[k] * y[k];
    }
    const double nx = std::sqrt(xx);
    PlaneFrame f{Vec(x.size()), Vec(x.size())};
    for (std::size_t k = 0; k < x.size(); ++k) {
        f.b1[k] = x[k] / nx;
        f.b2[k] = y[k] - xy / xx * x[k];
    }
    // Second Gram-Schmidt pass against rounding.
    double c = 0.0, n2 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) c += f.b1[k] * f.b2[k];
    for (std::size_t k = 0; k < x.size(); ++k) n2 += (f.b2[k] -= c * f.b1[k]) * f.b2[k];
    for (auto& v : f.b2) v /= std::sqrt(n2);
    return f;
}

Vec frame_direction(const PlaneFrame& f, const FiberNorm& norm, double t) {
    return unit(combine(std::cos(t), f.b1, std::sin(t), f.b2), norm);
}

// Frame angle of the direction y - x, in (0, pi).
double difference_angle(const PlaneFrame& f, const Vec& x, const Vec& y) {
    double c1 = 0.0, c2 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        c1 += (y[k] - x[k]) * f.b1[k];
        c2 += (y[k] - x[k]) * f.b2[k];
    }
    return std::atan2(c2, c1);
}

// || u(t) - x + y || along the sweep from x to the direction of y - x.
double rotation_gap(const PlaneFrame& f, const Vec& x, const Vec& y, const FiberNorm& norm, double t) {
    const Vec u = frame_direction(f, norm, t);
    Vec w(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) w[k] = u[k] - x[k] + y[k];
    return norm.norm(w);
}

// Solves maps[i](eta) = target[i] for eta in [0, hi[i]] at every atom of E
// using the stratified intermediate value solver. Atoms off E are pinned at 0.
L0Real solve_on_event(const EventSet& e, const std::vector<ScalarMap>& maps, const L0Real& hi, const L0Real& target) {
    const SpacePtr& space = e.space();
    std::vector<ScalarMap> full(space->size(), [](double) { return 0.0; });
    L0Real y1 = L0Real::zero(space);
    L0Real y2 = L0Real::zero(space);
    L0Real xi = L0Real::zero(space);
    for (std::size_t i : e.indices()) {
        full[i] = maps[i];
        xi[i] = target[i];
        // Endpoints already within tolerance collapse the bracket.
        if (std::abs(maps[i](0.0) - target[i]) <= kConstructionTol) continue;
        if (std::abs(maps[i](hi[i]) - target[i]) <= kConstructionTol) {
            y1[i] = hi[i];
            y2[i] = hi[i];
            continue;
        }
        y2[i] = hi[i];
    }
    for (std::size_t i = 0; i < space->size(); ++i)
        if (y1[i] == y2[i]) xi[i] = full[i](y1[i]);
    try {
        return solve_ivt(LocalFunction(space, std::move(full)), y1, y2, xi, kConstructionTol);
    } catch (const PreconditionError& err) {
        throw ConvergenceError(std::string("bracket fails numerically: ") + err.what());
    }
}

void require_norm_indicator(const ModuleElement& x, const EventSet& a, const char* what) {
    const L0Real n = random_norm(x);
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double expected = a.contains(i) ? 1.0 : 0.0;
        if (std::abs(n[i] - expected) > kNormTol)
            throw PreconditionError(std::string(what) + " at atom '" + atom_id(x, i) + "'");
    }
}

void require_norm_at_most_one(const ModuleElement& y, const char* what) {
    const L0Real n = random_norm(y);
    for (std::size_t i = 0; i < n.size(); ++i)
        if (n[i] > 1.0 + kNormTol) throw PreconditionError(std::string(what) + " at atom '" + atom_id(y, i) + "'");
}

void require_eps(const L0Real& eps, const EventSet& d) {
    for (std::size_t i : d.indices())
        if (!(eps[i] > 0.0 && eps[i] <= 2.0))
            throw PreconditionError("eps must lie in (0, 2] at atom '" + d.space()->id(i) + "'");
}

}  // namespace

// ------------------------------------------------------------------ variants

const char* to_string(ModulusVariant v) {
    switch (v) {
        case ModulusVariant::GeqSphere: return "def";
        case ModulusVariant::EqSphere: return "eq";
        case ModulusVariant::GeqBall: return "ball";
        case ModulusVariant::EqBall: return "ball-eq";
    }
    return "?";
}

ModulusVariant parse_variant(const std::string& name) {
    if (name == "def") return ModulusVariant::GeqSphere;
    if (name == "eq") return ModulusVariant::EqSphere;
    if (name == "ball") return ModulusVariant::GeqBall;
    if (name == "ball-eq") return ModulusVariant::EqBall;
    throw PreconditionError("unknown modulus variant '" + name + "' (expected def|eq|ball|ball-eq)");
}

void SearchConfig::validate() const {
    if (grid_points < 1 || random_restarts < 1 || refine_iters < 1)
        throw PreconditionError("search budgets must be positive");
}

SearchConfig SearchConfig::doubled() const {
    SearchConfig c = *this;
    c.grid_points *= 2;
    c.random_restarts *= 2;
    c.refine_iters *= 2;
    return c;
}

double euclid_modulus_oracle(double eps) {
    if (!(eps > 0.0 && eps <= 2.0)) throw PreconditionError("euclid modulus: eps must lie in (0, 2]");
    return 1.0 - std::sqrt(1.0 - eps * eps / 4.0);
}

FiberModulus fiber_modulus(const FiberNorm& norm, int dim, double eps, ModulusVariant variant,
                           const SearchConfig& cfg) {
    cfg.validate();
    if (dim < 1) throw PreconditionError("modulus on a zero-dimensional fiber");
    if (!(eps > 0.0 && eps <= 2.0)) throw PreconditionError("eps must lie in (0, 2]");
    const bool equality = variant == ModulusVariant::EqSphere || variant == ModulusVariant::EqBall;
    const bool ball = variant == ModulusVariant::GeqBall || variant == ModulusVariant::EqBall;

    FiberModulus out;
    if (dim == 1) {
        // Sphere {-v, v}: the only pair with positive gap is antipodal with
        // gap 2 and value 1.
        out.sphere_fallback = ball;
        out.empty_feasible = equality && eps != 2.0;
        out.value = 1.0;
        return out;
    }
    if (eps == 2.0 && norm.strictly_convex()) {
        // Strict convexity forces y = -x.
        out.value = 1.0;
        return out;
    }

    detail::PairSearchOptions opt;
    opt.eps = eps;
    opt.equality = equality;
    opt.ball = ball;
    opt.refine_iters = cfg.refine_iters;
    opt.seed = cfg.seed;
    if (dim == 2) {
        opt.theta_points = ball ? std::max(8, cfg.grid_points / 32) : cfg.grid_points;
    } else {
        opt.theta_points = ball ? std::max(4, cfg.grid_points / 128) : std::max(8, cfg.grid_points / 32);
        opt.random_planes = cfg.random_restarts;
    }
    const auto r = detail::search_pairs([&norm](std::span<const double> v) { return norm.norm(v); },
                                        static_cast<std::size_t>(dim), opt);
    if (!r.found) {
        out.empty_feasible = true;
        out.value = 1.0;
        return out;
    }
    out.value = std::clamp(r.value, 0.0, 1.0);
    return out;
}

ModulusResult modulus_estimate(const RnModuleSpec& spec, const ModulusQuery& q, const SearchConfig& cfg) {
    cfg.validate();
    require_same_space(spec.space(), q.domain.space());
    require_same_space(spec.space(), q.eps.space());
    if (q.domain.empty()) throw PreconditionError("modulus: P(D) = 0");
    if (!q.domain.subset_of(spec.support())) throw PreconditionError("modulus: D is not contained in H(S)");
    require_eps(q.eps, q.domain);

    ModulusResult r{L0Real::zero(spec.space()), EventSet::none(spec.space()), {}};
    std::vector<bool> empty(spec.size(), false);
    // Identical fibers with identical eps share one search.
    std::map<std::tuple<int, int, double, double>, FiberModulus> cache;
    for (std::size_t i : q.domain.indices()) {
        const auto& fiber = spec.fiber(i);
        const auto key = std::make_tuple(fiber.dim, static_cast<int>(fiber.norm.kind()), fiber.norm.p(), q.eps[i]);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, fiber_modulus(fiber.norm, fiber.dim, q.eps[i], q.variant, cfg)).first;
        const FiberModulus& fm = it->second;
        r.estimate[i] = fm.value;
        const std::string& id = spec.space()->id(i);
        if (fm.empty_feasible) {
            empty[i] = true;
            r.diagnostics.push_back("atom '" + id + "': empty feasible set at eps=" + fmt(q.eps[i]) +
                                    "; infimum over the empty family taken as 1");
        }
        if (fm.sphere_fallback)
            r.diagnostics.push_back("atom '" + id +
                                    "': fiber dimension 1 lies outside G(S); ball variant reports the unit-sphere value");
    }
    r.empty_feasible = EventSet(spec.space(), std::move(empty));
    return r;
}

// -------------------------------------------------------------- constructions

RotatedPair rotate_pair(const ModuleElement& x, const ModuleElement& y, const EventSet& e) {
    require_same_spec(x.spec(), y.spec());
    require_same_space(x.space(), e.space());
    const Supports s = supports(x, &y);
    require_norm_indicator(x, *s.a_xy, "rotate_pair: ||x|| != I_A_xy");
    require_norm_at_most_one(y, "rotate_pair: ||y|| > 1");
    if (e.empty()) throw PreconditionError("rotate_pair: P(E) = 0");
    if (!e.subset_of(*s.a_xy)) throw PreconditionError("rotate_pair: E is not contained in A_xy");
    if (!is_independent(x, y, e)) throw PreconditionError("rotate_pair: x and y are not L0-independent on E");

    const SpecPtr& spec = x.spec();
    std::vector<ScalarMap> maps(spec->size());
    std::vector<PlaneFrame> frames(spec->size());
    L0Real hi = L0Real::zero(x.space());
    for (std::size_t i : e.indices()) {
        frames[i] = plane_frame(x[i], y[i]);
        hi[i] = difference_angle(frames[i], x[i], y[i]);
        maps[i] = [f = frames[i], xi = x[i], yi = y[i], norm = spec->norm(i)](double t) {
            return rotation_gap(f, xi, yi, norm, t);
        };
    }
    const L0Real angle = solve_on_event(e, maps, hi, indicator(e));

    ModuleElement u = ModuleElement::zero(spec);
    ModuleElement v = ModuleElement::zero(spec);
    for (std::size_t i : e.indices()) {
        u[i] = frame_direction(frames[i], spec->norm(i), angle[i]);
        for (std::size_t k = 0; k < u[i].size(); ++k) v[i][k] = u[i][k] - x[i][k] + y[i][k];
    }
    return {std::move(u), std::move(v), angle};
}

GapPair prescribe_gap(const ModuleElement& x, const ModuleElement& y, const EventSet& d, const L0Real& eps) {
    require_same_spec(x.spec(), y.spec());
    require_same_space(x.space(), d.space());
    require_same_space(x.space(), eps.space());
    if (d.empty()) throw PreconditionError("prescribe_gap: P(D) = 0");
    require_norm_indicator(x, d, "prescribe_gap: ||x|| != I_D");
    require_norm_indicator(y, d, "prescribe_gap: ||y|| != I_D");
    if (!is_independent(x, y, d)) throw PreconditionError("prescribe_gap: x and y are not L0-independent on D");
    require_eps(eps, d);

    const SpecPtr& spec = x.spec();
    std::vector<ScalarMap> maps(spec->size());
    std::vector<PlaneFrame> frames(spec->size());
    for (std::size_t i : d.indices()) {
        // Mirror b2 so the sweep runs from x through -y to -x.
        frames[i] = plane_frame(x[i], y[i]);
        for (auto& c : frames[i].b2) c = -c;
        maps[i] = [f = frames[i], xi = x[i], norm = spec->norm(i)](double t) {
            const Vec w = frame_direction(f, norm, t);
            Vec diff(w.size());
            for (std::size_t k = 0; k < w.size(); ++k) diff[k] = w[k] - xi[k];
            return norm.norm(diff);
        };
    }
    L0Real target = L0Real::zero(x.space());
    for (std::size_t i : d.indices()) target[i] = eps[i];
    const L0Real angle = solve_on_event(d, maps, indicator(d) * std::numbers::pi, target);

    ModuleElement v = ModuleElement::zero(spec);
    for (std::size_t i : d.indices()) v[i] = frame_direction(frames[i], spec->norm(i), angle[i]);
    return {std::move(v), angle};
}

namespace {

// Other intermediate-value solutions of the rotation equation on one atom,
// scanned when the first solution misses the sum inequality.
bool rescan_rotation(const Vec& x, const Vec& y, const FiberNorm& norm, double sum_target, Vec& u_out, Vec& v_out) {
    constexpr int kScan = 512;
    const PlaneFrame f = plane_frame(x, y);
    const double hi = difference_angle(f, x, y);
    auto g = [&](double t) { return rotation_gap(f, x, y, norm, t) - 1.0; };
    double a_prev = 0.0, g_prev = g(0.0);
    for (int k = 1; k <= kScan; ++k) {
        const double a = hi * k / kScan;
        const double ga = g(a);
        if ((g_prev < 0.0) != (ga < 0.0) || ga == 0.0) {
            double lo = a_prev, up = a, g_lo = g_prev;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + up);
                const double gm = g(mid);
                if ((gm < 0.0) == (g_lo < 0.0)) {
                    lo = mid;
                    g_lo = gm;
                } else {
                    up = mid;
                }
            }
            for (double root : {lo, up}) {
                if (std::abs(g(root)) > kConstructionTol) continue;
                Vec u = frame_direction(f, norm, root);
                Vec v(u.size()), s(u.size());
                for (std::size_t i = 0; i < u.size(); ++i) {
                    v[i] = u[i] - x[i] + y[i];
                    s[i] = u[i] + v[i];
                }
                if (norm.norm(s) >= sum_target - kNormTol) {
                    u_out = std::move(u);
                    v_out = std::move(v);
                    return true;
                }
            }
        }
        a_prev = a;
        g_prev = ga;
    }
    return false;
}

}  // namespace

EqualizedPair equalize_pair(const ModuleElement& x, const ModuleElement& y) {
    require_same_spec(x.spec(), y.spec());
    const SpecPtr& spec = x.spec();
    const Supports s = supports(x, &y);
    const EventSet& a_xy = *s.a_xy;
    if (a_xy.empty()) throw PreconditionError("equalize_pair: P(A_xy) = 0");
    if (!a_xy.subset_of(grand_stratum(*spec)))
        throw PreconditionError("equalize_pair: A_xy is not contained in G(S)");
    require_norm_indicator(x, a_xy, "equalize_pair: ||x|| != I_A_xy");
    require_norm_at_most_one(y, "equalize_pair: ||y|| > 1");

    const L0Real ny = random_norm(y);
    std::vector<bool> rotated(spec->size(), false), lifted(spec->size(), false), kept(spec->size(), false);
    ModuleElement x_eff = ModuleElement::zero(spec);
    ModuleElement y_eff = ModuleElement::zero(spec);
    for (std::size_t i : a_xy.indices()) {
        if (std::abs(ny[i] - 1.0) <= kUnitTol) {
            kept[i] = true;
            continue;
        }
        if (fibers_independent(x[i], y[i])) {
            rotated[i] = true;
            x_eff[i] = x[i];
            y_eff[i] = y[i];
            continue;
        }
        // y = gamma x with 0 < |gamma| < 1: tilt x toward an independent
        // direction so the rotation applies, keeping x - y unchanged.
        lifted[i] = true;
        double xy = 0.0, xx = 0.0;
        for (std::size_t k = 0; k < x[i].size(); ++k) {
            xy += x[i][k] * y[i][k];
            xx += x[i][k] * x[i][k];
        }
        const double gamma = xy / xx;
        const Vec aux = companion_fiber(x[i], spec->norm(i));
        const Vec x1 = unit(combine(1.0, x[i], 0.5 * (1.0 - std::abs(gamma)), aux), spec->norm(i));
        Vec y1(x1.size());
        for (std::size_t k = 0; k < y1.size(); ++k) y1[k] = y[i][k] + x1[k] - x[i][k];
        x_eff[i] = x1;
        y_eff[i] = std::move(y1);
    }

    EventSet rot(spec->space(), std::move(rotated));
    EventSet lift(spec->space(), std::move(lifted));
    EventSet keep(spec->space(), std::move(kept));
    const EventSet moved = rot | lift;

    ModuleElement u = restrict_to(keep, x);
    ModuleElement v = restrict_to(keep, y);
    if (!moved.empty()) {
        const RotatedPair rp = rotate_pair(x_eff, y_eff, moved);
        for (std::size_t i : moved.indices()) {
            u[i] = rp.u[i];
            // v = u - x + y on the original pair, so u - v = x - y holds
            // without the rounding of x_eff - y_eff.
            for (std::size_t k = 0; k < v[i].size(); ++k) v[i][k] = rp.u[i][k] - x[i][k] + y[i][k];
        }
    }

    const L0Real sum_uv = random_norm(u + v);
    const L0Real sum_xy = random_norm(x + y);
    for (std::size_t i : moved.indices()) {
        if (sum_uv[i] >= sum_xy[i] - kNormTol) continue;
        Vec ui, vi;
        if (!rescan_rotation(x_eff[i], y_eff[i], spec->norm(i), sum_xy[i], ui, vi))
            throw ConvergenceError("equalize_pair: no rotation satisfies the sum inequality at atom '" +
                                   atom_id(x, i) + "'");
        u[i] = std::move(ui);
        for (std::size_t k = 0; k < v[i].size(); ++k) v[i][k] = u[i][k] - x[i][k] + y[i][k];
    }
    return {std::move(u), std::move(v), std::move(rot), std::move(lift), std::move(keep)};
}

bool HalfBoundReport::passed() const noexcept {
    return !entries.empty() && std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.holds; });
}

HalfBoundReport halfbound_check(const RnModuleSpec& spec, const std::vector<double>& eps_grid,
                                const SearchConfig& cfg) {
    const EventSet g = grand_stratum(spec);
    if (g.empty()) throw PreconditionError("halfbound check: P(G(S)) = 0");
    HalfBoundReport report;
    for (double eps : eps_grid) {
        if (!(eps > 0.0 && eps <= 2.0)) throw PreconditionError("halfbound check: eps must lie in (0, 2]");
        const ModulusQuery q{g, L0Real::constant(spec.space(), eps), ModulusVariant::GeqSphere};
        const ModulusResult m = modulus_estimate(spec, q, cfg);
        HalfBoundEntry e{eps, 0.0, true};
        for (std::size_t i : g.indices()) {
            e.max_estimate = std::max(e.max_estimate, m.estimate[i]);
            if (m.estimate[i] > eps / 2.0 + 1e-6) e.holds = false;
        }
        report.entries.push_back(e);
    }
    return report;
}

}  // namespace rnm
