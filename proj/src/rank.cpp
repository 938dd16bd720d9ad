#include "rnm/rank.hpp"

#include <algorithm>
#include <cmath>

#include "rnm/errors.hpp"

namespace rnm {

namespace {

double euclid(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double largest_minor(std::span<const double> a, std::span<const double> b) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) best = std::max(best, std::abs(a[i] * b[j] - a[j] * b[i]));
    return best;
}

}  // namespace

bool fibers_independent(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2) return false;
    const double scale = euclid(a) * euclid(b);
    if (scale == 0.0) return false;
    return largest_minor(a, b) > kRankTolerance * scale;
}

bool is_independent(const ModuleElement& x, const ModuleElement& y, const EventSet& e) {
    require_same_spec(x.spec(), y.spec());
    require_same_space(x.space(), e.space());
    if (e.empty()) throw PreconditionError("independence test on an empty event");
    for (std::size_t i : e.indices())
        if (!fibers_independent(x[i], y[i])) return false;
    return true;
}

IndependencePart independent_part(const ModuleElement& x, const ModuleElement& y) {
    const Supports s = supports(x, &y);
    const EventSet& a_xy = *s.a_xy;
    if (a_xy.empty()) throw PreconditionError("independent part: P(A_xy) = 0");
    std::vector<bool> dep(x.size(), false);
    L0Real xi = L0Real::zero(x.space());
    L0Real eta = L0Real::zero(x.space());
    for (std::size_t i : a_xy.indices()) {
        if (fibers_independent(x[i], y[i])) continue;
        dep[i] = true;
        xi[i] = dot(x[i], y[i]) / dot(x[i], x[i]);
        eta[i] = -1.0;
    }
    return {EventSet(x.space(), std::move(dep)), std::move(xi), std::move(eta)};
}

EventSet grand_stratum(const RnModuleSpec& spec) {
    std::vector<bool> m(spec.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = spec.dim(i) >= 2;
    return EventSet(spec.space(), std::move(m));
}

Vec companion_fiber(std::span<const double> u, const FiberNorm& norm) {
    if (u.size() < 2) throw PreconditionError("companion needs a fiber of dimension >= 2");
    const double uu = dot(u, u);
    if (uu == 0.0) throw PreconditionError("companion of a zero vector");
    Vec v;
    for (std::size_t k = 0; k < u.size(); ++k) {
        Vec e(u.size(), 0.0);
        e[k] = 1.0;
        if (!fibers_independent(u, e)) continue;
        const double c = u[k] / uu;
        for (std::size_t i = 0; i < e.size(); ++i) e[i] -= c * u[i];
        v = std::move(e);
        break;
    }
    // A nonzero u in dimension >= 2 is collinear with at most one basis vector.
    for (std::size_t i = 0; i < u.size(); ++i) {
        bool found = false;
        for (std::size_t j = i + 1; j < u.size(); ++j) {
            const double minor = u[i] * v[j] - u[j] * v[i];
            if (std::abs(minor) > kRankTolerance * std::sqrt(uu)) {
                if (minor < 0.0)
                    for (auto& c : v) c = -c;
                found = true;
                break;
            }
        }
        if (found) break;
    }
    const double n = norm.norm(v);
    for (auto& c : v) c /= n;
    return v;
}

ModuleElement companion(const ModuleElement& u) {
    const EventSet g = grand_stratum(*u.spec());
    if (g.empty()) throw PreconditionError("companion: P(G(S)) = 0");
    const L0Real n = random_norm(u);
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double expected = g.contains(i) ? 1.0 : 0.0;
        if (std::abs(n[i] - expected) > 1e-12)
            throw PreconditionError("companion: ||u|| != I_G(S) at atom '" + u.space()->id(i) + "'");
    }
    ModuleElement v = ModuleElement::zero(u.spec());
    for (std::size_t i : g.indices()) v[i] = companion_fiber(u[i], u.spec()->norm(i));
    return v;
}

}  // namespace rnm
