#include "rnm/ivt.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rnm/errors.hpp"

namespace rnm {

LocalFunction::LocalFunction(SpacePtr space, std::vector<ScalarMap> maps)
    : space_(std::move(space)), maps_(std::move(maps)) {
    if (!space_) throw PreconditionError("local function without a probability space");
    if (maps_.size() != space_->size()) throw PreconditionError("local function needs one map per atom");
}

LocalFunction LocalFunction::uniform(SpacePtr space, ScalarMap map) {
    std::vector<ScalarMap> maps(space->size(), map);
    return LocalFunction(std::move(space), std::move(maps));
}

L0Real LocalFunction::operator()(const L0Real& x) const {
    require_same_space(space_, x.space());
    std::vector<double> v(x.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = maps_[i](x[i]);
    return L0Real(space_, std::move(v));
}

LocalFunction LocalFunction::negated() const {
    std::vector<ScalarMap> maps;
    maps.reserve(maps_.size());
    for (const auto& m : maps_) maps.push_back([m](double t) { return -m(t); });
    return LocalFunction(space_, std::move(maps));
}

namespace {

std::string atom_message(const SpacePtr& space, std::size_t i, const std::string& what) {
    std::ostringstream os;
    os.precision(17);
    os << "atom '" << space->id(i) << "': " << what;
    return os.str();
}

// Classical bisection on one atom. g(t) = s*(f(t) - target) is <= 0 at lo and
// >= 0 at hi.
double solve_atom(const ScalarMap& f, double lo, double hi, double target, double tol, const SpacePtr& space,
                  std::size_t atom) {
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (std::abs(f_lo - target) <= tol) return lo;
    if (std::abs(f_hi - target) <= tol) return hi;
    const double s = f_lo <= f_hi ? 1.0 : -1.0;
    for (int it = 0; it < kIvtMaxIterations; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (std::abs(fm - target) <= tol) return mid;
        if (s * (fm - target) <= 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double r_lo = std::abs(f(lo) - target);
    const double r_hi = std::abs(f(hi) - target);
    if (std::min(r_lo, r_hi) <= tol) return r_lo <= r_hi ? lo : hi;
    std::ostringstream os;
    os.precision(17);
    os << "bisection residual " << std::min(r_lo, r_hi) << " exceeds tolerance " << tol;
    throw ConvergenceError(atom_message(space, atom, os.str()));
}

}  // namespace

L0Real solve_ivt(const LocalFunction& f, const L0Real& y1, const L0Real& y2, const L0Real& xi, double tol) {
    const SpacePtr& space = f.space();
    require_same_space(space, y1.space());
    require_same_space(space, y2.space());
    require_same_space(space, xi.space());
    if (!(tol > 0.0)) throw PreconditionError("ivt: tolerance must be positive");

    const L0Real f1 = f(y1);
    const L0Real f2 = f(y2);
    for (std::size_t i = 0; i < space->size(); ++i) {
        if (!(y1[i] <= y2[i])) throw PreconditionError(atom_message(space, i, "Y1 > Y2"));
        const double lo = std::min(f1[i], f2[i]);
        const double hi = std::max(f1[i], f2[i]);
        if (!(xi[i] >= lo && xi[i] <= hi))
            throw PreconditionError(atom_message(space, i, "xi outside [f(Y1) ^ f(Y2), f(Y1) v f(Y2)]"));
    }

    std::vector<double> eta(space->size());
    for (std::size_t i = 0; i < eta.size(); ++i) {
        if (y1[i] == y2[i]) {
            eta[i] = y1[i];
            continue;
        }
        eta[i] = solve_atom(f.at(i), y1[i], y2[i], xi[i], tol, space, i);
    }
    return L0Real(space, std::move(eta));
}

LocalityReport locality_audit(const L0Map& f, const SpacePtr& space, int trials, std::uint64_t seed) {
    if (trials < 1) throw PreconditionError("locality audit needs at least one trial");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    LocalityReport r;
    r.trials = trials;
    r.seed = seed;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> xv(space->size());
        std::vector<bool> am(space->size());
        for (std::size_t i = 0; i < xv.size(); ++i) {
            xv[i] = gauss(rng);
            am[i] = coin(rng);
        }
        const L0Real x(space, std::move(xv));
        const L0Real ia = indicator(EventSet(space, std::move(am)));
        const double d = kyfan_distance(ia * f(x), ia * f(ia * x));
        r.max_deviation = std::max(r.max_deviation, d);
        if (d > 1e-12) ++r.violating_trials;
    }
    return r;
}

LocalityReport locality_audit(const LocalFunction& f, int trials, std::uint64_t seed) {
    return locality_audit(L0Map([f](const L0Real& x) { return f(x); }), f.space(), trials, seed);
}

}  // namespace rnm
