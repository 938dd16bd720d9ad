#include "rnm/module.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rnm/errors.hpp"

namespace rnm {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

double lp_vector_norm(std::span<const double> v, double p) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    if (m == 0.0 || std::isinf(p)) return m;
    if (p == 2.0) {
        double s = 0.0;
        for (double c : v) s += c * c;
        return std::sqrt(s);
    }
    if (p == 1.0) {
        double s = 0.0;
        for (double c : v) s += std::abs(c);
        return s;
    }
    double s = 0.0;
    for (double c : v) s += std::pow(std::abs(c) / m, p);
    return m * std::pow(s, 1.0 / p);
}

FiberNorm FiberNorm::pnorm(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw PreconditionError("p-norm exponent must satisfy 1 <= p < inf");
    return FiberNorm(Kind::PNorm, p);
}

double FiberNorm::dual_exponent() const noexcept {
    if (p_ == 1.0) return std::numeric_limits<double>::infinity();
    return p_ / (p_ - 1.0);
}

double FiberNorm::norm(std::span<const double> v) const { return lp_vector_norm(v, p_); }

double FiberNorm::dual_norm(std::span<const double> f) const { return lp_vector_norm(f, dual_exponent()); }

Vec FiberNorm::norming_functional(std::span<const double> v) const {
    Vec g(v.size(), 0.0);
    const double n = norm(v);
    if (n == 0.0) return g;
    if (kind_ == Kind::Euclid) {
        for (std::size_t i = 0; i < v.size(); ++i) g[i] = v[i] / n;
    } else if (p_ == 1.0) {
        for (std::size_t i = 0; i < v.size(); ++i) g[i] = sign(v[i]);
    } else {
        for (std::size_t i = 0; i < v.size(); ++i) g[i] = sign(v[i]) * std::pow(std::abs(v[i]) / n, p_ - 1.0);
    }
    return g;
}

Vec FiberNorm::norming_direction(std::span<const double> f) const {
    Vec u(f.size(), 0.0);
    const double n = dual_norm(f);
    if (n == 0.0) return u;
    if (kind_ == Kind::Euclid) {
        for (std::size_t i = 0; i < f.size(); ++i) u[i] = f[i] / n;
    } else if (p_ == 1.0) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < f.size(); ++i)
            if (std::abs(f[i]) > std::abs(f[best])) best = i;
        u[best] = sign(f[best]);
    } else {
        const double q = dual_exponent();
        for (std::size_t i = 0; i < f.size(); ++i) u[i] = sign(f[i]) * std::pow(std::abs(f[i]) / n, q - 1.0);
    }
    return u;
}

// ------------------------------------------------------------ RnModuleSpec

SpecPtr RnModuleSpec::create(SpacePtr space, std::vector<Fiber> fibers) {
    if (!space) throw PreconditionError("module spec without a probability space");
    if (fibers.size() != space->size()) throw SchemaError("module spec needs one fiber per atom");
    for (std::size_t i = 0; i < fibers.size(); ++i)
        if (fibers[i].dim < 0) throw SchemaError("atom '" + space->id(i) + "' has negative fiber dimension");
    return SpecPtr(new RnModuleSpec(std::move(space), std::move(fibers)));
}

SpecPtr RnModuleSpec::uniform(SpacePtr space, int dim, FiberNorm norm) {
    std::vector<Fiber> fibers(space->size(), Fiber{dim, norm});
    return create(std::move(space), std::move(fibers));
}

EventSet RnModuleSpec::support() const {
    std::vector<bool> m(fibers_.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = fibers_[i].dim >= 1;
    return EventSet(space_, std::move(m));
}

bool RnModuleSpec::same_as(const RnModuleSpec& other) const {
    if (this == &other) return true;
    if (!space_->same_as(*other.space_)) return false;
    for (std::size_t i = 0; i < fibers_.size(); ++i)
        if (fibers_[i].dim != other.fibers_[i].dim || !(fibers_[i].norm == other.fibers_[i].norm)) return false;
    return true;
}

void require_same_spec(const SpecPtr& a, const SpecPtr& b) {
    if (!a || !b) throw PreconditionError("operand has no module spec");
    if (!a->same_as(*b)) throw PreconditionError("operands belong to different modules");
}

// ----------------------------------------------------------- ModuleElement

ModuleElement::ModuleElement(SpecPtr spec, std::vector<Vec> fibers)
    : spec_(std::move(spec)), fibers_(std::move(fibers)) {
    if (!spec_) throw PreconditionError("element without a module spec");
    if (fibers_.size() != spec_->size()) throw SchemaError("element needs one fiber vector per atom");
    for (std::size_t i = 0; i < fibers_.size(); ++i)
        if (static_cast<int>(fibers_[i].size()) != spec_->dim(i))
            throw SchemaError("atom '" + spec_->space()->id(i) + "' expects a vector of length " +
                              std::to_string(spec_->dim(i)));
}

ModuleElement ModuleElement::zero(SpecPtr spec) {
    std::vector<Vec> f(spec->size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i].assign(static_cast<std::size_t>(spec->dim(i)), 0.0);
    return ModuleElement(std::move(spec), std::move(f));
}

ModuleElement ModuleElement::operator+(const ModuleElement& o) const {
    require_same_spec(spec_, o.spec_);
    ModuleElement r = *this;
    for (std::size_t i = 0; i < fibers_.size(); ++i)
        for (std::size_t k = 0; k < fibers_[i].size(); ++k) r.fibers_[i][k] += o.fibers_[i][k];
    return r;
}

ModuleElement ModuleElement::operator-(const ModuleElement& o) const {
    require_same_spec(spec_, o.spec_);
    ModuleElement r = *this;
    for (std::size_t i = 0; i < fibers_.size(); ++i)
        for (std::size_t k = 0; k < fibers_[i].size(); ++k) r.fibers_[i][k] -= o.fibers_[i][k];
    return r;
}

ModuleElement ModuleElement::operator*(double c) const {
    ModuleElement r = *this;
    for (auto& f : r.fibers_)
        for (auto& v : f) v *= c;
    return r;
}

bool operator==(const ModuleElement& a, const ModuleElement& b) {
    require_same_spec(a.spec_, b.spec_);
    return a.fibers_ == b.fibers_;
}

double max_abs_diff(const ModuleElement& a, const ModuleElement& b) {
    require_same_spec(a.spec(), b.spec());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < a[i].size(); ++k) m = std::max(m, std::abs(a[i][k] - b[i][k]));
    return m;
}

// -------------------------------------------------------------- operations

L0Real random_norm(const ModuleElement& x) {
    std::vector<double> v(x.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = x.spec()->norm(i).norm(x[i]);
    return L0Real(x.space(), std::move(v));
}

ModuleElement module_scale(const L0Real& xi, const ModuleElement& x) {
    require_same_space(xi.space(), x.space());
    ModuleElement r = x;
    for (std::size_t i = 0; i < r.size(); ++i)
        for (auto& c : r[i]) c *= xi[i];
    return r;
}

ModuleElement restrict_to(const EventSet& e, const ModuleElement& x) { return module_scale(indicator(e), x); }

Supports supports(const ModuleElement& x, const ModuleElement* y) {
    Supports s{strata_pos(random_norm(x)), std::nullopt, std::nullopt};
    if (y != nullptr) {
        require_same_spec(x.spec(), y->spec());
        EventSet a_xy = s.a_x & strata_pos(random_norm(*y));
        s.b_xy = a_xy & strata_pos(random_norm(x - *y));
        s.a_xy = std::move(a_xy);
    }
    return s;
}

std::optional<EventSet> sphere_membership(const ModuleElement& x) {
    constexpr double tol = 1e-12;
    const L0Real n = random_norm(x);
    std::vector<bool> m(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (std::abs(n[i] - 1.0) <= tol) {
            m[i] = true;
        } else if (n[i] != 0.0) {
            return std::nullopt;
        }
    }
    EventSet a(x.space(), std::move(m));
    if (a.empty()) return std::nullopt;
    return a;
}

ModuleElement glue(const SpecPtr& spec, const std::vector<std::pair<EventSet, ModuleElement>>& pieces) {
    ModuleElement out = ModuleElement::zero(spec);
    EventSet covered = EventSet::none(spec->space());
    for (const auto& [event, piece] : pieces) {
        require_same_spec(spec, piece.spec());
        if (!covered.disjoint(event)) throw PreconditionError("glue: events overlap");
        covered = covered | event;
        for (std::size_t i : event.indices()) out[i] = piece[i];
    }
    return out;
}

ModuleElement unit_section(const SpecPtr& spec) {
    if (spec->support().empty()) throw PreconditionError("unit section: module has empty support");
    ModuleElement x = ModuleElement::zero(spec);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (spec->dim(i) < 1) continue;
        Vec e(static_cast<std::size_t>(spec->dim(i)), 0.0);
        e[0] = 1.0;
        e[0] /= spec->norm(i).norm(e);
        x[i] = std::move(e);
    }
    return x;
}

double module_distance(const ModuleElement& x, const ModuleElement& y) {
    const L0Real d = random_norm(x - y);
    return kyfan_distance(d, L0Real::zero(d.space()));
}

}  // namespace rnm
