#include "rnm/measure.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rnm/errors.hpp"

namespace rnm {

SpacePtr FiniteProbSpace::create(std::vector<Atom> atoms, double sum_tol) {
    if (atoms.empty()) throw SchemaError("probability space needs at least one atom");
    std::set<std::string> seen;
    double total = 0.0;
    for (const auto& a : atoms) {
        if (a.id.empty()) throw SchemaError("atom id must be non-empty");
        if (!seen.insert(a.id).second) throw SchemaError("duplicate atom id '" + a.id + "'");
        if (!std::isfinite(a.weight) || !(a.weight > 0.0) || a.weight > 1.0)
            throw SchemaError("atom '" + a.id + "' weight must lie in (0,1]");
        total += a.weight;
    }
    if (std::abs(total - 1.0) > sum_tol)
        throw SchemaError("atom weights sum to " + std::to_string(total) + ", expected 1");
    return SpacePtr(new FiniteProbSpace(std::move(atoms)));
}

SpacePtr FiniteProbSpace::uniform(const std::vector<std::string>& ids) {
    std::vector<Atom> atoms;
    atoms.reserve(ids.size());
    for (const auto& id : ids) atoms.push_back({id, 1.0 / static_cast<double>(ids.size())});
    return create(std::move(atoms));
}

std::optional<std::size_t> FiniteProbSpace::find(std::string_view id) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i].id == id) return i;
    return std::nullopt;
}

std::size_t FiniteProbSpace::index_of(std::string_view id) const {
    if (auto i = find(id)) return *i;
    throw SchemaError("unknown atom id '" + std::string(id) + "'");
}

bool FiniteProbSpace::same_as(const FiniteProbSpace& other) const {
    if (this == &other) return true;
    if (atoms_.size() != other.atoms_.size()) return false;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i].id != other.atoms_[i].id || atoms_[i].weight != other.atoms_[i].weight)
            return false;
    return true;
}

void require_same_space(const SpacePtr& a, const SpacePtr& b) {
    if (!a || !b) throw PreconditionError("operand has no probability space");
    if (!a->same_as(*b)) throw PreconditionError("operands live on different probability spaces");
}

// ---------------------------------------------------------------- EventSet

EventSet::EventSet(SpacePtr space, std::vector<bool> members)
    : space_(std::move(space)), members_(std::move(members)) {
    if (!space_) throw PreconditionError("event without a probability space");
    if (members_.size() != space_->size())
        throw SchemaError("event membership vector does not match the space");
}

EventSet EventSet::none(SpacePtr space) {
    const auto n = space->size();
    return EventSet(std::move(space), std::vector<bool>(n, false));
}

EventSet EventSet::all(SpacePtr space) {
    const auto n = space->size();
    return EventSet(std::move(space), std::vector<bool>(n, true));
}

EventSet EventSet::of(SpacePtr space, const std::vector<std::string>& ids) {
    std::vector<bool> m(space->size(), false);
    for (const auto& id : ids) m[space->index_of(id)] = true;
    return EventSet(std::move(space), std::move(m));
}

bool EventSet::empty() const noexcept {
    return std::none_of(members_.begin(), members_.end(), [](bool b) { return b; });
}

std::size_t EventSet::count() const noexcept {
    return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), true));
}

double EventSet::weight() const {
    double w = 0.0;
    for (std::size_t i = 0; i < members_.size(); ++i)
        if (members_[i]) w += space_->weight(i);
    return w;
}

std::vector<std::string> EventSet::ids() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < members_.size(); ++i)
        if (members_[i]) out.push_back(space_->id(i));
    return out;
}

std::vector<std::size_t> EventSet::indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < members_.size(); ++i)
        if (members_[i]) out.push_back(i);
    return out;
}

bool EventSet::subset_of(const EventSet& other) const {
    require_same_space(space_, other.space_);
    for (std::size_t i = 0; i < members_.size(); ++i)
        if (members_[i] && !other.members_[i]) return false;
    return true;
}

bool EventSet::disjoint(const EventSet& other) const { return (*this & other).empty(); }

EventSet EventSet::operator&(const EventSet& other) const {
    require_same_space(space_, other.space_);
    std::vector<bool> m(members_.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = members_[i] && other.members_[i];
    return EventSet(space_, std::move(m));
}

EventSet EventSet::operator|(const EventSet& other) const {
    require_same_space(space_, other.space_);
    std::vector<bool> m(members_.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = members_[i] || other.members_[i];
    return EventSet(space_, std::move(m));
}

EventSet EventSet::operator-(const EventSet& other) const {
    require_same_space(space_, other.space_);
    std::vector<bool> m(members_.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = members_[i] && !other.members_[i];
    return EventSet(space_, std::move(m));
}

EventSet EventSet::complement() const {
    std::vector<bool> m(members_.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = !members_[i];
    return EventSet(space_, std::move(m));
}

bool operator==(const EventSet& a, const EventSet& b) {
    require_same_space(a.space_, b.space_);
    return a.members_ == b.members_;
}

// ------------------------------------------------------------------ L0Real

L0Real::L0Real(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw PreconditionError("random variable without a probability space");
    if (values_.size() != space_->size())
        throw SchemaError("random variable needs exactly one value per atom");
}

L0Real L0Real::constant(SpacePtr space, double c) {
    const auto n = space->size();
    return L0Real(std::move(space), std::vector<double>(n, c));
}

namespace {

template <class Op>
L0Real zip(const L0Real& a, const L0Real& b, Op op) {
    require_same_space(a.space(), b.space());
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
    return L0Real(a.space(), std::move(v));
}

template <class Op>
L0Real map(const L0Real& a, Op op) {
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i]);
    return L0Real(a.space(), std::move(v));
}

}  // namespace

L0Real L0Real::operator+(const L0Real& o) const { return zip(*this, o, std::plus<>{}); }
L0Real L0Real::operator-(const L0Real& o) const { return zip(*this, o, std::minus<>{}); }
L0Real L0Real::operator*(const L0Real& o) const { return zip(*this, o, std::multiplies<>{}); }
L0Real L0Real::operator*(double c) const {
    return map(*this, [c](double v) { return v * c; });
}
L0Real L0Real::operator-() const {
    return map(*this, [](double v) { return -v; });
}
L0Real L0Real::abs() const {
    return map(*this, [](double v) { return std::abs(v); });
}

bool operator==(const L0Real& a, const L0Real& b) {
    require_same_space(a.space_, b.space_);
    return a.values_ == b.values_;
}

// -------------------------------------------------------------- operations

L0Real indicator(const EventSet& e) {
    std::vector<double> v(e.space()->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = e.contains(i) ? 1.0 : 0.0;
    return L0Real(e.space(), std::move(v));
}

L0Real lattice_extrema(std::span<const L0Real> family, Extremum mode) {
    if (family.empty()) throw PreconditionError("lattice extremum of an empty family");
    L0Real out = family.front();
    for (const auto& member : family.subspan(1)) {
        out = zip(out, member, [mode](double a, double b) {
            return mode == Extremum::Sup ? std::max(a, b) : std::min(a, b);
        });
    }
    return out;
}

L0Real sup(const L0Real& a, const L0Real& b) {
    return zip(a, b, [](double x, double y) { return std::max(x, y); });
}

L0Real inf(const L0Real& a, const L0Real& b) {
    return zip(a, b, [](double x, double y) { return std::min(x, y); });
}

EventSet strata_pos(const L0Real& xi) {
    std::vector<bool> m(xi.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = xi[i] > 0.0;
    return EventSet(xi.space(), std::move(m));
}

double kyfan_distance(const L0Real& xi, const L0Real& eta) {
    require_same_space(xi.space(), eta.space());
    double d = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i)
        d += xi.space()->weight(i) * std::min(std::abs(xi[i] - eta[i]), 1.0);
    return d;
}

bool leq_on(const L0Real& xi, const L0Real& eta, const EventSet& e) {
    require_same_space(xi.space(), eta.space());
    require_same_space(xi.space(), e.space());
    for (std::size_t i = 0; i < xi.size(); ++i)
        if (e.contains(i) && !(xi[i] <= eta[i])) return false;
    return true;
}

bool leq(const L0Real& xi, const L0Real& eta) { return leq_on(xi, eta, EventSet::all(xi.space())); }

double max_abs_diff(const L0Real& a, const L0Real& b) {
    require_same_space(a.space(), b.space());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace rnm
