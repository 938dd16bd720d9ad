#pragma once

// Finite atomic probability spaces, events, and the L0 lattice algebra.
//
// Every atom carries strictly positive mass, so each event equivalence class
// has exactly one representative and essential extrema reduce to pointwise
// extrema over atoms.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rnm {

class FiniteProbSpace;
using SpacePtr = std::shared_ptr<const FiniteProbSpace>;

class FiniteProbSpace {
public:
    struct Atom {
        std::string id;
        double weight = 0.0;
    };

    /// Validates ids (distinct, non-empty) and weights (positive, summing to
    /// one within `sum_tol`). Throws SchemaError.
    static SpacePtr create(std::vector<Atom> atoms, double sum_tol = 1e-12);

    /// Uniform weights over the given ids.
    static SpacePtr uniform(const std::vector<std::string>& ids);

    std::size_t size() const noexcept { return atoms_.size(); }
    const std::string& id(std::size_t i) const { return atoms_.at(i).id; }
    double weight(std::size_t i) const { return atoms_.at(i).weight; }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }

    std::optional<std::size_t> find(std::string_view id) const;
    /// Throws SchemaError for an unknown id.
    std::size_t index_of(std::string_view id) const;

    /// Same atom ids in the same order with the same weights.
    bool same_as(const FiniteProbSpace& other) const;

private:
    explicit FiniteProbSpace(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}
    std::vector<Atom> atoms_;
};

/// Throws PreconditionError unless both pointers denote the same space.
void require_same_space(const SpacePtr& a, const SpacePtr& b);

class EventSet {
public:
    EventSet() = default;
    EventSet(SpacePtr space, std::vector<bool> members);

    static EventSet none(SpacePtr space);
    static EventSet all(SpacePtr space);
    /// Throws SchemaError on an id the space does not contain.
    static EventSet of(SpacePtr space, const std::vector<std::string>& ids);

    const SpacePtr& space() const noexcept { return space_; }
    bool contains(std::size_t atom) const { return members_.at(atom); }
    bool empty() const noexcept;
    std::size_t count() const noexcept;
    double weight() const;
    std::vector<std::string> ids() const;
    std::vector<std::size_t> indices() const;

    bool subset_of(const EventSet& other) const;
    bool disjoint(const EventSet& other) const;

    EventSet operator&(const EventSet& other) const;
    EventSet operator|(const EventSet& other) const;
    /// Set difference.
    EventSet operator-(const EventSet& other) const;
    EventSet complement() const;

    friend bool operator==(const EventSet& a, const EventSet& b);

private:
    SpacePtr space_;
    std::vector<bool> members_;
};

/// A real random variable up to a.s. equality: one value per atom.
class L0Real {
public:
    L0Real() = default;
    L0Real(SpacePtr space, std::vector<double> values);

    static L0Real constant(SpacePtr space, double c);
    static L0Real zero(SpacePtr space) { return constant(std::move(space), 0.0); }

    const SpacePtr& space() const noexcept { return space_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    L0Real operator+(const L0Real& o) const;
    L0Real operator-(const L0Real& o) const;
    L0Real operator*(const L0Real& o) const;
    L0Real operator*(double c) const;
    L0Real operator-() const;
    L0Real abs() const;

    /// Exact atomwise equality.
    friend bool operator==(const L0Real& a, const L0Real& b);

private:
    SpacePtr space_;
    std::vector<double> values_;
};

enum class Extremum { Sup, Inf };

L0Real indicator(const EventSet& e);

/// Atomwise max or min of a nonempty family sharing one space.
L0Real lattice_extrema(std::span<const L0Real> family, Extremum mode);
L0Real sup(const L0Real& a, const L0Real& b);
L0Real inf(const L0Real& a, const L0Real& b);

/// [xi > 0], no tolerance.
EventSet strata_pos(const L0Real& xi);

/// E[min(|xi - eta|, 1)]; metrizes convergence in probability.
double kyfan_distance(const L0Real& xi, const L0Real& eta);

/// I_E xi <= I_E eta, i.e. xi(w) <= eta(w) for every atom w of E.
bool leq_on(const L0Real& xi, const L0Real& eta, const EventSet& e);
bool leq(const L0Real& xi, const L0Real& eta);

/// Largest atomwise absolute difference.
double max_abs_diff(const L0Real& a, const L0Real& b);

}  // namespace rnm
