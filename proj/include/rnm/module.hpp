#pragma once

// Concrete random normed modules: one finite-dimensional normed fiber per
// atom, with the random norm evaluated fiberwise.

#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rnm/measure.hpp"

namespace rnm {

using Vec = std::vector<double>;

/// Norm on one fiber R^d: Euclidean or an l^p norm with finite p >= 1.
class FiberNorm {
public:
    enum class Kind { Euclid, PNorm };

    FiberNorm() = default;
    static FiberNorm euclid() { return FiberNorm(Kind::Euclid, 2.0); }
    /// Throws PreconditionError unless 1 <= p < inf.
    static FiberNorm pnorm(double p);

    Kind kind() const noexcept { return kind_; }
    double p() const noexcept { return p_; }
    /// Holder conjugate; +inf when p == 1.
    double dual_exponent() const noexcept;
    bool strictly_convex() const noexcept { return p_ > 1.0; }

    double norm(std::span<const double> v) const;
    double dual_norm(std::span<const double> f) const;

    /// g with <g, v> = norm(v) and dual_norm(g) = 1; zero for v = 0. For p = 1
    /// this is the sign pattern of v with sign(0) = 0.
    Vec norming_functional(std::span<const double> v) const;

    /// u with norm(u) = 1 and <f, u> = dual_norm(f); zero for f = 0. For p = 1
    /// the mass sits on the first coordinate of maximal |f_i|.
    Vec norming_direction(std::span<const double> f) const;

    friend bool operator==(const FiberNorm&, const FiberNorm&) = default;

private:
    FiberNorm(Kind k, double p) : kind_(k), p_(p) {}
    Kind kind_ = Kind::Euclid;
    double p_ = 2.0;
};

/// Plain lp norm of a coordinate vector (p may be +inf).
double lp_vector_norm(std::span<const double> v, double p);

class RnModuleSpec;
using SpecPtr = std::shared_ptr<const RnModuleSpec>;

class RnModuleSpec {
public:
    struct Fiber {
        int dim = 0;
        FiberNorm norm;
    };

    static SpecPtr create(SpacePtr space, std::vector<Fiber> fibers);
    /// Same fiber on every atom.
    static SpecPtr uniform(SpacePtr space, int dim, FiberNorm norm);

    const SpacePtr& space() const noexcept { return space_; }
    std::size_t size() const noexcept { return fibers_.size(); }
    const Fiber& fiber(std::size_t atom) const { return fibers_.at(atom); }
    int dim(std::size_t atom) const { return fibers_.at(atom).dim; }
    const FiberNorm& norm(std::size_t atom) const { return fibers_.at(atom).norm; }

    /// H(S): atoms with a nonzero fiber.
    EventSet support() const;

    bool same_as(const RnModuleSpec& other) const;

private:
    RnModuleSpec(SpacePtr space, std::vector<Fiber> fibers)
        : space_(std::move(space)), fibers_(std::move(fibers)) {}
    SpacePtr space_;
    std::vector<Fiber> fibers_;
};

void require_same_spec(const SpecPtr& a, const SpecPtr& b);

/// One fiber vector per atom. Also used as the storage for random functionals.
class ModuleElement {
public:
    ModuleElement() = default;
    /// Throws SchemaError when a vector length differs from the fiber dimension.
    ModuleElement(SpecPtr spec, std::vector<Vec> fibers);

    static ModuleElement zero(SpecPtr spec);

    const SpecPtr& spec() const noexcept { return spec_; }
    const SpacePtr& space() const { return spec_->space(); }
    std::size_t size() const noexcept { return fibers_.size(); }
    const Vec& operator[](std::size_t atom) const { return fibers_[atom]; }
    Vec& operator[](std::size_t atom) { return fibers_[atom]; }

    ModuleElement operator+(const ModuleElement& o) const;
    ModuleElement operator-(const ModuleElement& o) const;
    ModuleElement operator*(double c) const;
    ModuleElement operator-() const { return *this * -1.0; }

    /// Exact equality of all coordinates.
    friend bool operator==(const ModuleElement& a, const ModuleElement& b);

private:
    SpecPtr spec_;
    std::vector<Vec> fibers_;
};

/// Largest coordinate difference over all atoms.
double max_abs_diff(const ModuleElement& a, const ModuleElement& b);

L0Real random_norm(const ModuleElement& x);
ModuleElement module_scale(const L0Real& xi, const ModuleElement& x);
/// I_E x.
ModuleElement restrict_to(const EventSet& e, const ModuleElement& x);

struct Supports {
    EventSet a_x;
    std::optional<EventSet> a_xy;
    std::optional<EventSet> b_xy;
};

/// A_x, and with y given A_xy = A_x & A_y and B_xy = A_xy & A_{x-y}.
Supports supports(const ModuleElement& x, const ModuleElement* y = nullptr);

/// The event A when ||x|| = I_A (within 1e-12) with P(A) > 0.
std::optional<EventSet> sphere_membership(const ModuleElement& x);

/// Pieces on pairwise disjoint events; zero outside their union.
ModuleElement glue(const SpecPtr& spec, const std::vector<std::pair<EventSet, ModuleElement>>& pieces);

/// Element with norm I_{H(S)}: first standard basis vector, scaled to unit
/// fiber norm, on every atom of the support.
ModuleElement unit_section(const SpecPtr& spec);

/// Ky Fan distance between ||x - y|| and zero.
double module_distance(const ModuleElement& x, const ModuleElement& y);

}  // namespace rnm
