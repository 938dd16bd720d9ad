#include "rnm/detail/pair_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "rnm/errors.hpp"

namespace rnm::detail {

namespace {

using Vec = std::vector<double>;

constexpr int kBisectionSteps = 56;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Section {
    Vec e1, e2;
    double theta = 0.0;
    double r1 = 1.0;
    double r2 = 1.0;
};

struct Eval {
    double value = kInf;
    Vec x, y;
};

struct Candidate {
    Section section;
    Eval eval;
};

void orthonormalize(Vec& e1, Vec& e2) {
    double n1 = 0.0;
    for (double c : e1) n1 += c * c;
    n1 = std::sqrt(n1);
    for (auto& c : e1) c /= n1;
    double d = 0.0;
    for (std::size_t i = 0; i < e1.size(); ++i) d += e1[i] * e2[i];
    for (std::size_t i = 0; i < e1.size(); ++i) e2[i] -= d * e1[i];
    double n2 = 0.0;
    for (double c : e2) n2 += c * c;
    n2 = std::sqrt(n2);
    for (auto& c : e2) c /= n2;
}

bool usable_plane(const Vec& e1, const Vec& e2) {
    double n1 = 0.0, n2 = 0.0, d = 0.0;
    for (std::size_t i = 0; i < e1.size(); ++i) {
        n1 += e1[i] * e1[i];
        n2 += e2[i] * e2[i];
        d += e1[i] * e2[i];
    }
    return n1 > 0.0 && n2 > 0.0 && n1 * n2 - d * d > 1e-12 * n1 * n2;
}

class Searcher {
public:
    Searcher(const NormFn& norm, std::size_t dim, const PairSearchOptions& opt)
        : norm_(norm), dim_(dim), opt_(opt), a_(dim), b_(dim), c_(dim), y_(dim), tmp_(dim) {}

    long evaluations() const noexcept { return evaluations_; }

    Eval evaluate(const Section& s) {
        ++evaluations_;
        const double ct = std::cos(s.theta), st = std::sin(s.theta);
        for (std::size_t i = 0; i < dim_; ++i) {
            a_[i] = ct * s.e1[i] + st * s.e2[i];
            b_[i] = -st * s.e1[i] + ct * s.e2[i];
        }
        Vec x(dim_);
        const double na = norm_(a_);
        for (std::size_t i = 0; i < dim_; ++i) x[i] = s.r1 * a_[i] / na;

        Eval best;
        const int m = opt_.phi_points;
        const double step = 2.0 * std::numbers::pi / m;
        double g_prev = gap(x, s.r2, 0.0);
        if (s.r1 != s.r2) consider(best, x, s.r2, 0.0, g_prev);
        for (int k = 1; k <= m; ++k) {
            const double phi = step * k;
            const double g = k == m ? gap(x, s.r2, 0.0) : gap(x, s.r2, phi);
            if (k < m) consider(best, x, s.r2, phi, g);
            if ((g_prev < 0.0) != (g < 0.0)) {
                double lo = phi - step, hi = phi;
                double g_lo = g_prev;
                for (int it = 0; it < kBisectionSteps; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double gm = gap(x, s.r2, mid);
                    if ((gm < 0.0) == (g_lo < 0.0)) {
                        lo = mid;
                        g_lo = gm;
                    } else {
                        hi = mid;
                    }
                }
                // Keep the endpoint on the feasible side.
                const double root = g_lo >= 0.0 ? lo : hi;
                consider(best, x, s.r2, root, gap(x, s.r2, root));
            }
            g_prev = g;
        }
        if (best.value < kInf) best.x = std::move(x);
        return best;
    }

private:
    void direction(double r2, double phi) {
        const double cp = std::cos(phi), sp = std::sin(phi);
        for (std::size_t i = 0; i < dim_; ++i) c_[i] = cp * a_[i] + sp * b_[i];
        const double nc = norm_(c_);
        for (std::size_t i = 0; i < dim_; ++i) y_[i] = r2 * c_[i] / nc;
    }

    double gap(const Vec& x, double r2, double phi) {
        direction(r2, phi);
        for (std::size_t i = 0; i < dim_; ++i) tmp_[i] = x[i] - y_[i];
        return norm_(tmp_) - opt_.eps;
    }

    // Assumes y_ holds y(phi) from the preceding gap() call.
    void consider(Eval& best, const Vec& x, double r2, double phi, double g) {
        const bool feasible = opt_.equality ? std::abs(g) <= kEqualityTol : g >= -kGapSlack;
        if (!feasible) return;
        direction(r2, phi);
        for (std::size_t i = 0; i < dim_; ++i) tmp_[i] = 0.5 * (x[i] + y_[i]);
        const double v = 1.0 - norm_(tmp_);
        if (v < best.value) {
            best.value = v;
            best.y = y_;
        }
    }

    const NormFn& norm_;
    std::size_t dim_;
    const PairSearchOptions& opt_;
    Vec a_, b_, c_, y_, tmp_;
    long evaluations_ = 0;
};

void keep_best(std::vector<Candidate>& top, std::size_t k, Candidate c) {
    if (c.eval.value == kInf) return;
    auto pos = std::find_if(top.begin(), top.end(),
                            [&](const Candidate& t) { return c.eval.value < t.eval.value; });
    top.insert(pos, std::move(c));
    if (top.size() > k) top.pop_back();
}

}  // namespace

PairSearchResult search_pairs(const NormFn& norm, std::size_t dim, const PairSearchOptions& opt) {
    if (dim < 2) throw PreconditionError("pair search needs dimension >= 2");
    if (!(opt.eps > 0.0 && opt.eps <= 2.0)) throw PreconditionError("gap must lie in (0, 2]");
    if (opt.theta_points < 1 || opt.phi_points < 4 || opt.refine_iters < 0)
        throw PreconditionError("pair search budgets must be positive");

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<std::pair<Vec, Vec>> planes;
    auto unit = [dim](std::size_t k) {
        Vec e(dim, 0.0);
        e[k] = 1.0;
        return e;
    };
    if (dim == 2 || opt.coordinate_planes) {
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j) planes.emplace_back(unit(i), unit(j));
    }
    if (dim > 2) {
        for (int r = 0; r < opt.random_planes; ++r) {
            Vec e1(dim), e2(dim);
            do {
                for (auto& c : e1) c = gauss(rng);
                for (auto& c : e2) c = gauss(rng);
            } while (!usable_plane(e1, e2));
            orthonormalize(e1, e2);
            planes.emplace_back(std::move(e1), std::move(e2));
        }
    }

    std::vector<std::pair<double, double>> radii{{1.0, 1.0}};
    if (opt.ball) {
        radii.clear();
        for (double r1 : {1.0, 0.85, 0.7, 0.5, 0.3})
            for (double r2 : {1.0, 0.85, 0.7, 0.5, 0.3}) radii.emplace_back(r1, r2);
    }

    Searcher searcher(norm, dim, opt);
    const std::size_t keep = dim == 2 ? 4 : 2;
    std::vector<Candidate> top;
    const int n = opt.theta_points;
    for (const auto& [e1, e2] : planes) {
        for (int i = 0; i < n; ++i) {
            for (const auto& [r1, r2] : radii) {
                Section s{e1, e2, std::numbers::pi * i / n, r1, r2};
                Eval ev = searcher.evaluate(s);
                keep_best(top, keep, Candidate{std::move(s), std::move(ev)});
            }
        }
    }

    // Coordinate descent over the section parameters, starting from the best
    // grid candidates. Plane vectors only move in dimension >= 3.
    for (auto& cand : top) {
        const std::size_t n_params = 1 + (opt.ball ? 2 : 0) + (dim > 2 ? 2 * dim : 0);
        std::vector<double> steps(n_params);
        steps[0] = std::numbers::pi / n;
        for (std::size_t p = 1; p < n_params; ++p) steps[p] = 0.05;

        auto perturbed = [&](const Section& s, std::size_t p, double delta) {
            Section t = s;
            if (p == 0) {
                t.theta += delta;
                return t;
            }
            std::size_t q = p - 1;
            if (opt.ball) {
                if (q < 2) {
                    double& r = q == 0 ? t.r1 : t.r2;
                    r = std::clamp(r + delta, 1e-6, 1.0);
                    return t;
                }
                q -= 2;
            }
            Vec& e = q < dim ? t.e1 : t.e2;
            e[q % dim] += delta;
            if (!usable_plane(t.e1, t.e2)) return s;
            orthonormalize(t.e1, t.e2);
            return t;
        };

        for (int it = 0; it < opt.refine_iters; ++it) {
            bool improved = false;
            for (std::size_t p = 0; p < n_params; ++p) {
                for (double sign : {1.0, -1.0}) {
                    Section t = perturbed(cand.section, p, sign * steps[p]);
                    Eval ev = searcher.evaluate(t);
                    if (ev.value < cand.eval.value) {
                        cand.section = std::move(t);
                        cand.eval = std::move(ev);
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) {
                double largest = 0.0;
                for (auto& s : steps) {
                    s *= 0.5;
                    largest = std::max(largest, s);
                }
                if (largest < 1e-10) break;
            }
        }
    }

    PairSearchResult r;
    r.evaluations = searcher.evaluations();
    for (const auto& c : top) {
        if (c.eval.value < r.value || !r.found) {
            r.found = true;
            r.value = c.eval.value;
            r.x = c.eval.x;
            r.y = c.eval.y;
        }
    }
    return r;
}

}  // namespace rnm::detail
