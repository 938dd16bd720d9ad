#include "rnm/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <optional>

#include "rnm/convexity.hpp"
#include "rnm/errors.hpp"
#include "rnm/expr.hpp"
#include "rnm/io.hpp"
#include "rnm/ivt.hpp"
#include "rnm/lp_bridge.hpp"
#include "rnm/rank.hpp"
#include "rnm/verify.hpp"

namespace rnm::cli {

namespace {

using io::Json;

std::optional<double> as_number(const std::string& s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// A numeric literal is a constant random variable; anything else names an
// L0Real JSON file.
L0Real load_l0(const std::string& arg, const SpacePtr& space) {
    if (auto v = as_number(arg)) return L0Real::constant(space, *v);
    return io::l0real_from_json(io::read_json_file(arg), space);
}

std::vector<std::string> split_ids(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto end = std::min(s.find(',', start), s.size());
        std::string id = s.substr(start, end - start);
        if (!id.empty()) out.push_back(std::move(id));
        start = end + 1;
    }
    return out;
}

CommandResult json_result(const Json& j, std::vector<std::string> diagnostics = {}, int code = kOk) {
    return {code, io::dump(j) + "\n", std::move(diagnostics)};
}

CommandResult space_validate(const std::string& path) {
    const Json j = io::read_json_file(path);
    const SpacePtr space = io::space_from_json(j);
    double total = 0.0;
    for (const auto& a : space->atoms()) total += a.weight;
    Json out{{"valid", true}, {"atoms", space->size()}, {"weight_sum", total}};
    const auto& atoms = j["atoms"];
    if (std::any_of(atoms.begin(), atoms.end(), [](const Json& a) { return a.contains("dim"); })) {
        const SpecPtr spec = io::spec_from_json(j);
        out["support"] = io::to_json(spec->support());
        out["grand_stratum"] = io::to_json(grand_stratum(*spec));
    }
    return json_result(out);
}

CommandResult norm_command(const std::string& space_path, const std::string& element_path) {
    const SpecPtr spec = io::spec_from_json(io::read_json_file(space_path));
    const ModuleElement x = io::element_from_json(io::read_json_file(element_path), spec);
    const auto sphere = sphere_membership(x);
    Json out{{"norm", io::to_json(random_norm(x))["values"]},
             {"support", io::to_json(supports(x).a_x)},
             {"unit_sphere", sphere ? io::to_json(*sphere) : Json(nullptr)}};
    return json_result(out);
}

struct ModulusArgs {
    std::string space, set, eps_file, variant = "def", csv;
    std::vector<double> eps;
    int grid = 2048;
    int restarts = 64;
    int refine = 200;
    std::uint64_t seed = 0;
};

std::vector<L0Real> eps_from_file(const std::string& path, const SpacePtr& space) {
    const Json j = io::read_json_file(path);
    std::vector<L0Real> out;
    const Json* list = nullptr;
    if (j.is_array()) list = &j;
    if (j.is_object() && j.contains("eps")) list = &j["eps"];
    if (list == nullptr) {
        out.push_back(io::l0real_from_json(j, space));
        return out;
    }
    if (!list->is_array() || list->empty()) throw SchemaError(path + ": 'eps' must be a non-empty array");
    for (const auto& e : *list) {
        if (!e.is_number()) throw SchemaError(path + ": eps values must be numbers");
        out.push_back(L0Real::constant(space, e.get<double>()));
    }
    return out;
}

CommandResult modulus_command(const ModulusArgs& a) {
    const SpecPtr spec = io::spec_from_json(io::read_json_file(a.space));
    const SpacePtr& space = spec->space();
    const EventSet d = a.set.empty() ? spec->support() : EventSet::of(space, split_ids(a.set));
    const ModulusVariant variant = parse_variant(a.variant);
    std::vector<L0Real> eps;
    if (!a.eps_file.empty()) {
        eps = eps_from_file(a.eps_file, space);
    } else {
        for (double e : a.eps) eps.push_back(L0Real::constant(space, e));
    }
    SearchConfig cfg;
    cfg.grid_points = a.grid;
    cfg.random_restarts = a.restarts;
    cfg.refine_iters = a.refine;
    cfg.seed = a.seed;

    Json curves = Json::array();
    std::vector<io::ModulusCsvRow> rows;
    std::vector<std::string> diagnostics;
    for (const L0Real& e : eps) {
        const ModulusResult r = modulus_estimate(*spec, {d, e, variant}, cfg);
        Json est = Json::object(), eps_j = Json::object();
        for (std::size_t i : d.indices()) {
            est[space->id(i)] = r.estimate[i];
            eps_j[space->id(i)] = e[i];
            rows.push_back({space->id(i), e[i], variant, r.estimate[i]});
        }
        curves.push_back(Json{{"eps", eps_j},
                              {"estimate", est},
                              {"empty_feasible", io::to_json(r.empty_feasible)},
                              {"diagnostics", r.diagnostics}});
        diagnostics.insert(diagnostics.end(), r.diagnostics.begin(), r.diagnostics.end());
    }
    const std::string csv = io::modulus_csv(rows);
    if (a.csv == "-") return {kOk, csv, diagnostics};
    if (!a.csv.empty()) {
        std::ofstream f(a.csv, std::ios::binary);
        if (!(f << csv)) throw SchemaError("cannot write '" + a.csv + "'");
    }
    Json out{{"variant", to_string(variant)},
             {"set", io::to_json(d)},
             {"grid", a.grid},
             {"restarts", a.restarts},
             {"refine", a.refine},
             {"seed", a.seed},
             {"curves", curves}};
    return json_result(out, diagnostics);
}

struct IvtArgs {
    std::string space, f, y1, y2, xi;
    std::vector<std::string> binds;
    double tol = 1e-9;
};

CommandResult ivt_command(const IvtArgs& a) {
    const SpacePtr space = io::space_from_json(io::read_json_file(a.space));
    const expr::Node ast = expr::parse(a.f);
    expr::Bindings bindings;
    for (const auto& b : a.binds) {
        const auto eq = b.find('=');
        if (eq == std::string::npos || eq == 0) throw SchemaError("--bind expects NAME=FILE, got '" + b + "'");
        bindings.insert_or_assign(b.substr(0, eq), load_l0(b.substr(eq + 1), space));
    }
    const LocalFunction f = expr::compile(ast, bindings, space);
    const L0Real y1 = load_l0(a.y1, space), y2 = load_l0(a.y2, space), xi = load_l0(a.xi, space);
    const L0Real eta = solve_ivt(f, y1, y2, xi, a.tol);
    const L0Real residual = (f(eta) - xi).abs();
    double worst = 0.0;
    for (double r : residual.values()) worst = std::max(worst, r);
    Json out{{"expression", expr::print(ast)},
             {"eta", io::to_json(eta)["values"]},
             {"residual", io::to_json(residual)["values"]},
             {"max_residual", worst},
             {"tol", a.tol}};
    return json_result(out);
}

CommandResult verify_command(const std::string& suite, std::uint64_t seed) {
    const auto r = verify::run_suite(suite, seed);
    std::vector<std::string> diagnostics;
    if (!r.passed) diagnostics.push_back("suite '" + suite + "' failed");
    return json_result(r.report, diagnostics, r.passed ? kOk : kVerifyFailed);
}

struct LpArgs {
    std::string space;
    double p = 2.0, eps = 1.0;
    int samples = 0;
    std::uint64_t seed = 0;
    std::optional<int> grid;
};

CommandResult lp_command(const LpArgs& a) {
    const SpecPtr spec = io::spec_from_json(io::read_json_file(a.space));
    const UniformConvexityReport r = uniform_convexity_audit(*spec, a.p, a.eps, a.samples, a.seed);
    Json out{{"p", r.p},
             {"eps", r.eps},
             {"delta_p", r.delta_p()},
             {"samples_accepted", r.bounded.samples_accepted},
             {"seed", r.seed},
             {"worst_atom", r.bounded.worst_atom},
             {"stability_delta", r.stability_delta},
             {"samples_rejected", r.bounded.samples_rejected},
             {"check_delta_p", r.bounded_check.delta_p},
             {"relative_delta_p", r.relative.delta_p},
             {"relative_worst_atom", r.relative.worst_atom},
             {"passed", r.passed()}};
    std::vector<std::string> diagnostics;
    if (a.grid) {
        SearchConfig cfg;
        cfg.grid_points = *a.grid;
        cfg.seed = a.seed;
        const LpModulusEstimate m = lp_modulus_estimate(*spec, a.p, a.eps, cfg);
        out["modulus_estimate"] = m.estimate;
        out["doubled_budget_estimate"] = m.doubled_budget_estimate;
        out["budget_delta"] = m.budget_delta;
    }
    if (!r.passed()) diagnostics.push_back("delta_p outside (0,1) or unstable across seed streams");
    return json_result(out, diagnostics);
}

CommandResult failure(int code, const char* kind, const std::string& message) {
    Json out{{"error", Json{{"kind", kind}, {"message", message}}}};
    return {code, io::dump(out) + "\n", {message}};
}

}  // namespace

CommandResult run(const std::vector<std::string>& argv) {
    CLI::App app{"Computations on random normed modules over finite probability spaces", "rnm"};
    app.require_subcommand(1);

    std::function<CommandResult()> action;

    auto* space = app.add_subcommand("space", "Probability space files");
    space->require_subcommand(1);
    auto* validate = space->add_subcommand("validate", "Check a space or module spec file");
    std::string validate_path;
    validate->add_option("file", validate_path, "Space or spec JSON")->required();
    validate->callback([&] { action = [&] { return space_validate(validate_path); }; });

    auto* norm = app.add_subcommand("norm", "Random norm of an element");
    std::string norm_space, norm_element;
    norm->add_option("--space", norm_space, "Module spec JSON")->required();
    norm->add_option("--element", norm_element, "Element JSON")->required();
    norm->callback([&] { action = [&] { return norm_command(norm_space, norm_element); }; });

    auto* modulus = app.add_subcommand("modulus", "Estimate the modulus of random convexity");
    ModulusArgs ma;
    modulus->add_option("--space", ma.space, "Module spec JSON")->required();
    modulus->add_option("--set", ma.set, "Comma-separated atom ids of D (default: H(S))");
    auto* eps_opt = modulus->add_option("--eps", ma.eps, "eps value(s), comma-separated")->delimiter(',');
    auto* eps_file = modulus->add_option("--eps-file", ma.eps_file, "L0Real JSON, or {\"eps\":[...]} for a curve");
    eps_opt->excludes(eps_file);
    modulus->add_option("--variant", ma.variant, "def | eq | ball | ball-eq")->capture_default_str();
    modulus->add_option("--grid", ma.grid, "Grid points per search")->capture_default_str();
    modulus->add_option("--restarts", ma.restarts, "Random planes in dimension >= 3")->capture_default_str();
    modulus->add_option("--refine", ma.refine, "Refinement iterations")->capture_default_str();
    modulus->add_option("--seed", ma.seed, "Random seed")->required();
    modulus->add_option("--csv", ma.csv, "Write atom_id,eps,variant,estimate rows to PATH ('-' for stdout)");
    modulus->callback([&] {
        if (ma.eps.empty() && ma.eps_file.empty()) throw CLI::RequiredError("--eps or --eps-file");
        action = [&] { return modulus_command(ma); };
    });

    auto* ivt = app.add_subcommand("ivt", "Solve f(eta) = xi between two brackets");
    IvtArgs ia;
    ivt->add_option("--space", ia.space, "Space JSON")->required();
    ivt->add_option("--f", ia.f, "Expression in x and bound names")->required();
    ivt->add_option("--bind", ia.binds, "NAME=FILE (or NAME=NUMBER)");
    ivt->add_option("--y1", ia.y1, "Lower bracket (L0Real JSON or number)")->required();
    ivt->add_option("--y2", ia.y2, "Upper bracket (L0Real JSON or number)")->required();
    ivt->add_option("--xi", ia.xi, "Target value (L0Real JSON or number)")->required();
    ivt->add_option("--tol", ia.tol, "Residual tolerance")->capture_default_str();
    ivt->callback([&] { action = [&] { return ivt_command(ia); }; });

    auto* verify = app.add_subcommand("verify", "Run a seeded verification suite");
    std::string suite;
    std::uint64_t verify_seed = 0;
    verify->add_option("--suite", suite, "Suite name")->required()->check(CLI::IsMember(verify::suite_names()));
    verify->add_option("--seed", verify_seed, "Random seed")->required();
    verify->callback([&] { action = [&] { return verify_command(suite, verify_seed); }; });

    auto* lp = app.add_subcommand("lp-modulus", "Uniform convexity audit of L^p(S)");
    LpArgs la;
    int lp_grid = 0;
    lp->add_option("--space", la.space, "Module spec JSON")->required();
    lp->add_option("--p", la.p, "Exponent, 1 < p < inf")->required();
    lp->add_option("--eps", la.eps, "Gap in (0, 2]")->required();
    lp->add_option("--samples", la.samples, "Samples per batch")->required();
    lp->add_option("--seed", la.seed, "Random seed")->required();
    auto* lp_grid_opt = lp->add_option("--grid", lp_grid, "Also run the pair-search modulus estimate");
    lp->callback([&] {
        if (lp_grid_opt->count() > 0) la.grid = lp_grid;
        action = [&] { return lp_command(la); };
    });

    std::vector<std::string> args(argv.rbegin(), argv.rend());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        return {kOk, app.help(), {}};
    } catch (const CLI::CallForAllHelp&) {
        return {kOk, app.help("", CLI::AppFormatMode::All), {}};
    } catch (const CLI::ParseError& e) {
        return failure(kSchema, "usage", e.what());
    }

    try {
        return action();
    } catch (const ExprError& e) {
        return failure(kExpression, "expression", e.what());
    } catch (const SchemaError& e) {
        return failure(kSchema, "schema", e.what());
    } catch (const ConvergenceError& e) {
        return failure(kConvergence, "convergence", e.what());
    } catch (const PreconditionError& e) {
        return failure(kPrecondition, "precondition", e.what());
    } catch (const Error& e) {
        return failure(kPrecondition, "error", e.what());
    } catch (const std::exception& e) {
        return failure(kSchema, "input", e.what());
    }
}

}  // namespace rnm::cli
