#include "rnm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rnm/errors.hpp"

namespace rnm::io {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(where + ": missing field '" + key + "'");
    return *it;
}

double number(const Json& j, const std::string& where) {
    if (!j.is_number()) throw SchemaError(where + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw SchemaError(where + ": non-finite number");
    return v;
}

std::string string(const Json& j, const std::string& where) {
    if (!j.is_string()) throw SchemaError(where + ": expected a string");
    return j.get<std::string>();
}

const Json& atoms_array(const Json& j) {
    const Json& atoms = field(j, "atoms", "space");
    if (!atoms.is_array() || atoms.empty()) throw SchemaError("space: 'atoms' must be a non-empty array");
    return atoms;
}

FiberNorm norm_from_json(const Json& j, const std::string& where) {
    const std::string kind = string(field(j, "kind", where), where + ".kind");
    if (kind == "euclid") return FiberNorm::euclid();
    if (kind == "pnorm") {
        const double p = number(field(j, "p", where), where + ".p");
        if (!(p >= 1.0)) throw SchemaError(where + ": p must be at least 1");
        return FiberNorm::pnorm(p);
    }
    throw SchemaError(where + ": unknown norm kind '" + kind + "'");
}

// Maps the keys of {"values":{...}} to atom indices, requiring each atom once.
std::vector<const Json*> values_by_atom(const Json& j, const SpacePtr& space) {
    const Json& values = field(j, "values", "values document");
    if (!values.is_object()) throw SchemaError("'values' must be an object keyed by atom id");
    std::vector<const Json*> out(space->size(), nullptr);
    for (auto it = values.begin(); it != values.end(); ++it) {
        const auto idx = space->find(it.key());
        if (!idx) throw SchemaError("unknown atom id '" + it.key() + "'");
        out[*idx] = &it.value();
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i] == nullptr) throw SchemaError("missing value for atom '" + space->id(i) + "'");
    return out;
}

void write(std::string& out, const Json& j, int indent, int depth) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            out += nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",";
                    out += nl;
                }
                first = false;
                out += pad;
                out += Json(it.key()).dump();
                out += indent > 0 ? ": " : ":";
                write(out, it.value(), indent, depth + 1);
            }
            out += nl;
            out += close_pad;
            out += "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            bool flat = true;
            for (const auto& e : j)
                if (e.is_structured()) flat = false;
            out += "[";
            if (!flat) out += nl;
            bool first = true;
            for (const auto& e : j) {
                if (!first) {
                    out += ",";
                    if (flat) {
                        if (indent > 0) out += " ";
                    } else {
                        out += nl;
                    }
                }
                first = false;
                if (!flat) out += pad;
                write(out, e, indent, depth + 1);
            }
            if (!flat) {
                out += nl;
                out += close_pad;
            }
            out += "]";
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? format_double(v) : "null";
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_json(ss.str());
    } catch (const SchemaError& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
}

SpacePtr space_from_json(const Json& j) {
    const Json& atoms = atoms_array(j);
    std::vector<FiniteProbSpace::Atom> out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const std::string where = "atoms[" + std::to_string(i) + "]";
        out.push_back({string(field(atoms[i], "id", where), where + ".id"),
                       number(field(atoms[i], "weight", where), where + ".weight")});
    }
    return FiniteProbSpace::create(std::move(out), kWeightSumTolerance);
}

SpecPtr spec_from_json(const Json& j) {
    SpacePtr space = space_from_json(j);
    const Json& atoms = atoms_array(j);
    std::vector<RnModuleSpec::Fiber> fibers;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const std::string where = "atoms[" + std::to_string(i) + "]";
        const Json& d = field(atoms[i], "dim", where);
        if (!d.is_number_integer() || d.get<long long>() < 0)
            throw SchemaError(where + ".dim: expected a non-negative integer");
        FiberNorm norm = FiberNorm::euclid();
        if (atoms[i].contains("norm")) norm = norm_from_json(atoms[i]["norm"], where + ".norm");
        fibers.push_back({static_cast<int>(d.get<long long>()), norm});
    }
    try {
        return RnModuleSpec::create(std::move(space), std::move(fibers));
    } catch (const PreconditionError& e) {
        throw SchemaError(e.what());
    }
}

L0Real l0real_from_json(const Json& j, const SpacePtr& space) {
    const auto by_atom = values_by_atom(j, space);
    std::vector<double> v(space->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = number(*by_atom[i], "values['" + space->id(i) + "']");
    return L0Real(space, std::move(v));
}

ModuleElement element_from_json(const Json& j, const SpecPtr& spec) {
    const auto by_atom = values_by_atom(j, spec->space());
    std::vector<Vec> fibers(spec->size());
    for (std::size_t i = 0; i < fibers.size(); ++i) {
        const std::string where = "values['" + spec->space()->id(i) + "']";
        const Json& a = *by_atom[i];
        if (!a.is_array()) throw SchemaError(where + ": expected an array");
        for (const auto& c : a) fibers[i].push_back(number(c, where));
    }
    return ModuleElement(spec, std::move(fibers));
}

RandomFunctional functional_from_json(const Json& j, const SpecPtr& spec) {
    return RandomFunctional(element_from_json(j, spec));
}

Json to_json(const FiniteProbSpace& space) {
    Json atoms = Json::array();
    for (const auto& a : space.atoms()) atoms.push_back(Json{{"id", a.id}, {"weight", a.weight}});
    return Json{{"atoms", atoms}};
}

Json to_json(const RnModuleSpec& spec) {
    Json atoms = Json::array();
    for (std::size_t i = 0; i < spec.size(); ++i) {
        Json norm = spec.norm(i).kind() == FiberNorm::Kind::Euclid ? Json{{"kind", "euclid"}}
                                                                   : Json{{"kind", "pnorm"}, {"p", spec.norm(i).p()}};
        atoms.push_back(Json{{"id", spec.space()->id(i)},
                             {"weight", spec.space()->weight(i)},
                             {"dim", spec.dim(i)},
                             {"norm", norm}});
    }
    return Json{{"atoms", atoms}};
}

Json to_json(const L0Real& x) {
    Json values = Json::object();
    for (std::size_t i = 0; i < x.size(); ++i) values[x.space()->id(i)] = x[i];
    return Json{{"values", values}};
}

Json to_json(const ModuleElement& x) {
    Json values = Json::object();
    for (std::size_t i = 0; i < x.size(); ++i) values[x.space()->id(i)] = x[i];
    return Json{{"values", values}};
}

Json to_json(const EventSet& e) { return Json(e.ids()); }

std::string dump(const Json& j, int indent) {
    std::string out;
    write(out, j, indent, 0);
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    // Keep the value recognizable as floating point.
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string modulus_csv(const std::vector<ModulusCsvRow>& rows) {
    std::string out = "atom_id,eps,variant,estimate\n";
    for (const auto& r : rows)
        out += r.atom_id + "," + format_double(r.eps) + "," + to_string(r.variant) + "," + format_double(r.estimate) + "\n";
    return out;
}

}  // namespace rnm::io
