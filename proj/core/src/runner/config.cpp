#include "nctorus/runner/config.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nctorus/error.hpp"
#include "nctorus/model_file.hpp"

namespace nctorus::runner {

using nlohmann::json;

std::string to_string(Task task) {
    switch (task) {
        case Task::polarization: return "polarization";
        case Task::delta_alpha: return "delta_alpha";
        case Task::chern2: return "chern2";
        case Task::z2: return "z2";
        case Task::identities: return "identities";
    }
    return "identities";
}

Task parse_task(const std::string& name) {
    for (Task t : {Task::polarization, Task::delta_alpha, Task::chern2, Task::z2, Task::identities}) {
        if (to_string(t) == name) return t;
    }
    throw ConfigError("unknown task '" + name + "'");
}

std::string to_string(ToleranceProfile profile) { return profile == ToleranceProfile::strict ? "strict" : "default"; }

ToleranceProfile parse_tolerance_profile(const std::string& name) {
    if (name == "default") return ToleranceProfile::standard;
    if (name == "strict") return ToleranceProfile::strict;
    throw ConfigError("unknown tolerance profile '" + name + "' (expected default or strict)");
}

Tolerances Tolerances::for_profile(ToleranceProfile profile) {
    Tolerances t;
    if (profile == ToleranceProfile::strict) {
        t.gap_floor = 1e-2;
        t.residue = 1e-12;
        t.exclusion_window = 1e-8;
        t.symmetry = 1e-12;
    }
    return t;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(where, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items()) {
        if (!ok.count(k)) fail(where, "unknown key '" + k + "'");
    }
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

long integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<long>();
}

std::string text(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

Parameters parameters(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object of parameter values");
    Parameters out;
    for (const auto& [k, v] : j.items()) out[k] = number(v, where + "." + k);
    return out;
}

std::array<double, 2> pair(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) fail(where, "expected two numbers");
    return {number(j[0], where), number(j[1], where)};
}

PathSegment segment(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("type")) fail(where, "segment needs a 'type'");
    const std::string type = text(j["type"], where + ".type");
    if (type == "linear") {
        only_keys(j, where, {"type", "from", "to"});
        if (!j.contains("from") || !j.contains("to")) fail(where, "linear segment needs 'from' and 'to'");
        return PathSegment::linear(parameters(j["from"], where + ".from"), parameters(j["to"], where + ".to"));
    }
    if (type == "constant") {
        only_keys(j, where, {"type", "at"});
        return PathSegment::constant(j.contains("at") ? parameters(j["at"], where + ".at") : Parameters{});
    }
    if (type == "arc") {
        only_keys(j, where, {"type", "base", "x", "y", "center", "radius", "degrees"});
        for (const char* k : {"x", "y", "center", "radius", "degrees"}) {
            if (!j.contains(k)) fail(where, std::string("arc segment needs '") + k + "'");
        }
        const auto c = pair(j["center"], where + ".center");
        const auto deg = pair(j["degrees"], where + ".degrees");
        const double radius = number(j["radius"], where + ".radius");
        if (!(radius > 0.0)) fail(where, "radius must be positive");
        constexpr double rad = std::numbers::pi / 180.0;
        return PathSegment::arc(j.contains("base") ? parameters(j["base"], where + ".base") : Parameters{},
                                text(j["x"], where + ".x"), text(j["y"], where + ".y"), c[0], c[1], radius,
                                deg[0] * rad, deg[1] * rad);
    }
    fail(where, "unknown segment type '" + type + "'");
}

json parameters_json(const Parameters& p) {
    json out = json::object();
    for (const auto& [k, v] : p) out[k] = v;
    return out;
}

json segment_json(const PathSegment& s) {
    switch (s.kind) {
        case PathSegment::Kind::linear:
            return {{"type", "linear"}, {"from", parameters_json(s.from)}, {"to", parameters_json(s.to)}};
        case PathSegment::Kind::constant:
            return {{"type", "constant"}, {"at", parameters_json(s.from)}};
        case PathSegment::Kind::arc:
            return {{"type", "arc"},
                    {"base", parameters_json(s.from)},
                    {"x", s.x_parameter},
                    {"y", s.y_parameter},
                    {"center", {s.center_x, s.center_y}},
                    {"radius", s.radius},
                    {"degrees", {s.angle_from * 180.0 / std::numbers::pi, s.angle_to * 180.0 / std::numbers::pi}}};
    }
    return {};
}

}  // namespace

RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    only_keys(j, "config",
              {"schema", "task", "model", "geometry", "flux", "fermi_level", "path", "sampling", "ensemble", "axis",
               "tolerance_profile", "tolerances", "oracle", "output", "workers"});
    if (!j.contains("schema") || text(j["schema"], "schema") != kConfigSchema)
        throw ConfigError(std::string("config must declare \"schema\": \"") + kConfigSchema + "\"");

    RunConfig c;
    if (!j.contains("task")) throw ConfigError("config: missing 'task'");
    c.task = parse_task(text(j["task"], "task"));

    if (!j.contains("model")) throw ConfigError("config: missing 'model'");
    const json& model = j["model"];
    only_keys(model, "model", {"family", "file", "parameters"});
    std::optional<ModelDefinition> definition;
    if (model.contains("family") == model.contains("file")) fail("model", "give exactly one of 'family' and 'file'");
    if (model.contains("family")) {
        c.model_family = text(model["family"], "model.family");
        try {
            (void)reference_model(c.model_family);
        } catch (const InvalidInputError& e) {
            fail("model.family", e.what());
        }
    } else {
        std::filesystem::path file = text(model["file"], "model.file");
        if (file.is_relative()) file = base_dir / file;
        c.model_file = file;
        definition = load_model(file);
        c.model_text = write_model(*definition);
    }
    if (model.contains("parameters")) c.model_parameters = parameters(model["parameters"], "model.parameters");
    if (definition && !c.model_parameters.empty()) fail("model.parameters", "a model file has no parameters");

    if (j.contains("geometry")) {
        only_keys(j["geometry"], "geometry", {"extents"});
        const json& e = j["geometry"].value("extents", json());
        if (!e.is_array() || e.size() != 3) fail("geometry.extents", "expected three integers");
        for (std::size_t k = 0; k < 3; ++k) c.extents[k] = static_cast<int>(integer(e[k], "geometry.extents"));
    } else if (definition && definition->extents) {
        c.extents = *definition->extents;
    } else {
        throw ConfigError("config: missing 'geometry'");
    }
    for (int e : c.extents) {
        if (e < 1) fail("geometry.extents", "extents must be positive");
    }

    if (j.contains("flux")) {
        const json& f = j["flux"];
        if (!f.is_array() || f.size() != 3) fail("flux", "expected three integer numerators");
        for (std::size_t k = 0; k < 3; ++k) c.flux_numerators[k] = integer(f[k], "flux");
    } else if (definition) {
        c.flux_numerators = definition->flux_numerators;
    }
    if (j.contains("fermi_level")) c.fermi_level = number(j["fermi_level"], "fermi_level");

    if (!j.contains("path")) {
        c.path.kind = PathDefinition::Kind::constant;
    } else {
        const json& p = j["path"];
        if (!p.is_object() || !p.contains("kind")) fail("path", "needs a 'kind'");
        const std::string kind = text(p["kind"], "path.kind");
        if (kind == "constant") {
            only_keys(p, "path", {"kind", "at"});
            c.path.kind = PathDefinition::Kind::constant;
            if (p.contains("at")) c.path.base = parameters(p["at"], "path.at");
        } else if (kind == "loop") {
            only_keys(p, "path", {"kind", "base", "x", "y", "center", "radius"});
            for (const char* k : {"x", "y", "center", "radius"}) {
                if (!p.contains(k)) fail("path", std::string("loop needs '") + k + "'");
            }
            c.path.kind = PathDefinition::Kind::loop;
            if (p.contains("base")) c.path.base = parameters(p["base"], "path.base");
            c.path.x_parameter = text(p["x"], "path.x");
            c.path.y_parameter = text(p["y"], "path.y");
            const auto center = pair(p["center"], "path.center");
            c.path.center_x = center[0];
            c.path.center_y = center[1];
            c.path.radius = number(p["radius"], "path.radius");
            if (!(c.path.radius > 0.0)) fail("path.radius", "must be positive");
        } else if (kind == "segments") {
            only_keys(p, "path", {"kind", "segments"});
            const json& list = p.value("segments", json());
            if (!list.is_array() || list.empty()) fail("path.segments", "expected a non-empty array");
            c.path.kind = PathDefinition::Kind::segments;
            for (std::size_t k = 0; k < list.size(); ++k)
                c.path.segments.push_back(segment(list[k], "path.segments[" + std::to_string(k) + "]"));
        } else {
            fail("path.kind", "unknown kind '" + kind + "'");
        }
    }

    if (j.contains("sampling")) {
        const json& s = j["sampling"];
        only_keys(s, "sampling", {"intervals", "quadrature", "derivative_order"});
        if (s.contains("intervals")) c.intervals = static_cast<int>(integer(s["intervals"], "sampling.intervals"));
        if (s.contains("quadrature")) {
            try {
                c.quadrature = parse_quadrature(text(s["quadrature"], "sampling.quadrature"));
            } catch (const InvalidInputError& e) {
                fail("sampling.quadrature", e.what());
            }
        }
        if (s.contains("derivative_order"))
            c.derivative_order = static_cast<int>(integer(s["derivative_order"], "sampling.derivative_order"));
    }
    if (c.intervals < 2) fail("sampling.intervals", "need at least 2");
    if (c.derivative_order != 2 && c.derivative_order != 4) fail("sampling.derivative_order", "must be 2 or 4");

    if (definition) {
        c.disorder_strength = definition->disorder.strength;
        c.master_seed = definition->disorder.master_seed;
    }
    if (j.contains("ensemble")) {
        const json& e = j["ensemble"];
        only_keys(e, "ensemble", {"realizations", "master_seed", "disorder_strength"});
        if (e.contains("realizations")) {
            const long n = integer(e["realizations"], "ensemble.realizations");
            if (n < 1) fail("ensemble.realizations", "must be positive");
            c.realizations = static_cast<std::size_t>(n);
        }
        if (e.contains("master_seed")) {
            if (!e["master_seed"].is_number_unsigned()) fail("ensemble.master_seed", "expected an unsigned integer");
            c.master_seed = e["master_seed"].get<std::uint64_t>();
        }
        if (e.contains("disorder_strength")) c.disorder_strength = number(e["disorder_strength"], "ensemble.disorder_strength");
    }
    if (c.disorder_strength < 0.0) fail("ensemble.disorder_strength", "must be non-negative");

    if (j.contains("axis")) {
        c.axis = static_cast<int>(integer(j["axis"], "axis"));
        if (c.axis < 1 || c.axis > 3) fail("axis", "must be 1, 2 or 3");
    }
    if (j.contains("tolerance_profile")) c.profile = parse_tolerance_profile(text(j["tolerance_profile"], "tolerance_profile"));
    c.tolerances = Tolerances::for_profile(c.profile);
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        only_keys(t, "tolerances", {"gap_floor", "residue", "exclusion_window", "symmetry"});
        if (t.contains("gap_floor")) c.tolerances.gap_floor = number(t["gap_floor"], "tolerances.gap_floor");
        if (t.contains("residue")) c.tolerances.residue = number(t["residue"], "tolerances.residue");
        if (t.contains("exclusion_window"))
            c.tolerances.exclusion_window = number(t["exclusion_window"], "tolerances.exclusion_window");
        if (t.contains("symmetry")) c.tolerances.symmetry = number(t["symmetry"], "tolerances.symmetry");
    }
    if (j.contains("oracle")) {
        const json& o = j["oracle"];
        only_keys(o, "oracle", {"enabled", "grid_k", "grid_t"});
        if (o.contains("enabled")) {
            if (!o["enabled"].is_boolean()) fail("oracle.enabled", "expected true or false");
            c.oracle.enabled = o["enabled"].get<bool>();
        }
        if (o.contains("grid_k")) c.oracle.grid_k = static_cast<int>(integer(o["grid_k"], "oracle.grid_k"));
        if (o.contains("grid_t")) c.oracle.grid_t = static_cast<int>(integer(o["grid_t"], "oracle.grid_t"));
        if (c.oracle.grid_k < 2 || c.oracle.grid_t < 2) fail("oracle", "grids need at least 2 points");
    }
    if (j.contains("output")) c.output = text(j["output"], "output");
    if (j.contains("workers")) {
        c.workers = static_cast<int>(integer(j["workers"], "workers"));
        if (c.workers < 1) fail("workers", "must be positive");
    }

    // Semantic checks that need the family.
    const auto family = resolve_family(c);
    const long dimension = static_cast<long>(c.extents[0]) * c.extents[1] * c.extents[2] * family->orbitals;
    if (dimension > kMaxDimension)
        throw ConfigError("dense dimension " + std::to_string(dimension) + " exceeds the limit of " +
                          std::to_string(kMaxDimension));
    const AdiabaticPath path = build_path(c, family);
    const bool closed = path.closed();
    if (c.task == Task::chern2 && !closed) throw ConfigError("task chern2 needs a closed path");
    if ((c.task == Task::delta_alpha || c.task == Task::z2) && closed && c.path.kind != PathDefinition::Kind::constant)
        throw ConfigError("task " + to_string(c.task) + " needs an open path");
    const TorusGeometry geometry = build_geometry(c, family->orbitals);
    const FluxTensor flux = FluxTensor::from_numerators(geometry, c.flux_numerators);
    if (auto violation = flux.admissibility_violation(geometry)) throw ConfigError("flux: " + *violation);
    if (c.task == Task::z2 && !flux.is_zero()) throw ConfigError("task z2 is defined at zero flux only");
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

std::shared_ptr<const ModelFamily> resolve_family(const RunConfig& c) {
    if (!c.model_text.empty()) {
        const ModelDefinition m = parse_model(c.model_text);
        return std::make_shared<const ModelFamily>(constant_family(m.name, m.hoppings, m.symmetry));
    }
    ModelFamily family = reference_model(c.model_family);
    for (const auto& [k, v] : c.model_parameters) {
        if (!family.defaults.count(k)) throw ConfigError("model.parameters: family '" + family.name + "' has no parameter '" + k + "'");
        family.defaults[k] = v;
    }
    return std::make_shared<const ModelFamily>(std::move(family));
}

AdiabaticPath build_path(const RunConfig& c, std::shared_ptr<const ModelFamily> family) {
    try {
        switch (c.path.kind) {
            case PathDefinition::Kind::constant:
                return AdiabaticPath(family, {PathSegment::constant(c.path.base)});
            case PathDefinition::Kind::loop:
                return AdiabaticPath::loop(family, c.path.base, c.path.x_parameter, c.path.y_parameter, c.path.center_x,
                                           c.path.center_y, c.path.radius);
            case PathDefinition::Kind::segments:
                return AdiabaticPath(family, c.path.segments);
        }
    } catch (const InvalidInputError& e) {
        throw ConfigError(std::string("path: ") + e.what());
    }
    throw ConfigError("path: unsupported kind");
}

TorusGeometry build_geometry(const RunConfig& c, int orbitals) { return TorusGeometry(c.extents, orbitals); }

std::string RunConfig::canonical() const {
    json model = json::object();
    if (!model_text.empty()) {
        model["definition"] = model_text;
    } else {
        model["family"] = model_family;
        model["parameters"] = parameters_json(model_parameters);
    }
    json path_json = json::object();
    switch (path.kind) {
        case PathDefinition::Kind::constant:
            path_json = {{"kind", "constant"}, {"at", parameters_json(path.base)}};
            break;
        case PathDefinition::Kind::loop:
            path_json = {{"kind", "loop"},
                         {"base", parameters_json(path.base)},
                         {"x", path.x_parameter},
                         {"y", path.y_parameter},
                         {"center", {path.center_x, path.center_y}},
                         {"radius", path.radius}};
            break;
        case PathDefinition::Kind::segments: {
            json list = json::array();
            for (const PathSegment& s : path.segments) list.push_back(segment_json(s));
            path_json = {{"kind", "segments"}, {"segments", list}};
            break;
        }
    }
    const json out = {
        {"schema", kConfigSchema},
        {"task", to_string(task)},
        {"model", model},
        {"geometry", {{"extents", extents}}},
        {"flux", flux_numerators},
        {"fermi_level", fermi_level},
        {"path", path_json},
        {"sampling", {{"intervals", intervals}, {"quadrature", to_string(quadrature)}, {"derivative_order", derivative_order}}},
        {"ensemble", {{"realizations", realizations}, {"master_seed", master_seed}, {"disorder_strength", disorder_strength}}},
        {"axis", axis},
        {"tolerances",
         {{"gap_floor", tolerances.gap_floor},
          {"residue", tolerances.residue},
          {"exclusion_window", tolerances.exclusion_window},
          {"symmetry", tolerances.symmetry}}},
        {"oracle", {{"enabled", oracle.enabled}, {"grid_k", oracle.grid_k}, {"grid_t", oracle.grid_t}}},
    };
    return out.dump();
}

std::string RunConfig::hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical())));
    return buf;
}

std::vector<std::string> RunConfig::warnings() const {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < 3; ++k) {
        if (extents[k] % 2 == 0) {
            out.push_back("extent " + std::to_string(extents[k]) + " along axis " + std::to_string(k + 1) +
                          " is even: trace and partial-integration identities hold only approximately");
            break;
        }
    }
    return out;
}

}  // namespace nctorus::runner
