#include "dislab/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dislab/errors.hpp"

namespace dislab {

namespace {

using json = nlohmann::ordered_json;

const json& require(const json& j, const std::string& key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError("missing field '" + where + key + "'");
    return *it;
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_number()) throw ConfigError("field '" + where + key + "' must be a number");
    return v.get<double>();
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be an object");

    RunConfig cfg;
    if (doc.contains("system_id")) cfg.system_id = doc["system_id"].get<std::string>();

    const json& mat = require(doc, "material", "");
    cfg.material = Material(require_number(mat, "mu", "material."),
                            require_number(mat, "lambda", "material."));

    const json& geo = require(doc, "geometry", "");
    std::string gtype = require(geo, "type", "geometry.").get<std::string>();
    if (gtype == "disk") {
        cfg.geometry = DomainGeometry::unit_disk();
    } else if (gtype == "polygon") {
        const json& verts = require(geo, "vertices", "geometry.");
        if (!verts.is_array() || verts.size() < 3)
            throw ConfigError("field 'geometry.vertices' must list at least 3 [x, y] pairs");
        std::vector<Vec2> v;
        for (const auto& p : verts) {
            if (!p.is_array() || p.size() != 2)
                throw ConfigError("each entry of 'geometry.vertices' must be an [x, y] pair");
            v.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        try {
            cfg.geometry = DomainGeometry::polygon(std::move(v));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("field 'geometry.vertices': ") + e.what());
        }
    } else {
        throw ConfigError("field 'geometry.type' must be \"disk\" or \"polygon\"");
    }

    const json& dl = require(doc, "dislocations", "");
    if (!dl.is_array()) throw ConfigError("field 'dislocations' must be an array");
    std::vector<Dislocation> ds;
    for (size_t i = 0; i < dl.size(); ++i) {
        std::string where = "dislocations[" + std::to_string(i) + "].";
        double x = require_number(dl[i], "x", where);
        double y = require_number(dl[i], "y", where);
        double b = require_number(dl[i], "b", where);
        if (b == 0.0) throw ConfigError("field '" + where + "b' must be nonzero");
        ds.emplace_back(Vec2{x, y}, b);
    }
    double eps0 = require_number(doc, "epsilon0", "");
    if (!(eps0 > 0.0)) throw ConfigError("field 'epsilon0' must be > 0");
    cfg.system = DislocationSystem(std::move(ds), eps0);

    if (doc.contains("backend")) {
        const json& be = doc["backend"];
        std::string btype = require(be, "type", "backend.").get<std::string>();
        if (btype == "analytic") cfg.backend = RunConfig::Backend::Analytic;
        else if (btype == "fem") cfg.backend = RunConfig::Backend::Fem;
        else throw ConfigError("field 'backend.type' must be \"analytic\" or \"fem\"");
        if (be.contains("resolution")) {
            cfg.resolution = be["resolution"].get<double>();
            if (!(cfg.resolution > 0.0)) throw ConfigError("field 'backend.resolution' must be > 0");
        }
    } else {
        cfg.backend = (cfg.geometry.is_unit_disk() && cfg.material.lambda == 1.0)
                          ? RunConfig::Backend::Analytic
                          : RunConfig::Backend::Fem;
    }
    if (cfg.backend == RunConfig::Backend::Analytic &&
        (!cfg.geometry.is_unit_disk() || cfg.material.lambda != 1.0))
        throw ConfigError(
            "backend 'analytic' requires the unit disk geometry and lambda = 1; use 'fem'");

    if (doc.contains("threads")) {
        cfg.threads = doc["threads"].get<int>();
        if (cfg.threads < 1) throw ConfigError("field 'threads' must be >= 1");
    }
    if (doc.contains("output") && doc["output"].contains("dir"))
        cfg.output_dir = doc["output"]["dir"].get<std::string>();

    if (doc.contains("energy")) {
        const json& en = doc["energy"];
        if (en.contains("R")) cfg.energy_R = en["R"].get<double>();
        if (en.contains("epsilons"))
            for (const auto& e : en["epsilons"]) cfg.epsilon_ladder.push_back(e.get<double>());
    }
    if (doc.contains("forces")) {
        const json& fo = doc["forces"];
        if (fo.contains("R")) cfg.force_R = fo["R"].get<double>();
        if (fo.contains("discrepancy_tol"))
            cfg.discrepancy_tol = fo["discrepancy_tol"].get<double>();
    }
    if (doc.contains("flow")) {
        const json& fl = doc["flow"];
        if (fl.contains("dt")) cfg.dt = fl["dt"].get<double>();
        if (!(cfg.dt > 0.0)) throw ConfigError("field 'flow.dt' must be > 0");
        if (fl.contains("max_steps")) cfg.max_steps = fl["max_steps"].get<int>();
        if (cfg.max_steps < 0) throw ConfigError("field 'flow.max_steps' must be >= 0");
        if (fl.contains("force_threshold"))
            cfg.force_threshold = fl["force_threshold"].get<double>();
        if (fl.contains("mobility")) {
            if (fl["mobility"].is_number()) {
                cfg.mobility = {fl["mobility"].get<double>()};
            } else {
                for (const auto& m : fl["mobility"]) cfg.mobility.push_back(m.get<double>());
                if (!cfg.mobility.empty() && cfg.mobility.size() != cfg.system.size())
                    throw ConfigError("field 'flow.mobility' must be a scalar or one value per "
                                      "dislocation");
            }
        }
    }
    if (doc.contains("verify") && doc["verify"].contains("suites"))
        for (const auto& s : doc["verify"]["suites"])
            cfg.suites.push_back(s.get<std::string>());

    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string dump_config(const RunConfig& cfg) {
    json doc;
    doc["system_id"] = cfg.system_id;
    doc["material"] = {{"mu", cfg.material.mu}, {"lambda", cfg.material.lambda}};
    if (cfg.geometry.is_unit_disk()) {
        doc["geometry"] = {{"type", "disk"}};
    } else {
        json verts = json::array();
        for (Vec2 v : cfg.geometry.vertices()) verts.push_back({v.x, v.y});
        doc["geometry"] = {{"type", "polygon"}, {"vertices", verts}};
    }
    json dl = json::array();
    for (const auto& d : cfg.system.dislocations)
        dl.push_back({{"x", d.position.x}, {"y", d.position.y}, {"b", d.burgers}});
    doc["dislocations"] = dl;
    doc["epsilon0"] = cfg.system.epsilon0;
    doc["backend"] = {
        {"type", cfg.backend == RunConfig::Backend::Analytic ? "analytic" : "fem"},
        {"resolution", cfg.resolution}};
    doc["threads"] = cfg.threads;
    doc["output"] = {{"dir", cfg.output_dir}};
    doc["energy"] = {{"R", cfg.energy_R}, {"epsilons", cfg.epsilon_ladder}};
    doc["forces"] = {{"R", cfg.force_R}, {"discrepancy_tol", cfg.discrepancy_tol}};
    doc["flow"] = {{"dt", cfg.dt},
                   {"max_steps", cfg.max_steps},
                   {"mobility", cfg.mobility},
                   {"force_threshold", cfg.force_threshold}};
    doc["verify"] = {{"suites", cfg.suites}};
    return doc.dump(2) + "\n";
}

}  // namespace dislab
