#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "averaging.hpp"
#include "covering.hpp"
#include "maharam.hpp"
#include "weights.hpp"

namespace ergrel {

using Json = nlohmann::ordered_json;  // deterministic field ordering in reports

// ---------------------------------------------------------------------------
// relation / action specs
// {atoms:[id...], weights:{id: "p/q"}, generators:{label:{dom:img,...}}}
// ---------------------------------------------------------------------------

inline Json relation_spec_to_json(const Relation<Rat>& rel) {
    Json j;
    j["atoms"] = rel.space.ids;
    Json w = Json::object();
    for (int i = 0; i < rel.space.size(); ++i)
        w[rel.space.ids[std::size_t(i)]] = rational_str(rel.space.weight[std::size_t(i)]);
    j["weights"] = std::move(w);
    Json gens = Json::object();
    for (const auto& g : rel.generators) {
        Json m = Json::object();
        for (int x = 0; x < g.size(); ++x)
            if (g.defined_at(x)) m[rel.space.ids[std::size_t(x)]] = rel.space.ids[std::size_t(g(x))];
        gens[g.label] = std::move(m);
    }
    j["generators"] = std::move(gens);
    return j;
}

inline Relation<Rat> relation_from_json(const Json& j) {
    std::vector<std::string> ids = j.at("atoms").get<std::vector<std::string>>();
    std::vector<Rat> w;
    for (const auto& id : ids) w.push_back(parse_rational(j.at("weights").at(id).get<std::string>()));
    PointSpace<Rat> space(ids, w);
    std::vector<PartialBijection> gens;
    for (const auto& [label, mapping] : j.at("generators").items()) {
        std::vector<int> img(ids.size(), -1);
        for (const auto& [from, to] : mapping.items())
            img[std::size_t(space.index_of(from))] = space.index_of(to.get<std::string>());
        gens.emplace_back(label, std::move(img));
    }
    return build_relation(std::move(space), std::move(gens));
}

inline Json action_to_json(const MeasureClassAction& action) {
    Json j;
    j["atoms"] = action.B.ids;
    Json w = Json::object();
    for (int i = 0; i < action.B.size(); ++i)
        w[action.B.ids[std::size_t(i)]] = rational_str(action.B.weight[std::size_t(i)]);
    j["weights"] = std::move(w);
    j["lambda"] = rational_str(action.lambda);
    Json gens = Json::object();
    for (const auto& g : action.generators) {
        Json m = Json::object();
        for (int x = 0; x < g.size(); ++x)
            if (g.defined_at(x)) m[action.B.ids[std::size_t(x)]] = action.B.ids[std::size_t(g(x))];
        gens[g.label] = std::move(m);
    }
    j["generators"] = std::move(gens);
    return j;
}

inline MeasureClassAction action_from_json(const Json& j) {
    MeasureClassAction act;
    std::vector<std::string> ids = j.at("atoms").get<std::vector<std::string>>();
    std::vector<Rat> w;
    for (const auto& id : ids) w.push_back(parse_rational(j.at("weights").at(id).get<std::string>()));
    act.B = PointSpace<Rat>(ids, w);
    act.lambda = parse_rational(j.at("lambda").get<std::string>());
    for (const auto& [label, mapping] : j.at("generators").items()) {
        std::vector<int> img(ids.size(), -1);
        for (const auto& [from, to] : mapping.items())
            img[std::size_t(act.B.index_of(from))] = act.B.index_of(to.get<std::string>());
        act.generators.emplace_back(label, std::move(img));
    }
    act.validate();
    return act;
}

inline Json group_action_to_json(const GroupAction<Rat>& act) {
    Json j;
    j["atoms"] = act.space.ids;
    Json w = Json::object();
    for (int i = 0; i < act.space.size(); ++i)
        w[act.space.ids[std::size_t(i)]] = rational_str(act.space.weight[std::size_t(i)]);
    j["weights"] = std::move(w);
    Json gens = Json::object();
    for (const auto& g : act.perms) {
        Json m = Json::object();
        for (int x = 0; x < g.size(); ++x) m[act.space.ids[std::size_t(x)]] = act.space.ids[std::size_t(g(x))];
        gens[g.label] = std::move(m);
    }
    j["generators"] = std::move(gens);
    return j;
}

inline GroupAction<Rat> group_action_from_json(const Json& j) {
    GroupAction<Rat> act;
    std::vector<std::string> ids = j.at("atoms").get<std::vector<std::string>>();
    std::vector<Rat> w;
    for (const auto& id : ids) w.push_back(parse_rational(j.at("weights").at(id).get<std::string>()));
    act.space = PointSpace<Rat>(ids, w);
    for (const auto& [label, mapping] : j.at("generators").items()) {
        std::vector<int> img(ids.size(), -1);
        for (const auto& [from, to] : mapping.items())
            img[std::size_t(act.space.index_of(from))] = act.space.index_of(to.get<std::string>());
        act.perms.emplace_back(label, std::move(img));
    }
    act.validate();
    return act;
}

// ---------------------------------------------------------------------------
// families: {r: {atom: [atoms...]}}
// ---------------------------------------------------------------------------

inline Json family_to_json(const SubsetFamily<Rat>& F) {
    Json j = Json::object();
    const auto& ids = F.rel->space.ids;
    for (int r = 1; r <= F.index_max(); ++r) {
        Json level = Json::object();
        for (int x = 0; x < F.rel->size(); ++x) {
            Json set = Json::array();
            for (int y : F.at(r, x)) set.push_back(ids[std::size_t(y)]);
            level[ids[std::size_t(x)]] = std::move(set);
        }
        j[std::to_string(r)] = std::move(level);
    }
    return j;
}

inline SubsetFamily<Rat> family_from_json(const Json& j, const Relation<Rat>& rel) {
    std::vector<SubsetFunction<Rat>> levels;
    for (int r = 1; j.contains(std::to_string(r)); ++r) {
        std::vector<std::vector<int>> sets(std::size_t(rel.size()));
        for (const auto& [atom, arr] : j.at(std::to_string(r)).items()) {
            std::vector<int>& s = sets[std::size_t(rel.space.index_of(atom))];
            for (const auto& y : arr) s.push_back(rel.space.index_of(y.get<std::string>()));
        }
        levels.emplace_back(rel, std::move(sets));
    }
    return SubsetFamily<Rat>(rel, std::move(levels));
}

// ---------------------------------------------------------------------------
// constants, maximal reports, convergence reports
// ---------------------------------------------------------------------------

inline Json constants_to_json(const FamilyConstants<Rat>& c) {
    Json j;
    j["uniform_defined"] = c.uniform_ok;
    j["C_u"] = c.uniform_ok ? rational_str(c.C_u) : "infinite";
    Json a = Json::array(), b = Json::array();
    for (long v : c.a) a.push_back(v);
    for (long v : c.b) b.push_back(v);
    j["a"] = std::move(a);
    j["b"] = std::move(b);
    j["C_reg"] = rational_str(c.C_reg);
    j["C_t"] = rational_str(c.C_t);
    j["C_d"] = rational_str(c.C_d);
    j["monotone"] = c.monotone;
    return j;
}

inline Json maximal_report_to_json(const MaximalReport<Rat>& rep) {
    Json j;
    j["constant"] = rational_str(rep.constant_used);
    j["f_l1"] = rational_str(rep.f_l1);
    j["ok"] = rep.ok;
    auto rows = [](const std::vector<MaximalRow<Rat>>& rs) {
        Json arr = Json::array();
        for (const auto& r : rs) {
            Json row;
            row["lambda"] = rational_str(r.lambda);
            row["exceed_mass"] = rational_str(r.exceed_mass);
            row["bound"] = rational_str(r.bound);
            row["ok"] = r.ok;
            arr.push_back(std::move(row));
        }
        return arr;
    };
    j["grid"] = rows(rep.grid);
    j["exact"] = rows(rep.exact_rows);
    return j;
}

inline std::string maximal_report_csv(const MaximalReport<Rat>& rep) {
    std::ostringstream out;
    out << "lambda,exceed_mass,bound\n";
    for (const auto& r : rep.grid)
        out << scalar_traits<Rat>::to_double(r.lambda) << ","
            << scalar_traits<Rat>::to_double(r.exceed_mass) << ","
            << scalar_traits<Rat>::to_double(r.bound) << "\n";
    return out.str();
}

inline std::string averages_csv(const MeasurableFunction<Rat>& f, const SubsetFamily<Rat>& F) {
    std::ostringstream out;
    out << "r,atom,average\n";
    for (int r = 1; r <= F.index_max(); ++r) {
        auto a = average(f, F, r);
        for (int x = 0; x < F.rel->size(); ++x)
            out << r << "," << F.rel->space.ids[std::size_t(x)] << ","
                << scalar_traits<Rat>::to_double(a[x]) << "\n";
    }
    return out.str();
}

inline Json convergence_to_json(const ConvergenceReport& rep) {
    Json j;
    j["ergodic_mean"] = rep.ergodic_mean;
    j["x_ergodic"] = rep.x_ergodic;
    j["flags"] = rep.flags;
    auto rows = [](const std::vector<ConvergenceRow>& rs) {
        Json arr = Json::array();
        for (const auto& r : rs) {
            Json row;
            row["r"] = r.r;
            row["max_dev"] = r.max_dev;
            row["mean_dev"] = r.mean_dev;
            arr.push_back(std::move(row));
        }
        return arr;
    };
    j["rows"] = rows(rep.rows);
    j["random_rows"] = rows(rep.random_rows);
    return j;
}

inline ConvergenceReport convergence_from_json(const Json& j) {
    ConvergenceReport rep;
    rep.ergodic_mean = j.at("ergodic_mean").get<double>();
    rep.x_ergodic = j.at("x_ergodic").get<bool>();
    rep.flags = j.at("flags").get<std::vector<std::string>>();
    auto rows = [](const Json& arr) {
        std::vector<ConvergenceRow> rs;
        for (const auto& row : arr)
            rs.push_back({row.at("r").get<int>(), row.at("max_dev").get<double>(),
                          row.at("mean_dev").get<double>()});
        return rs;
    };
    rep.rows = rows(j.at("rows"));
    rep.random_rows = rows(j.at("random_rows"));
    return rep;
}

/// CSV emission, bit-stable ordering: header then one row per grid index.
inline std::string convergence_csv(const ConvergenceReport& rep) {
    std::ostringstream out;
    out << "r,max_dev,mean_dev\n";
    for (const auto& row : rep.rows)
        out << row.r << "," << row.max_dev << "," << row.mean_dev << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// covering instances and certificates
// ---------------------------------------------------------------------------

inline Json block_selection_to_json(const BlockSelectionInstance<Rat>& inst) {
    Json j;
    j["omega_size"] = inst.omega_size;
    j["I_blocks"] = inst.I_blocks;
    Json v = Json::array();
    for (const auto& vi : inst.V) v.push_back(vi);
    j["V"] = std::move(v);
    Json kappa = Json::array();
    for (const auto& k : inst.kappa) kappa.push_back(rational_str(k));
    j["kappa"] = std::move(kappa);
    j["C_u"] = rational_str(inst.C_u);
    j["C_t"] = rational_str(inst.C_t);
    j["lambda"] = rational_str(inst.lambda);
    return j;
}

inline BlockSelectionInstance<Rat> block_selection_from_json(const Json& j) {
    BlockSelectionInstance<Rat> inst;
    inst.omega_size = j.at("omega_size").get<int>();
    inst.I_blocks = j.at("I_blocks").get<std::vector<std::vector<int>>>();
    inst.V = j.at("V").get<std::vector<std::vector<std::vector<int>>>>();
    for (const auto& k : j.at("kappa")) inst.kappa.push_back(parse_rational(k.get<std::string>()));
    inst.C_u = parse_rational(j.at("C_u").get<std::string>());
    inst.C_t = parse_rational(j.at("C_t").get<std::string>());
    inst.lambda = parse_rational(j.at("lambda").get<std::string>());
    return inst;
}

inline Json block_selection_result_to_json(const BlockSelectionResult<Rat>& res) {
    Json j;
    j["L"] = res.L;
    j["K"] = res.K;
    j["D"] = res.D;
    j["H_mass"] = rational_str(res.H_mass);
    j["total_block_size"] = res.total_block_size;
    j["certificate_bound"] = rational_str(res.certificate_bound);
    return j;
}

inline Json vitali_result_to_json(const VitaliResult<Rat>& res, const Relation<Rat>& rel) {
    Json j;
    Json chosen = Json::array();
    for (int z : res.chosen) chosen.push_back(rel.space.ids[std::size_t(z)]);
    j["chosen"] = std::move(chosen);
    j["mu_Y"] = rational_str(res.mu_Y);
    j["mu_covered"] = rational_str(res.mu_covered);
    j["C_reg"] = rational_str(res.C_reg);
    return j;
}

// ---------------------------------------------------------------------------
// file helpers
// ---------------------------------------------------------------------------

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    require(bool(out), "cannot open " + path + " for writing");
    out << content;
    require(bool(out), "write to " + path + " failed");
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    require(bool(in), "cannot open " + path);
    return Json::parse(in);
}

inline void write_json_file(const std::string& path, const Json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

/// emit_report: CSV or JSON, bit-stable ordering.
inline void emit_report(const ConvergenceReport& rep, const std::string& format,
                        const std::string& path) {
    if (format == "csv")
        write_text_file(path, convergence_csv(rep));
    else if (format == "json")
        write_json_file(path, convergence_to_json(rep));
    else
        throw std::invalid_argument("emit_report: unknown format " + format);
}

}  // namespace ergrel
