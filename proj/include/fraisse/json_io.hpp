#pragma once

#include <nlohmann/json.hpp>

#include <string>

#include "fraisse/circle.hpp"
#include "fraisse/hypertournament.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

using Json = nlohmann::ordered_json;

inline Json signature_to_json(const Signature& sig) {
    Json rels = Json::array();
    for (const auto& r : sig.relations()) rels.push_back({{"name", r.name}, {"arity", r.arity}});
    Json funs = Json::array();
    for (const auto& f : sig.functions()) funs.push_back({{"name", f.name}});
    return Json{{"relations", rels}, {"functions", funs}};
}

inline Signature signature_from_json(const Json& j) {
    std::vector<RelationSymbol> rels;
    std::vector<FunctionSymbol> funs;
    if (!j.contains("relations") || !j["relations"].is_array())
        throw StructureError("signature: missing relations array");
    for (const auto& r : j["relations"]) {
        if (!r.contains("name") || !r.contains("arity") || !r["arity"].is_number_integer())
            throw StructureError("signature: malformed relation entry");
        int arity = r["arity"].get<int>();
        if (arity < 1) throw StructureError("signature: arity must be >= 1");
        rels.push_back({r["name"].get<std::string>(), arity});
    }
    if (j.contains("functions"))
        for (const auto& f : j["functions"]) funs.push_back({f["name"].get<std::string>()});
    return Signature(rels, funs);
}

/// Structure encoding: {"kind":"structure","signature":{...},"universe":[...],
/// "relations":{name:[[ids]]},"functions":{name:{"id":id}}}.
inline Json structure_to_json(const FiniteStructure& s) {
    Json j;
    j["kind"] = "structure";
    j["signature"] = signature_to_json(s.signature());
    j["universe"] = s.universe();
    Json rels = Json::object();
    for (std::size_t r = 0; r < s.signature().relations().size(); ++r) {
        Json tuples = Json::array();
        for (const auto& t : s.tuples(static_cast<int>(r))) tuples.push_back(t);
        rels[s.signature().relations()[r].name] = tuples;
    }
    j["relations"] = rels;
    Json funs = Json::object();
    for (std::size_t f = 0; f < s.signature().functions().size(); ++f) {
        Json m = Json::object();
        for (ElemId v : s.universe())
            m[std::to_string(v)] = s.function_value(static_cast<int>(f), v);
        funs[s.signature().functions()[f].name] = m;
    }
    j["functions"] = funs;
    return j;
}

inline FiniteStructure structure_from_json(const Json& j) {
    if (j.contains("kind") && j["kind"] != "structure")
        throw StructureError("expected kind=structure");
    if (!j.contains("signature") || !j.contains("universe"))
        throw StructureError("structure: missing signature or universe");
    FiniteStructure s(signature_from_json(j["signature"]));
    for (const auto& v : j["universe"]) s.add_element(v.get<ElemId>());
    if (j.contains("relations"))
        for (auto it = j["relations"].begin(); it != j["relations"].end(); ++it) {
            int r = s.signature().relation_index(it.key());
            for (const auto& t : it.value()) {
                Tuple tup;
                for (const auto& v : t) tup.push_back(v.get<ElemId>());
                s.add_tuple(r, tup);
            }
        }
    if (j.contains("functions"))
        for (auto it = j["functions"].begin(); it != j["functions"].end(); ++it) {
            int f = s.signature().function_index(it.key());
            for (auto e = it.value().begin(); e != it.value().end(); ++e)
                s.set_function(f, static_cast<ElemId>(std::stoul(e.key())), e.value().get<ElemId>());
        }
    s.check_functions_total();
    return s;
}

inline Json circle_point_to_json(const CirclePoint& p) {
    return Json{{"q", rational_to_string(p.q)}, {"k", p.k}, {"n", p.n}};
}

inline CirclePoint circle_point_from_json(const Json& j) {
    if (!j.contains("q") || !j.contains("k") || !j.contains("n"))
        throw StructureError("circle point: missing q, k or n");
    return CirclePoint(rational_from_string(j["q"].get<std::string>()), j["k"].get<int>(),
                       j["n"].get<int>());
}

/// Configuration encoding: {"kind":"circle-config","n":n,"points":[...]}.
inline Json circle_config_to_json(const LocalOrderConfig& c) {
    Json pts = Json::array();
    for (const auto& p : c.points) pts.push_back(circle_point_to_json(p));
    return Json{{"kind", "circle-config"}, {"n", c.n}, {"points", pts}};
}

inline LocalOrderConfig circle_config_from_json(const Json& j) {
    if (j.contains("kind") && j["kind"] != "circle-config")
        throw StructureError("expected kind=circle-config");
    std::vector<CirclePoint> pts;
    for (const auto& p : j["points"]) pts.push_back(circle_point_from_json(p));
    return LocalOrderConfig(j["n"].get<int>(), std::move(pts));
}

/// Sign map encoding: {"kind":"signmap","arity":n,"values":[{"tuple":[...],"sign":1}]}.
inline Json signmap_to_json(const SignMap& sm) {
    Json vals = Json::array();
    for (const auto& [rep, sign] : sm.representatives())
        vals.push_back(Json{{"tuple", rep}, {"sign", sign}});
    return Json{{"kind", "signmap"}, {"arity", sm.arity()}, {"values", vals}};
}

}  // namespace fraisse
