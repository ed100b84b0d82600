#pragma once

#include "drx/strata.hpp"

#include <json.hpp>

#include <string>

namespace drx {

using json = nlohmann::json;

inline json target_to_json(const TargetModel& t) {
    json j;
    switch (t.kind()) {
        case TargetKind::Point:
            j["kind"] = "point";
            break;
        case TargetKind::FreeMonoid:
            j["kind"] = "free";
            j["rank"] = t.rank();
            j["c1S"] = t.c1S();
            break;
        case TargetKind::RootLatticeAell:
            j["kind"] = "a_ell";
            j["ell"] = t.rank();
            j["alpha"] = t.alpha();
            j["c1S"] = t.c1S();
            break;
    }
    return j;
}

inline TargetModel target_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "point") return TargetModel::point();
    if (kind == "free")
        return TargetModel::free_monoid(j.at("rank").get<unsigned>(),
                                        j.at("c1S").get<std::vector<long long>>());
    if (kind == "a_ell")
        return TargetModel::a_ell(j.at("ell").get<unsigned>(),
                                  j.at("alpha").get<std::vector<long long>>(),
                                  j.at("c1S").get<std::vector<long long>>());
    throw std::invalid_argument("unknown target kind: " + kind);
}

inline json graph_to_json(const StableGraph& g) {
    json j;
    j["vertices"] = json::array();
    for (const auto& v : g.vertices) j["vertices"].push_back({{"g", v.genus}, {"beta", v.charge}});
    j["legs"] = json::array();
    for (const auto& l : g.legs)
        j["legs"].push_back({{"marking", l.marking}, {"vertex", l.vertex}});
    j["edges"] = json::array();
    for (const auto& e : g.edges)
        j["edges"].push_back(json::array({json::array({e.first.vertex, e.first.slot}),
                                          json::array({e.second.vertex, e.second.slot})}));
    return j;
}

inline StableGraph graph_from_json(const json& j) {
    StableGraph g;
    for (const auto& v : j.at("vertices"))
        g.vertices.push_back(
            {v.at("g").get<int>(), v.at("beta").get<std::vector<long long>>()});
    for (const auto& l : j.at("legs"))
        g.legs.push_back({l.at("marking").get<int>(), l.at("vertex").get<int>()});
    for (const auto& e : j.at("edges"))
        g.edges.push_back({{e.at(0).at(0).get<int>(), e.at(0).at(1).get<int>()},
                           {e.at(1).at(0).get<int>(), e.at(1).at(1).get<int>()}});
    return g;
}

// Half-edge psi exponents serialize flat in edge order: first then second.
inline json decor_to_json(const Decoration& d) {
    json j;
    j["legs"] = json::array();
    for (const auto& l : d.legs) j["legs"].push_back({{"psi", l.psi}, {"xi", l.xi}});
    j["halfedges"] = json::array();
    for (const auto& h : d.hpsi) {
        j["halfedges"].push_back(h[0]);
        j["halfedges"].push_back(h[1]);
    }
    j["edges"] = d.exi;
    j["vertices"] = json::array();
    for (const auto& v : d.eta) {
        json vm = json::array();
        for (const auto& f : v) vm.push_back(json::array({f.a, f.b, f.exp}));
        j["vertices"].push_back(vm);
    }
    if (!d.tw.empty()) {
        j["tw"] = json::array();
        for (const auto& t : d.tw) {
            j["tw"].push_back(t[0]);
            j["tw"].push_back(t[1]);
        }
    }
    return j;
}

inline Decoration decor_from_json(const json& j) {
    Decoration d;
    for (const auto& l : j.at("legs"))
        d.legs.push_back({l.at("psi").get<int>(), l.at("xi").get<int>()});
    auto hs = j.at("halfedges").get<std::vector<int>>();
    for (size_t i = 0; i + 1 < hs.size(); i += 2) d.hpsi.push_back({hs[i], hs[i + 1]});
    d.exi = j.at("edges").get<std::vector<int>>();
    for (const auto& v : j.at("vertices")) {
        std::vector<EtaFactor> mono;
        for (const auto& f : v)
            mono.push_back({f.at(0).get<int>(), f.at(1).get<int>(), f.at(2).get<int>()});
        d.eta.push_back(std::move(mono));
    }
    if (j.contains("tw")) {
        auto ts = j.at("tw").get<std::vector<int>>();
        for (size_t i = 0; i + 1 < ts.size(); i += 2) d.tw.push_back({ts[i], ts[i + 1]});
    }
    return d;
}

inline json ambient_to_json(const Ambient& a) {
    json j;
    j["g"] = a.g;
    j["n"] = a.n;
    j["beta"] = a.beta;
    j["target"] = target_to_json(a.target);
    j["kind"] = a.kind == GraphKind::XValued ? "x_valued" : "prestable_z";
    return j;
}

inline Ambient ambient_from_json(const json& j) {
    Ambient a;
    a.g = j.at("g").get<int>();
    a.n = j.at("n").get<int>();
    a.beta = j.at("beta").get<std::vector<long long>>();
    a.target = target_from_json(j.at("target"));
    a.kind = j.at("kind").get<std::string>() == "x_valued" ? GraphKind::XValued
                                                           : GraphKind::PrestableZ;
    return a;
}

// Terms appear in canonical certificate order, so dumps are byte-stable.
inline json taut_class_to_json(const TautClass& c) {
    json j;
    j["ambient"] = ambient_to_json(c.ambient());
    j["terms"] = json::array();
    for (const auto& [key, t] : c.terms())
        j["terms"].push_back({{"coeff", rational_to_string(t.coeff)},
                              {"graph", graph_to_json(t.graph)},
                              {"decor", decor_to_json(t.decor)}});
    return j;
}

inline TautClass taut_class_from_json(const json& j) {
    TautClass out(ambient_from_json(j.at("ambient")));
    for (const auto& t : j.at("terms"))
        out.add_term(graph_from_json(t.at("graph")), decor_from_json(t.at("decor")),
                     rational_from_string(t.at("coeff").get<std::string>()));
    return out;
}

}  // namespace drx
