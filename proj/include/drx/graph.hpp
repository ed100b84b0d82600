#pragma once

#include "drx/target.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace drx {

// Dual graph of a degenerate map: vertices carry genus and a charge vector.
// For X-valued graphs the charge is an effective curve class; for
// prestable graphs with a degree-0 line bundle it is a single integer
// degree (possibly negative). Legs are tied to markings 1..n; edges are
// unordered pairs of half-edges addressed as (vertex, slot).
struct GraphVertex {
    int genus = 0;
    CurveClass charge;
    bool operator==(const GraphVertex&) const = default;
};

struct Leg {
    int marking = 0;
    int vertex = 0;
    bool operator==(const Leg&) const = default;
};

struct HalfEdge {
    int vertex = 0;
    int slot = 0;
    bool operator==(const HalfEdge&) const = default;
};

struct Edge {
    HalfEdge first, second;
    bool operator==(const Edge&) const = default;
};

struct StableGraph {
    std::vector<GraphVertex> vertices;
    std::vector<Leg> legs;
    std::vector<Edge> edges;

    bool operator==(const StableGraph&) const = default;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_legs() const { return static_cast<int>(legs.size()); }

    // Valence counting legs and edge-ends (loops count twice).
    int valence(int v) const {
        int n = 0;
        for (const auto& l : legs) n += l.vertex == v;
        for (const auto& e : edges) n += (e.first.vertex == v) + (e.second.vertex == v);
        return n;
    }

    int total_genus_of_vertices() const {
        int g = 0;
        for (const auto& v : vertices) g += v.genus;
        return g;
    }

    bool is_connected() const {
        if (vertices.empty()) return false;
        std::vector<char> seen(vertices.size(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (const auto& e : edges) {
                int a = e.first.vertex, b = e.second.vertex;
                if (a == v && !seen[b]) { seen[b] = 1; stack.push_back(b); }
                if (b == v && !seen[a]) { seen[a] = 1; stack.push_back(a); }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    }
};

inline int first_betti(const StableGraph& g) {
    return g.num_edges() - g.num_vertices() + 1;
}

// Checks the defining conditions of an X-valued stable graph and reports
// each violated one by name.
inline std::vector<std::string> validate(const StableGraph& gr, int g, int n,
                                         const CurveClass& beta, const TargetModel& target) {
    std::vector<std::string> bad;
    if (gr.vertices.empty() || !gr.is_connected()) bad.push_back("connected");

    if (!gr.vertices.empty() && gr.is_connected() &&
        gr.total_genus_of_vertices() + first_betti(gr) != g)
        bad.push_back("genus");

    // markings 1..n, each exactly once, attached to existing vertices
    std::vector<int> seen(n, 0);
    bool legs_ok = gr.num_legs() == n;
    for (const auto& l : gr.legs) {
        if (l.marking < 1 || l.marking > n || l.vertex < 0 || l.vertex >= gr.num_vertices()) {
            legs_ok = false;
            break;
        }
        seen[l.marking - 1]++;
    }
    if (legs_ok)
        legs_ok = std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
    if (!legs_ok) bad.push_back("legs");

    // half-edge slots: valid vertices, per-vertex slots distinct
    bool slots_ok = true;
    std::vector<std::vector<int>> used(gr.vertices.size());
    for (const auto& e : gr.edges)
        for (const auto& h : {e.first, e.second}) {
            if (h.vertex < 0 || h.vertex >= gr.num_vertices()) {
                slots_ok = false;
                continue;
            }
            auto& u = used[h.vertex];
            if (std::find(u.begin(), u.end(), h.slot) != u.end()) slots_ok = false;
            u.push_back(h.slot);
        }
    if (!slots_ok) bad.push_back("slots");

    bool charges_ok = true;
    CurveClass total = zero_class(target.rank());
    for (int v = 0; v < gr.num_vertices(); ++v) {
        const auto& c = gr.vertices[v].charge;
        if (!target.is_effective(c)) {
            charges_ok = false;
            continue;
        }
        total = class_add(total, c);
        if (class_is_zero(c) && 2 * gr.vertices[v].genus - 2 + gr.valence(v) <= 0)
            bad.push_back("stability");
    }
    if (!charges_ok)
        bad.push_back("effective");
    else if (total != beta)
        bad.push_back("degree");

    return bad;
}

}  // namespace drx
