#pragma once

#include "drx/graph.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace drx {

// One eta_{a,b}^exp factor on a vertex; a+b >= 2, exp > 0. The kappa
// classes appear as eta_{a,0} (kappa_{a-1}); eta means eta_{0,2}.
struct EtaFactor {
    int a = 0, b = 0, exp = 0;
    bool operator==(const EtaFactor&) const = default;
    auto operator<=>(const EtaFactor&) const = default;
};

struct LegDecor {
    int psi = 0, xi = 0;
    bool operator==(const LegDecor&) const = default;
};

// Monomial decoration of a graph: psi/xi on legs, psi on edge half-edges,
// xi on edges, eta monomials on vertices. Twists, when present, annotate
// the two half-edges of each edge (r-twisted prestable graphs).
struct Decoration {
    std::vector<LegDecor> legs;                    // aligned with graph.legs
    std::vector<std::array<int, 2>> hpsi;          // per edge: (first, second)
    std::vector<int> exi;                          // per edge
    std::vector<std::vector<EtaFactor>> eta;       // per vertex, kept sorted
    std::vector<std::array<int, 2>> tw;            // optional, per edge

    bool operator==(const Decoration&) const = default;

    static Decoration empty_for(const StableGraph& g) {
        Decoration d;
        d.legs.resize(g.legs.size());
        d.hpsi.assign(g.edges.size(), {0, 0});
        d.exi.assign(g.edges.size(), 0);
        d.eta.resize(g.vertices.size());
        return d;
    }

    bool has_twists() const { return !tw.empty(); }

    void sort_eta() {
        for (auto& v : eta) std::sort(v.begin(), v.end());
    }

    // Codimension carried by the decoration alone: psi and xi count their
    // exponent, an eta_{a,b} factor counts a+b-1 (the fiber push-forward
    // drops one).
    int degree() const {
        int d = 0;
        for (const auto& l : legs) d += l.psi + l.xi;
        for (const auto& h : hpsi) d += h[0] + h[1];
        for (int x : exi) d += x;
        for (const auto& v : eta)
            for (const auto& f : v) d += (f.a + f.b - 1) * f.exp;
        return d;
    }
};

// Multiply an eta factor into a vertex monomial, merging exponents.
inline void eta_multiply(std::vector<EtaFactor>& mono, int a, int b, int exp) {
    if (exp == 0) return;
    for (auto& f : mono)
        if (f.a == a && f.b == b) {
            f.exp += exp;
            return;
        }
    mono.push_back({a, b, exp});
    std::sort(mono.begin(), mono.end());
}

inline int term_codim(const StableGraph& g, const Decoration& d) {
    return g.num_edges() + d.degree();
}

}  // namespace drx
