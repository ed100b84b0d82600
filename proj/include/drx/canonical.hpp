#pragma once

#include "drx/decor.hpp"
#include "drx/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace drx {

namespace detail {

inline void cert_num(std::string& s, long long v) {
    s += std::to_string(v);
    s += ',';
}

// Vertex invariants refined by incident edge structure until the partition
// stabilizes. The refined colors bound the orderings the canonical search
// must try.
inline std::vector<std::string> refine_colors(const StableGraph& g) {
    int nv = g.num_vertices();
    std::vector<std::string> color(nv);
    for (int v = 0; v < nv; ++v) {
        std::string c;
        cert_num(c, g.vertices[v].genus);
        for (long long x : g.vertices[v].charge) cert_num(c, x);
        std::vector<int> marks;
        for (const auto& l : g.legs)
            if (l.vertex == v) marks.push_back(l.marking);
        std::sort(marks.begin(), marks.end());
        for (int m : marks) cert_num(c, m);
        color[v] = c;
    }
    for (int round = 0; round < nv; ++round) {
        std::vector<std::string> next(nv);
        for (int v = 0; v < nv; ++v) {
            std::vector<std::string> nb;
            int loops = 0;
            for (const auto& e : g.edges) {
                int a = e.first.vertex, b = e.second.vertex;
                if (a == v && b == v) {
                    ++loops;
                    continue;
                }
                if (a == v) nb.push_back(color[b]);
                if (b == v) nb.push_back(color[a]);
            }
            std::sort(nb.begin(), nb.end());
            std::string c = color[v] + "#" + std::to_string(loops) + "#";
            for (auto& x : nb) c += x + ";";
            next[v] = c;
        }
        if (next == color) break;
        color = std::move(next);
    }
    return color;
}

// All vertex orderings consistent with the refined color classes
// (classes in sorted color order, all permutations within each class).
inline std::vector<std::vector<int>> candidate_orderings(const StableGraph& g) {
    auto color = refine_colors(g);
    std::map<std::string, std::vector<int>> classes;
    for (int v = 0; v < g.num_vertices(); ++v) classes[color[v]].push_back(v);

    std::vector<std::vector<int>> orderings{{}};
    for (auto& [key, members] : classes) {
        std::vector<std::vector<int>> grown;
        std::sort(members.begin(), members.end());
        std::vector<int> perm = members;
        do {
            for (const auto& prefix : orderings) {
                auto next = prefix;
                next.insert(next.end(), perm.begin(), perm.end());
                grown.push_back(next);
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        orderings = std::move(grown);
    }
    return orderings;  // orderings[i] lists old vertex ids in new order
}

struct EdgeRecord {
    int a, b;                       // new vertex ids, a <= b
    std::array<int, 4> decor{};     // psi_near_a, psi_near_b, tw_a, tw_b
    int xi = 0;
    int orig_edge = 0;
    bool flipped = false;           // second half-edge sits at a
    auto key() const { return std::tuple(a, b, decor, xi); }
    bool operator<(const EdgeRecord& o) const { return key() < o.key(); }
};

inline std::vector<EdgeRecord> edge_records(const StableGraph& g, const Decoration* d,
                                            const std::vector<int>& new_id) {
    std::vector<EdgeRecord> recs;
    recs.reserve(g.edges.size());
    for (int ei = 0; ei < g.num_edges(); ++ei) {
        const auto& e = g.edges[ei];
        EdgeRecord r;
        r.orig_edge = ei;
        int na = new_id[e.first.vertex], nb = new_id[e.second.vertex];
        std::array<int, 4> fwd{}, rev{};
        if (d) {
            fwd = {d->hpsi[ei][0], d->hpsi[ei][1],
                   d->has_twists() ? d->tw[ei][0] : 0, d->has_twists() ? d->tw[ei][1] : 0};
            rev = {fwd[1], fwd[0], fwd[3], fwd[2]};
            r.xi = d->exi[ei];
        }
        if (na < nb || (na == nb && fwd <= rev)) {
            r.a = na; r.b = nb; r.decor = fwd; r.flipped = false;
        } else {
            r.a = nb; r.b = na; r.decor = rev; r.flipped = true;
        }
        recs.push_back(r);
    }
    std::sort(recs.begin(), recs.end());
    return recs;
}

inline std::string build_cert(const StableGraph& g, const Decoration* d,
                              const std::vector<int>& ordering) {
    int nv = g.num_vertices();
    std::vector<int> new_id(nv);
    for (int i = 0; i < nv; ++i) new_id[ordering[i]] = i;

    std::string cert;
    for (int i = 0; i < nv; ++i) {
        int v = ordering[i];
        cert_num(cert, g.vertices[v].genus);
        for (long long x : g.vertices[v].charge) cert_num(cert, x);
        cert += '|';
    }
    // legs by marking with their new vertex
    std::vector<std::pair<int, int>> legs;
    for (const auto& l : g.legs) legs.emplace_back(l.marking, new_id[l.vertex]);
    std::sort(legs.begin(), legs.end());
    for (auto [m, v] : legs) {
        cert_num(cert, m);
        cert_num(cert, v);
    }
    cert += '!';
    for (const auto& r : edge_records(g, d, new_id)) {
        cert_num(cert, r.a);
        cert_num(cert, r.b);
        if (d) {
            for (int x : r.decor) cert_num(cert, x);
            cert_num(cert, r.xi);
        }
        cert += '/';
    }
    if (d) {
        cert += '@';
        for (int i = 0; i < nv; ++i) {
            for (const auto& f : d->eta[ordering[i]]) {
                cert_num(cert, f.a);
                cert_num(cert, f.b);
                cert_num(cert, f.exp);
            }
            cert += '|';
        }
        std::vector<std::pair<int, LegDecor>> ld;
        for (size_t li = 0; li < g.legs.size(); ++li)
            ld.emplace_back(g.legs[li].marking, d->legs[li]);
        std::sort(ld.begin(), ld.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& [m, dec] : ld) {
            cert_num(cert, dec.psi);
            cert_num(cert, dec.xi);
        }
    }
    return cert;
}

}  // namespace detail

struct CanonicalForm {
    std::string cert;
    std::uint64_t aut_order = 1;
};

// Canonical certificate and exact automorphism order. Two graphs are
// isomorphic (fixing markings, genera, charges) iff their certs agree.
// |Aut| counts joint permutations of vertices and half-edges: the
// vertex-level count times m! per parallel-edge class and 2^k k! for k
// loops at a vertex.
inline CanonicalForm canonicalize(const StableGraph& g) {
    auto orderings = detail::candidate_orderings(g);
    std::string best;
    std::uint64_t hits = 0;
    for (const auto& ord : orderings) {
        std::string cert = detail::build_cert(g, nullptr, ord);
        if (best.empty() || cert < best) {
            best = cert;
            hits = 1;
        } else if (cert == best) {
            ++hits;
        }
    }

    std::uint64_t aut = hits;
    std::map<std::pair<int, int>, int> mult;
    std::vector<int> loops(g.num_vertices(), 0);
    for (const auto& e : g.edges) {
        int a = e.first.vertex, b = e.second.vertex;
        if (a == b) {
            ++loops[a];
            continue;
        }
        ++mult[{std::min(a, b), std::max(a, b)}];
    }
    for (const auto& [p, m] : mult)
        for (int i = 2; i <= m; ++i) aut *= i;
    for (int l : loops) {
        for (int i = 2; i <= l; ++i) aut *= i;
        aut <<= l;
    }
    return {best, aut};
}

// Relabels (graph, decoration) into canonical form: minimal decorated
// certificate among the orderings achieving the minimal plain certificate,
// with decorations transported through the relabeling. Parallel-edge and
// loop symmetries are quotiented by the sorted edge records.
inline std::pair<StableGraph, Decoration> canonicalize_decorated(const StableGraph& g,
                                                                 const Decoration& d) {
    auto orderings = detail::candidate_orderings(g);
    std::string best_plain, best_dec;
    const std::vector<int>* winner = nullptr;
    for (const auto& ord : orderings) {
        std::string plain = detail::build_cert(g, nullptr, ord);
        if (!winner || plain < best_plain) {
            best_plain = plain;
            best_dec = detail::build_cert(g, &d, ord);
            winner = &ord;
        } else if (plain == best_plain) {
            std::string dec = detail::build_cert(g, &d, ord);
            if (dec < best_dec) {
                best_dec = dec;
                winner = &ord;
            }
        }
    }

    const auto& ord = *winner;
    int nv = g.num_vertices();
    std::vector<int> new_id(nv);
    for (int i = 0; i < nv; ++i) new_id[ord[i]] = i;

    StableGraph out;
    Decoration od;
    out.vertices.resize(nv);
    od.eta.resize(nv);
    for (int i = 0; i < nv; ++i) {
        out.vertices[i] = g.vertices[ord[i]];
        od.eta[i] = d.eta[ord[i]];
        std::sort(od.eta[i].begin(), od.eta[i].end());
    }
    std::vector<std::pair<Leg, LegDecor>> legs;
    for (size_t li = 0; li < g.legs.size(); ++li)
        legs.push_back({{g.legs[li].marking, new_id[g.legs[li].vertex]}, d.legs[li]});
    std::sort(legs.begin(), legs.end(),
              [](const auto& x, const auto& y) { return x.first.marking < y.first.marking; });
    for (auto& [leg, dec] : legs) {
        out.legs.push_back(leg);
        od.legs.push_back(dec);
    }

    auto recs = detail::edge_records(g, &d, new_id);
    std::vector<int> next_slot(nv, 0);
    bool twisted = d.has_twists();
    for (const auto& r : recs) {
        Edge e;
        e.first = {r.a, next_slot[r.a]++};
        e.second = {r.b, next_slot[r.b]++};
        out.edges.push_back(e);
        od.hpsi.push_back({r.decor[0], r.decor[1]});
        od.exi.push_back(r.xi);
        if (twisted) od.tw.push_back({r.decor[2], r.decor[3]});
    }
    return {out, od};
}

}  // namespace drx
