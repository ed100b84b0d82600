#pragma once

#include "drx/canonical.hpp"
#include "drx/graph.hpp"
#include "drx/target.hpp"

#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace drx {

namespace detail {

// Ordered compositions of total into parts non-negative summands.
inline void compositions(int total, int parts, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
    if (parts == 0) {
        if (total == 0) out.push_back(cur);
        return;
    }
    if (parts == 1) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int v = 0; v <= total; ++v) {
        cur.push_back(v);
        compositions(total - v, parts - 1, cur, out);
        cur.pop_back();
    }
}

// Multisets of pair indices 0 <= p < npairs of given size, non-decreasing.
inline void pair_multisets(int npairs, int count, int min_pair, std::vector<int>& cur,
                           std::vector<std::vector<int>>& out) {
    if (count == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = min_pair; p < npairs; ++p) {
        cur.push_back(p);
        pair_multisets(npairs, count - 1, p, cur, out);
        cur.pop_back();
    }
}

inline std::pair<int, int> decode_pair(int nv, int p) {
    for (int i = 0; i < nv; ++i) {
        int row = nv - i;
        if (p < row) return {i, i + p};
        p -= row;
    }
    return {0, 0};
}

inline bool connected_edge_multiset(int nv, const std::vector<std::pair<int, int>>& ends) {
    std::vector<int> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int comps = nv;
    for (auto [a, b] : ends) {
        int ra = find(a), rb = find(b);
        if (ra != rb) {
            parent[ra] = rb;
            --comps;
        }
    }
    return comps == 1;
}

}  // namespace detail

// All X-valued stable graphs for (g, n, beta) with at most max_edges edges,
// one canonical representative per isomorphism class, sorted by canonical
// certificate. Vertex specs (genus, charge, legs, edge multiset) are
// enumerated directly and duplicates are removed via canonical forms; the
// genus and degree conditions hold by construction, connectivity and
// stability are filtered.
inline std::vector<StableGraph> enumerate_stable_graphs(int g, int n, const CurveClass& beta,
                                                        const TargetModel& target,
                                                        int max_edges) {
    std::map<std::string, StableGraph> found;
    for (int ne = 0; ne <= max_edges; ++ne) {
        for (int nv = 1; nv <= ne + 1; ++nv) {
            int h1 = ne - nv + 1;
            if (h1 < 0) continue;
            int gsum = g - h1;
            if (gsum < 0) continue;

            std::vector<std::vector<int>> genus_vectors;
            {
                std::vector<int> cur;
                detail::compositions(gsum, nv, cur, genus_vectors);
            }
            auto splittings = target.effective_splittings(beta, nv);

            std::vector<std::vector<int>> edge_sets;
            {
                std::vector<int> cur;
                detail::pair_multisets(nv * (nv + 1) / 2, ne, 0, cur, edge_sets);
            }

            long long leg_assignments = 1;
            for (int i = 0; i < n; ++i) leg_assignments *= nv;

            for (const auto& edges : edge_sets) {
                std::vector<std::pair<int, int>> ends;
                ends.reserve(edges.size());
                for (int p : edges) ends.push_back(detail::decode_pair(nv, p));
                if (!detail::connected_edge_multiset(nv, ends)) continue;

                std::vector<int> edge_valence(nv, 0);
                for (auto [a, b] : ends) {
                    edge_valence[a]++;
                    edge_valence[b]++;
                }

                for (const auto& gv : genus_vectors) {
                    for (const auto& sp : splittings) {
                        for (long long la = 0; la < leg_assignments; ++la) {
                            std::vector<int> leg_vertex(n);
                            long long rem = la;
                            for (int i = 0; i < n; ++i) {
                                leg_vertex[i] = static_cast<int>(rem % nv);
                                rem /= nv;
                            }
                            std::vector<int> valence = edge_valence;
                            for (int v : leg_vertex) valence[v]++;

                            bool stable = true;
                            for (int v = 0; v < nv; ++v)
                                if (class_is_zero(sp[v]) && 2 * gv[v] - 2 + valence[v] <= 0) {
                                    stable = false;
                                    break;
                                }
                            if (!stable) continue;

                            StableGraph gr;
                            gr.vertices.resize(nv);
                            for (int v = 0; v < nv; ++v)
                                gr.vertices[v] = {gv[v], sp[v]};
                            for (int i = 0; i < n; ++i)
                                gr.legs.push_back({i + 1, leg_vertex[i]});
                            std::vector<int> next_slot(nv, 0);
                            for (auto [a, b] : ends) {
                                Edge e;
                                e.first = {a, next_slot[a]++};
                                e.second = {b, next_slot[b]++};
                                gr.edges.push_back(e);
                            }

                            auto [canon, dec] =
                                canonicalize_decorated(gr, Decoration::empty_for(gr));
                            found.emplace(canonicalize(canon).cert, std::move(canon));
                        }
                    }
                }
            }
        }
    }
    std::vector<StableGraph> out;
    out.reserve(found.size());
    for (auto& [cert, gr] : found) out.push_back(std::move(gr));
    return out;
}

// Underlying prestable graphs with integer vertex degrees
// d(v) = <c1(S), beta(v)> - sum of a_i over legs at v, deduplicated. These
// are the degree-context graphs whose twisted kernel pulls back to the
// X-valued graph sum.
inline std::vector<StableGraph> enumerate_prestable_graphs(int g, int n,
                                                           const std::vector<long long>& A,
                                                           const CurveClass& beta,
                                                           const TargetModel& target,
                                                           int max_edges) {
    std::map<std::string, StableGraph> found;
    for (const auto& gr : enumerate_stable_graphs(g, n, beta, target, max_edges)) {
        StableGraph pre = gr;
        for (int v = 0; v < pre.num_vertices(); ++v) {
            long long d = target.pair_c1S(gr.vertices[v].charge);
            for (const auto& l : gr.legs)
                if (l.vertex == v) d -= A[l.marking - 1];
            pre.vertices[v].charge = {d};
        }
        auto [canon, dec] = canonicalize_decorated(pre, Decoration::empty_for(pre));
        found.emplace(canonicalize(canon).cert, std::move(canon));
    }
    std::vector<StableGraph> out;
    out.reserve(found.size());
    for (auto& [cert, gr] : found) out.push_back(std::move(gr));
    return out;
}

}  // namespace drx
