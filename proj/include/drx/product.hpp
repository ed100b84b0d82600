#pragma once

#include "drx/enumerate.hpp"
#include "drx/strata.hpp"

#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

namespace drx {

namespace detail {

struct Contraction {
    StableGraph graph;
    std::vector<int> vertex_map;    // old vertex -> new vertex
    std::vector<int> surviving;     // new edge index -> old edge index
};

// Contract the masked edges. Merged vertices add genera and charges; each
// independent cycle among the contracted edges raises the genus by one
// (loops included).
inline Contraction contract_edges(const StableGraph& g, const std::vector<char>& mask) {
    int nv = g.num_vertices();
    std::vector<int> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int masked_count = 0;
    for (int ei = 0; ei < g.num_edges(); ++ei) {
        if (!mask[ei]) continue;
        ++masked_count;
        parent[find(g.edges[ei].first.vertex)] = find(g.edges[ei].second.vertex);
    }

    Contraction out;
    out.vertex_map.assign(nv, -1);
    std::vector<int> class_size;
    for (int v = 0; v < nv; ++v) {
        int r = find(v);
        if (out.vertex_map[r] == -1) {
            out.vertex_map[r] = static_cast<int>(out.graph.vertices.size());
            out.graph.vertices.push_back({0, zero_class(g.vertices[v].charge.size())});
            class_size.push_back(0);
        }
        out.vertex_map[v] = out.vertex_map[r];
        auto& nu = out.graph.vertices[out.vertex_map[v]];
        nu.genus += g.vertices[v].genus;
        nu.charge = class_add(nu.charge, g.vertices[v].charge);
        class_size[out.vertex_map[v]]++;
    }
    // genus from cycles: per merged class, (#masked edges inside) - (size-1)
    std::vector<int> masked_in(out.graph.vertices.size(), 0);
    for (int ei = 0; ei < g.num_edges(); ++ei)
        if (mask[ei]) masked_in[out.vertex_map[g.edges[ei].first.vertex]]++;
    for (size_t c = 0; c < out.graph.vertices.size(); ++c)
        out.graph.vertices[c].genus += masked_in[c] - (class_size[c] - 1);

    for (const auto& l : g.legs) out.graph.legs.push_back({l.marking, out.vertex_map[l.vertex]});
    std::vector<int> slot(out.graph.vertices.size(), 0);
    for (int ei = 0; ei < g.num_edges(); ++ei) {
        if (mask[ei]) continue;
        int a = out.vertex_map[g.edges[ei].first.vertex];
        int b = out.vertex_map[g.edges[ei].second.vertex];
        out.graph.edges.push_back({{a, slot[a]++}, {b, slot[b]++}});
        out.surviving.push_back(ei);
    }
    return out;
}

struct GraphIso {
    std::vector<int> vmap;                      // X vertex -> Y vertex
    std::vector<std::pair<int, bool>> emap;     // X edge -> (Y edge, flipped)
};

// All half-edge-level isomorphisms X -> Y preserving genera, charges and
// markings: vertex bijections times parallel-edge matchings times loop
// orientations. |isos(X, X)| equals the automorphism order.
inline std::vector<GraphIso> graph_isomorphisms(const StableGraph& X, const StableGraph& Y) {
    std::vector<GraphIso> out;
    int nv = X.num_vertices();
    if (nv != Y.num_vertices() || X.num_edges() != Y.num_edges() ||
        X.num_legs() != Y.num_legs())
        return out;

    std::vector<int> perm(nv);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (int v = 0; v < nv && ok; ++v)
            ok = X.vertices[v].genus == Y.vertices[perm[v]].genus &&
                 X.vertices[v].charge == Y.vertices[perm[v]].charge;
        for (const auto& l : X.legs) {
            if (!ok) break;
            bool found = false;
            for (const auto& ly : Y.legs)
                if (ly.marking == l.marking && ly.vertex == perm[l.vertex]) found = true;
            ok = found;
        }
        if (!ok) continue;

        // group edges by normalized endpoint pairs in Y coordinates
        std::map<std::pair<int, int>, std::vector<int>> xcls, ycls;
        for (int ei = 0; ei < X.num_edges(); ++ei) {
            int a = perm[X.edges[ei].first.vertex], b = perm[X.edges[ei].second.vertex];
            xcls[{std::min(a, b), std::max(a, b)}].push_back(ei);
        }
        for (int ei = 0; ei < Y.num_edges(); ++ei) {
            int a = Y.edges[ei].first.vertex, b = Y.edges[ei].second.vertex;
            ycls[{std::min(a, b), std::max(a, b)}].push_back(ei);
        }
        if (xcls.size() != ycls.size()) continue;
        bool classes_match = true;
        for (const auto& [pr, xs] : xcls) {
            auto it = ycls.find(pr);
            if (it == ycls.end() || it->second.size() != xs.size()) {
                classes_match = false;
                break;
            }
        }
        if (!classes_match) continue;

        // per-class bijections, with both orientations for matched loops
        std::vector<GraphIso> partial{{perm, std::vector<std::pair<int, bool>>(
                                                 X.num_edges(), {-1, false})}};
        for (const auto& [pr, xs] : xcls) {
            auto ys = ycls[pr];
            bool is_loop = pr.first == pr.second;
            std::vector<GraphIso> grown;
            std::sort(ys.begin(), ys.end());
            do {
                // orientation choices per edge in the class
                int m = static_cast<int>(xs.size());
                int orient_combos = 1;
                if (is_loop)
                    for (int i = 0; i < m; ++i) orient_combos *= 2;
                for (int oc = 0; oc < orient_combos; ++oc) {
                    for (const auto& base : partial) {
                        GraphIso next = base;
                        int bits = oc;
                        for (int i = 0; i < m; ++i) {
                            bool flip;
                            if (is_loop) {
                                flip = bits & 1;
                                bits >>= 1;
                            } else {
                                flip = perm[X.edges[xs[i]].first.vertex] !=
                                       Y.edges[ys[i]].first.vertex;
                            }
                            next.emap[xs[i]] = {ys[i], flip};
                        }
                        grown.push_back(std::move(next));
                    }
                }
            } while (std::next_permutation(ys.begin(), ys.end()));
            partial = std::move(grown);
        }
        for (auto& iso : partial) out.push_back(std::move(iso));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

// Prestable candidates: connected shapes with the genus condition but no
// stability, vertex degrees in [-cap, cap] with total zero, one canonical
// representative each.
inline std::vector<StableGraph> prestable_candidates(int g, int n, int max_edges,
                                                     long long charge_cap) {
    std::map<std::string, StableGraph> found;
    for (int ne = 0; ne <= max_edges; ++ne) {
        for (int nv = 1; nv <= ne + 1; ++nv) {
            int h1 = ne - nv + 1;
            if (h1 < 0 || g - h1 < 0) continue;
            std::vector<std::vector<int>> gvs;
            {
                std::vector<int> cur;
                compositions(g - h1, nv, cur, gvs);
            }
            std::vector<std::vector<int>> edge_sets;
            {
                std::vector<int> cur;
                pair_multisets(nv * (nv + 1) / 2, ne, 0, cur, edge_sets);
            }
            long long nleg = 1;
            for (int i = 0; i < n; ++i) nleg *= nv;
            long long ncharge = 1;
            for (int v = 0; v < nv; ++v) ncharge *= 2 * charge_cap + 1;

            for (const auto& edges : edge_sets) {
                std::vector<std::pair<int, int>> ends;
                for (int p : edges) ends.push_back(decode_pair(nv, p));
                if (!connected_edge_multiset(nv, ends)) continue;
                for (const auto& gv : gvs) {
                    for (long long la = 0; la < nleg; ++la) {
                        for (long long ca = 0; ca < ncharge; ++ca) {
                            long long rem = ca, total = 0;
                            std::vector<long long> dv(nv);
                            for (int v = 0; v < nv; ++v) {
                                dv[v] = rem % (2 * charge_cap + 1) - charge_cap;
                                rem /= 2 * charge_cap + 1;
                                total += dv[v];
                            }
                            if (total != 0) continue;
                            StableGraph gr;
                            gr.vertices.resize(nv);
                            for (int v = 0; v < nv; ++v) gr.vertices[v] = {gv[v], {dv[v]}};
                            long long lrem = la;
                            for (int i = 0; i < n; ++i) {
                                gr.legs.push_back({i + 1, static_cast<int>(lrem % nv)});
                                lrem /= nv;
                            }
                            std::vector<int> slot(nv, 0);
                            for (auto [a, b] : ends)
                                gr.edges.push_back({{a, slot[a]++}, {b, slot[b]++}});
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
    for (auto& [c, gr] : found) out.push_back(std::move(gr));
    return out;
}

}  // namespace detail

inline void detail_emit_product_terms(
    const StableGraph& gamma, const Ambient& amb, const Term& ta, const Term& tb,
    const detail::Contraction& cA, const detail::Contraction& cB, const detail::GraphIso& ia,
    const detail::GraphIso& ib, const std::vector<int>& color, int count_ab,
    const Rational& inv_aut, int degree_cap, std::map<int, TautClass>& slices);

// Product of two classes of decorated graphs: the sum over common
// degenerations with edges colored A, B or both. Contracting the edges not
// colored A (resp. B) must recover the A (resp. B) factor; leg monomials
// multiply, doubly colored edges multiply their monomials and acquire the
// excess factor -(1/r)(psi' + psi''), and eta factors distribute over the
// collapsing vertices in all ways. Labeled structures (colorings,
// identifications with the factors, eta assignments) are summed and divided
// by |Aut| of the degeneration.
//
// Output terms are truncated to codimension <= degree_cap; candidate
// degenerations carry at most |E_A| + |E_B| edges. The r-dependence is
// returned as slices by power of r (the excess factor contributes r^{-1}
// per doubly colored edge); at r_mode r=1 the slices collapse.
inline std::map<int, TautClass> product_sliced(const TautClass& A, const TautClass& B,
                                               int degree_cap, long long charge_cap = 3) {
    A.check_ambient(B);
    const Ambient& amb = A.ambient();
    std::map<int, TautClass> slices;

    int max_ea = 0, max_eb = 0;
    for (const auto& [k, t] : A.terms()) max_ea = std::max(max_ea, t.graph.num_edges());
    for (const auto& [k, t] : B.terms()) max_eb = std::max(max_eb, t.graph.num_edges());
    int edge_cap = std::min(max_ea + max_eb, degree_cap);

    std::vector<StableGraph> pool =
        amb.kind == GraphKind::XValued
            ? enumerate_stable_graphs(amb.g, amb.n, amb.beta, amb.target, edge_cap)
            : detail::prestable_candidates(amb.g, amb.n, edge_cap, charge_cap);

    for (const auto& gamma : pool) {
        int ne = gamma.num_edges();
        std::uint64_t aut = canonicalize(gamma).aut_order;
        Rational inv_aut = Rational(1, Integer(aut));

        long long ncolor = 1;
        for (int i = 0; i < ne; ++i) ncolor *= 3;
        for (long long code = 0; code < ncolor; ++code) {
            // 0 = A only, 1 = B only, 2 = both
            std::vector<int> color(ne);
            long long rem = code;
            int count_a = 0, count_b = 0, count_ab = 0;
            for (int i = 0; i < ne; ++i) {
                color[i] = static_cast<int>(rem % 3);
                rem /= 3;
                count_a += color[i] != 1;
                count_b += color[i] != 0;
                count_ab += color[i] == 2;
            }

            for (const auto& [ka, ta] : A.terms()) {
                if (ta.graph.num_edges() != count_a) continue;
                for (const auto& [kb, tb] : B.terms()) {
                    if (tb.graph.num_edges() != count_b) continue;

                    std::vector<char> maskA(ne), maskB(ne);
                    for (int i = 0; i < ne; ++i) {
                        maskA[i] = color[i] == 1;  // contracted on the A side
                        maskB[i] = color[i] == 0;
                    }
                    auto cA = detail::contract_edges(gamma, maskA);
                    auto isosA = detail::graph_isomorphisms(cA.graph, ta.graph);
                    if (isosA.empty()) continue;
                    auto cB = detail::contract_edges(gamma, maskB);
                    auto isosB = detail::graph_isomorphisms(cB.graph, tb.graph);
                    if (isosB.empty()) continue;

                    for (const auto& ia : isosA)
                        for (const auto& ib : isosB)
                            detail_emit_product_terms(gamma, amb, ta, tb, cA, cB, ia, ib,
                                                      color, count_ab, inv_aut, degree_cap,
                                                      slices);
                }
            }
        }
    }
    return slices;
}

namespace detail {
struct EtaInstanceRef {
    int target_vertex;  // vertex of gamma receiving the factor
    int a, b;
};
}  // namespace detail

inline void detail_emit_product_terms(
    const StableGraph& gamma, const Ambient& amb, const Term& ta, const Term& tb,
    const detail::Contraction& cA, const detail::Contraction& cB, const detail::GraphIso& ia,
    const detail::GraphIso& ib, const std::vector<int>& color, int count_ab,
    const Rational& inv_aut, int degree_cap, std::map<int, TautClass>& slices) {
    int ne = gamma.num_edges();

    // twist transport: surviving edges inherit twists from their factor;
    // doubly colored edges must agree on both sides
    bool twisted = ta.decor.has_twists() || tb.decor.has_twists();
    std::vector<std::array<int, 2>> tw;
    if (twisted) {
        if (!ta.decor.has_twists() || !tb.decor.has_twists()) return;
        tw.assign(ne, {0, 0});
    }

    Decoration base = Decoration::empty_for(gamma);
    // legs multiply: match by marking
    for (size_t li = 0; li < gamma.legs.size(); ++li) {
        int m = gamma.legs[li].marking;
        for (size_t la = 0; la < ta.graph.legs.size(); ++la)
            if (ta.graph.legs[la].marking == m) {
                base.legs[li].psi += ta.decor.legs[la].psi;
                base.legs[li].xi += ta.decor.legs[la].xi;
            }
        for (size_t lb = 0; lb < tb.graph.legs.size(); ++lb)
            if (tb.graph.legs[lb].marking == m) {
                base.legs[li].psi += tb.decor.legs[lb].psi;
                base.legs[li].xi += tb.decor.legs[lb].xi;
            }
    }

    // edge monomials through the contraction + iso chains
    auto pull_edge = [&](const detail::Contraction& c, const detail::GraphIso& iso,
                         const Term& t) {
        for (size_t se = 0; se < c.surviving.size(); ++se) {
            int ge = c.surviving[se];
            auto [fe, flip] = iso.emap[se];
            base.hpsi[ge][0] += t.decor.hpsi[fe][flip ? 1 : 0];
            base.hpsi[ge][1] += t.decor.hpsi[fe][flip ? 0 : 1];
            base.exi[ge] += t.decor.exi[fe];
        }
    };
    if (twisted) {
        // fill A-side twists first, then check agreement on doubly colored
        // edges while filling the B side
        std::vector<std::array<int, 2>> twA(ne, {-1, -1});
        for (size_t se = 0; se < cA.surviving.size(); ++se) {
            int ge = cA.surviving[se];
            auto [fe, flip] = ia.emap[se];
            twA[ge] = {ta.decor.tw[fe][flip ? 1 : 0], ta.decor.tw[fe][flip ? 0 : 1]};
        }
        for (size_t se = 0; se < cB.surviving.size(); ++se) {
            int ge = cB.surviving[se];
            auto [fe, flip] = ib.emap[se];
            std::array<int, 2> val{tb.decor.tw[fe][flip ? 1 : 0],
                                   tb.decor.tw[fe][flip ? 0 : 1]};
            if (color[ge] == 2 && twA[ge] != val) return;  // inconsistent twists
            twA[ge] = val;
        }
        for (int ge = 0; ge < ne; ++ge) tw[ge] = twA[ge];
    }
    pull_edge(cA, ia, ta);
    pull_edge(cB, ib, tb);

    // eta distribution: each factor instance goes to one vertex of gamma in
    // the preimage of its original vertex
    std::vector<detail::EtaInstanceRef> instances;
    std::vector<std::vector<int>> choices;
    auto collect = [&](const detail::Contraction& c, const detail::GraphIso& iso,
                       const Term& t) {
        // preimage lists per factor-graph vertex
        std::vector<std::vector<int>> pre(t.graph.num_vertices());
        for (int v = 0; v < gamma.num_vertices(); ++v)
            pre[iso.vmap[c.vertex_map[v]]].push_back(v);
        for (int u = 0; u < t.graph.num_vertices(); ++u)
            for (const auto& f : t.decor.eta[u])
                for (int i = 0; i < f.exp; ++i) {
                    instances.push_back({-1, f.a, f.b});
                    choices.push_back(pre[u]);
                }
    };
    collect(cA, ia, ta);
    collect(cB, ib, tb);

    Rational coeff = ta.coeff * tb.coeff * inv_aut;
    if (count_ab % 2 == 1) coeff = -coeff;

    // enumerate eta assignments and excess psi choices together
    std::vector<int> abedges;
    for (int i = 0; i < ne; ++i)
        if (color[i] == 2) abedges.push_back(i);

    std::function<void(size_t, Decoration&)> assign_eta = [&](size_t idx, Decoration& cur) {
        if (idx == instances.size()) {
            // excess: per doubly colored edge, -(psi' + psi'') expands into
            // a side choice
            std::function<void(size_t, Decoration&)> excess = [&](size_t k, Decoration& d) {
                if (k == abedges.size()) {
                    if (term_codim(gamma, d) <= degree_cap)
                        slices[-count_ab].add_term(gamma, d, coeff);
                    return;
                }
                for (int side = 0; side < 2; ++side) {
                    Decoration next = d;
                    next.hpsi[abedges[k]][side] += 1;
                    excess(k + 1, next);
                }
            };
            Decoration withtw = cur;
            if (twisted) withtw.tw = tw;
            excess(0, withtw);
            return;
        }
        for (int v : choices[idx]) {
            Decoration next = cur;
            eta_multiply(next.eta[v], instances[idx].a, instances[idx].b, 1);
            assign_eta(idx + 1, next);
        }
    };
    if (slices.find(-count_ab) == slices.end()) slices.emplace(-count_ab, TautClass(amb));
    assign_eta(0, base);
}

// Ordinary strata product at r = 1: the excess slices collapse.
inline TautClass product(const TautClass& A, const TautClass& B, int degree_cap) {
    TautClass out(A.ambient());
    for (auto& [rexp, cls] : product_sliced(A, B, degree_cap)) out.accumulate(cls);
    return out;
}

}  // namespace drx
