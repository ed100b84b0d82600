#pragma once

#include "drx/graph.hpp"
#include "drx/rational.hpp"
#include "drx/rpoly.hpp"
#include "drx/target.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace drx {

// A weighting mod r assigns a residue to every half-edge: legs carry the
// ramification values mod r, the two halves of an edge sum to 0 mod r, and
// the residues at each vertex sum to the vertex target mod r. Twists on
// prestable graphs satisfy the same system with zero leg values and the
// vertex degrees as targets.
struct Weighting {
    long long r = 0;
    std::vector<long long> leg_values;                 // per leg, in {0..r-1}
    std::vector<std::array<long long, 2>> edge_values; // per edge (first, second)
};

struct WeightingProblem {
    const StableGraph* graph = nullptr;
    long long r = 0;
    std::vector<long long> leg_values;     // integers, reduced mod r on use
    std::vector<long long> vertex_targets; // integers, compared mod r
};

inline long long mod_reduce(long long x, long long r) {
    long long m = x % r;
    return m < 0 ? m + r : m;
}

// X-valued problem: leg values are the a_i, vertex targets the c1(S)
// pairings of the vertex classes. Global compatibility sum(A) = <c1(S),
// beta> is required exactly, not just mod r.
inline WeightingProblem weighting_problem(const StableGraph& g, const std::vector<long long>& A,
                                          const TargetModel& target, long long r) {
    if (static_cast<int>(A.size()) != g.num_legs())
        throw std::invalid_argument("ramification vector length mismatch");
    WeightingProblem p;
    p.graph = &g;
    p.r = r;
    long long asum = 0;
    for (const auto& l : g.legs) {
        p.leg_values.push_back(A[l.marking - 1]);
        asum += A[l.marking - 1];
    }
    CurveClass beta = zero_class(target.rank());
    for (const auto& v : g.vertices) beta = class_add(beta, v.charge);
    if (asum != target.pair_c1S(beta))
        throw std::invalid_argument("incompatible ramification data");
    for (const auto& v : g.vertices) p.vertex_targets.push_back(target.pair_c1S(v.charge));
    return p;
}

// Twist problem on a prestable graph whose vertex charges are the integer
// degrees d(v); legs are twisted by zero.
inline WeightingProblem twist_problem(const StableGraph& g, long long r) {
    WeightingProblem p;
    p.graph = &g;
    p.r = r;
    long long dsum = 0;
    p.leg_values.assign(g.legs.size(), 0);
    for (const auto& v : g.vertices) {
        if (v.charge.size() != 1)
            throw std::invalid_argument("twist problem expects integer vertex degrees");
        p.vertex_targets.push_back(v.charge[0]);
        dsum += v.charge[0];
    }
    if (dsum != 0) throw std::invalid_argument("incompatible ramification data");
    return p;
}

namespace detail {

inline bool vertex_conditions_hold(const WeightingProblem& p, const Weighting& w) {
    const auto& g = *p.graph;
    std::vector<long long> sums(g.vertices.size(), 0);
    for (size_t li = 0; li < g.legs.size(); ++li) sums[g.legs[li].vertex] += w.leg_values[li];
    for (int ei = 0; ei < g.num_edges(); ++ei) {
        sums[g.edges[ei].first.vertex] += w.edge_values[ei][0];
        sums[g.edges[ei].second.vertex] += w.edge_values[ei][1];
    }
    for (size_t v = 0; v < sums.size(); ++v)
        if (mod_reduce(sums[v] - p.vertex_targets[v], p.r) != 0) return false;
    return true;
}

}  // namespace detail

// Literal constraint search: r^{|E|} candidates filtered by the vertex
// congruences. Deterministic edge-major order.
inline std::vector<Weighting> enumerate_weightings(const WeightingProblem& p) {
    const auto& g = *p.graph;
    long long r = p.r;
    Weighting base;
    base.r = r;
    for (long long lv : p.leg_values) base.leg_values.push_back(mod_reduce(lv, r));
    base.edge_values.assign(g.edges.size(), {0, 0});

    std::vector<Weighting> out;
    int ne = g.num_edges();
    std::vector<long long> pick(ne, 0);
    while (true) {
        Weighting w = base;
        for (int e = 0; e < ne; ++e)
            w.edge_values[e] = {pick[e], mod_reduce(-pick[e], r)};
        if (detail::vertex_conditions_hold(p, w)) out.push_back(std::move(w));

        int pos = ne - 1;
        while (pos >= 0 && pick[pos] == r - 1) pick[pos--] = 0;
        if (pos < 0) break;
        pick[pos]++;
    }
    if (ne == 0) {
        // the loop above emitted the unique candidate already
    }
    return out;
}

inline std::vector<Weighting> enumerate_weightings(const StableGraph& g,
                                                   const std::vector<long long>& A,
                                                   const TargetModel& target, long long r) {
    return enumerate_weightings(weighting_problem(g, A, target, r));
}

// Polynomial in the half-edge residues w_h and in r. Variables are indexed
// 2*edge + side. Slot integrands from the graph sum are single monomials;
// sums of monomials are supported for generality.
struct WeightMonomial {
    Rational coeff;
    std::vector<int> wexp;  // length 2*|E|
    int rexp = 0;
};

struct WeightIntegrand {
    int num_edges = 0;
    std::vector<WeightMonomial> terms;

    static WeightIntegrand constant(int num_edges, const Rational& c) {
        WeightIntegrand f;
        f.num_edges = num_edges;
        f.terms.push_back({c, std::vector<int>(2 * num_edges, 0), 0});
        return f;
    }

    // coeff * prod_e (w_{e,0} w_{e,1})^{m_e}
    static WeightIntegrand edge_monomial(const std::vector<int>& m, const Rational& c) {
        WeightIntegrand f;
        f.num_edges = static_cast<int>(m.size());
        std::vector<int> e(2 * m.size(), 0);
        for (size_t i = 0; i < m.size(); ++i) e[2 * i] = e[2 * i + 1] = m[i];
        f.terms.push_back({c, std::move(e), 0});
        return f;
    }

    int w_degree() const {
        int d = 0;
        for (const auto& t : terms) {
            int s = 0;
            for (int e : t.wexp) s += e;
            d = std::max(d, s);
        }
        return d;
    }

    int r_degree() const {
        int d = 0;
        for (const auto& t : terms) d = std::max(d, t.rexp);
        return d;
    }

    Rational eval(const Weighting& w) const {
        Rational out = 0;
        for (const auto& t : terms) {
            Rational v = t.coeff;
            for (size_t i = 0; i < t.wexp.size(); ++i) {
                if (t.wexp[i] == 0) continue;
                long long val = w.edge_values[i / 2][i % 2];
                v *= rat_pow(Rational(val), t.wexp[i]);
            }
            if (t.rexp != 0) v *= rat_pow(Rational(w.r), t.rexp);
            out += v;
        }
        return out;
    }
};

inline Rational sum_over_weightings_enum(const WeightingProblem& p, const WeightIntegrand& f) {
    Rational out = 0;
    for (const auto& w : enumerate_weightings(p)) out += f.eval(w);
    return out;
}

// Independent algorithm: fix a spanning tree, run free residues over the
// complementary edges, and solve the tree half-edges from the vertex
// congruences leaf-first. Cost r^{h1} instead of r^{|E|}.
inline Rational sum_over_weightings_tree(const WeightingProblem& p, const WeightIntegrand& f) {
    const auto& g = *p.graph;
    long long r = p.r;
    int nv = g.num_vertices(), ne = g.num_edges();

    // BFS spanning tree from vertex 0
    std::vector<int> parent_edge(nv, -1), order;
    std::vector<char> seen(nv, 0);
    seen[0] = 1;
    order.push_back(0);
    for (size_t head = 0; head < order.size(); ++head) {
        int v = order[head];
        for (int ei = 0; ei < ne; ++ei) {
            int a = g.edges[ei].first.vertex, b = g.edges[ei].second.vertex;
            int other = -1;
            if (a == v && !seen[b]) other = b;
            else if (b == v && !seen[a]) other = a;
            if (other >= 0) {
                seen[other] = 1;
                parent_edge[other] = ei;
                order.push_back(other);
            }
        }
    }
    if (static_cast<int>(order.size()) != nv)
        throw std::invalid_argument("graph not connected");

    std::vector<char> in_tree(ne, 0);
    for (int v = 1; v < nv; ++v)
        if (parent_edge[v] >= 0) in_tree[parent_edge[v]] = 1;
    std::vector<int> free_edges;
    for (int ei = 0; ei < ne; ++ei)
        if (!in_tree[ei]) free_edges.push_back(ei);

    Weighting w;
    w.r = r;
    for (long long lv : p.leg_values) w.leg_values.push_back(mod_reduce(lv, r));
    w.edge_values.assign(ne, {0, 0});

    std::vector<long long> leg_sum(nv, 0);
    for (size_t li = 0; li < g.legs.size(); ++li)
        leg_sum[g.legs[li].vertex] += w.leg_values[li];

    Rational total = 0;
    std::vector<long long> pick(free_edges.size(), 0);
    while (true) {
        for (size_t i = 0; i < free_edges.size(); ++i)
            w.edge_values[free_edges[i]] = {pick[i], mod_reduce(-pick[i], r)};

        // children before parents
        for (size_t idx = order.size(); idx-- > 1;) {
            int v = order[idx];
            int pe = parent_edge[v];
            long long acc = leg_sum[v];
            for (int ei = 0; ei < ne; ++ei) {
                if (ei == pe) continue;
                if (g.edges[ei].first.vertex == v) acc += w.edge_values[ei][0];
                if (g.edges[ei].second.vertex == v) acc += w.edge_values[ei][1];
            }
            long long need = mod_reduce(p.vertex_targets[v] - acc, r);
            if (g.edges[pe].first.vertex == v)
                w.edge_values[pe] = {need, mod_reduce(-need, r)};
            else
                w.edge_values[pe] = {mod_reduce(-need, r), need};
        }
        // the root condition holds automatically by global compatibility
        if (!detail::vertex_conditions_hold(p, w))
            throw std::logic_error("root congruence failed despite compatible data");
        total += f.eval(w);

        size_t pos = free_edges.size();
        while (pos > 0 && pick[pos - 1] == r - 1) pick[--pos] = 0;
        if (pos == 0) break;
        pick[pos - 1]++;
    }
    return total;
}

inline Rational sum_over_weightings_enum(const StableGraph& g, const std::vector<long long>& A,
                                         const TargetModel& target, const WeightIntegrand& f,
                                         long long r) {
    return sum_over_weightings_enum(weighting_problem(g, A, target, r), f);
}

inline Rational sum_over_weightings_tree(const StableGraph& g, const std::vector<long long>& A,
                                         const TargetModel& target, const WeightIntegrand& f,
                                         long long r) {
    return sum_over_weightings_tree(weighting_problem(g, A, target, r), f);
}

// Default sampling threshold: r_min = max(sum |a_i|, 2(a_+ + b)) + 1, with
// b the summand bound of the target. Mirrors the proof-side requirement
// r > 2(a_+ + b); the held-out interpolation nodes convert the heuristic
// into a checked assumption.
inline long long default_r_min(const std::vector<long long>& A, const CurveClass& beta,
                               const TargetModel& target) {
    long long abs_sum = 0, plus_sum = 0;
    for (long long a : A) {
        abs_sum += std::llabs(a);
        if (a > 0) plus_sum += a;
    }
    long long b = target.summand_bound_b(beta);
    return std::max(abs_sum, 2 * (plus_sum + b)) + 1;
}

// Samples the direct sum at degree_bound + 3 consecutive integer nodes from
// r_min and interpolates; the last two nodes are held-out checks. Returns
// the polynomial whose coefficients realize the sum for all large r.
template <typename SumFn>
inline RPolynomial sampled_polynomial(SumFn&& sum_at, long long r_min, int degree_bound) {
    std::vector<std::pair<Integer, Rational>> samples;
    for (int k = 0; k <= degree_bound + 2; ++k) {
        long long r = r_min + k;
        samples.push_back({Integer(r), sum_at(r)});
    }
    return interpolate_polynomial(samples, degree_bound);
}

inline RPolynomial weighting_polynomial(const StableGraph& g, const std::vector<long long>& A,
                                        const TargetModel& target, const WeightIntegrand& f,
                                        long long r_min, int degree_bound) {
    return sampled_polynomial(
        [&](long long r) { return sum_over_weightings_tree(g, A, target, f, r); }, r_min,
        degree_bound);
}

inline RPolynomial twist_polynomial(const StableGraph& g, const WeightIntegrand& f,
                                    long long r_min, int degree_bound) {
    return sampled_polynomial(
        [&](long long r) { return sum_over_weightings_tree(twist_problem(g, r), f); }, r_min,
        degree_bound);
}

}  // namespace drx
