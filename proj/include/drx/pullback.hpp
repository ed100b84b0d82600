#pragma once

#include "drx/strata.hpp"

#include <functional>
#include <vector>

namespace drx {

namespace detail {

// Expands the pull-back substitutions on one decorated term. The original
// decorations rewrite into final X-valued classes:
//   xi_i          -> xi_i + a_i psi_i
//   eta_{0,b}(v)  -> eta_{0,b} - sum_{i at v} sum_{k=1}^{b} C(b,k) a_i^k
//                    psi_i^{k-1} xi_i^{b-k}
//   eta_{a,b}, a>0, psi and xi_e untouched.
// Produced xi's are final; no second substitution pass applies.
inline void expand_substitutions(const StableGraph& graph, const Decoration& base,
                                 const std::vector<long long>& leg_a, const Rational& coeff,
                                 TautClass& out) {
    struct EtaInstance {
        int vertex, b;
    };
    std::vector<EtaInstance> eta_instances;
    Decoration skeleton = base;
    for (int v = 0; v < graph.num_vertices(); ++v) {
        std::vector<EtaFactor> keep;
        for (const auto& f : skeleton.eta[v]) {
            if (f.a == 0) {
                for (int i = 0; i < f.exp; ++i) eta_instances.push_back({v, f.b});
            } else {
                keep.push_back(f);
            }
        }
        skeleton.eta[v] = std::move(keep);
    }

    std::vector<std::vector<int>> legs_at(graph.num_vertices());
    for (size_t li = 0; li < graph.legs.size(); ++li)
        legs_at[graph.legs[li].vertex].push_back(static_cast<int>(li));

    // Depth-first over substitution choices: first the leg xi powers, then
    // each eta_{0,b} instance.
    std::function<void(size_t, Decoration&, Rational)> leg_stage;
    std::function<void(size_t, Decoration&, Rational)> eta_stage;

    eta_stage = [&](size_t idx, Decoration& cur, Rational c) {
        if (idx == eta_instances.size()) {
            out.add_term(graph, cur, c);
            return;
        }
        auto [v, b] = eta_instances[idx];
        {
            Decoration next = cur;
            eta_multiply(next.eta[v], 0, b, 1);
            eta_stage(idx + 1, next, c);
        }
        for (int li : legs_at[v]) {
            long long a = leg_a[li];
            if (a == 0) continue;
            for (int k = 1; k <= b; ++k) {
                Decoration next = cur;
                next.legs[li].psi += k - 1;
                next.legs[li].xi += b - k;
                Rational factor = -Rational(binomial(b, k)) * rat_pow(Rational(a), k);
                eta_stage(idx + 1, next, c * factor);
            }
        }
    };

    leg_stage = [&](size_t li, Decoration& cur, Rational c) {
        if (li == graph.legs.size()) {
            eta_stage(0, cur, c);
            return;
        }
        int q = base.legs[li].xi;
        if (q == 0 || leg_a[li] == 0) {
            leg_stage(li + 1, cur, c);
            return;
        }
        for (int k = 0; k <= q; ++k) {
            Decoration next = cur;
            next.legs[li].psi += k;
            next.legs[li].xi -= k;
            Rational factor = Rational(binomial(q, k)) * rat_pow(Rational(leg_a[li]), k);
            leg_stage(li + 1, next, c * factor);
        }
    };

    leg_stage(0, skeleton, coeff);
}

}  // namespace detail

// Pull-back of a prestable-Z class to the moduli of maps: vertex degrees
// d(v) resum into all effective classes beta(v) with
// <c1(S), beta(v)> - sum of a_i over legs at v = d(v), then the xi and eta
// substitution rules apply. Vertices forced to an unstable (genus 0, class
// 0, valence <= 2) state index empty strata and contribute zero.
inline TautClass pullback_piZ(const TautClass& cls, const std::vector<long long>& A,
                              const CurveClass& beta, const TargetModel& target) {
    if (cls.ambient().kind != GraphKind::PrestableZ)
        throw std::invalid_argument("pullback_piZ expects a prestable-Z class");
    if (static_cast<int>(A.size()) != cls.ambient().n)
        throw std::invalid_argument("ramification vector length mismatch");
    long long asum = 0;
    for (long long a : A) asum += a;
    if (asum != target.pair_c1S(beta))
        throw std::invalid_argument("incompatible ramification data");

    Ambient xa;
    xa.g = cls.ambient().g;
    xa.n = cls.ambient().n;
    xa.beta = beta;
    xa.target = target;
    xa.kind = GraphKind::XValued;
    TautClass out(xa);

    for (const auto& [key, term] : cls.terms()) {
        const StableGraph& pre = term.graph;
        int nv = pre.num_vertices();

        std::vector<long long> leg_a(pre.legs.size());
        std::vector<long long> leg_sum(nv, 0);
        for (size_t li = 0; li < pre.legs.size(); ++li) {
            leg_a[li] = A[pre.legs[li].marking - 1];
            leg_sum[pre.legs[li].vertex] += leg_a[li];
        }

        for (const auto& split : target.effective_splittings(beta, nv)) {
            bool match = true;
            for (int v = 0; v < nv && match; ++v)
                match = target.pair_c1S(split[v]) - leg_sum[v] == pre.vertices[v].charge[0];
            if (!match) continue;

            StableGraph xg = pre;
            bool stable = true;
            for (int v = 0; v < nv; ++v) {
                xg.vertices[v].charge = split[v];
                if (class_is_zero(split[v]) && 2 * xg.vertices[v].genus - 2 + xg.valence(v) <= 0)
                    stable = false;
            }
            if (!stable) continue;

            detail::expand_substitutions(xg, term.decor, leg_a, term.coeff, out);
        }
    }
    return out;
}

}  // namespace drx
