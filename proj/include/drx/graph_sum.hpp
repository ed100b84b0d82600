#pragma once

#include "drx/canonical.hpp"
#include "drx/enumerate.hpp"
#include "drx/parallel.hpp"
#include "drx/strata.hpp"
#include "drx/weighting.hpp"

#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace drx {

// One graph-sum computation: DR data with a working degree.
struct DRRequest {
    int g = 0, n = 0;
    std::vector<long long> A;
    CurveClass beta;
    TargetModel target = TargetModel::point();
    int degree = 0;

    DRRequest(int g_, std::vector<long long> A_, CurveClass beta_, TargetModel target_,
              int degree_)
        : g(g_), n(static_cast<int>(A_.size())), A(std::move(A_)), beta(std::move(beta_)),
          target(std::move(target_)), degree(degree_) {
        long long asum = 0;
        for (long long a : A) asum += a;
        if (asum != target.pair_c1S(beta))
            throw std::invalid_argument("sum of A must equal pairing");
        if (degree < 0) throw std::invalid_argument("degree must be non-negative");
    }

    Ambient ambient() const { return Ambient{g, n, beta, target, GraphKind::XValued}; }
};

struct EngineOptions {
    unsigned jobs = 1;
    long long r_min_override = 0;    // 0: use the default threshold
    int max_retries = 2;             // r_min doublings after held-out failures
    std::function<void(const std::string&)> warn = [](const std::string& m) {
        std::cerr << "[drx] " << m << "\n";
    };
};

namespace detail {

// One expanded monomial of the graph kernel: the decoration, its rational
// coefficient (excluding weight values), and the per-edge powers m_e of
// w(h)w(h') it multiplies.
struct KernelSlot {
    Decoration decor;
    Rational coeff;
    std::vector<int> edge_m;
};

// Expands the product of leg, vertex, and edge factors of the graph kernel
// to decoration degree exactly dec_degree:
//   legs:     exp(a_i^2/2 psi_i + a_i xi_i)
//   vertices: exp(-eta_{0,2}(v)/2)
//   edges:    sum_{m>=1} (-1)^{m-1} (w w'/2)^m / m! (psi+psi')^{m-1}
// For a point target xi and eta terms are skipped (they normalize to zero).
inline std::vector<KernelSlot> kernel_slots(const StableGraph& g,
                                            const std::vector<long long>& leg_a,
                                            bool leg_factors, bool keep_xi_eta,
                                            int dec_degree) {
    std::vector<KernelSlot> out;
    int ne = g.num_edges(), nv = g.num_vertices(), nl = g.num_legs();

    KernelSlot cur;
    cur.decor = Decoration::empty_for(g);
    cur.coeff = 1;
    cur.edge_m.assign(ne, 1);

    // stage order: edges, then vertices, then legs
    std::function<void(int, int)> legs_rec = [&](int li, int budget) {
        if (li == nl || !leg_factors) {
            if (budget == 0) out.push_back(cur);
            return;
        }
        long long a = leg_factors ? leg_a[li] : 0;
        Rational half_a2 = Rational(a * a, 2);
        for (int p = 0; p <= budget; ++p) {
            if (p > 0 && a == 0) break;
            Rational pc = rat_pow(half_a2, p) / Rational(factorial(p));
            for (int q = 0; p + q <= budget; ++q) {
                if (q > 0 && (a == 0 || !keep_xi_eta)) break;
                Rational qc = rat_pow(Rational(a), q) / Rational(factorial(q));
                auto saved = cur;
                cur.decor.legs[li].psi += p;
                cur.decor.legs[li].xi += q;
                cur.coeff *= pc * qc;
                legs_rec(li + 1, budget - p - q);
                cur = saved;
            }
        }
    };

    std::function<void(int, int)> vertex_rec = [&](int vi, int budget) {
        if (vi == nv) {
            if (leg_factors) {
                legs_rec(0, budget);
            } else if (budget == 0) {
                out.push_back(cur);
            }
            return;
        }
        vertex_rec(vi + 1, budget);  // s_v = 0
        if (!keep_xi_eta) return;
        for (int s = 1; s <= budget; ++s) {
            auto saved = cur;
            cur.decor.eta[vi].push_back({0, 2, s});
            cur.coeff *= rat_pow(Rational(-1, 2), s) / Rational(factorial(s));
            vertex_rec(vi + 1, budget - s);
            cur = saved;
        }
    };

    std::function<void(int, int)> edge_rec = [&](int ei, int budget) {
        if (ei == ne) {
            vertex_rec(0, budget);
            return;
        }
        for (int m = 1; m - 1 <= budget; ++m) {
            Rational base = rat_pow(Rational(1, 2), m) / Rational(factorial(m));
            if (m % 2 == 0) base = -base;
            for (int i = 0; i <= m - 1; ++i) {
                int j = m - 1 - i;
                auto saved = cur;
                cur.decor.hpsi[ei][0] += i;
                cur.decor.hpsi[ei][1] += j;
                cur.coeff *= base * Rational(binomial(m - 1, i));
                cur.edge_m[ei] = m;
                edge_rec(ei + 1, budget - (m - 1));
                cur = saved;
            }
        }
    };

    if (dec_degree >= 0) edge_rec(0, dec_degree);
    return out;
}

inline Rational edge_monomial_value(const Weighting& w, const std::vector<int>& edge_m) {
    Rational v = 1;
    for (size_t e = 0; e < edge_m.size(); ++e) {
        Rational x = Rational(w.edge_values[e][0]) * Rational(w.edge_values[e][1]);
        v *= rat_pow(x, edge_m[e]);
    }
    return v;
}

inline std::string graph_label(const StableGraph& g) {
    std::ostringstream os;
    os << "graph[V=" << g.num_vertices() << ",E=" << g.num_edges() << ",cert="
       << canonicalize(g).cert << "]";
    return os.str();
}

// Constant term in r of r^{-h1} * sum over weightings/twists of the graph
// kernel, one interpolation per edge-power profile. Verified against two
// held-out nodes; on failure the threshold doubles and the sampling
// restarts, a bounded number of times, with a logged warning.
template <typename ProblemFn>
inline TautClass graph_constant_term(const StableGraph& g, const Ambient& amb,
                                     const std::vector<long long>& leg_a, bool leg_factors,
                                     bool keep_xi_eta, int degree, long long r_min_initial,
                                     const EngineOptions& opt, ProblemFn&& problem_at) {
    TautClass out(amb);
    int dec_degree = degree - g.num_edges();
    if (dec_degree < 0) return out;

    auto slots = kernel_slots(g, leg_a, leg_factors, keep_xi_eta, dec_degree);
    if (slots.empty()) return out;

    int h1 = first_betti(g);
    Rational inv_aut = Rational(1, Integer(canonicalize(g).aut_order));

    std::map<std::vector<int>, Rational> profile_constant;
    for (const auto& slot : slots) {
        auto it = profile_constant.find(slot.edge_m);
        if (it != profile_constant.end()) continue;

        int wdeg = 0;
        for (int m : slot.edge_m) wdeg += 2 * m;
        int bound = wdeg + h1;

        long long r_min = r_min_initial;
        RPolynomial poly;
        for (int attempt = 0;; ++attempt) {
            try {
                poly = sampled_polynomial(
                    [&](long long r) {
                        auto problem = problem_at(r);
                        WeightIntegrand f = WeightIntegrand::edge_monomial(slot.edge_m, 1);
                        Rational s = sum_over_weightings_tree(problem, f);
                        return s;
                    },
                    r_min, bound);
                for (int k = 0; k < h1; ++k)
                    if (poly.coeff(k) != 0)
                        throw PolynomialityError("polynomiality violated");
                break;
            } catch (const PolynomialityError&) {
                if (attempt >= opt.max_retries)
                    throw PolynomialityError("polynomiality violated at " + graph_label(g));
                r_min *= 2;
                opt.warn("held-out node mismatch, retrying with r_min = " +
                         std::to_string(r_min) + " on " + graph_label(g));
            }
        }
        profile_constant.emplace(slot.edge_m, poly.coeff(h1));
    }

    for (const auto& slot : slots) {
        const Rational& c = profile_constant.at(slot.edge_m);
        if (c == 0) continue;
        out.add_term(g, slot.decor, slot.coeff * c * inv_aut);
    }
    return out;
}

}  // namespace detail

// Kernel expansion for a single graph and fixed weighting; the prefactor
// r^{-h1}/|Aut| is left to the caller.
inline TautClass graph_contribution_fixed_r(const StableGraph& g, const Weighting& w,
                                            const DRRequest& req) {
    TautClass out(req.ambient());
    int dec_degree = req.degree - g.num_edges();
    if (dec_degree < 0) return out;
    std::vector<long long> leg_a(g.legs.size());
    for (size_t li = 0; li < g.legs.size(); ++li) leg_a[li] = req.A[g.legs[li].marking - 1];
    bool keep = req.target.kind() != TargetKind::Point;
    for (const auto& slot :
         detail::kernel_slots(g, leg_a, true, keep, dec_degree))
        out.add_term(g, slot.decor, slot.coeff * detail::edge_monomial_value(w, slot.edge_m));
    return out;
}

// The degree-d graph-sum class at a fixed modulus r >= 2: sum over graphs
// and weightings mod r, each graph weighted by r^{-h1}/|Aut|.
inline TautClass compute_P_fixed_r(const DRRequest& req, long long r,
                                   const EngineOptions& opt = {}) {
    if (r < 2) throw std::invalid_argument("modulus must be at least 2");
    auto graphs = enumerate_stable_graphs(req.g, req.n, req.beta, req.target, req.degree);
    std::vector<TautClass> parts(graphs.size());
    parallel_for(graphs.size(), opt.jobs, [&](std::size_t i) {
        const auto& g = graphs[i];
        TautClass acc(req.ambient());
        Rational pref = rat_pow(Rational(1, r), first_betti(g)) /
                        Rational(Integer(canonicalize(g).aut_order));
        for (const auto& w : enumerate_weightings(g, req.A, req.target, r))
            acc.accumulate(graph_contribution_fixed_r(g, w, req));
        acc.scale_by(pref);
        parts[i] = std::move(acc);
    });
    TautClass out(req.ambient());
    for (auto& p : parts) out.accumulate(p);
    return out;
}

// The r = 0 constant term of the graph sum: per-graph, per-profile weight
// sums are sampled in r and interpolated, and the constant term of
// r^{-h1} * S(r) is read off as coefficient h1.
inline TautClass compute_P_constant(const DRRequest& req, const EngineOptions& opt = {}) {
    auto graphs = enumerate_stable_graphs(req.g, req.n, req.beta, req.target, req.degree);
    long long r_min = opt.r_min_override > 0 ? opt.r_min_override
                                             : default_r_min(req.A, req.beta, req.target);
    if (r_min < 2) r_min = 2;
    bool keep = req.target.kind() != TargetKind::Point;

    std::vector<TautClass> parts(graphs.size());
    parallel_for(graphs.size(), opt.jobs, [&](std::size_t i) {
        const auto& g = graphs[i];
        std::vector<long long> leg_a(g.legs.size());
        for (size_t li = 0; li < g.legs.size(); ++li)
            leg_a[li] = req.A[g.legs[li].marking - 1];
        parts[i] = detail::graph_constant_term(
            g, req.ambient(), leg_a, true, keep, req.degree, r_min, opt,
            [&](long long r) { return weighting_problem(g, req.A, req.target, r); });
    });
    TautClass out(req.ambient());
    for (auto& p : parts) out.accumulate(p);
    return out;
}

// The double ramification cycle as a formal class: the degree-g constant
// term of the graph sum.
inline TautClass compute_DR(int g, const std::vector<long long>& A, const CurveClass& beta,
                            const TargetModel& target, const EngineOptions& opt = {}) {
    return compute_P_constant(DRRequest(g, A, beta, target, g), opt);
}

// Constant term of the twisted kernel on prestable graphs: no leg factors,
// vertex factor exp(-eta/2), the same edge factor with twists in place of
// weights. The degree context fixes which graphs contribute.
inline TautClass chiodo_constant_class(int g, int n, const std::vector<StableGraph>& prestable,
                                       int k, long long r_min = 2,
                                       const EngineOptions& opt = {}) {
    Ambient amb{g, n, {}, TargetModel::point(), GraphKind::PrestableZ};
    if (r_min < 2) r_min = 2;
    std::vector<TautClass> parts(prestable.size());
    parallel_for(prestable.size(), opt.jobs, [&](std::size_t i) {
        const auto& pg = prestable[i];
        std::vector<long long> no_legs(pg.legs.size(), 0);
        parts[i] = detail::graph_constant_term(pg, amb, no_legs, false, true, k, r_min, opt,
                                               [&](long long r) { return twist_problem(pg, r); });
    });
    TautClass out(amb);
    for (auto& p : parts) out.accumulate(p);
    return out;
}

}  // namespace drx
