#pragma once

#include "drx/graph_sum.hpp"

#include <map>
#include <vector>

namespace drx {

// Reference path used by the test suites and the self-test command. It
// shares only the graph enumeration and the strata normalization with the
// production path: the kernel is expanded by direct truncated polynomial
// multiplication per weighting (no symbolic weight profiles), weightings
// come from the constraint-search enumerator (no spanning tree), and the
// r = 0 value is read from a Lagrange interpolation of whole-class
// coefficients across consecutive moduli.
namespace naive {

namespace detail {

// decoration monomial on a fixed labeled graph, flattened:
// [per leg: psi, xi | per edge: psi1, psi2 | per vertex: eta_{0,2} power]
using Key = std::vector<int>;
using Poly = std::map<Key, Rational>;

inline int key_degree(const Key& k) {
    int d = 0;
    for (int x : k) d += x;
    return d;
}

inline void mul_accumulate(Poly& dst, const Key& base, const Rational& base_c,
                           const Key& shift, const Rational& c, int cap) {
    Key k = base;
    for (size_t i = 0; i < k.size(); ++i) k[i] += shift[i];
    if (key_degree(k) > cap) return;
    auto& slot = dst[k];
    slot += base_c * c;
    if (slot == 0) dst.erase(k);
}

}  // namespace detail

inline TautClass P_fixed_r(const DRRequest& req, long long r) {
    if (r < 2) throw std::invalid_argument("modulus must be at least 2");
    TautClass out(req.ambient());
    bool point = req.target.kind() == TargetKind::Point;

    for (const auto& g : enumerate_stable_graphs(req.g, req.n, req.beta, req.target,
                                                 req.degree)) {
        int dd = req.degree - g.num_edges();
        if (dd < 0) continue;
        int nl = g.num_legs(), ne = g.num_edges(), nv = g.num_vertices();
        size_t width = static_cast<size_t>(2 * nl + 2 * ne + nv);

        Rational pref = rat_pow(Rational(1, r), first_betti(g)) /
                        Rational(Integer(canonicalize(g).aut_order));

        for (const auto& w : enumerate_weightings(g, req.A, req.target, r)) {
            detail::Poly poly{{detail::Key(width, 0), Rational(1)}};

            for (int li = 0; li < nl; ++li) {
                long long a = req.A[g.legs[li].marking - 1];
                detail::Poly next;
                for (int p = 0; p <= dd; ++p) {
                    if (p > 0 && a == 0) break;
                    for (int q = 0; p + q <= dd; ++q) {
                        if (q > 0 && (a == 0 || point)) break;
                        Rational c = rat_pow(Rational(a * a, 2), p) / Rational(factorial(p)) *
                                     rat_pow(Rational(a), q) / Rational(factorial(q));
                        detail::Key shift(width, 0);
                        shift[2 * li] = p;
                        shift[2 * li + 1] = q;
                        for (const auto& [bk, bc] : poly)
                            detail::mul_accumulate(next, bk, bc, shift, c, dd);
                    }
                }
                poly = std::move(next);
            }

            for (int vi = 0; vi < nv && !point; ++vi) {
                detail::Poly next;
                for (int s = 0; s <= dd; ++s) {
                    Rational c = rat_pow(Rational(-1, 2), s) / Rational(factorial(s));
                    detail::Key shift(width, 0);
                    shift[2 * nl + 2 * ne + vi] = s;
                    for (const auto& [bk, bc] : poly)
                        detail::mul_accumulate(next, bk, bc, shift, c, dd);
                }
                poly = std::move(next);
            }

            for (int ei = 0; ei < ne; ++ei) {
                Rational x = Rational(w.edge_values[ei][0]) * Rational(w.edge_values[ei][1]);
                detail::Poly next;
                for (int m = 1; m - 1 <= dd; ++m) {
                    Rational c = rat_pow(x / 2, m) / Rational(factorial(m));
                    if (m % 2 == 0) c = -c;
                    for (int i = 0; i + 1 <= m; ++i) {
                        Rational ci = c * Rational(binomial(m - 1, i));
                        detail::Key shift(width, 0);
                        shift[2 * nl + 2 * ei] = i;
                        shift[2 * nl + 2 * ei + 1] = m - 1 - i;
                        for (const auto& [bk, bc] : poly)
                            detail::mul_accumulate(next, bk, bc, shift, ci, dd);
                    }
                }
                poly = std::move(next);
            }

            for (const auto& [key, c] : poly) {
                if (detail::key_degree(key) != dd) continue;
                Decoration d = Decoration::empty_for(g);
                for (int li = 0; li < nl; ++li)
                    d.legs[li] = {key[2 * li], key[2 * li + 1]};
                for (int ei = 0; ei < ne; ++ei)
                    d.hpsi[ei] = {key[2 * nl + 2 * ei], key[2 * nl + 2 * ei + 1]};
                for (int vi = 0; vi < nv; ++vi)
                    if (int s = key[2 * nl + 2 * ne + vi]; s > 0)
                        d.eta[vi].push_back({0, 2, s});
                out.add_term(g, d, pref * c);
            }
        }
    }
    return out;
}

// Whole-class interpolation: evaluate at 2d+3 consecutive moduli from
// r_min, fit each coefficient by a polynomial of degree at most 2d with
// two held-out nodes, and take the value at zero.
inline TautClass P_constant(const DRRequest& req, long long r_min_override = 0) {
    long long r_min = r_min_override > 0 ? r_min_override
                                         : default_r_min(req.A, req.beta, req.target);
    if (r_min < 2) r_min = 2;
    int bound = 2 * req.degree;
    int nodes = bound + 3;

    std::vector<TautClass> values;
    values.reserve(nodes);
    for (int k = 0; k < nodes; ++k) values.push_back(P_fixed_r(req, r_min + k));

    std::map<std::string, std::pair<StableGraph, Decoration>> keys;
    for (const auto& cls : values)
        for (const auto& [key, term] : cls.terms()) keys.emplace(key, std::make_pair(term.graph, term.decor));

    TautClass out(req.ambient());
    for (const auto& [key, gd] : keys) {
        std::vector<std::pair<Integer, Rational>> samples;
        for (int k = 0; k < nodes; ++k) {
            Rational v = 0;
            auto it = values[k].terms().find(key);
            if (it != values[k].terms().end()) v = it->second.coeff;
            samples.push_back({Integer(r_min + k), v});
        }
        auto poly = interpolate_polynomial(samples, bound);
        out.add_term(gd.first, gd.second, poly.eval(0));
    }
    return out;
}

}  // namespace naive

}  // namespace drx
