#pragma once

#include "drx/bernoulli.hpp"
#include "drx/rational.hpp"
#include "drx/series.hpp"

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

namespace drx {

namespace detail {

inline const Rational& cached_factorial(unsigned n) {
    static const std::vector<Rational> table = [] {
        std::vector<Rational> t;
        Integer f = 1;
        t.emplace_back(f);
        for (unsigned i = 1; i <= 320; ++i) {
            f *= i;
            t.emplace_back(f);
        }
        return t;
    }();
    if (n >= table.size()) throw std::invalid_argument("factorial cache exceeded");
    return table[n];
}

}  // namespace detail

// Intersection data of the resolved A_ell surface singularity: the lattice
// of exceptional curve classes with pairing matrix C (C_ii = -2, C_ij = 1
// on Dynkin edges), its exact inverse, and a chosen root alpha. Divisor
// insertions are given by their pairing vectors against the curve basis,
// so the dual of the mu-th simple root is the mu-th unit vector and the
// mu-th exceptional divisor pairs as the mu-th column of C.
class AellData {
  public:
    AellData(unsigned ell, std::vector<long long> alpha) : ell_(ell), alpha_(std::move(alpha)) {
        if (ell_ == 0 || alpha_.size() != ell_)
            throw std::invalid_argument("alpha length must equal ell");
        cartan_.assign(ell_, std::vector<long long>(ell_, 0));
        for (unsigned i = 0; i < ell_; ++i) {
            cartan_[i][i] = -2;
            if (i + 1 < ell_) {
                cartan_[i][i + 1] = 1;
                cartan_[i + 1][i] = 1;
            }
        }
        invert_cartan();
        if (pair_alpha_alpha() != -2) throw std::invalid_argument("alpha is not a root");
    }

    static AellData with_root(unsigned ell, unsigned lo, unsigned hi) {
        // the root e_lo + ... + e_hi, 1-indexed inclusive
        std::vector<long long> a(ell, 0);
        for (unsigned i = lo; i <= hi; ++i) a.at(i - 1) = 1;
        return AellData(ell, std::move(a));
    }

    unsigned ell() const { return ell_; }
    const std::vector<long long>& alpha() const { return alpha_; }
    const std::vector<std::vector<long long>>& cartan() const { return cartan_; }
    const Rational& cartan_inverse(unsigned mu, unsigned nu) const { return cinv_[mu][nu]; }

    // pairing of alpha with a divisor given by its curve-pairing vector
    Rational pair_alpha(const std::vector<Rational>& omega) const {
        Rational out = 0;
        for (unsigned i = 0; i < ell_; ++i) out += Rational(alpha_[i]) * omega[i];
        return out;
    }

    // pairing of alpha with the mu-th exceptional divisor: (C alpha)_mu
    Rational pair_alpha_divisor(unsigned mu) const {
        Rational out = 0;
        for (unsigned i = 0; i < ell_; ++i) out += Rational(cartan_[i][mu]) * Rational(alpha_[i]);
        return out;
    }

    long long pair_alpha_alpha() const {
        long long out = 0;
        for (unsigned i = 0; i < ell_; ++i)
            for (unsigned j = 0; j < ell_; ++j) out += alpha_[i] * cartan_[i][j] * alpha_[j];
        return out;
    }

  private:
    void invert_cartan() {
        unsigned n = ell_;
        std::vector<std::vector<Rational>> m(n, std::vector<Rational>(2 * n, 0));
        for (unsigned i = 0; i < n; ++i) {
            for (unsigned j = 0; j < n; ++j) m[i][j] = Rational(cartan_[i][j]);
            m[i][n + i] = 1;
        }
        for (unsigned col = 0; col < n; ++col) {
            unsigned pivot = col;
            while (pivot < n && m[pivot][col] == 0) ++pivot;
            if (pivot == n) throw std::logic_error("Cartan matrix singular");
            std::swap(m[col], m[pivot]);
            Rational inv = Rational(1) / m[col][col];
            for (unsigned j = 0; j < 2 * n; ++j) m[col][j] *= inv;
            for (unsigned row = 0; row < n; ++row) {
                if (row == col || m[row][col] == 0) continue;
                Rational f = m[row][col];
                for (unsigned j = 0; j < 2 * n; ++j) m[row][j] -= f * m[col][j];
            }
        }
        cinv_.assign(n, std::vector<Rational>(n));
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) cinv_[i][j] = m[i][n + j];
    }

    unsigned ell_;
    std::vector<long long> alpha_;
    std::vector<std::vector<long long>> cartan_;
    std::vector<std::vector<Rational>> cinv_;
};

// Reduced invariant of the resolved surface with divisor insertions
// tau_{b_i}(omega_i) and descendents of the identity tau_{c_j}(1), for
// curve class d * alpha (Maulik's evaluation):
//   (2g+p+q-3)!/(2g+p-3)! d^{2g+p-3}
//   prod_i b_i!/(2b_i+1)! (-1/2)^{b_i} (alpha, omega_i)
//   prod_j (c_j-1)!/(2c_j-1)! (-1/2)^{c_j-1},
// zero unless sum b + sum c = g + q. The factorial ratio is the rising
// product prod_{j=1..q} (2g+p-3+j), which cancels entirely when q = 0;
// patterns with q > 0 below the stable range are rejected rather than
// extended by convention.
inline Rational maulik_invariant(int g, long long d, const std::vector<Rational>& pairings,
                                 const std::vector<int>& b, const std::vector<int>& c) {
    if (pairings.size() != b.size())
        throw std::invalid_argument("pairings and b must have equal length");
    if (g < 0) throw std::invalid_argument("genus must be non-negative");
    if (d < 1) throw std::invalid_argument("curve class must be a positive root multiple");
    int p = static_cast<int>(b.size());
    int q = static_cast<int>(c.size());
    for (int bi : b)
        if (bi < 0) throw std::invalid_argument("b_i must be non-negative");
    for (int cj : c)
        if (cj <= 0) throw std::invalid_argument("c_j must be positive");

    long long bc_sum = 0;
    for (int bi : b) bc_sum += bi;
    for (int cj : c) bc_sum += cj;
    if (bc_sum != g + q) return 0;

    long long base = 2LL * g + p - 3;
    if (q > 0 && base < 0) throw std::domain_error("unstable insertion pattern");

    Rational out = rat_pow(Rational(d), base);
    for (int j = 1; j <= q; ++j) out *= Rational(base + j);
    for (int i = 0; i < p; ++i) {
        out *= detail::cached_factorial(b[i]) / detail::cached_factorial(2 * b[i] + 1);
        out *= rat_pow(Rational(-1, 2), b[i]);
        out *= pairings[i];
    }
    for (int j = 0; j < q; ++j) {
        out *= detail::cached_factorial(c[j] - 1) / detail::cached_factorial(2 * c[j] - 1);
        out *= rat_pow(Rational(-1, 2), c[j] - 1);
    }
    return out;
}

namespace detail {

inline void bounded_tuples(int total_cap, int parts, std::vector<int>& cur,
                           const std::function<void(const std::vector<int>&, int)>& emit,
                           int used = 0) {
    if (parts == 0) {
        emit(cur, used);
        return;
    }
    for (int v = 0; used + v <= total_cap; ++v) {
        cur.push_back(v);
        bounded_tuples(total_cap, parts - 1, cur, emit, used + v);
        cur.pop_back();
    }
}

}  // namespace detail

// Direct sum over the number k of loops of the one-vertex degeneration
// formula: node branches carry psi powers c', c'' and divisor pairs (mu,
// nu) contracted with the inverse Cartan matrix and Bernoulli factors, legs
// carry (a_i^2/2)^{b_i}/b_i!, and the remaining invariant at genus g - k is
// Maulik's. Indices beyond the dimensional constraint
// sum b + sum(c'+c'') = g - k never arise, so k > g never contributes.
inline Rational reduced_dr_invariant_graphsum(const AellData& data, int g, long long d,
                                              const std::vector<long long>& A,
                                              const std::vector<std::vector<Rational>>& omegas) {
    if (g < 0) throw std::invalid_argument("genus must be non-negative");
    if (d < 1) return 0;  // beta not a nonzero root multiple
    if (A.size() != omegas.size())
        throw std::invalid_argument("need one divisor insertion per marking");
    int n = static_cast<int>(A.size());
    unsigned ell = data.ell();

    std::vector<Rational> leg_pair(n);
    for (int i = 0; i < n; ++i) leg_pair[i] = data.pair_alpha(omegas[i]);
    std::vector<Rational> div_pair(ell);
    for (unsigned mu = 0; mu < ell; ++mu) div_pair[mu] = data.pair_alpha_divisor(mu);

    Rational total = 0;
    for (int k = 0; k <= g; ++k) {
        int budget = g - k;
        Rational outer = Rational(1, int_pow(2, k)) / Rational(factorial(k));

        std::vector<int> bvec;
        detail::bounded_tuples(budget, n, bvec, [&](const std::vector<int>& b, int used_b) {
            std::vector<int> cprime;
            detail::bounded_tuples(
                budget - used_b, k, cprime,
                [&](const std::vector<int>& cp, int used_cp) {
                    std::vector<int> cdouble;
                    detail::bounded_tuples(
                        budget - used_b - used_cp, k, cdouble,
                        [&](const std::vector<int>& cpp, int used_cpp) {
                            if (used_b + used_cp + used_cpp != budget) return;

                            Rational loop_free = outer;
                            for (int i = 0; i < n; ++i)
                                loop_free *= rat_pow(Rational(A[i] * A[i], 2), b[i]) /
                                             Rational(factorial(b[i]));
                            for (int j = 0; j < k; ++j) {
                                int cj = cp[j] + cpp[j] + 1;
                                loop_free *= -bernoulli_number(2 * cj) / Rational(2 * cj);
                                loop_free *= rat_pow(Rational(1, 2), cp[j]) /
                                             Rational(factorial(cp[j]));
                                loop_free *= rat_pow(Rational(1, 2), cpp[j]) /
                                             Rational(factorial(cpp[j]));
                            }

                            // branch divisor indices contracted with C^{-1}
                            std::vector<unsigned> mu(k, 0), nu(k, 0);
                            std::function<void(int, Rational)> loop_idx = [&](int j,
                                                                              Rational acc) {
                                if (j == k) {
                                    std::vector<Rational> pairings = leg_pair;
                                    std::vector<int> bs(b);
                                    for (int t = 0; t < k; ++t) {
                                        pairings.push_back(div_pair[mu[t]]);
                                        bs.push_back(cp[t]);
                                    }
                                    for (int t = 0; t < k; ++t) {
                                        pairings.push_back(div_pair[nu[t]]);
                                        bs.push_back(cpp[t]);
                                    }
                                    total += acc *
                                             maulik_invariant(g - k, d, pairings, bs, {});
                                    return;
                                }
                                for (mu[j] = 0; mu[j] < ell; ++mu[j])
                                    for (nu[j] = 0; nu[j] < ell; ++nu[j])
                                        loop_idx(j + 1,
                                                 acc * data.cartan_inverse(mu[j], nu[j]));
                            };
                            loop_idx(0, loop_free);
                        });
                },
                0);
        });
    }
    return total;
}

// Closed evaluation: d^{2g+n-3} prod (alpha, omega_i) [t^{2g}]
// prod S(a_i t) / S(t)^2.
inline Rational reduced_dr_invariant_closed(const AellData& data, int g, long long d,
                                            const std::vector<long long>& A,
                                            const std::vector<std::vector<Rational>>& omegas) {
    if (g < 0) throw std::invalid_argument("genus must be non-negative");
    if (d < 1) return 0;
    if (A.size() != omegas.size())
        throw std::invalid_argument("need one divisor insertion per marking");
    int n = static_cast<int>(A.size());

    Rational out = rat_pow(Rational(d), 2LL * g + n - 3);
    for (int i = 0; i < n; ++i) out *= data.pair_alpha(omegas[i]);

    unsigned order = 2 * g;
    TSeries S = series_S(order);
    TSeries acc = S.inverse();
    acc = series_mul(acc, acc);
    for (int i = 0; i < n; ++i) acc = series_mul(acc, S.rescale_argument(Rational(A[i])));
    return out * series_coeff(acc, order);
}

}  // namespace drx
