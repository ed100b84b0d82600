#pragma once

#include "drx/rational.hpp"

#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace drx {

namespace detail {

// Exact polynomial in (tw, psi, psi') and Laurent in r; psi-total degree
// truncated. Enough ring to exercise the one-edge sector of the Chern
// character formulas.
class EdgeRing {
  public:
    using Key = std::tuple<int, int, int, int>;  // tw, r, psi, psi2

    explicit EdgeRing(int psi_cap) : psi_cap_(psi_cap) {}

    static EdgeRing monomial(int psi_cap, int tw, int r, int p1, int p2, const Rational& c) {
        EdgeRing out(psi_cap);
        if (p1 + p2 <= psi_cap) out.terms_[{tw, r, p1, p2}] = c;
        return out;
    }

    void add(const EdgeRing& o, const Rational& scale = 1) {
        for (const auto& [k, v] : o.terms_) {
            auto& slot = terms_[k];
            slot += v * scale;
            if (slot == 0) terms_.erase(k);
        }
    }

    EdgeRing mul(const EdgeRing& o) const {
        EdgeRing out(psi_cap_);
        for (const auto& [ka, va] : terms_)
            for (const auto& [kb, vb] : o.terms_) {
                int p = std::get<2>(ka) + std::get<2>(kb);
                int q = std::get<3>(ka) + std::get<3>(kb);
                if (p + q > psi_cap_) continue;
                Key k{std::get<0>(ka) + std::get<0>(kb), std::get<1>(ka) + std::get<1>(kb), p,
                      q};
                auto& slot = out.terms_[k];
                slot += va * vb;
                if (slot == 0) out.terms_.erase(k);
            }
        return out;
    }

    bool empty() const { return terms_.empty(); }

    // coefficient slice at a fixed r power and fixed psi total degree, as a
    // map (tw, psi, psi2) -> coefficient
    std::map<std::tuple<int, int, int>, Rational> slice(int r_exp, int psi_total) const {
        std::map<std::tuple<int, int, int>, Rational> out;
        for (const auto& [k, v] : terms_) {
            if (std::get<1>(k) != r_exp) continue;
            if (std::get<2>(k) + std::get<3>(k) != psi_total) continue;
            out[{std::get<0>(k), std::get<2>(k), std::get<3>(k)}] = v;
        }
        return out;
    }

  private:
    int psi_cap_;
    std::map<Key, Rational> terms_;
};

}  // namespace detail

struct GrrReport {
    bool pass = true;
    std::vector<std::string> lines;
};

// Checks, degree by degree, that exponentiating the negated leading edge
// terms of the Chern character formula reproduces the Chern class edge
// factor (1 - exp(-(tw(h)tw(h')/2)(psi+psi')))/(psi+psi').
//
// The degree-k character term on a one-edge graph has lowest r-coefficient
//   r^{-k} tw^{k+1}/(k+1)! sum_{i+j=k-1} (-1)^i psi^i psi'^j,
// the alternating sum satisfying (psi+psi') A_k = psi'^k - (-psi)^k. Under
// the excess product each extra edge factor costs -(1/r)(psi+psi'), so the
// extreme valuation r^{-(2k-1)} at psi-degree k-1 comes from the k-th power
// of the degree-1 term alone; it must match the r-lowest coefficient of the
// printed edge factor with tw(h') = r - tw(h). flip_sign is the negative
// control and must fail.
inline GrrReport verify_grr_exponentiation(int k_max, int psi_trunc, bool flip_sign = false) {
    using Ring = detail::EdgeRing;
    GrrReport rep;

    // alternating-sum identity
    for (int k = 1; k <= std::min(k_max, psi_trunc); ++k) {
        Ring alt(psi_trunc);
        for (int i = 0; i + 1 <= k; ++i) {
            int j = k - 1 - i;
            alt.add(Ring::monomial(psi_trunc, 0, 0, i, j, (i % 2 == 0) ? 1 : -1));
        }
        Ring lhs = alt.mul(Ring::monomial(psi_trunc, 0, 0, 1, 0, 1));
        lhs.add(alt.mul(Ring::monomial(psi_trunc, 0, 0, 0, 1, 1)));
        Ring rhs(psi_trunc);
        rhs.add(Ring::monomial(psi_trunc, 0, 0, 0, k, 1));
        rhs.add(Ring::monomial(psi_trunc, 0, 0, k, 0, (k % 2 == 0) ? -1 : 1));
        lhs.add(rhs, -1);
        if (!lhs.empty()) {
            rep.pass = false;
            rep.lines.push_back("alternating-sum identity failed at k = " + std::to_string(k));
        }
    }

    // exponent: negated character edge terms
    Ring expo(psi_trunc);
    for (int k = 1; k <= k_max; ++k) {
        Rational c = Rational(1) / Rational(factorial(k + 1));
        if (!flip_sign) c = -c;
        for (int i = 0; i + 1 <= k; ++i) {
            int j = k - 1 - i;
            Rational ci = (i % 2 == 0) ? c : -c;
            expo.add(Ring::monomial(psi_trunc, k + 1, -k, i, j, ci));
        }
    }

    // excess exponential: sum_j expo^j / j! * (-(psi+psi')/r)^{j-1}
    Ring excess(psi_trunc);
    excess.add(Ring::monomial(psi_trunc, 0, -1, 1, 0, -1));
    excess.add(Ring::monomial(psi_trunc, 0, -1, 0, 1, -1));
    Ring result(psi_trunc);
    Ring power = expo;
    Integer fact = 1;
    for (int j = 1; j <= psi_trunc + 1; ++j) {
        fact *= j;
        Ring contrib = power;
        for (int t = 1; t < j; ++t) contrib = contrib.mul(excess);
        result.add(contrib, Rational(1) / Rational(fact));
        if (j <= psi_trunc) power = power.mul(expo);
    }

    // target kernel: sum_{m>=1} (-1)^{m-1} (tw (r - tw)/2)^m (psi+psi')^{m-1} / m!
    Ring target(psi_trunc);
    Ring x(psi_trunc);  // tw (r - tw) / 2
    x.add(Ring::monomial(psi_trunc, 1, 1, 0, 0, Rational(1, 2)));
    x.add(Ring::monomial(psi_trunc, 2, 0, 0, 0, Rational(-1, 2)));
    Ring psisum(psi_trunc);
    psisum.add(Ring::monomial(psi_trunc, 0, 0, 1, 0, 1));
    psisum.add(Ring::monomial(psi_trunc, 0, 0, 0, 1, 1));
    Ring xpow = x;
    Integer mfact = 1;
    for (int m = 1; m <= psi_trunc + 1; ++m) {
        mfact *= m;
        Ring contrib = xpow;
        for (int t = 1; t < m; ++t) contrib = contrib.mul(psisum);
        target.add(contrib, Rational((m % 2 == 1) ? 1 : -1) / Rational(mfact));
        xpow = xpow.mul(x);
    }

    for (int k = 1; k <= k_max; ++k) {
        if (k - 1 > psi_trunc) break;
        auto got = result.slice(-(2 * k - 1), k - 1);
        // the target's lowest r-power at psi degree k-1 is r^0
        auto want = target.slice(0, k - 1);
        if (got == want) {
            rep.lines.push_back("degree " + std::to_string(k) + ": match");
        } else {
            rep.pass = false;
            rep.lines.push_back("degree " + std::to_string(k) + ": MISMATCH");
        }
    }
    return rep;
}

}  // namespace drx
