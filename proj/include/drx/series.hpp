#pragma once

#include "drx/bernoulli.hpp"
#include "drx/rational.hpp"

#include <stdexcept>
#include <vector>

namespace drx {

// Truncated power series in t with exact rational coefficients. The
// truncation order is explicit state: coeffs.size() == order + 1 always,
// and arithmetic never reads beyond it.
class TSeries {
  public:
    TSeries() : coeffs_(1) {}
    explicit TSeries(unsigned order) : coeffs_(order + 1) {}
    TSeries(unsigned order, std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
        coeffs_.resize(order + 1);
    }

    unsigned order() const { return static_cast<unsigned>(coeffs_.size()) - 1; }

    const Rational& coeff(unsigned k) const {
        static const Rational zero = 0;
        return k < coeffs_.size() ? coeffs_[k] : zero;
    }
    Rational& at(unsigned k) { return coeffs_.at(k); }

    static TSeries one(unsigned order) {
        TSeries s(order);
        s.coeffs_[0] = 1;
        return s;
    }

    TSeries add(const TSeries& o) const {
        TSeries out(std::min(order(), o.order()));
        for (unsigned k = 0; k <= out.order(); ++k) out.coeffs_[k] = coeff(k) + o.coeff(k);
        return out;
    }

    TSeries scale(const Rational& c) const {
        TSeries out = *this;
        for (auto& x : out.coeffs_) x *= c;
        return out;
    }

    TSeries mul(const TSeries& o) const {
        TSeries out(std::min(order(), o.order()));
        for (unsigned i = 0; i <= out.order(); ++i) {
            if (coeffs_[i] == 0) continue;
            for (unsigned j = 0; i + j <= out.order(); ++j) {
                if (o.coeffs_[j] == 0) continue;
                out.coeffs_[i + j] += coeffs_[i] * o.coeffs_[j];
            }
        }
        return out;
    }

    // exp of a series with zero constant term.
    TSeries exp() const {
        if (coeff(0) != 0) throw std::domain_error("non-nilpotent exponent");
        TSeries out = one(order());
        TSeries power = one(order());
        Integer fact = 1;
        for (unsigned k = 1; k <= order(); ++k) {
            power = power.mul(*this);
            fact *= k;
            for (unsigned j = 0; j <= order(); ++j)
                out.coeffs_[j] += power.coeffs_[j] / Rational(fact);
        }
        return out;
    }

    // Multiplicative inverse; constant term must be nonzero.
    TSeries inverse() const {
        if (coeff(0) == 0) throw std::domain_error("series not invertible");
        TSeries out(order());
        out.coeffs_[0] = Rational(1) / coeffs_[0];
        for (unsigned k = 1; k <= order(); ++k) {
            Rational acc = 0;
            for (unsigned j = 1; j <= k; ++j) acc += coeff(j) * out.coeffs_[k - j];
            out.coeffs_[k] = -acc / coeffs_[0];
        }
        return out;
    }

    // Substitution t -> c*t.
    TSeries rescale_argument(const Rational& c) const {
        TSeries out = *this;
        Rational cpow = 1;
        for (unsigned k = 1; k <= order(); ++k) {
            cpow *= c;
            out.coeffs_[k] *= cpow;
        }
        return out;
    }

    bool operator==(const TSeries& o) const { return coeffs_ == o.coeffs_; }

  private:
    std::vector<Rational> coeffs_;
};

inline TSeries series_mul(const TSeries& a, const TSeries& b) { return a.mul(b); }
inline TSeries series_exp(const TSeries& s) { return s.exp(); }
inline Rational series_coeff(const TSeries& s, unsigned k) { return s.coeff(k); }

// S(t) = sin(t/2)/(t/2): coefficient of t^{2b} is (-1)^b / ((2b+1)! 4^b).
inline TSeries series_S(unsigned order) {
    TSeries s(order);
    for (unsigned b = 0; 2 * b <= order; ++b) {
        Rational c = Rational((b % 2 == 0) ? 1 : -1) /
                     (Rational(factorial(2 * b + 1)) * Rational(int_pow(4, b)));
        s.at(2 * b) = c;
    }
    return s;
}

// G(t) = sum_{c>=1} (-1)^c (B_{2c}/2c) t^{2c}/(2c)!.
inline TSeries series_G(unsigned order) {
    TSeries g(order);
    for (unsigned c = 1; 2 * c <= order; ++c) {
        Rational v = bernoulli_number(2 * c) / Rational(2 * c) / Rational(factorial(2 * c));
        if (c % 2 == 1) v = -v;
        g.at(2 * c) = v;
    }
    return g;
}

}  // namespace drx
