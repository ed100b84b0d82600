#pragma once

#include "drx/rational.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace drx {

// Univariate polynomial in r with exact rational coefficients. Trailing
// zeros are stripped; the zero polynomial has an empty coefficient list
// and degree() reports -1 for it.
class RPolynomial {
  public:
    RPolynomial() = default;
    explicit RPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { strip(); }

    static RPolynomial constant(const Rational& c) {
        return RPolynomial(std::vector<Rational>{c});
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }

    const Rational& coeff(unsigned k) const {
        static const Rational zero = 0;
        return k < coeffs_.size() ? coeffs_[k] : zero;
    }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    Rational eval(const Rational& x) const {
        Rational out = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) out = out * x + *it;
        return out;
    }

    RPolynomial& operator+=(const RPolynomial& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        strip();
        return *this;
    }

    RPolynomial& operator*=(const Rational& c) {
        if (c == 0) {
            coeffs_.clear();
            return *this;
        }
        for (auto& x : coeffs_) x *= c;
        return *this;
    }

    bool operator==(const RPolynomial& o) const { return coeffs_ == o.coeffs_; }

  private:
    void strip() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }
    std::vector<Rational> coeffs_;
};

struct PolynomialityError : std::runtime_error {
    explicit PolynomialityError(const std::string& what) : std::runtime_error(what) {}
};

// Exact Lagrange interpolation through the first degree_bound+1 samples
// (nodes pairwise distinct). Any further samples are held-out checks: a
// mismatch raises PolynomialityError, signalling that the degree bound or
// the sampling threshold was too small.
inline RPolynomial interpolate_polynomial(
    const std::vector<std::pair<Integer, Rational>>& samples, unsigned degree_bound) {
    if (samples.size() < degree_bound + 1)
        throw std::invalid_argument("interpolate_polynomial: not enough samples");
    const unsigned m = degree_bound + 1;

    // Newton's divided differences, then expansion to the monomial basis.
    std::vector<Rational> x(m), dd(m);
    for (unsigned i = 0; i < m; ++i) {
        x[i] = Rational(samples[i].first);
        dd[i] = samples[i].second;
    }
    for (unsigned level = 1; level < m; ++level)
        for (unsigned i = m - 1; i >= level; --i)
            dd[i] = (dd[i] - dd[i - 1]) / (x[i] - x[i - level]);

    std::vector<Rational> coeffs(m, Rational(0));
    std::vector<Rational> basis{Rational(1)};  // prod_{j<i} (r - x_j)
    for (unsigned i = 0; i < m; ++i) {
        for (size_t j = 0; j < basis.size(); ++j) coeffs[j] += dd[i] * basis[j];
        if (i + 1 < m) {
            basis.push_back(0);
            for (size_t j = basis.size() - 1; j > 0; --j)
                basis[j] = basis[j - 1] - x[i] * basis[j];
            basis[0] = -x[i] * basis[0];
        }
    }
    RPolynomial p(std::move(coeffs));

    for (size_t i = m; i < samples.size(); ++i)
        if (p.eval(Rational(samples[i].first)) != samples[i].second)
            throw PolynomialityError("polynomiality violated");
    return p;
}

}  // namespace drx
