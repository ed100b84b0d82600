#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace drx {

// Exact arithmetic substrate. Rationals are kept in lowest terms with a
// positive denominator by the backend; equality is structural.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long num, long long den = 1) { return Rational(num, den); }

inline Integer int_pow(const Integer& base, unsigned exp) {
    Integer out = 1, b = base;
    for (unsigned e = exp; e > 0; e >>= 1) {
        if (e & 1) out *= b;
        b *= b;
    }
    return out;
}

// base^exp for integer exp; negative exponents invert (base must be nonzero).
inline Rational rat_pow(const Rational& base, long long exp) {
    if (exp == 0) return Rational(1);
    if (base == 0) {
        if (exp > 0) return Rational(0);
        throw std::domain_error("rat_pow: zero base with negative exponent");
    }
    Rational out = 1, b = exp > 0 ? base : Rational(1) / base;
    unsigned long long e = exp > 0 ? static_cast<unsigned long long>(exp)
                                   : static_cast<unsigned long long>(-exp);
    for (; e > 0; e >>= 1) {
        if (e & 1) out *= b;
        b *= b;
    }
    return out;
}

inline Integer factorial(unsigned n) {
    Integer out = 1;
    for (unsigned i = 2; i <= n; ++i) out *= i;
    return out;
}

inline Integer binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Integer out = 1;
    for (unsigned i = 0; i < k; ++i) {
        out *= n - i;
        out /= i + 1;
    }
    return out;
}

// Canonical string form: "p/q" in lowest terms, or "p" when q = 1.
inline std::string rational_to_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += '/';
        s += denominator(r).str();
    }
    return s;
}

inline Rational rational_from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rational r(s);
    return r;
}

}  // namespace drx
