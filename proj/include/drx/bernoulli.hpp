#pragma once

#include "drx/rational.hpp"

#include <mutex>
#include <vector>

namespace drx {

// Bernoulli numbers B_m from t/(e^t - 1), so B_1 = -1/2. The table is shared
// and grows on demand; reads after the size check are safe because entries
// are never mutated once published.
inline Rational bernoulli_number(unsigned m) {
    static std::vector<Rational> table;
    static std::mutex table_mutex;
    std::lock_guard<std::mutex> lock(table_mutex);
    while (table.size() <= m) {
        unsigned n = static_cast<unsigned>(table.size());
        if (n == 0) {
            table.emplace_back(1);
            continue;
        }
        // B_n = -1/(n+1) * sum_{k<n} C(n+1,k) B_k
        Rational acc = 0;
        for (unsigned k = 0; k < n; ++k) acc += Rational(binomial(n + 1, k)) * table[k];
        table.push_back(-acc / Rational(n + 1));
    }
    return table[m];
}

// Bernoulli polynomial B_k(x) from t e^{xt}/(e^t - 1):
// B_k(x) = sum_{j=0}^{k} C(k,j) B_j x^{k-j}.
inline Rational bernoulli_polynomial(unsigned k, const Rational& x) {
    Rational out = 0, xpow = 1;
    for (unsigned p = 0; p <= k; ++p) {
        out += Rational(binomial(k, p)) * bernoulli_number(k - p) * xpow;
        xpow *= x;
    }
    return out;
}

}  // namespace drx
