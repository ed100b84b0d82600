#include "drx/bernoulli.hpp"
#include "drx/rational.hpp"
#include "drx/rpoly.hpp"
#include "drx/series.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace drx;

namespace {

// Independent oracle: coefficients of t/(e^t - 1) by explicit division of
// truncated series, no Bernoulli recurrence involved.
std::vector<Rational> bernoulli_table_by_series_division(unsigned order) {
    // (e^t - 1)/t has coefficients 1/(k+1)!.
    TSeries denom(order);
    for (unsigned k = 0; k <= order; ++k) denom.at(k) = Rational(1) / Rational(factorial(k + 1));
    TSeries inv = denom.inverse();
    std::vector<Rational> table;
    for (unsigned m = 0; m <= order; ++m) table.push_back(inv.coeff(m) * Rational(factorial(m)));
    return table;
}

}  // namespace

TEST_CASE("rational string round trip") {
    CHECK(rational_to_string(Rational(-4, 8)) == "-1/2");
    CHECK(rational_to_string(Rational(5)) == "5");
    CHECK(rational_to_string(Rational(0)) == "0");
    CHECK(rational_from_string("-7/3") == Rational(-7, 3));
    CHECK(rational_from_string("12") == Rational(12));
    CHECK(rat_pow(Rational(2, 3), -2) == Rational(9, 4));
    CHECK(binomial(7, 3) == 35);
}

TEST_CASE("bernoulli numbers") {
    CHECK(bernoulli_number(0) == 1);
    CHECK(bernoulli_number(1) == Rational(-1, 2));
    CHECK(bernoulli_number(2) == Rational(1, 6));
    CHECK(bernoulli_number(3) == 0);

    auto oracle = bernoulli_table_by_series_division(24);
    for (unsigned m = 0; m <= 24; ++m) CHECK(bernoulli_number(m) == oracle[m]);

    for (unsigned m = 3; m <= 41; m += 2) CHECK(bernoulli_number(m) == 0);
}

TEST_CASE("bernoulli polynomials") {
    CHECK(bernoulli_polynomial(0, Rational(17, 5)) == 1);
    CHECK(bernoulli_polynomial(1, Rational(1, 2)) == 0);
    CHECK(bernoulli_polynomial(2, Rational(0)) == Rational(1, 6));
    CHECK(bernoulli_polynomial(1, Rational(0)) == Rational(-1, 2));
    for (unsigned k = 0; k <= 12; ++k)
        if (k != 1) CHECK(bernoulli_polynomial(k, Rational(0)) == bernoulli_number(k));
    // symmetry B_k(1-x) = (-1)^k B_k(x)
    for (unsigned k = 0; k <= 10; ++k) {
        Rational x(3, 7);
        Rational lhs = bernoulli_polynomial(k, Rational(1) - x);
        Rational rhs = bernoulli_polynomial(k, x);
        if (k % 2 == 1) rhs = -rhs;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("series S and G") {
    auto S = series_S(10);
    CHECK(S.coeff(0) == 1);
    CHECK(S.coeff(2) == Rational(-1, 24));
    CHECK(series_coeff(S, 3) == 0);
    auto G = series_G(10);
    CHECK(G.coeff(2) == Rational(-1, 24));
    CHECK(G.coeff(1) == 0);
}

TEST_CASE("series arithmetic") {
    TSeries zero(8);
    CHECK(series_exp(zero) == TSeries::one(8));
    CHECK_THROWS_AS(series_exp(TSeries::one(8)), std::domain_error);

    auto S = series_S(16);
    auto invS = S.inverse();
    CHECK(S.mul(invS) == TSeries::one(16));

    // rescale: S(2t) coefficients pick up 4^b
    auto S2 = S.rescale_argument(2);
    CHECK(S2.coeff(2) == Rational(-4, 24));
}

TEST_CASE("S equals exp G through order 40") {
    CHECK(series_exp(series_G(40)) == series_S(40));
}

TEST_CASE("odd binomial sum identity up to n = 50") {
    for (unsigned n = 0; n <= 50; ++n) {
        Rational lhs = 0;
        for (unsigned i = 0; i + i <= 2 * n; ++i) {
            unsigned j = n - i;
            lhs += Rational(1) / Rational(factorial(2 * i + 1) * factorial(2 * j + 1));
        }
        Rational rhs = Rational(int_pow(2, 2 * n + 1)) / Rational(factorial(2 * n + 2));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("interpolation basic") {
    std::vector<std::pair<Integer, Rational>> sq{{1, 1}, {2, 4}, {3, 9}};
    auto p = interpolate_polynomial(sq, 2);
    CHECK(p.degree() == 2);
    CHECK(p.coeff(2) == 1);
    CHECK(p.coeff(1) == 0);
    CHECK(p.coeff(0) == 0);

    std::vector<std::pair<Integer, Rational>> c7{{5, 7}, {6, 7}, {7, 7}};
    auto q = interpolate_polynomial(c7, 2);
    CHECK(q.degree() == 0);
    CHECK(q.coeff(0) == 7);
}

TEST_CASE("interpolation of a lattice sum with held-out nodes") {
    // samples of sum_{w=0}^{r-1} w(r-w) = r(r-1)(r+1)/6 at r = 4..8
    std::vector<std::pair<Integer, Rational>> samples;
    for (int r = 4; r <= 8; ++r) {
        Rational s = 0;
        for (int w = 0; w < r; ++w) s += Rational(w * (r - w));
        samples.push_back({r, s});
    }
    auto p = interpolate_polynomial(samples, 3);
    CHECK(p.coeff(0) == 0);
    CHECK(p.eval(0) == 0);
    CHECK(p.eval(10) == Rational(10 * 9 * 11, 6));
    for (const auto& [node, value] : samples) CHECK(p.eval(Rational(node)) == value);
}

TEST_CASE("interpolation flags degree-bound violations") {
    // cubic data against a quadratic bound with held-out checks
    std::vector<std::pair<Integer, Rational>> samples;
    for (int r = 1; r <= 6; ++r) samples.push_back({r, Rational(r * r * r)});
    CHECK_THROWS_AS(interpolate_polynomial(samples, 2), PolynomialityError);
}
