#include "drx/target.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace drx;

TEST_CASE("point model") {
    auto t = TargetModel::point();
    CHECK(t.pair_c1S({}) == 0);
    CHECK(t.summand_bound_b({}) == 0);
    auto sp = t.effective_splittings({}, 3);
    REQUIRE(sp.size() == 1);
    CHECK(sp[0] == std::vector<CurveClass>{{}, {}, {}});
}

TEST_CASE("free monoid rank 1") {
    auto t = TargetModel::free_monoid(1, {3});
    CHECK(t.pair_c1S({2}) == 6);
    CHECK_THROWS(t.pair_c1S({-1}));

    auto sp = t.effective_splittings({2}, 2);
    REQUIRE(sp.size() == 3);
    CHECK(sp[0] == std::vector<CurveClass>{{0}, {2}});
    CHECK(sp[1] == std::vector<CurveClass>{{1}, {1}});
    CHECK(sp[2] == std::vector<CurveClass>{{2}, {0}});

    CHECK(t.summand_bound_b({2}) == 6);
    auto tneg = TargetModel::free_monoid(1, {-2});
    CHECK(tneg.summand_bound_b({1}) == 2);
}

TEST_CASE("a_ell model") {
    auto t = TargetModel::a_ell(2, {1, 1}, {0, 0});
    CHECK(t.is_effective({2, 2}));
    CHECK_FALSE(t.is_effective({1, 2}));
    CHECK_FALSE(t.is_effective({-1, -1}));
    CHECK(t.pair_c1S({2, 2}) == 0);

    auto t1 = TargetModel::a_ell(1, {1}, {0});
    auto sp = t1.effective_splittings({2}, 2);
    REQUIRE(sp.size() == 3);
    CHECK(sp[0] == std::vector<CurveClass>{{0}, {2}});
    CHECK(sp[2] == std::vector<CurveClass>{{2}, {0}});
}

TEST_CASE("splitting consistency and additivity") {
    auto t = TargetModel::free_monoid(2, {1, -1});
    CurveClass beta{2, 1};

    // refining the first part of a 2-part splitting = 3-part splittings
    auto two = t.effective_splittings(beta, 2);
    std::multiset<std::vector<CurveClass>> refined;
    for (const auto& s : two)
        for (const auto& f : t.effective_splittings(s[0], 2))
            refined.insert({f[0], f[1], s[1]});
    auto three = t.effective_splittings(beta, 3);
    std::multiset<std::vector<CurveClass>> direct(three.begin(), three.end());
    CHECK(refined == direct);

    for (const auto& s : three) {
        long long sum = 0;
        CurveClass total = zero_class(2);
        for (const auto& part : s) {
            sum += t.pair_c1S(part);
            total = class_add(total, part);
        }
        CHECK(total == beta);
        CHECK(sum == t.pair_c1S(beta));
    }
}
