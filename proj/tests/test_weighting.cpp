#include "drx/enumerate.hpp"
#include "drx/weighting.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace drx;

namespace {

StableGraph loop_graph(int genus_at_vertex, int nlegs) {
    StableGraph g;
    g.vertices.push_back({genus_at_vertex, {}});
    for (int i = 1; i <= nlegs; ++i) g.legs.push_back({i, 0});
    g.edges.push_back({{0, 0}, {0, 1}});
    return g;
}

StableGraph two_vertex_tree() {
    StableGraph g;
    g.vertices.push_back({0, {}});
    g.vertices.push_back({0, {}});
    g.legs.push_back({1, 0});
    g.legs.push_back({2, 0});
    g.legs.push_back({3, 1});
    g.edges.push_back({{0, 0}, {1, 0}});
    return g;
}

bool weighting_conditions_hold(const WeightingProblem& p, const Weighting& w) {
    const auto& g = *p.graph;
    for (size_t li = 0; li < g.legs.size(); ++li)
        if (w.leg_values[li] != mod_reduce(p.leg_values[li], p.r)) return false;
    for (size_t ei = 0; ei < g.edges.size(); ++ei)
        if (mod_reduce(w.edge_values[ei][0] + w.edge_values[ei][1], p.r) != 0) return false;
    std::vector<long long> sums(g.vertices.size(), 0);
    for (size_t li = 0; li < g.legs.size(); ++li) sums[g.legs[li].vertex] += w.leg_values[li];
    for (size_t ei = 0; ei < g.edges.size(); ++ei) {
        sums[g.edges[ei].first.vertex] += w.edge_values[ei][0];
        sums[g.edges[ei].second.vertex] += w.edge_values[ei][1];
    }
    for (size_t v = 0; v < sums.size(); ++v)
        if (mod_reduce(sums[v] - p.vertex_targets[v], p.r) != 0) return false;
    return true;
}

}  // namespace

TEST_CASE("weighting cardinality") {
    auto point = TargetModel::point();

    auto tree = two_vertex_tree();
    for (long long r : {2, 3, 5, 7})
        CHECK(enumerate_weightings(tree, {2, 3, -5}, point, r).size() == 1);

    auto loop = loop_graph(1, 2);
    CHECK(enumerate_weightings(loop, {1, -1}, point, 5).size() == 5);

    for (int g = 0; g <= 2; ++g)
        for (int n = 1; n <= 2; ++n) {
            std::vector<long long> A(n, 0);
            if (n == 2) { A[0] = 1; A[1] = -1; }
            for (const auto& gr : enumerate_stable_graphs(g, n, {}, point, 2)) {
                for (long long r : {2, 5}) {
                    auto ws = enumerate_weightings(gr, A, point, r);
                    long long expect = 1;
                    for (int i = 0; i < first_betti(gr); ++i) expect *= r;
                    INFO("g=" << g << " n=" << n << " h1=" << first_betti(gr) << " r=" << r);
                    CHECK(static_cast<long long>(ws.size()) == expect);
                    auto p = weighting_problem(gr, A, point, r);
                    for (const auto& w : ws) CHECK(weighting_conditions_hold(p, w));
                }
            }
        }
}

TEST_CASE("unique tree weighting solves the congruences") {
    auto point = TargetModel::point();
    auto ws = enumerate_weightings(two_vertex_tree(), {2, 3, -5}, point, 7);
    REQUIRE(ws.size() == 1);
    CHECK(ws[0].edge_values[0] == std::array<long long, 2>{2, 5});
}

TEST_CASE("incompatible ramification data is rejected") {
    auto point = TargetModel::point();
    CHECK_THROWS_WITH(enumerate_weightings(loop_graph(1, 2), {1, 1}, point, 5),
                      "incompatible ramification data");
}

TEST_CASE("weighting sums on the loop") {
    auto point = TargetModel::point();
    auto loop = loop_graph(1, 0);
    std::vector<long long> A{};

    auto one = WeightIntegrand::constant(1, 1);
    CHECK(sum_over_weightings_enum(loop, A, point, one, 5) == 5);

    WeightIntegrand wh;
    wh.num_edges = 1;
    wh.terms.push_back({Rational(1), {1, 0}, 0});
    CHECK(sum_over_weightings_enum(loop, A, point, wh, 5) == 10);

    auto whh = WeightIntegrand::edge_monomial({1}, 1);
    CHECK(sum_over_weightings_enum(loop, A, point, whh, 5) == 20);

    for (const auto* f : {&one, &wh, &whh})
        for (long long r : {2, 3, 7})
            CHECK(sum_over_weightings_enum(loop, A, point, *f, r) ==
                  sum_over_weightings_tree(loop, A, point, *f, r));
}

TEST_CASE("enum and tree sums agree on random inputs") {
    auto point = TargetModel::point();
    std::mt19937 rng(77);
    std::vector<StableGraph> pool;
    for (int g = 1; g <= 2; ++g)
        for (const auto& gr : enumerate_stable_graphs(g, 2, {}, point, 2))
            if (first_betti(gr) <= 2) pool.push_back(gr);
    REQUIRE(!pool.empty());

    for (int trial = 0; trial < 40; ++trial) {
        const auto& gr = pool[rng() % pool.size()];
        long long a = static_cast<long long>(rng() % 5) - 2;
        std::vector<long long> A{a, -a};
        long long r = 2 + rng() % 9;
        WeightIntegrand f;
        f.num_edges = gr.num_edges();
        int nterms = 1 + rng() % 3;
        for (int t = 0; t < nterms; ++t) {
            WeightMonomial m;
            m.coeff = Rational(static_cast<long long>(rng() % 7) - 3, 1 + rng() % 4);
            m.wexp.assign(2 * gr.num_edges(), 0);
            for (auto& e : m.wexp) e = rng() % 3;
            m.rexp = rng() % 2;
            f.terms.push_back(std::move(m));
        }
        auto lhs = sum_over_weightings_enum(gr, A, point, f, r);
        auto rhs = sum_over_weightings_tree(gr, A, point, f, r);
        INFO("trial " << trial << " r=" << r << " edges=" << gr.num_edges());
        CHECK(lhs == rhs);
    }
}

TEST_CASE("weighting polynomial examples") {
    auto point = TargetModel::point();
    auto loop = loop_graph(1, 0);
    std::vector<long long> A{};

    auto p1 = weighting_polynomial(loop, A, point, WeightIntegrand::constant(1, 1), 3, 2);
    CHECK(p1.degree() == 1);
    CHECK(p1.coeff(0) == 0);
    CHECK(p1.coeff(1) == 1);

    auto p2 = weighting_polynomial(loop, A, point, WeightIntegrand::edge_monomial({1}, 1), 3, 4);
    CHECK(p2.eval(5) == 20);
    CHECK(p2.coeff(0) == 0);
    // r(r-1)(r+1)/6
    CHECK(p2.coeff(3) == Rational(1, 6));
    CHECK(p2.coeff(1) == Rational(-1, 6));

    // determined tree edge: F = w(h)w(h')/2 with edge residues (r-5, 5)
    auto tree = two_vertex_tree();
    auto p3 = weighting_polynomial(tree, {2, 3, -5}, point,
                                   WeightIntegrand::edge_monomial({1}, Rational(1, 2)), 6, 3);
    CHECK(p3.eval(7) == 5);
    CHECK(p3 == RPolynomial({Rational(-25, 2), Rational(5, 2)}));
}

TEST_CASE("twist problem mirrors the weighting system") {
    StableGraph pre;
    pre.vertices.push_back({0, {3}});
    pre.vertices.push_back({1, {-3}});
    pre.edges.push_back({{0, 0}, {1, 0}});
    pre.edges.push_back({{0, 1}, {1, 1}});

    auto ws = enumerate_weightings(twist_problem(pre, 5));
    CHECK(ws.size() == 5);  // h1 = 1
    for (const auto& w : ws) {
        long long s0 = w.edge_values[0][0] + w.edge_values[1][0];
        CHECK(mod_reduce(s0 - 3, 5) == 0);
    }

    auto f = WeightIntegrand::edge_monomial({1, 1}, 1);
    for (long long r : {3, 5, 7})
        CHECK(sum_over_weightings_enum(twist_problem(pre, r), f) ==
              sum_over_weightings_tree(twist_problem(pre, r), f));
}
