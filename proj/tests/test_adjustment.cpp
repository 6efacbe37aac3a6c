#include <doctest.h>

#include <algorithm>
#include <random>

#include "causal/adjustment.hpp"
#include "causal/oracle.hpp"
#include "support.hpp"

using namespace causal;
using causal::test::load_figure;

namespace {

Query point(const Dag& g) {
    return make_query(g, {"A"}, "Y");
}

ErrorKind error_kind(const std::function<void()>& f) {
    try {
        f();
    } catch (const CausalError& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Syntax;
}

}  // namespace

TEST_CASE("causal nodes and forbidden set") {
    Dag fig7 = load_figure("fig7");
    CHECK(causal_nodes(fig7, point(fig7)) == VertexSet{"M", "Y"});
    CHECK(forbidden(fig7, point(fig7)) == VertexSet{"A", "M", "Y"});

    Dag fig3 = load_figure("fig3");
    CHECK(causal_nodes(fig3, point(fig3)) == VertexSet{"Y"});
    CHECK(forbidden(fig3, point(fig3)) == VertexSet{"A", "Y"});

    Dag fig9 = load_figure("fig9");
    CHECK(forbidden(fig9, point(fig9)) == VertexSet{"A", "Y"});

    Dag none = parse_dag("node A\nnode Y\n");
    CHECK(causal_nodes(none, point(none)).empty());
}

TEST_CASE("causal nodes use proper paths for joint treatments") {
    Dag g = load_figure("fig1");
    Query q = make_query(g, {"A0", "A1"}, "Y");
    // L1 lies on A0 -> L1 -> Y, which does not pass through A1.
    CHECK(causal_nodes(g, q) == VertexSet{"L1", "Y"});
}

TEST_CASE("validity on Figure 3") {
    Dag g = load_figure("fig3");
    Query q = point(g);
    CHECK(is_valid_adjustment(g, q, {"O1", "W2"}).valid);
    CHECK(is_valid_adjustment(g, q, {"O2", "W1"}).valid);

    auto bad = is_valid_adjustment(g, q, {"O1"});
    CHECK_FALSE(bad.valid);
    CHECK(bad.reason.kind == AdjustmentReason::Kind::OpenPath);
    CHECK(bad.reason.witness == std::vector<std::string>{"A", "W2", "O2", "Y"});

    CHECK(error_kind([&] { is_valid_adjustment(g, q, {"A"}); }) == ErrorKind::InvalidSet);
    CHECK(error_kind([&] { is_valid_adjustment(g, q, {"Y"}); }) == ErrorKind::InvalidSet);
}

TEST_CASE("forbidden members invalidate a set") {
    Dag g = load_figure("fig8");
    auto r = is_valid_adjustment(g, point(g), {"M"});
    CHECK_FALSE(r.valid);
    CHECK(r.reason.kind == AdjustmentReason::Kind::ForbiddenHit);
    CHECK(r.reason.witness == std::vector<std::string>{"M"});
}

TEST_CASE("minimality") {
    Dag g = load_figure("fig3");
    Query q = point(g);
    auto m = is_minimal_adjustment(g, q, {"O1", "W2"});
    CHECK(m.valid);
    CHECK(m.minimal);

    auto r = is_minimal_adjustment(g, q, {"O1", "O2", "W1"});
    CHECK(r.valid);
    CHECK_FALSE(r.minimal);
    CHECK(r.reason.kind == AdjustmentReason::Kind::Removable);
    CHECK(r.reason.witness == std::vector<std::string>{"O1", "W1"});

    Dag fig6 = load_figure("fig6");
    auto e = is_minimal_adjustment(fig6, point(fig6), {});
    CHECK_FALSE(e.valid);
    CHECK_FALSE(e.minimal);
}

TEST_CASE("single removal minimality agrees with brute force") {
    for (const char* fig : {"fig2", "fig3", "fig6", "fig8", "fig9", "fig11"}) {
        Dag g = load_figure(fig);
        Query q = point(g);
        auto valid = enumerate_adjustment_sets(g, q);
        auto brute = minimal_sets_brute_force(g, q);
        std::vector<VertexSet> single;
        for (const auto& z : valid) {
            if (is_minimal_adjustment(g, q, z).minimal) single.push_back(z);
        }
        CHECK_MESSAGE(single == brute, fig);
    }
}

TEST_CASE("optimal sets") {
    Dag fig3 = load_figure("fig3");
    CHECK(optimal_set(fig3, point(fig3)) == VertexSet{"O1", "O2"});
    Dag fig9 = load_figure("fig9");
    CHECK(optimal_set(fig9, point(fig9)) == VertexSet{"O"});
    CHECK(optimal_minimal_set(fig9, point(fig9)) == VertexSet{"O"});
    Dag fig10 = load_figure("fig10");
    CHECK(optimal_set(fig10, point(fig10)) == VertexSet{"O1", "O2", "O3"});
    CHECK(optimal_minimal_set(fig10, point(fig10)) == VertexSet{"O1", "O2"});
    Dag fig6 = load_figure("fig6");
    CHECK(optimal_minimal_set(fig6, point(fig6)) == VertexSet{"O1", "O2"});
    Dag fig7 = load_figure("fig7");
    CHECK(optimal_set(fig7, point(fig7)).empty());
    CHECK(optimal_minimal_set(fig7, point(fig7)).empty());
}

TEST_CASE("optimal set errors") {
    Dag fig1 = load_figure("fig1");
    Query joint = make_query(fig1, {"A0", "A1"}, "Y");
    CHECK(error_kind([&] { optimal_set(fig1, joint); }) == ErrorKind::NoAdjustmentSet);
    Dag fig4 = load_figure("fig4");
    Query joint4 = make_query(fig4, {"A0", "A1"}, "Y");
    CHECK(error_kind([&] { optimal_minimal_set(fig4, joint4); }) == ErrorKind::Unsupported);
}

TEST_CASE("O_min does not depend on the removal order") {
    Dag g = load_figure("fig10");
    Query q = point(g);
    VertexSet o = optimal_set(g, q);
    std::vector<std::string> order(o.begin(), o.end());
    do {
        CHECK(optimal_minimal_set(g, q, order) == VertexSet{"O1", "O2"});
    } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("graphical comparison of two adjustment sets") {
    Dag g = load_figure("fig3");
    Query q = point(g);
    CHECK(compare_theorem1(g, q, {"O1", "O2"}, {"O1", "W2"}).kind == VerdictKind::FirstDominates);
    CHECK(compare_theorem1(g, q, {"O1", "W2"}, {"O1", "O2"}).kind == VerdictKind::SecondDominates);
    auto v = compare_theorem1(g, q, {"O1", "W2"}, {"O2", "W1"});
    CHECK(v.kind == VerdictKind::Inconclusive);
    CHECK(v.conditions.size() == 4);
    CHECK(compare_theorem1(g, q, {"O1", "W2"}, {"O1", "W2"}).kind == VerdictKind::Equivalent);
    CHECK(error_kind([&] { compare_theorem1(g, q, {"O1"}, {"O1", "O2"}); }) == ErrorKind::InvalidSet);
}

TEST_CASE("prune overadjustment") {
    Dag fig2 = load_figure("fig2");
    CHECK(prune_adjustment(fig2, point(fig2), {"B", "G"}) == VertexSet{"G"});
    Dag fig3 = load_figure("fig3");
    CHECK(prune_adjustment(fig3, point(fig3), {"O1", "O2"}) == VertexSet{"O1", "O2"});
    Dag fig7 = load_figure("fig7");
    CHECK(prune_adjustment(fig7, point(fig7), {}).empty());
}

TEST_CASE("pruned sets stay valid and dominate the input") {
    for (const char* fig : {"fig2", "fig3", "fig9", "fig10"}) {
        Dag g = load_figure(fig);
        Query q = point(g);
        for (const auto& z : enumerate_adjustment_sets(g, q)) {
            VertexSet p = prune_adjustment(g, q, z);
            CHECK(is_subset(p, z));
            CHECK(is_valid_adjustment(g, q, p).valid);
            auto kind = compare_theorem1(g, q, p, z).kind;
            CHECK((kind == VerdictKind::FirstDominates || kind == VerdictKind::Equivalent));
        }
    }
}

TEST_CASE("enumeration") {
    Dag fig1 = load_figure("fig1");
    CHECK(enumerate_adjustment_sets(fig1, make_query(fig1, {"A0", "A1"}, "Y")).empty());

    Dag fig7 = load_figure("fig7");
    auto sets7 = enumerate_adjustment_sets(fig7, point(fig7));
    CHECK(sets7 == std::vector<VertexSet>{{}});

    Dag fig3 = load_figure("fig3");
    auto sets3 = enumerate_adjustment_sets(fig3, point(fig3));
    for (const VertexSet& z : {VertexSet{"O1", "O2"}, VertexSet{"O1", "W2"}, VertexSet{"O2", "W1"}}) {
        CHECK(std::find(sets3.begin(), sets3.end(), z) != sets3.end());
    }
    CHECK(std::is_sorted(sets3.begin(), sets3.end(), set_order));

    CHECK(error_kind([&] { enumerate_adjustment_sets(fig3, point(fig3), 3); }) == ErrorKind::GuardExceeded);
}

TEST_CASE("minimal sets and the optimal minimal set") {
    for (const char* fig : {"fig3", "fig6", "fig9", "fig10", "fig11"}) {
        Dag g = load_figure(fig);
        Query q = point(g);
        VertexSet o = optimal_set(g, q);
        VertexSet omin = optimal_minimal_set(g, q);
        CHECK(d_separated(g, {"A"}, set_difference(o, omin), omin));
        for (const auto& z : minimal_sets_brute_force(g, q)) {
            CHECK(disjoint(z, set_difference(o, omin)));
            CHECK(independent(g, {"A"}, set_difference(omin, z), z));
            CHECK(independent(g, {"Y"}, set_difference(z, omin), set_union(omin, {"A"})));
        }
    }
}

TEST_CASE("valid sets identify the interventional mean on random laws") {
    for (const char* fig : {"fig2", "fig3", "fig6", "fig9"}) {
        Dag g = load_figure(fig);
        Query q = point(g);
        auto sets = enumerate_adjustment_sets(g, q);
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            DiscreteLaw law = random_law(g, {seed});
            double a = default_levels(law, q)[0];
            double chi = g_formula(law, q, {a});
            for (const auto& z : sets) {
                RandomVariable b = outcome_regression(law, q, a, z);
                CHECK(std::abs(law.expectation(b) - chi) < 1e-9);
            }
        }
    }
}

TEST_CASE("the optimal set has the smallest variance on Figure 3") {
    Dag g = load_figure("fig3");
    Query q = point(g);
    VertexSet o = optimal_set(g, q);
    auto sets = enumerate_adjustment_sets(g, q);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        DiscreteLaw law = random_law(g, {seed});
        double vo = law.variance(psi_ti(law, q, 1, o));
        for (const auto& z : sets) CHECK(vo <= law.variance(psi_ti(law, q, 1, z)) + 1e-9);
    }
}

TEST_CASE("graphical dominance implies variance ordering") {
    Dag g = load_figure("fig3");
    Query q = point(g);
    auto sets = enumerate_adjustment_sets(g, q);
    std::vector<std::pair<VertexSet, VertexSet>> dominated;
    for (const auto& s1 : sets) {
        for (const auto& s2 : sets) {
            if (compare_theorem1(g, q, s1, s2).kind == VerdictKind::FirstDominates) dominated.emplace_back(s1, s2);
        }
    }
    CHECK_FALSE(dominated.empty());
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        DiscreteLaw law = random_law(g, {seed});
        for (const auto& [s1, s2] : dominated) {
            CHECK(law.variance(psi_ti(law, q, 1, s1)) <= law.variance(psi_ti(law, q, 1, s2)) + 1e-9);
        }
    }
}

TEST_CASE("random graphs: O is valid whenever some set is, and minimal sets avoid O minus O_min") {
    std::mt19937_64 rng(11);
    int checked = 0;
    for (int trial = 0; trial < 150; ++trial) {
        Dag g = test::random_dag(6, 0.45, rng());
        std::string a = g.name(rng() % 5);
        std::vector<std::string> later;
        for (std::size_t i = g.index(a) + 1; i < g.size(); ++i) later.push_back(g.name(i));
        std::string y = later[rng() % later.size()];
        Query q = make_query(g, {a}, y);
        if (!ancestors(g, {y}).count(a)) continue;
        auto sets = enumerate_adjustment_sets(g, q);
        if (sets.empty()) continue;
        VertexSet o = optimal_set(g, q);
        CHECK(is_valid_adjustment(g, q, o).valid);
        VertexSet omin = optimal_minimal_set(g, q);
        CHECK(is_minimal_adjustment(g, q, omin).minimal);
        for (const auto& z : sets) {
            auto kind = compare_theorem1(g, q, o, z).kind;
            CHECK((kind == VerdictKind::FirstDominates || kind == VerdictKind::Equivalent));
        }
        ++checked;
    }
    CHECK(checked > 30);
}
