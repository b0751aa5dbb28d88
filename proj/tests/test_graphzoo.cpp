#include <catch2/catch_amalgamated.hpp>

#include "fraisse/graphzoo.hpp"
#include "helpers.hpp"

using namespace fraisse;

namespace {

FiniteStructure labelled(int n, const std::vector<int>& colours,
                         const std::vector<std::pair<int, int>>& edges) {
    FiniteStructure s(labelled_partite_signature(n));
    for (std::size_t i = 0; i < colours.size(); ++i) s.add_element(static_cast<ElemId>(i));
    for (std::size_t i = 0; i < colours.size(); ++i)
        s.add_tuple("chi" + std::to_string(colours[i]), {static_cast<ElemId>(i)});
    for (auto& [u, v] : edges) s.add_tuple(kEdgeRel, {static_cast<ElemId>(u), static_cast<ElemId>(v)});
    return s;
}

FiniteStructure coloured_poset(const std::vector<int>& colours,
                               const std::vector<std::pair<int, int>>& edges) {
    FiniteStructure s(labelled_partite_signature(3));
    for (std::size_t i = 0; i < colours.size(); ++i) s.add_element(static_cast<ElemId>(i));
    for (std::size_t i = 0; i < colours.size(); ++i)
        s.add_tuple("chi" + std::to_string(colours[i]), {static_cast<ElemId>(i)});
    for (auto& [u, v] : edges) s.add_tuple(kEdgeRel, {static_cast<ElemId>(u), static_cast<ElemId>(v)});
    return s;
}

/// all 3-coloured posets on n labelled points, handed to fn
template <typename F>
void for_each_coloured_poset(int n, F&& fn) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<int> state(pairs.size(), 0);
    std::vector<int> colours(static_cast<std::size_t>(n), 0);
    std::function<void()> emit = [&]() {
        std::vector<std::pair<int, int>> edges;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            if (state[p] == 1) edges.push_back(pairs[p]);
            else if (state[p] == 2) edges.emplace_back(pairs[p].second, pairs[p].first);
        }
        auto s = coloured_poset(colours, edges);
        if (!check_coloured_poset(s)) fn(s);
    };
    std::function<void(std::size_t)> rec_colour = [&](std::size_t i) {
        if (i == colours.size()) {
            emit();
            return;
        }
        for (int c = 0; c < 3; ++c) {
            colours[i] = c;
            rec_colour(i + 1);
        }
    };
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == pairs.size()) {
            rec_colour(0);
            return;
        }
        for (int v = 0; v < 3; ++v) {
            state[k] = v;
            rec(k + 1);
        }
    };
    rec(0);
}

}  // namespace

TEST_CASE("check_dn and dn_independent") {
    SECTION("two parts, all edges left to right") {
        auto s = labelled(3, {0, 0, 1, 1}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
        auto res = check_dn(s, 3);
        REQUIRE(std::holds_alternative<LabelledPartite>(res));
        CHECK(std::get<LabelledPartite>(res).pt.parts.size() == 2);
        CHECK(dn_independent(s, {}, {0, 1}, {2, 3}));
        CHECK_FALSE(dn_independent(s, {}, {2, 3}, {0, 1}));
    }
    SECTION("same-part pairs are unconstrained") {
        auto s = labelled(2, {0, 0}, {});
        CHECK(dn_independent(s, {}, {0}, {1}));
        CHECK(dn_independent(s, {}, {1}, {0}));
    }
    SECTION("two parts sharing a colour is a violation") {
        FiniteStructure s(labelled_partite_signature(2));
        s.add_element(0);
        s.add_element(1);
        s.add_tuple("chi0", {0});
        s.add_tuple("chi0", {1});
        s.add_tuple(kEdgeRel, {0, 1});  // different parts, same colour
        auto res = check_dn(s, 2);
        REQUIRE(std::holds_alternative<PartiteViolation>(res));
    }
    SECTION("monochromatic part requirement") {
        FiniteStructure s(labelled_partite_signature(2));
        s.add_element(0);
        s.add_element(1);
        s.add_tuple("chi0", {0});
        s.add_tuple("chi1", {1});
        // no edge: same part, two colours
        auto res = check_dn(s, 2);
        REQUIRE(std::holds_alternative<PartiteViolation>(res));
        CHECK(std::get<PartiteViolation>(res).reason == "part is not monochromatic");
    }
}

TEST_CASE("label_permutation") {
    auto s = labelled(2, {0, 0, 1, 1}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
    SECTION("colour-preserving map induces the identity on touched labels") {
        auto pi = label_permutation(s, s, {{0, 1}, {2, 3}}, 2);
        CHECK(pi == std::map<int, int>{{0, 0}, {1, 1}});
    }
    SECTION("part swap induces a transposition") {
        auto t = labelled(2, {1, 1, 0, 0}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
        auto pi = label_permutation(s, t, {{0, 0}, {2, 2}}, 2);
        CHECK(pi == std::map<int, int>{{0, 1}, {1, 0}});
    }
    SECTION("incoherent maps raise") {
        auto t = labelled(2, {1, 0, 0, 1}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
        CHECK_THROWS_AS(label_permutation(s, t, {{0, 0}, {1, 1}}, 2), StructureError);
    }
}

TEST_CASE("check_f_class and sigma") {
    SECTION("two full parts form a directed 4-cycle; sigma is an automorphism") {
        // parts {0,1}, {2,3}: 0->2->1->3->0
        auto s = testutil::digraph(4, {{0, 2}, {2, 1}, {1, 3}, {3, 0}});
        auto res = check_f_class(s);
        REQUIRE(std::holds_alternative<DoublePartite>(res));
        auto sigma = sigma_involution(s);
        CHECK(sigma.at(0) == 1);
        CHECK(sigma.at(2) == 3);
        // F-class parity: out-edges between two full parts number exactly 2
        int out_edges = 0;
        for (ElemId u : {0u, 1u})
            for (ElemId v : {2u, 3u})
                if (has_edge(s, u, v)) ++out_edges;
        CHECK(out_edges == 2);
    }
    SECTION("three out-edges one way violate the class") {
        auto s = testutil::digraph(4, {{0, 2}, {0, 3}, {1, 2}, {3, 1}});
        auto res = check_f_class(s);
        REQUIRE(std::holds_alternative<PartiteViolation>(res));
    }
    SECTION("singleton parts are valid but sigma is rejected") {
        auto s = testutil::digraph(2, {{0, 1}});
        CHECK(std::holds_alternative<DoublePartite>(check_f_class(s)));
        CHECK_THROWS_AS(sigma_involution(s), StructureError);
    }
    SECTION("parity of out-edges between full parts holds in every valid structure") {
        // exhaust all orientations between two full parts with alternation
        for (int d0 = 0; d0 < 2; ++d0) {
            // d(0,2) = d0 forces d(0,3), and d(1,2) = 1 - d(0,2) etc.
            std::vector<std::pair<int, int>> edges;
            auto dir = [&](int u, int v, int d) {
                if (d) edges.emplace_back(u, v);
                else edges.emplace_back(v, u);
            };
            for (int d1 = 0; d1 < 2; ++d1) {
                edges.clear();
                dir(0, 2, d0);
                dir(0, 3, 1 - d0);
                dir(1, 2, 1 - d0);
                dir(1, 3, d0);
                (void)d1;
                auto s = testutil::digraph(4, edges);
                auto res = check_f_class(s);
                REQUIRE(std::holds_alternative<DoublePartite>(res));
                int out_edges = 0;
                for (ElemId u : {0u, 1u})
                    for (ElemId v : {2u, 3u})
                        if (has_edge(s, u, v)) ++out_edges;
                CHECK(out_edges == 2);
            }
        }
    }
}

TEST_CASE("p3 twist") {
    SECTION("spec example: a bot b with colours 0, 1 twists to a <- b") {
        auto o = coloured_poset({0, 1}, {});
        auto h = p3_twist(o);
        CHECK(tau_of(h, 0, 1) == 1);  // a <- b
    }
    SECTION("same-colour pairs are unchanged") {
        auto o = coloured_poset({2, 2}, {{0, 1}});
        auto h = p3_twist(o);
        CHECK(has_edge(h, 0, 1));
    }
    SECTION("round-trip on a 6-point coloured poset") {
        auto o = coloured_poset({0, 1, 2, 0, 1, 2},
                                {{0, 1}, {0, 2}, {0, 4}, {3, 4}, {3, 1}, {0, 5}, {3, 5}, {3, 2}});
        REQUIRE_FALSE(check_coloured_poset(o).has_value());
        auto h = p3_twist(o);
        auto back = p3_untwist(h);
        REQUIRE(std::holds_alternative<FiniteStructure>(back));
        CHECK(std::get<FiniteStructure>(back).equals(o));
    }
    SECTION("untwisting a non-poset reports a violation") {
        // a 3-cycle within one colour is not a poset and survives untwisting
        auto h = coloured_poset({0, 0, 0}, {{0, 1}, {1, 2}, {2, 0}});
        auto back = p3_untwist(h);
        REQUIRE(std::holds_alternative<ColouredPosetViolation>(back));
    }
}

TEST_CASE("p3 apex attachment") {
    auto o = coloured_poset({0, 1, 2}, {{0, 1}});
    auto h = p3_twist(o);
    auto g = p3_attach_apex(h);
    ElemId apex = 3;
    CHECK(orthogonal(g, apex, 0));   // colour 0: tau = 0
    CHECK(has_edge(g, 1, apex));     // colour 1: tau = 1, apex <- b
    CHECK(has_edge(g, apex, 2));     // colour 2: tau = -1, apex -> b
    // a colour-preserving iso of o extends to an iso of the apex graph fixing v
    auto o2 = coloured_poset({0, 1, 2}, {{0, 1}});
    auto g2 = p3_attach_apex(p3_twist(o2));
    PartialIso iso{&g, &g2, {{0, 0}, {1, 1}, {2, 2}, {apex, apex}}};
    CHECK(iso.valid());
}

TEST_CASE("twist equivariance on small coloured posets") {
    // for every coloured poset on <= 4 points and every permutation, the
    // twist of the relabelled structure is the relabelling of the twist
    int checked = 0;
    for (int n = 2; n <= 3; ++n) {
        for_each_coloured_poset(n, [&](const FiniteStructure& o) {
            auto h = p3_twist(o);
            std::vector<ElemId> perm(o.universe());
            do {
                // relabelled copy via the map i -> perm[i]
                FiniteStructure o2(o.signature());
                for (ElemId v : o.universe()) o2.add_element(v);
                for (int c = 0; c < 3; ++c)
                    for (const auto& t : o.tuples("chi" + std::to_string(c)))
                        o2.add_tuple("chi" + std::to_string(c), {perm[t[0]]});
                for (const auto& t : o.tuples(kEdgeRel)) o2.add_tuple(kEdgeRel, {perm[t[0]], perm[t[1]]});
                FiniteStructure h2(h.signature());
                for (ElemId v : h.universe()) h2.add_element(v);
                for (int c = 0; c < 3; ++c)
                    for (const auto& t : h.tuples("chi" + std::to_string(c)))
                        h2.add_tuple("chi" + std::to_string(c), {perm[t[0]]});
                for (const auto& t : h.tuples(kEdgeRel)) h2.add_tuple(kEdgeRel, {perm[t[0]], perm[t[1]]});
                CHECK(p3_twist(o2).equals(h2));
                ++checked;
            } while (std::next_permutation(perm.begin(), perm.end()));
        });
    }
    CHECK(checked > 1000);
}

TEST_CASE("colour-preserving bijections: order iso iff twist iso, exhaustive on 3 points") {
    std::vector<FiniteStructure> posets;
    for_each_coloured_poset(3, [&](const FiniteStructure& o) { posets.push_back(o); });
    int agreements = 0;
    for (const auto& o1 : posets)
        for (const auto& o2 : posets) {
            auto h1 = p3_twist(o1), h2 = p3_twist(o2);
            std::vector<ElemId> perm(o1.universe());
            std::sort(perm.begin(), perm.end());
            do {
                // colour-preserving only
                bool colour_ok = true;
                for (ElemId v : o1.universe())
                    if (colour3_of(o1, v) != colour3_of(o2, perm[v])) colour_ok = false;
                if (!colour_ok) continue;
                PartialIso f1{&o1, &o2, {}};
                PartialIso f2{&h1, &h2, {}};
                for (ElemId v : o1.universe()) {
                    f1.map[v] = perm[v];
                    f2.map[v] = perm[v];
                }
                REQUIRE(f1.valid() == f2.valid());
                ++agreements;
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
    CHECK(agreements > 10000);
}
