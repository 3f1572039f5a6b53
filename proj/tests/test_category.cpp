#include <catch2/catch_amalgamated.hpp>

#include "garcat/category.hpp"
#include "test_support.hpp"

using namespace garcat;
using namespace garcat::testing;

namespace {

Morphism parse(const PathCategory& cat, const std::string& s) {
    auto m = cat.parse(s, cat.objects().front());
    REQUIRE(m.has_value());
    return *m;
}

// Independent oracle: all ways to write c = a b, by cutting at every degree.
std::vector<std::pair<Morphism, Morphism>> brute_factorizations(const PathCategory& cat,
                                                                const Morphism& c) {
    std::vector<std::pair<Morphism, Morphism>> out;
    DegreeVector d = c.degree();
    std::vector<DegreeVector> cuts{{DegreeVector(d.size(), 0)}};
    for (size_t j = 0; j < d.size(); ++j) {
        std::vector<DegreeVector> next;
        for (const DegreeVector& p : cuts)
            for (uint32_t x = 0; x <= d[j]; ++x) {
                DegreeVector q = p;
                q[j] = x;
                next.push_back(q);
            }
        cuts = next;
    }
    for (const DegreeVector& p : cuts) out.push_back(cat.factorize_at_degree(c, p));
    return out;
}

// Independent oracle: common right multiples of a, b of exactly the join degree.
std::vector<Morphism> brute_common_extensions(const PathCategory& cat, const Morphism& a,
                                              const Morphism& b) {
    std::vector<Morphism> out;
    DegreeVector target = deg_join(a.degree(), b.degree());
    DegreeVector extra(target.size());
    for (size_t j = 0; j < target.size(); ++j) extra[j] = target[j] - a.degree()[j];
    for (const Morphism& c : cat.extensions_of(a, extra))
        if (cat.left_divides(b, c)) out.push_back(c);
    return out;
}

}  // namespace

TEST_CASE("compose on the two-loop graph") {
    PathCategory cat{two_loop_spec()};
    Morphism e0 = parse(cat, "e0"), e1 = parse(cat, "e1");
    Morphism c = cat.compose(e0, e1);
    CHECK(cat.format(c) == "e0e1");
    CHECK(c.degree() == DegreeVector{2});

    Morphism id = cat.identity(cat.objects().front());
    CHECK(cat.compose(id, e0) == e0);
    CHECK(cat.compose(e0, id) == e0);
}

TEST_CASE("compose componentwise in rank 2") {
    PathCategory cat{two_loop_square_spec()};
    ObjectId v = cat.objects().front();
    Morphism a = *cat.parse("e0|", v);
    Morphism b = *cat.parse("|f0", v);
    Morphism c = cat.compose(a, b);
    CHECK(cat.format(c) == "e0|f0");
    CHECK(c.degree() == DegreeVector{1, 1});
}

TEST_CASE("compose rejects non-composable pairs") {
    PathCategory cat{complete_two_vertex_spec()};
    // app0 : p -> p (loop at p), aqq0: q -> q; these do not compose
    auto app0 = cat.parse("app0");
    auto aqq0 = cat.parse("aqq0");
    REQUIRE(app0);
    REQUIRE(aqq0);
    if (app0->dom != aqq0->tgt) CHECK_THROWS_AS(cat.compose(*app0, *aqq0), error);
}

TEST_CASE("left divisibility and quotient") {
    PathCategory cat{two_loop_spec()};
    Morphism e0 = parse(cat, "e0");
    Morphism e0e1 = parse(cat, "e0e1");
    Morphism e1e0 = parse(cat, "e1e0");
    CHECK(cat.left_divides(e0, e0e1));
    CHECK(cat.format(cat.left_quotient(e0, e0e1)) == "e1");
    CHECK_FALSE(cat.left_divides(e0, e1e0));
    CHECK_THROWS_AS(cat.left_quotient(e0, e1e0), error);
}

TEST_CASE("left divisibility componentwise") {
    PathCategory cat{two_loop_square_spec()};
    ObjectId v = cat.objects().front();
    Morphism a = *cat.parse("e0|", v);
    Morphism b = *cat.parse("e0|f0", v);
    CHECK(cat.left_divides(a, b));
    CHECK(cat.format(cat.left_quotient(a, b)) == "|f0");
}

TEST_CASE("factorize_at_degree examples") {
    PathCategory cat{two_loop_spec()};
    Morphism c = parse(cat, "e0e1e0");
    auto [a, b] = cat.factorize_at_degree(c, {2});
    CHECK(cat.format(a) == "e0e1");
    CHECK(cat.format(b) == "e0");

    auto [i, rest] = cat.factorize_at_degree(c, {0});
    CHECK(i.is_identity());
    CHECK(rest == c);

    CHECK_THROWS_AS(cat.factorize_at_degree(c, {4}), error);
}

TEST_CASE("factorize_at_degree rank 2, checked against brute force") {
    PathCategory cat{two_loop_square_spec()};
    ObjectId v = cat.objects().front();
    Morphism c = *cat.parse("e0e0|f1", v);
    auto [a, b] = cat.factorize_at_degree(c, {1, 1});
    CHECK(cat.format(a) == "e0|f1");
    CHECK(cat.format(b) == "e0|");

    // Oracle: any factorization with degree(a) = (1,1) must coincide (units trivial).
    for (const auto& [x, y] : brute_factorizations(cat, c)) {
        if (x.degree() == DegreeVector{1, 1}) {
            CHECK(x == a);
            CHECK(y == b);
        }
        CHECK(cat.compose(x, y) == c);
    }
}

TEST_CASE("unique factorization property at every cut up to degree 3") {
    for (const CategorySpec& spec : {two_loop_spec(), two_loop_square_spec()}) {
        PathCategory cat{spec};
        DegreeVector cap(cat.rank(), cat.rank() == 1 ? 3 : 2);
        for (const ObjectId& v : cat.objects()) {
            std::vector<Morphism> all;
            DegreeVector p(cat.rank(), 0);
            std::function<void(size_t)> go = [&](size_t j) {
                if (j == cat.rank()) {
                    for (const Morphism& m : cat.morphisms_of_degree(v, p)) all.push_back(m);
                    return;
                }
                for (uint32_t x = 0; x <= cap[j]; ++x) {
                    p[j] = x;
                    go(j + 1);
                }
                p[j] = 0;
            };
            go(0);
            for (const Morphism& c : all) {
                for (const auto& [a, b] : brute_factorizations(cat, c)) {
                    auto [a2, b2] = cat.factorize_at_degree(c, a.degree());
                    CHECK(a2 == a);
                    CHECK(b2 == b);
                }
            }
        }
    }
}

TEST_CASE("mcm examples") {
    PathCategory cat{two_loop_spec()};
    Morphism e0 = parse(cat, "e0"), e1 = parse(cat, "e1");
    CHECK(cat.mcm(e0, e0) == std::vector<Morphism>{e0});
    CHECK(cat.mcm(e0, e1).empty());

    PathCategory sq{two_loop_square_spec()};
    ObjectId v = sq.objects().front();
    Morphism a = *sq.parse("e0|", v);
    Morphism b = *sq.parse("|f0", v);
    auto ms = sq.mcm(a, b);
    REQUIRE(ms.size() == 1);
    CHECK(sq.format(ms[0]) == "e0|f0");
    CHECK(ms == brute_common_extensions(sq, a, b));
}

TEST_CASE("mcm agrees with brute-force common extensions") {
    for (const CategorySpec& spec : {two_loop_spec(), two_loop_square_spec(),
                                     complete_two_vertex_spec()}) {
        PathCategory cat{spec};
        DegreeVector cap(cat.rank(), 2);
        for (const ObjectId& v : cat.objects()) {
            std::vector<Morphism> pool;
            std::function<void(size_t, DegreeVector&)> go = [&](size_t j, DegreeVector& p) {
                if (j == cat.rank()) {
                    for (const Morphism& m : cat.morphisms_of_degree(v, p)) pool.push_back(m);
                    return;
                }
                for (uint32_t x = 0; x <= cap[j]; ++x) {
                    p[j] = x;
                    go(j + 1, p);
                }
                p[j] = 0;
            };
            DegreeVector p(cat.rank(), 0);
            go(0, p);
            for (const Morphism& a : pool)
                for (const Morphism& b : pool) {
                    auto got = cat.mcm(a, b);
                    auto want = brute_common_extensions(cat, a, b);
                    std::sort(got.begin(), got.end(), MorphismLess{});
                    std::sort(want.begin(), want.end(), MorphismLess{});
                    CHECK(got == want);
                }
        }
    }
}

TEST_CASE("mcm disjointness: every bounded common multiple extends exactly one mcm") {
    PathCategory cat{two_loop_square_spec()};
    ObjectId v = cat.objects().front();
    Morphism a = *cat.parse("e0|", v);
    Morphism b = *cat.parse("|f0", v);
    auto ms = cat.mcm(a, b);
    DegreeVector probe = deg_add(deg_join(a.degree(), b.degree()), DegreeVector(cat.rank(), 1));
    for (const Morphism& c : cat.morphisms_of_degree(v, probe)) {
        if (!cat.left_divides(a, c) || !cat.left_divides(b, c)) continue;
        size_t hits = 0;
        for (const Morphism& m : ms)
            if (cat.left_divides(m, c)) ++hits;
        CHECK(hits == 1);
    }
}

TEST_CASE("morphisms_of_degree enumeration") {
    PathCategory cat{two_loop_spec()};
    ObjectId v = cat.objects().front();
    auto deg1 = cat.morphisms_of_degree(v, {1});
    REQUIRE(deg1.size() == 2);
    CHECK(cat.format(deg1[0]) == "e0");
    CHECK(cat.format(deg1[1]) == "e1");

    auto deg0 = cat.morphisms_of_degree(v, {0});
    REQUIRE(deg0.size() == 1);
    CHECK(deg0[0].is_identity());

    auto deg2 = cat.morphisms_of_degree(v, {2});
    std::vector<std::string> names;
    for (const Morphism& m : deg2) names.push_back(cat.format(m));
    CHECK(names == std::vector<std::string>{"e0e0", "e0e1", "e1e0", "e1e1"});

    CHECK_THROWS_AS(cat.morphisms_of_degree(ObjectId{7}, {1}), error);
}

TEST_CASE("degree hypothesis report") {
    CHECK(PathCategory{two_loop_spec()}.check_degree_hypotheses().pass());
    CHECK(PathCategory{complete_two_vertex_spec()}.check_degree_hypotheses().pass());

    auto rep = PathCategory{single_loop_spec()}.check_degree_hypotheses();
    CHECK_FALSE(rep.loops_ok);
    CHECK(rep.no_sources);
    REQUIRE(rep.entries.size() == 1);
    CHECK(rep.entries[0].loop_count == 1);
}

TEST_CASE("associativity on sampled triples") {
    PathCategory cat{complete_two_vertex_spec()};
    for (const ObjectId& v : cat.objects())
        for (const Morphism& a : cat.morphisms_of_degree(v, {2}))
            for (const Morphism& b : cat.morphisms_of_degree(a.dom, {1}))
                for (const Morphism& c : cat.morphisms_of_degree(b.dom, {1}))
                    CHECK(cat.compose(cat.compose(a, b), c) == cat.compose(a, cat.compose(b, c)));
}

TEST_CASE("left cancellation, exhaustive to degree 3") {
    PathCategory cat{two_loop_spec()};
    ObjectId v = cat.objects().front();
    for (uint32_t dc = 0; dc <= 3; ++dc)
        for (const Morphism& c : cat.morphisms_of_degree(v, {dc}))
            for (uint32_t dx = 0; dx + dc <= 3; ++dx) {
                auto xs = cat.morphisms_of_degree(c.dom, {dx});
                for (const Morphism& x : xs)
                    for (const Morphism& y : xs)
                        if (cat.compose(c, x) == cat.compose(c, y)) CHECK(x == y);
            }
}

TEST_CASE("degree functoriality") {
    PathCategory cat{two_loop_square_spec()};
    ObjectId v = cat.objects().front();
    for (const Morphism& a : cat.morphisms_of_degree(v, {1, 2}))
        for (const Morphism& b : cat.morphisms_of_degree(a.dom, {2, 0}))
            CHECK(cat.compose(a, b).degree() == deg_add(a.degree(), b.degree()));
}

TEST_CASE("morphism string round trip") {
    PathCategory cat{two_loop_square_spec()};
    ObjectId v = cat.objects().front();
    for (const Morphism& m : cat.morphisms_of_degree(v, {2, 1})) {
        auto back = cat.parse(cat.format(m), v);
        REQUIRE(back);
        CHECK(*back == m);
    }
    CHECK_FALSE(cat.parse("e0|zz", v).has_value());
}
