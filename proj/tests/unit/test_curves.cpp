#include "common.hpp"

#include "selmer/curves.hpp"
#include "selmer/isogeny.hpp"

#include <doctest.h>

#include <random>

using namespace selmer;
using selmer::test::family;

namespace {

CurveModel model(long a1, long a2, long a3, long a4, long a6) {
    CurveModel E;
    E.a = {mpq_class(a1), mpq_class(a2), mpq_class(a3), mpq_class(a4), mpq_class(a6)};
    return E;
}

}  // namespace

TEST_CASE("invariants") {
    auto w = invariants(model(0, 0, 0, -1, 0));
    CHECK(w.disc == 64);
    CHECK(w.c4 == 48);
    CHECK(invariants(model(0, 0, 0, 0, 1)).disc == -432);
    CHECK_THROWS_WITH_AS(invariants(model(0, 0, 0, 0, 0)), "singular model", std::domain_error);

    auto E = model(1, -1, 1, -5, 7);
    auto v = invariants(E);
    CHECK(v.c4 * v.c4 * v.c4 - v.c6 * v.c6 == 1728 * v.disc);
    // (x, y) -> (u^2 x, u^3 y) with u = 2 scales a_i by u^i
    CurveModel S = E;
    const int w_i[5] = {1, 2, 3, 4, 6};
    for (int i = 0; i < 5; ++i) {
        mpz_class u;
        mpz_ui_pow_ui(u.get_mpz_t(), 2, static_cast<unsigned long>(w_i[i]));
        S.a[i] *= u;
    }
    CHECK(invariants(S).disc == 4096 * v.disc);
}

TEST_CASE("short_form and reduce12") {
    auto r = reduce12(16, 64);
    CHECK(r.a == 1);
    CHECK(r.b == 1);
    CHECK(r.minimal12);
    auto s = short_form(model(0, 0, 0, 1, 1));
    CHECK(s.minimal12);
    CHECK(s.a == 1);
    CHECK(s.b == 1);
    auto s2 = short_form(model(0, 0, 0, 16, 64));
    CHECK(s2.a == 1);
    CHECK(s2.b == 1);
    CHECK_THROWS_AS(reduce12(0, 0), std::domain_error);
}

TEST_CASE("short form of the G(1,3) base model matches evaluate_f") {
    const auto& g = family("G(1,3)");
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<long> d(-20, 20);
    for (int i = 0; i < 50; ++i) {
        mpz_class A = d(rng), B = d(rng);
        if (table_discriminant(g, "O", A, B) == 0) continue;
        auto s = short_form(specialize(g, A, B));
        auto [a, b] = evaluate_f(g, A, B);
        auto t = reduce12(a, b);
        // same curve over Q up to a twist by a {2,3}-unit: compare j and then the reduced pair
        mpq_class j1 = mpq_class(s.a * s.a * s.a) / mpq_class(4 * s.a * s.a * s.a + 27 * s.b * s.b);
        mpq_class j2 = mpq_class(t.a * t.a * t.a) / mpq_class(4 * t.a * t.a * t.a + 27 * t.b * t.b);
        CHECK(j1 == j2);
        CHECK(abs(s.a) == abs(t.a));
        CHECK(abs(s.b) == abs(t.b));
    }
}

TEST_CASE("group law") {
    const auto& g = family("G(1,5)");
    CurveModel E = specialize(g, 2, 3);
    REQUIRE(E.marked);
    const auto& P = *E.marked;
    CHECK(multiple(E, P, 1) == P);
    CHECK(multiple(E, P, 5).infinity);
    CHECK_FALSE(multiple(E, P, 4).infinity);
    CHECK(add(E, P, negate(E, P)).infinity);
    CHECK(torsion_order(E, P) == 5);
    CHECK_THROWS(add(E, P, RationalPoint::affine(123, 456)));
    E.validate();
}

TEST_CASE("group law is associative on marked multiples") {
    const char* ids[] = {"G(1,7)", "G(1,9)", "G(1,10)", "G(1,12)", "G(2,8)"};
    for (const char* id : ids) {
        CAPTURE(id);
        CurveModel E = specialize(family(id), 3, 7);
        REQUIRE(E.marked);
        int n = E.marked_order;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                auto P = multiple(E, *E.marked, i), Q = multiple(E, *E.marked, j), R = multiple(E, *E.marked, 1);
                CHECK(add(E, add(E, P, Q), R) == add(E, P, add(E, Q, R)));
                CHECK(add(E, P, Q) == multiple(E, *E.marked, (i + j) % n));
            }
    }
}

TEST_CASE("height") {
    CHECK(height(reduce12(1, 1)) == 1);
    CHECK(height(reduce12(2, 3)) == 9);
    CHECK(height(reduce12(0, 1)) == 1);
    ShortModel raw{2, 3, false};
    CHECK_THROWS_AS(height(raw), std::invalid_argument);
    for (long u : {2L, 3L, 5L}) {
        mpz_class u4 = u * u * u * u, u6 = u4 * u * u;
        CHECK(height(reduce12(-7 * u4, 11 * u6)) == height(reduce12(-7, 11)));
    }
}

TEST_CASE("minimal_valuation") {
    CHECK(minimal_valuation(reduce12(1, 1), 7).disc == 0);
    ShortModel raw{625, 15625, false};
    CHECK(minimal_valuation(raw, 5).disc == minimal_valuation(reduce12(1, 1), 5).disc);
    auto [a, b] = evaluate_f(family("G(1,5)"), 11, 1);
    CHECK(minimal_valuation(reduce12(a, b), 11).disc == 5);
    CHECK_THROWS_WITH_AS(minimal_valuation(reduce12(1, 1), 3), "excluded prime", std::domain_error);
}
