#include "common.hpp"

#include "selmer/arith.hpp"
#include "selmer/reduction.hpp"

#include <doctest.h>

#include <random>

using namespace selmer;
using selmer::test::family;

namespace {

// affine points of y^2 = x^3 + a x + b over F_p, singular point included
long affine_points(const mpz_class& a, const mpz_class& b, long p) {
    long am = mpz_class(a % p).get_si(), bm = mpz_class(b % p).get_si();
    long n = 0;
    for (long x = 0; x < p; ++x) {
        long f = mod_floor((x * x % p * x + am * x + bm) % p, p);
        n += f == 0 ? 1 : (is_square_mod(f, p).square ? 2 : 0);
    }
    return n;
}

ShortModel model(long a, long b) { return reduce12(a, b); }

}  // namespace

TEST_CASE("classify examples") {
    auto r = classify(model(1, 1), 5);
    CHECK(r.kind == ReductionKind::good);
    // x^3 - 3x + 2 = (x - 1)^2 (x + 2) modulo 7
    auto node = classify(model(-3 + 7 * 4, 2 + 7 * 3), 7);
    CHECK(node.kind == ReductionKind::multiplicative);
    CHECK(node.vdisc >= 1);
    auto cusp = classify(model(7, 7), 7);
    CHECK(cusp.kind == ReductionKind::additive);
    CHECK(cusp.tamagawa == 0);
    CHECK(classify(model(1, 1), 31).kind == ReductionKind::multiplicative);
    CHECK(classify(model(1, 1), 31).vdisc == 1);
    CHECK_THROWS_AS(classify(model(1, 1), 3), std::domain_error);
}

TEST_CASE("classify against point counts") {
    std::mt19937_64 rng(5);
    for (long p : {5L, 7L, 11L, 13L}) {
        std::uniform_int_distribution<long> res(0, p - 1), lift(-20, 20);
        int mult = 0, add = 0, good = 0;
        for (int i = 0; i < 500; ++i) {
            long a, b;
            if (i % 2 == 0) {
                // force p | disc: reduce to (x - x0)^2 (x + 2 x0)
                long x0 = res(rng);
                a = -3 * x0 * x0 + p * lift(rng);
                b = 2 * x0 * x0 * x0 + p * lift(rng);
            } else {
                a = lift(rng) * 7 + res(rng);
                b = lift(rng) * 11 + res(rng);
            }
            if (4 * a * a * a + 27 * b * b == 0) continue;
            mpz_class pz = p;
            if (a % (p * p * p * p) == 0 && b % (p * p * p * p * p * p) == 0) continue;
            auto r = classify(reduce12(a, b), p);
            CAPTURE(a);
            CAPTURE(b);
            CAPTURE(p);
            CHECK(r.vdisc == valuation(mpz_class(4 * a * a * a + 27 * b * b), pz));
            long n = affine_points(a, b, p);
            switch (r.kind) {
                case ReductionKind::good:
                    ++good;
                    CHECK(r.vdisc == 0);
                    break;
                case ReductionKind::multiplicative:
                    ++mult;
                    REQUIRE(r.split);
                    CHECK(n == (*r.split ? p - 1 : p + 1));
                    CHECK(r.tamagawa == (*r.split ? r.vdisc : (r.vdisc % 2 == 0 ? 2 : 1)));
                    break;
                case ReductionKind::additive:
                    ++add;
                    CHECK(n == p);
                    break;
            }
        }
        CHECK(mult > 50);
        CHECK(add > 5);
        CHECK(good > 50);
    }
}

TEST_CASE("G(1,3) multiplicative reduction splits at primes 1 mod 3") {
    const auto& g = family("G(1,3)");
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<long> d(-60, 60);
    int seen = 0;
    for (int i = 0; i < 400; ++i) {
        mpz_class A = d(rng), B = d(rng);
        mpz_class D = table_discriminant(g, "O", A, B);
        if (D == 0) continue;
        auto [f4, f6] = evaluate_f(g, A, B);
        ShortModel S = reduce12(f4, f6);
        for (const auto& [p, e] : factorize(D).factors) {
            (void)e;
            if (p < 5 || p % 3 != 1 || !p.fits_slong_p()) continue;
            auto r = classify(S, p.get_si());
            if (r.kind != ReductionKind::multiplicative) continue;
            ++seen;
            CAPTURE(A);
            CAPTURE(B);
            CAPTURE(p);
            CHECK(*r.split);
        }
    }
    CHECK(seen > 50);
}

TEST_CASE("step ratios") {
    CHECK(step_ratio(1, 5, 5, true) == 5);
    CHECK(step_ratio(5, 1, 5, true) == mpq_class(1, 5));
    CHECK(step_ratio(3, 3, 3, true) == 1);
    CHECK(step_ratio(1, 5, 5, false) == 1);
    CHECK(step_ratio(1, 2, 2, false) == 2);
    CHECK(step_ratio(2, 4, 2, false) == 1);
    CHECK(step_ratio(2, 4, 2, false, RatioMode::pseudo) == 2);
    CHECK_THROWS_AS(step_ratio(0, 2, 2, true), std::invalid_argument);
}

TEST_CASE("n_class") {
    ReductionRecord E{7, ReductionKind::multiplicative, true, 1, 1};
    ReductionRecord Ep{7, ReductionKind::multiplicative, true, 5, 5};
    auto r = n_class(E, Ep, 5, 7);
    CHECK(r.ratio == 5);
    CHECK(r.granted);
    E.split = Ep.split = false;
    r = n_class(E, Ep, 5, 7);
    CHECK(r.ratio == 1);
    CHECK_FALSE(r.granted);

    ReductionRecord good{7, ReductionKind::good, std::nullopt, 0, 1};
    r = n_class(good, good, 5, 7);
    CHECK(r.ratio == 1);
    CHECK_FALSE(r.granted);

    CHECK_THROWS_AS(n_class(E, Ep, 5, 5), std::domain_error);
    CHECK_THROWS_AS(n_class(E, good, 3, 7), std::logic_error);

    ReductionRecord a{11, ReductionKind::multiplicative, false, 2, 2};
    ReductionRecord b{11, ReductionKind::multiplicative, false, 4, 2};
    CHECK(n_class(a, b, 2, 11).ratio == 1);
    CHECK(n_class(a, b, 2, 11, RatioMode::pseudo).ratio == 2);
    CHECK(n_class(a, b, 2, 11, RatioMode::pseudo).granted);

    std::vector<ReductionRecord> chain{{13, ReductionKind::multiplicative, true, 1, 1},
                                       {13, ReductionKind::multiplicative, true, 2, 2},
                                       {13, ReductionKind::multiplicative, true, 6, 6}};
    CHECK(chain_ratio(chain, {2, 3}, 13) == 6);
    CHECK_THROWS_AS(chain_ratio(chain, {2}, 13), std::invalid_argument);
}

TEST_CASE("rational_log") {
    CHECK(rational_log(3, 9) == mpq_class(1, 2));
    CHECK(rational_log(mpq_class(1, 4), 2) == -2);
    CHECK(rational_log(8, 4) == mpq_class(3, 2));
    CHECK(rational_log(1, 7) == 0);
    CHECK(rational_log(7, 7) == 1);
    CHECK_FALSE(rational_log(6, 4));
    CHECK_FALSE(rational_log(2, 6));
    CHECK_FALSE(rational_log(0, 5));
}
