#include "selmer/arith.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace selmer;

TEST_CASE("valuation") {
    CHECK(valuation(mpz_class(48), mpz_class(2)) == 4);
    CHECK(valuation(mpz_class(1), mpz_class(7)) == 0);
    CHECK(valuation(mpz_class(-161051), mpz_class(11)) == 5);
    CHECK(valuation(mpq_class(9, 250), mpz_class(5)) == -3);
    CHECK_THROWS_WITH_AS(valuation(mpz_class(0), mpz_class(3)), "valuation undefined", std::domain_error);
    CHECK_THROWS_AS(valuation(mpq_class(0), mpz_class(3)), std::domain_error);
}

TEST_CASE("valuation strips exactly the prime power") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        long n = static_cast<long>(rng() % 1000000) + 1;
        for (long p : {2L, 3L, 5L, 7L, 11L}) {
            long m = n;
            int e = valuation(n, p);
            for (int k = 0; k < e; ++k) m /= p;
            CHECK(valuation(m, p) == 0);
        }
    }
}

TEST_CASE("factorize small cases") {
    auto one = factorize(mpz_class(1));
    CHECK(one.factors.empty());
    CHECK(one.sign == 1);

    auto f = factorize(mpz_class(-48));
    CHECK(f.sign == -1);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0] == std::make_pair(mpz_class(2), 4));
    CHECK(f.factors[1] == std::make_pair(mpz_class(3), 1));

    // G(1,2) at (5,1): 16 * 1 * (25 - 4)
    auto d = factorize(mpz_class(336));
    REQUIRE(d.factors.size() == 3);
    CHECK(d.factors[0] == std::make_pair(mpz_class(2), 4));
    CHECK(d.factors[1] == std::make_pair(mpz_class(3), 1));
    CHECK(d.factors[2] == std::make_pair(mpz_class(7), 1));
}

TEST_CASE("factorize round trip up to 10^6") {
    long bad = 0;
    for (long n = 1; n <= 1000000; ++n) {
        auto f = factorize(mpz_class(n));
        if (f.value() != n) ++bad;
    }
    CHECK(bad == 0);
}

TEST_CASE("factorize round trip on 128-bit integers") {
    std::mt19937_64 rng(11);
    // products of four 32-bit words: 128-bit values whose prime factors stay within the rho budget
    for (int i = 0; i < 10000; ++i) {
        mpz_class n = 1;
        for (int k = 0; k < 4; ++k) n *= mpz_class(static_cast<unsigned long>((rng() >> 32) | 1));
        auto f = factorize(n);
        REQUIRE(f.value() == n);
        mpz_class prev = 1;
        for (const auto& [p, e] : f.factors) {
            CHECK(p > prev);
            CHECK(is_probable_prime(p));
            CHECK(e > 0);
            prev = p;
        }
    }
    // uniformly random values: either the exact factorization or the explicit budget error
    long exceeded = 0;
    for (int i = 0; i < 60; ++i) {
        mpz_class n = mpz_class(static_cast<unsigned long>(rng()));
        n <<= 64;
        n += mpz_class(static_cast<unsigned long>(rng()));
        try {
            auto f = factorize(n);
            CHECK(f.value() == n);
        } catch (const FactorBudgetExceeded&) {
            ++exceeded;
        }
    }
    MESSAGE("budget exceeded on " << exceeded << " of 60 random 128-bit values");
}

TEST_CASE("is_square_mod") {
    CHECK(is_square_mod(-3L, 7).square);
    CHECK_FALSE(is_square_mod(-3L, 5).square);
    CHECK(is_square_mod(4L, 11).square);
    auto z = is_square_mod(14L, 7);
    CHECK_FALSE(z.square);
    CHECK(z.zero);
    CHECK_THROWS_AS(is_square_mod(3L, 2), std::domain_error);
    CHECK(is_square_mod(mpz_class("700000000000000000000000000000000000") - 3, 7).square);
    CHECK_FALSE(is_square_mod(mpz_class("500000000000000000000000000000000000") - 3, 5).square);
}

TEST_CASE("is_square_mod agrees with enumeration of squares") {
    for (long q : primes_up_to(97)) {
        if (q == 2) continue;
        std::vector<char> sq(static_cast<std::size_t>(q), 0);
        for (long x = 1; x < q; ++x) sq[static_cast<std::size_t>(x * x % q)] = 1;
        for (long a = -2 * q; a < 2 * q; ++a) {
            auto t = is_square_mod(a, q);
            long r = mod_floor(a, q);
            CHECK(t.zero == (r == 0));
            CHECK(t.square == (r != 0 && sq[static_cast<std::size_t>(r)]));
        }
    }
}

TEST_CASE("primes_in_class") {
    CHECK(primes_in_class(3, 1, 20) == std::vector<long>{7, 13, 19});
    CHECK(primes_in_class(1, 0, 10) == std::vector<long>{2, 3, 5, 7});
    CHECK(primes_in_class(5, 2, 30) == std::vector<long>{2, 7, 17});
    CHECK(primes_in_class(6, 3, 100).empty());
}

TEST_CASE("primes_in_class partitions the primes coprime to m") {
    for (long m : {3L, 4L, 5L, 7L, 8L, 9L, 12L}) {
        std::vector<long> all;
        for (long a = 1; a < m; ++a)
            if (std::gcd(a, m) == 1)
                for (long p : primes_in_class(m, a, 2000)) all.push_back(p);
        std::sort(all.begin(), all.end());
        std::vector<long> expect;
        for (long p : primes_up_to(2000))
            if (m % p != 0) expect.push_back(p);
        CHECK(all == expect);
    }
}

TEST_CASE("mertens_ap") {
    CHECK(mertens_ap(1, 0, 100) == doctest::Approx(1.8028).epsilon(1e-3));
    CHECK(mertens_ap(4, 1, 10) == doctest::Approx(0.2));
    CHECK(mertens_ap(3, 2, 20) == doctest::Approx(0.5 + 0.2 + 1.0 / 11 + 1.0 / 17));
}
