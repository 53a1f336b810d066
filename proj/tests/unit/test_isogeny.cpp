#include "common.hpp"

#include "selmer/arith.hpp"
#include "selmer/isogeny.hpp"
#include "selmer/reduction.hpp"

#include <doctest.h>

#include <random>

using namespace selmer;
using selmer::test::family;
using selmer::test::registry;

namespace {

CurveModel model(const mpq_class& a2, const mpq_class& a4, const mpq_class& a6) {
    CurveModel E;
    E.a = {mpq_class(0), a2, mpq_class(0), a4, a6};
    return E;
}

}  // namespace

TEST_CASE("2-isogeny against the classical formula") {
    // y^2 = x(x^2 + A x + B) / <(0,0)> is y^2 = x(x^2 - 2A x + A^2 - 4B)
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<long> d(-40, 40);
    int done = 0;
    while (done < 50) {
        long A = d(rng), B = d(rng);
        if (B == 0 || A * A - 4 * B == 0) continue;
        ++done;
        CurveModel E = model(A, B, 0);
        CurveModel Ep = velu_quotient(E, RationalPoint::affine(0, 0), 2);
        CurveModel C = model(-2 * A, A * A - 4 * B, 0);
        CHECK(j_invariant(Ep) == j_invariant(C));
        CHECK(invariants(Ep).disc / invariants(C).disc > 0);
    }
}

TEST_CASE("Velu on a short model with a 2-torsion point") {
    // y^2 = x^3 - 7x + 6 = (x - 1)(x - 2)(x + 3)
    CurveModel E = model(0, -7, 6);
    CurveModel Ep = velu_quotient(E, RationalPoint::affine(1, 0), 2);
    mpq_class v = 3 * 1 - 7;
    CHECK(Ep.a[3] == -7 - 5 * v);
    CHECK(Ep.a[4] == 6 - 7 * 1 * v);
}

TEST_CASE("trivial kernel and wrong orders") {
    CurveModel E = specialize(family("G(1,5)"), 1, 2);
    CurveModel same = velu_quotient(E, RationalPoint::at_infinity(), 1);
    CHECK(same.a == E.a);
    CHECK_THROWS_WITH_AS(velu_quotient(E, *E.marked, 3), doctest::Contains("not of the claimed order"),
                         std::domain_error);
}

TEST_CASE("G(1,5) quotient reproduces the example model") {
    const auto& g = family("G(1,5)");
    CurveModel E = specialize(g, 1, 1);
    auto Ep = velu_quotient(E, *E.marked, 5);
    auto w = invariants(Ep);
    const auto& ex = g.example_models.at("C5");
    mpq_class k4 = -27 * w.c4 / mpq_class(ex.first.eval(1, 1)), k6 = -54 * w.c6 / mpq_class(ex.second.eval(1, 1));
    CHECK(k4 * k4 * k4 == k6 * k6);
    auto r = example_model_check(g, "C5", 20);
    CHECK(r.ok());
    CHECK(r.samples == 20);
    REQUIRE(r.u);
    CHECK(*r.u == 1);
    CHECK(example_model_check(g, "O", 20).ok());
}

TEST_CASE("dual discriminant check for every base model and kernel") {
    for (const auto& g : registry().families()) {
        if (!g.base_model) continue;
        std::vector<std::string> ks{"O"};
        for (const auto& k : g.kernels()) ks.push_back(k);
        for (const auto& k : ks) {
            CAPTURE(g.id);
            CAPTURE(k);
            auto r = dual_discriminant_check(g, k, 100, 1, 50);
            CHECK(r.ok());
            CHECK(r.samples == 100);
            CHECK(r.u);
        }
    }
}

TEST_CASE("G(1,4) 2-isogeny valuations follow the printed pattern") {
    const auto& g = family("G(1,4)");
    for (auto [A, B] : {std::pair<long, long>{1, 1}, {2, 5}, {-3, 7}, {5, -4}}) {
        CAPTURE(A);
        CAPTURE(B);
        mpz_class t = table_discriminant(g, "C2", A, B);
        mpq_class d = invariants(family_chain(g, "C2", A, B).back()).disc;
        for (const auto& [p, e] : factorize(t).factors) {
            (void)e;
            if (p < 5) continue;
            CHECK(valuation(d, p) == valuation(t, p));
        }
    }
}

TEST_CASE("degenerate samples are skipped") {
    auto r = dual_discriminant_check(family("G(1,5)"), "C5", 200, 3, 2);
    CHECK(r.skipped > 0);
    CHECK(r.ok());
}

TEST_CASE("composite chains") {
    const auto& g9 = family("G(1,9)");
    CHECK(chain_primes(g9, "C9") == std::vector<int>{3, 3});
    const auto& g6 = family("G(1,6)");
    CHECK(chain_primes(g6, "C6") == std::vector<int>{2, 3});
    CHECK(chain_primes(g6, "C2") == std::vector<int>{2});

    CurveModel E = specialize(g6, 2, 5);
    RationalPoint P = kernel_generator(g6, "C6", 2, 5);
    auto c23 = composite_chain(E, P, 6, {2, 3});
    auto c32 = composite_chain(E, P, 6, {3, 2});
    CHECK(c23.size() == 3);
    CHECK(j_invariant(c23.back()) == j_invariant(c32.back()));
    CHECK(j_invariant(c23.back()) == j_invariant(velu_quotient(E, P, 6)));
    CHECK(composite_chain(E, multiple(E, P, 3), 2).size() == 2);

    CurveModel E9 = specialize(g9, 1, 3);
    auto c9 = family_chain(g9, "C9", 1, 3);
    CHECK(c9.size() == 3);
    CHECK(j_invariant(c9.back()) == j_invariant(velu_quotient(E9, *E9.marked, 9)));
}

TEST_CASE("j-invariant does not depend on the model") {
    const auto& g = family("G(1,7)");
    CurveModel Ep = family_chain(g, "C7", 3, -2).back();
    auto s = short_form(Ep);
    CurveModel S;
    S.a = {mpq_class(0), mpq_class(0), mpq_class(0), mpq_class(s.a), mpq_class(s.b)};
    CHECK(j_invariant(Ep) == j_invariant(S));
}

TEST_CASE("valuation ratios at multiplicative primes") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<long> d(-30, 30);
    for (const auto& g : registry().families()) {
        if (!g.base_model) continue;
        for (const auto& phi : g.kernels()) {
            auto primes = chain_primes(g, phi);
            for (int i = 0; i < 20; ++i) {
                mpz_class A = d(rng), B = d(rng);
                if ((A == 0 && B == 0) || table_discriminant(g, "O", A, B) == 0) continue;
                auto chain = family_chain(g, phi, A, B);
                std::vector<ShortModel> S;
                for (const auto& c : chain) S.push_back(short_form(c));
                for (const auto& [p, e] : factorize(abs(table_discriminant(g, "O", A, B))).factors) {
                    (void)e;
                    if (p < 5 || (g.level * g.kernel(phi).degree) % p.get_si() == 0) continue;
                    long pl = p.get_si();
                    auto r0 = classify(S[0], pl);
                    if (r0.kind != ReductionKind::multiplicative) continue;
                    for (std::size_t k = 0; k + 1 < S.size(); ++k) {
                        auto a = classify(S[k], pl), b = classify(S[k + 1], pl);
                        CAPTURE(g.id);
                        CAPTURE(phi);
                        REQUIRE(b.kind == ReductionKind::multiplicative);
                        mpq_class r(b.vdisc, a.vdisc);
                        r.canonicalize();
                        int l = primes[k];
                        CHECK((r == l || r == 1 || r == mpq_class(1, l)));
                        CHECK(a.split == b.split);
                    }
                }
            }
        }
    }
}
