#include "selmer/poly.hpp"

#include <doctest.h>

using namespace selmer;

TEST_CASE("polynomial parsing and evaluation") {
    Poly p = parse_polynomial("-27*(A^4-12*A^3*B+14*A^2*B^2+12*A*B^3+B^4)");
    CHECK(p.eval({mpq_class(1), mpq_class(0), 0, 0}) == -27);
    CHECK(p.eval({mpq_class(1), mpq_class(1), 0, 0}) == -27 * 16);
    CHECK(p.degree(Var::A) == 4);
    CHECK(p.uses_only({Var::A, Var::B}));
    CHECK((Poly::var(Var::A) * Poly::var(Var::A) - Poly::var(Var::A).pow(2)).is_zero());
}

TEST_CASE("rational functions in q") {
    RatFunc f = parse_expression("(3*q-3)/q^2");
    CHECK(f.eval_q(7) == mpq_class(18, 49));
    CHECK(f.leading_at_infinity(1) == 3);
    CHECK(parse_expression("(q^8-1)/q^10").leading_at_infinity(2) == 1);
    CHECK(f.same_as(parse_expression("3*(q-1)/q^2")));
    CHECK_THROWS(parse_expression("q").leading_at_infinity(0));
}

TEST_CASE("log_6(2) terms") {
    RatFunc f = parse_expression("1/2*(3+2*u^2)");
    auto c = f.as_poly().coeffs_in(Var::u);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == mpq_class(3, 2));
    CHECK(c[1] == 0);
    CHECK(c[2] == 1);
}

TEST_CASE("integer bivariate polynomials") {
    BiPoly f(parse_polynomial("54*(A^2+B^2)*(A^4-18*A^3*B+74*A^2*B^2+18*A*B^3+B^4)"));
    CHECK(f.weighted_degree(1, 1) == 6);
    CHECK(f.weighted_degree(1, 2) == -1);
    CHECK(f.eval(1, 0) == 54);
    CHECK(f.eval(1, 1) == 54 * 2 * 76);
    auto m = f.coeffs_mod(7);
    for (auto c : m) {
        CHECK(c >= 0);
        CHECK(c < 7);
    }
}

TEST_CASE("rational text") {
    CHECK(to_string(mpq_class(-3, 4)) == "-3/4");
    CHECK(to_string(mpq_class(5)) == "5");
    CHECK(parse_rational("10/4") == mpq_class(5, 2));
}
