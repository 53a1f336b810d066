#include "selmer/curves.hpp"

#include "selmer/arith.hpp"
#include "selmer/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace selmer {

bool RationalPoint::operator==(const RationalPoint& o) const {
    if (infinity || o.infinity) return infinity == o.infinity;
    return x == o.x && y == o.y;
}

std::string RationalPoint::str() const {
    if (infinity) return "O";
    return "(" + to_string(x) + ", " + to_string(y) + ")";
}

Invariants invariants(const CurveModel& E) {
    auto w = weierstrass_data(E.a);
    if (w.disc == 0) throw std::domain_error("singular model");
    return w;
}

void CurveModel::validate() const {
    invariants(*this);
    if (!marked) return;
    if (!on_curve(*this, *marked)) throw std::domain_error("marked point is not on the curve");
    if (marked_order < 1) throw std::domain_error("marked point has no declared order");
    if (!multiple(*this, *marked, marked_order).infinity) throw std::domain_error("marked point does not have the declared order");
    for (long l = 2; l <= marked_order; ++l) {
        if (marked_order % l != 0 || !is_prime_u64(static_cast<std::uint64_t>(l))) continue;
        if (multiple(*this, *marked, marked_order / l).infinity)
            throw std::domain_error("marked point has order smaller than declared");
    }
}

mpz_class short_discriminant(const mpz_class& a, const mpz_class& b) { return -16 * (4 * a * a * a + 27 * b * b); }

ShortModel reduce12(const mpz_class& a0, const mpz_class& b0) {
    mpz_class a = a0, b = b0;
    if (short_discriminant(a, b) == 0) throw std::domain_error("singular model");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (g != 1) {
        for (const auto& [p, e] : factorize(g).factors) {
            if (e < 4) continue;
            int va = a == 0 ? 1 << 20 : valuation(a, p);
            int vb = b == 0 ? 1 << 20 : valuation(b, p);
            int t = std::min(va / 4, vb / 6);
            if (t <= 0) continue;
            mpz_class pt;
            mpz_pow_ui(pt.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(t));
            mpz_class p4 = pt * pt * pt * pt, p6 = p4 * pt * pt;
            mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), p4.get_mpz_t());
            mpz_divexact(b.get_mpz_t(), b.get_mpz_t(), p6.get_mpz_t());
        }
    }
    return {a, b, true};
}

ShortModel short_form(const CurveModel& E) {
    auto w = invariants(E);
    // y^2 = x^3 - 27 c4 x - 54 c6, then clear denominators with a scaling u
    mpq_class a = -27 * w.c4, b = -54 * w.c6;
    mpz_class s = 1;
    for (;;) {
        mpz_class s2 = s * s, s4 = s2 * s2, s6 = s4 * s2;
        mpq_class as = a * s4, bs = b * s6;
        as.canonicalize();
        bs.canonicalize();
        if (as.get_den() == 1 && bs.get_den() == 1) return reduce12(as.get_num(), bs.get_num());
        mpz_class l;
        mpz_lcm(l.get_mpz_t(), as.get_den().get_mpz_t(), bs.get_den().get_mpz_t());
        s *= l;
    }
}

bool on_curve(const CurveModel& E, const RationalPoint& P) {
    if (P.infinity) return true;
    const auto& a = E.a;
    mpq_class lhs = P.y * P.y + a[0] * P.x * P.y + a[2] * P.y;
    mpq_class rhs = P.x * P.x * P.x + a[1] * P.x * P.x + a[3] * P.x + a[4];
    return lhs == rhs;
}

RationalPoint negate(const CurveModel& E, const RationalPoint& P) {
    if (P.infinity) return P;
    mpq_class y = -P.y - E.a[0] * P.x - E.a[2];
    return RationalPoint::affine(P.x, y);
}

namespace {

RationalPoint add_unchecked(const CurveModel& E, const RationalPoint& P, const RationalPoint& Q) {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    const auto& a = E.a;
    mpq_class lambda, nu;
    if (P.x == Q.x) {
        if (P.y + Q.y + a[0] * Q.x + a[2] == 0) return RationalPoint::at_infinity();
        mpq_class num = 3 * P.x * P.x + 2 * a[1] * P.x + a[3] - a[0] * P.y;
        mpq_class den = 2 * P.y + a[0] * P.x + a[2];
        lambda = num / den;
        nu = (-P.x * P.x * P.x + a[3] * P.x + 2 * a[4] - a[2] * P.y) / den;
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
        nu = (P.y * Q.x - Q.y * P.x) / (Q.x - P.x);
    }
    mpq_class x3 = lambda * lambda + a[0] * lambda - a[1] - P.x - Q.x;
    mpq_class y3 = -(lambda + a[0]) * x3 - nu - a[2];
    x3.canonicalize();
    y3.canonicalize();
    return RationalPoint::affine(x3, y3);
}

}  // namespace

RationalPoint add(const CurveModel& E, const RationalPoint& P, const RationalPoint& Q) {
    if (!on_curve(E, P) || !on_curve(E, Q)) throw std::domain_error("point is not on the curve");
    return add_unchecked(E, P, Q);
}

RationalPoint multiple(const CurveModel& E, const RationalPoint& P, long k) {
    if (!on_curve(E, P)) throw std::domain_error("point is not on the curve");
    RationalPoint base = k < 0 ? negate(E, P) : P;
    unsigned long n = static_cast<unsigned long>(k < 0 ? -k : k);
    RationalPoint acc = RationalPoint::at_infinity();
    while (n) {
        if (n & 1) acc = add_unchecked(E, acc, base);
        n >>= 1;
        if (n) base = add_unchecked(E, base, base);
    }
    return acc;
}

int torsion_order(const CurveModel& E, const RationalPoint& P, int bound) {
    RationalPoint R = P;
    for (int n = 1; n <= bound; ++n) {
        if (R.infinity) return n;
        R = add(E, R, P);
    }
    return 0;
}

mpz_class height(const ShortModel& S) {
    if (!S.minimal12) throw std::invalid_argument("height needs a 12th-power reduced model");
    mpz_class a3 = abs(S.a * S.a * S.a), b2 = S.b * S.b;
    return a3 > b2 ? a3 : b2;
}

MinimalValuation minimal_valuation(const ShortModel& S, long p) {
    if (p < 5) throw std::domain_error("excluded prime");
    mpz_class pz = p;
    mpz_class c4 = -48 * S.a, c6 = -864 * S.b, disc = short_discriminant(S.a, S.b);
    if (disc == 0) throw std::domain_error("singular model");
    int vd = valuation(disc, pz);
    constexpr int big = 1 << 20;
    int v4 = c4 == 0 ? big : valuation(c4, pz);
    int v6 = c6 == 0 ? big : valuation(c6, pz);
    int t = std::min({v4 / 4, v6 / 6, vd / 12});
    MinimalValuation m;
    m.disc = vd - 12 * t;
    if (c4 != 0) m.c4 = v4 - 4 * t;
    return m;
}

}  // namespace selmer
