#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>

namespace selmer {

// b- and c-quantities of a long Weierstrass model; T is any ring with + - *
template <class T>
struct WeierstrassData {
    T b2, b4, b6, b8, c4, c6, disc;
};

template <class T>
WeierstrassData<T> weierstrass_data(const std::array<T, 5>& a) {
    auto k = [](long n) { return T(mpq_class(n)); };
    const T &a1 = a[0], &a2 = a[1], &a3 = a[2], &a4 = a[3], &a6 = a[4];
    WeierstrassData<T> w;
    w.b2 = a1 * a1 + k(4) * a2;
    w.b4 = k(2) * a4 + a1 * a3;
    w.b6 = a3 * a3 + k(4) * a6;
    w.b8 = a1 * a1 * a6 + k(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    w.c4 = w.b2 * w.b2 - k(24) * w.b4;
    w.c6 = k(0) - w.b2 * w.b2 * w.b2 + k(36) * w.b2 * w.b4 - k(216) * w.b6;
    w.disc = k(0) - w.b2 * w.b2 * w.b8 - k(8) * w.b4 * w.b4 * w.b4 - k(27) * w.b6 * w.b6 + k(9) * w.b2 * w.b4 * w.b6;
    return w;
}

struct RationalPoint {
    bool infinity = true;
    mpq_class x, y;

    static RationalPoint at_infinity() { return {}; }
    static RationalPoint affine(const mpq_class& x, const mpq_class& y) { return {false, x, y}; }
    bool operator==(const RationalPoint& o) const;
    std::string str() const;
};

struct CurveModel {
    std::array<mpq_class, 5> a;  // a1 a2 a3 a4 a6
    std::optional<RationalPoint> marked;
    int marked_order = 0;

    // checks nonsingularity and the marked point's exact order
    void validate() const;
};

using Invariants = WeierstrassData<mpq_class>;

Invariants invariants(const CurveModel& E);

struct ShortModel {
    mpz_class a, b;
    bool minimal12 = false;
};

// divides out the largest d with d^4 | a and d^6 | b
ShortModel reduce12(const mpz_class& a, const mpz_class& b);
ShortModel short_form(const CurveModel& E);
mpz_class short_discriminant(const mpz_class& a, const mpz_class& b);

bool on_curve(const CurveModel& E, const RationalPoint& P);
RationalPoint negate(const CurveModel& E, const RationalPoint& P);
RationalPoint add(const CurveModel& E, const RationalPoint& P, const RationalPoint& Q);
RationalPoint multiple(const CurveModel& E, const RationalPoint& P, long k);
// exact order when P is torsion of order <= bound, else 0
int torsion_order(const CurveModel& E, const RationalPoint& P, int bound = 16);

mpz_class height(const ShortModel& S);

struct MinimalValuation {
    int disc = 0;
    std::optional<int> c4;  // empty when c4 = 0
};

MinimalValuation minimal_valuation(const ShortModel& S, long p);

}  // namespace selmer
