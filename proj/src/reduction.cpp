#include "selmer/reduction.hpp"

#include "selmer/arith.hpp"

#include <numeric>
#include <stdexcept>

namespace selmer {

std::string to_string(ReductionKind k) {
    switch (k) {
        case ReductionKind::good: return "good";
        case ReductionKind::multiplicative: return "multiplicative";
        case ReductionKind::additive: return "additive";
    }
    return "?";
}

ReductionRecord classify(const ShortModel& S, long p) {
    if (p < 5) throw std::domain_error("excluded prime");
    ReductionRecord r;
    r.p = p;
    auto mv = minimal_valuation(S, p);
    r.vdisc = mv.disc;
    if (mv.disc == 0) return r;
    if (!mv.c4 || *mv.c4 > 0) {
        r.kind = ReductionKind::additive;
        r.tamagawa = 0;
        return r;
    }
    r.kind = ReductionKind::multiplicative;
    // minimal model (a', b') = (a/p^4t, b/p^6t); a' and b' are units at p here
    mpz_class pz = p;
    int t = (valuation(S.a, pz) - *mv.c4) / 4;
    mpz_class a = S.a, b = S.b, pt;
    mpz_pow_ui(pt.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(t));
    a /= pt * pt * pt * pt;
    b /= pt * pt * pt * pt * pt * pt;
    // node at x0 = -3b/(2a); the tangent slopes are rational iff 3*x0 = -9b/(2a) is a square, i.e. -2ab is
    auto sq = is_square_mod(mpz_class(-2 * a * b), p);
    if (sq.zero) throw std::logic_error("multiplicative reduction with a or b divisible by p");
    r.split = sq.square;
    r.tamagawa = sq.square ? r.vdisc : (r.vdisc % 2 == 0 ? 2 : 1);
    return r;
}

mpq_class step_ratio(int vdisc, int vdisc_next, int ell, bool split, RatioMode mode) {
    if (vdisc <= 0 || vdisc_next <= 0) throw std::invalid_argument("step_ratio needs multiplicative reduction on both sides");
    mpq_class r(vdisc_next, vdisc);
    r.canonicalize();
    if (split) return r;
    if (ell == 2 && (mode == RatioMode::pseudo || std::gcd(vdisc, vdisc_next) % 2 == 1)) return r;
    return 1;
}

LocalRatio n_class(const ReductionRecord& E, const ReductionRecord& Ep, int d, long p, RatioMode mode) {
    if (d % p == 0) throw std::domain_error("ratio rule undefined at p | deg(phi)");
    if (E.p != Ep.p) throw std::invalid_argument("records at different primes");
    LocalRatio out;
    if (E.kind != ReductionKind::multiplicative) return out;
    if (Ep.kind != ReductionKind::multiplicative) throw std::logic_error("isogenous curves with different reduction types");
    bool split = *E.split;
    out.granted = split || (d == 2 && (mode == RatioMode::pseudo || std::gcd(E.vdisc, Ep.vdisc) % 2 == 1));
    out.ratio = step_ratio(E.vdisc, Ep.vdisc, d, split, mode);
    return out;
}

mpq_class chain_ratio(const std::vector<ReductionRecord>& chain, const std::vector<int>& primes, long p, RatioMode mode) {
    if (chain.size() != primes.size() + 1) throw std::invalid_argument("chain and step list differ in length");
    mpq_class r = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) r *= n_class(chain[i], chain[i + 1], primes[i], p, mode).ratio;
    r.canonicalize();
    return r;
}

std::optional<mpq_class> rational_log(const mpq_class& r, int d) {
    if (r <= 0 || d < 2) return std::nullopt;
    // d = prod p^k, r = prod p^e; log_d r = t rational needs e_p = t k_p for all p
    std::vector<std::pair<long, int>> dp;
    long n = d;
    for (long p = 2; p * p <= n; ++p) {
        int k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        if (k) dp.emplace_back(p, k);
    }
    if (n > 1) dp.emplace_back(n, 1);
    mpz_class num = r.get_num(), den = r.get_den();
    std::optional<mpq_class> t;
    for (auto [p, k] : dp) {
        int e = 0;
        mpz_class pz = p;
        if (num != 0 && mpz_divisible_p(num.get_mpz_t(), pz.get_mpz_t())) e = valuation(num, pz);
        if (mpz_divisible_p(den.get_mpz_t(), pz.get_mpz_t())) e = -valuation(den, pz);
        mpq_class tp(e, k);
        tp.canonicalize();
        if (t && *t != tp) return std::nullopt;
        t = tp;
        mpz_class pe;
        mpz_pow_ui(pe.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
        if (e > 0) num /= pe;
        if (e < 0) den /= pe;
    }
    if (num != 1 || den != 1) return std::nullopt;
    return t;
}

}  // namespace selmer
