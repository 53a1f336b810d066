#include "selmer/arith.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <numeric>
#include <tuple>

namespace selmer {

mpz_class Factorization::value() const {
    mpz_class v = sign;
    for (const auto& [p, e] : factors) {
        mpz_class t;
        mpz_pow_ui(t.get_mpz_t(), p.get_mpz_t(), e);
        v *= t;
    }
    return v;
}

int valuation(const mpz_class& n, const mpz_class& p) {
    if (n == 0) throw std::domain_error("valuation undefined");
    if (p < 2) throw std::domain_error("valuation base must be prime");
    mpz_class m = abs(n);
    int e = 0;
    mpz_class q, r;
    for (;;) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        if (r != 0) break;
        m = q;
        ++e;
    }
    return e;
}

int valuation(const mpq_class& n, const mpz_class& p) {
    if (n == 0) throw std::domain_error("valuation undefined");
    return valuation(n.get_num(), p) - valuation(n.get_den(), p);
}

int valuation(long n, long p) {
    if (n == 0) throw std::domain_error("valuation undefined");
    int e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

static std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

static std::uint64_t powmod64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, b, m);
        b = mulmod64(b, b, m);
        e >>= 1;
    }
    return r;
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                comp = false;
                break;
            }
        }
        if (comp) return false;
    }
    return true;
}

bool is_probable_prime(const mpz_class& n) {
    if (n < 2) return false;
    if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime_u64(n.get_ui());
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

namespace {

// Brent's variant; returns a nontrivial factor or 0 when the step cap is hit
mpz_class rho_factor(const mpz_class& n, unsigned long& steps_left) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1; c < 64; ++c) {
        mpz_class y = 2, x, g = 1, q = 1, ys, t;
        unsigned long r = 1, m = 128;
        auto f = [&](mpz_class& v) {
            v = v * v + c;
            v %= n;
        };
        while (g == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) f(y);
            unsigned long k = 0;
            while (k < r && g == 1) {
                ys = y;
                unsigned long lim = std::min(m, r - k);
                for (unsigned long i = 0; i < lim; ++i) {
                    f(y);
                    t = abs(x - y);
                    q = (q * t) % n;
                }
                if (steps_left < lim) return 0;
                steps_left -= lim;
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                f(ys);
                t = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
    return 0;
}

void split_into(const mpz_class& n, std::map<mpz_class, int>& out, unsigned long& steps_left) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        out[n] += 1;
        return;
    }
    mpz_class root;
    for (unsigned long k = 2; k <= 6; ++k) {
        if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k)) {
            std::map<mpz_class, int> sub;
            split_into(root, sub, steps_left);
            for (auto& [p, e] : sub) out[p] += e * static_cast<int>(k);
            return;
        }
    }
    mpz_class d = rho_factor(n, steps_left);
    if (d == 0) throw FactorBudgetExceeded();
    split_into(d, out, steps_left);
    split_into(n / d, out, steps_left);
}

}  // namespace

Factorization factorize(const mpz_class& n, const FactorBudget& budget) {
    if (n == 0) throw std::domain_error("cannot factor zero");
    Factorization f;
    f.sign = n < 0 ? -1 : 1;
    mpz_class m = abs(n);
    std::map<mpz_class, int> out;
    auto strip = [&](unsigned long p) {
        int e = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
            ++e;
        }
        if (e) out[mpz_class(p)] += e;
    };
    strip(2);
    strip(3);
    for (unsigned long p = 5, step = 2; p <= budget.trial_bound; p += step, step = 6 - step) {
        if (m == 1) break;
        if (mpz_cmp_ui(m.get_mpz_t(), p * p) < 0) break;
        strip(p);
    }
    if (m != 1) {
        unsigned long steps = budget.rho_steps;
        split_into(m, out, steps);
    }
    for (auto& [p, e] : out) f.factors.emplace_back(p, e);
    return f;
}

long mod_floor(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

long powmod(long b, long e, long m) {
    return static_cast<long>(powmod64(static_cast<std::uint64_t>(mod_floor(b, m)), static_cast<std::uint64_t>(e),
                                      static_cast<std::uint64_t>(m)));
}

long invmod(long a, long m) {
    long g = m, x = 0, x1 = 1, r = mod_floor(a, m);
    while (r) {
        long q = g / r;
        std::tie(g, r) = std::make_pair(r, g - q * r);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    if (g != 1) throw std::domain_error("not invertible");
    return mod_floor(x, m);
}

SquareTest is_square_mod(long a, long q) {
    if (q == 2) throw std::domain_error("is_square_mod: q must be odd");
    long r = mod_floor(a, q);
    if (r == 0) return {false, true};
    return {powmod(r, (q - 1) / 2, q) == 1, false};
}

SquareTest is_square_mod(const mpz_class& a, long q) {
    if (q == 2) throw std::domain_error("is_square_mod: q must be odd");
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(q));
    return is_square_mod(r.get_si(), q);
}

std::vector<long> primes_up_to(long bound) {
    std::vector<long> out;
    if (bound < 2) return out;
    std::vector<bool> comp(static_cast<size_t>(bound) + 1, false);
    for (long i = 2; i <= bound; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (long j = i * i; j <= bound; j += i) comp[j] = true;
    }
    return out;
}

std::vector<long> primes_in_class(long m, long a, long bound) {
    std::vector<long> out;
    if (m < 1) throw std::domain_error("modulus must be positive");
    if (m > 1 && std::gcd(mod_floor(a, m), m) != 1) {
        std::cerr << "warning: primes_in_class residue " << a << " not coprime to " << m << "\n";
        return out;
    }
    for (long p : primes_up_to(bound))
        if (m == 1 || mod_floor(p - a, m) == 0) out.push_back(p);
    return out;
}

double mertens_ap(long m, long a, long bound) {
    double s = 0;
    for (long p : primes_in_class(m, a, bound)) s += 1.0 / static_cast<double>(p);
    return s;
}

}  // namespace selmer
