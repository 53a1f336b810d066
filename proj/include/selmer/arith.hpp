#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace selmer {

struct Factorization {
    int sign = 1;
    std::vector<std::pair<mpz_class, int>> factors;

    mpz_class value() const;
};

class FactorBudgetExceeded : public std::runtime_error {
public:
    FactorBudgetExceeded() : std::runtime_error("factorization budget exceeded") {}
};

struct FactorBudget {
    unsigned long trial_bound = 100000;
    unsigned long rho_steps = 2000000;
};

int valuation(const mpz_class& n, const mpz_class& p);
int valuation(const mpq_class& n, const mpz_class& p);
int valuation(long n, long p);

bool is_probable_prime(const mpz_class& n);
bool is_prime_u64(std::uint64_t n);

Factorization factorize(const mpz_class& n, const FactorBudget& budget = {});

struct SquareTest {
    bool square = false;
    bool zero = false;
};

SquareTest is_square_mod(const mpz_class& a, long q);
SquareTest is_square_mod(long a, long q);

std::vector<long> primes_up_to(long bound);
std::vector<long> primes_in_class(long m, long a, long bound);
double mertens_ap(long m, long a, long bound);

long mod_floor(long a, long m);
long powmod(long b, long e, long m);
long invmod(long a, long m);

}  // namespace selmer
