#pragma once

#include "selmer/curves.hpp"
#include "selmer/families.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace selmer {

struct Isogeny {
    CurveModel domain;
    CurveModel codomain;
    int degree = 1;
    // data of the Velu sums, one entry per point of S
    struct KernelTerm {
        mpq_class x, y, gx, gy, u, v;
    };
    std::vector<KernelTerm> terms;

    RationalPoint operator()(const RationalPoint& R) const;
};

Isogeny velu_isogeny(const CurveModel& E, const RationalPoint& P, int n);
CurveModel velu_quotient(const CurveModel& E, const RationalPoint& P, int n);

// curves E = E_0 -> E_1 -> ... for the prime steps of <P>, P of order n, in the given prime order
std::vector<CurveModel> composite_chain(const CurveModel& E, const RationalPoint& P, int n,
                                        const std::vector<int>& primes = {});

mpq_class j_invariant(const CurveModel& E);

// base model of a family at (A,B) with the point named "P" as marked point when present
CurveModel specialize(const Family& g, const mpz_class& A, const mpz_class& B);
RationalPoint family_point(const Family& g, const std::string& name, const mpz_class& A, const mpz_class& B);
RationalPoint kernel_generator(const Family& g, const std::string& phi, const mpz_class& A, const mpz_class& B);
// prime degrees of the steps of phi, e.g. {2,3} for a chain C2 -> C6
std::vector<int> chain_primes(const Family& g, const std::string& phi);
std::vector<CurveModel> family_chain(const Family& g, const std::string& phi, const mpz_class& A, const mpz_class& B);

struct VeluSample {
    mpz_class A, B;
    std::string message;
};

struct DualCheckReport {
    std::string family, phi;
    int samples = 0;
    int skipped = 0;
    std::optional<mpq_class> u;
    std::optional<mpq_class> u_short;  // O only: short form (f4, f6) against the table row
    std::vector<VeluSample> failures;
    bool ok() const { return failures.empty(); }
};

DualCheckReport dual_discriminant_check(const Family& g, const std::string& phi, int samples, std::uint64_t seed = 1,
                                        long range = 40);

// the printed example models (f4, f6) of a curve in the chain against Velu; u is the scaling with
// (-27 c4, -54 c6) = (u^4 f4, u^6 f6), reported as u^2
DualCheckReport example_model_check(const Family& g, const std::string& phi, int samples, std::uint64_t seed = 1,
                                    long range = 50);

}  // namespace selmer
