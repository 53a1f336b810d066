#pragma once

#include "selmer/curves.hpp"

#include <optional>
#include <string>
#include <vector>

namespace selmer {

enum class ReductionKind { good, multiplicative, additive };

std::string to_string(ReductionKind k);

struct ReductionRecord {
    long p = 0;
    ReductionKind kind = ReductionKind::good;
    std::optional<bool> split;
    int vdisc = 0;
    int tamagawa = 1;  // 0 when additive (not computed)
};

ReductionRecord classify(const ShortModel& S, long p);

// exact: the Tamagawa ratio rule; pseudo: degree-2 steps always take v(D')/v(D)
enum class RatioMode { exact, pseudo };

// local ratio c(E')/c(E) of one prime-degree step at a multiplicative prime
mpq_class step_ratio(int vdisc, int vdisc_next, int ell, bool split, RatioMode mode = RatioMode::exact);

struct LocalRatio {
    mpq_class ratio = 1;
    bool granted = false;  // true when the ratio v(D')/v(D) was applied
};

// E, E' records at the same p for one step of prime degree d
LocalRatio n_class(const ReductionRecord& E, const ReductionRecord& Ep, int d, long p, RatioMode mode = RatioMode::exact);

// ratio across a chain E_0 -> ... -> E_k of prime steps
mpq_class chain_ratio(const std::vector<ReductionRecord>& chain, const std::vector<int>& primes, long p,
                      RatioMode mode = RatioMode::exact);

// log_d(r) as a rational when it is one (e.g. d = 9, r = 3 gives 1/2)
std::optional<mpq_class> rational_log(const mpq_class& r, int d);

}  // namespace selmer
