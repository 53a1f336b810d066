#pragma once

#include "selmer/arith.hpp"
#include "selmer/constants.hpp"
#include "selmer/curves.hpp"
#include "selmer/families.hpp"
#include "selmer/reduction.hpp"

#include <optional>
#include <string>
#include <vector>

namespace selmer {

struct SampleCurve {
    mpz_class A, B;  // canonical source: smallest (A, B) mapping to this model
    ShortModel model;
    mpz_class height;
};

struct LocalContribution {
    long p = 0;
    ReductionRecord record;
    std::vector<int> chain_vdisc;  // v(D_min) along E_0 -> ... -> E_k
    mpq_class ratio = 1;
};

struct SelmerRatio {
    mpq_class ratio = 1;  // product of local ratios; s(E) = log_d(ratio)
    LogValue s{0};
    std::vector<LocalContribution> local;
};

struct EnumerateOptions {
    long margin = 2;
    unsigned workers = 1;
};

struct FamilySample {
    std::string family;
    mpz_class height_bound;
    long margin = 2;
    mpz_class box_a, box_b;  // |A| <= box_a, |B| <= box_b
    long sources = 0;        // weighted-reduced nonsingular source pairs within the height bound
    std::vector<SampleCurve> curves;  // sorted by (a, b)
};

FamilySample enumerate_family(const Family& g, const mpz_class& height_bound, const EnumerateOptions& opt = {});

// the pair is divisible by no p^wa, p^wb simultaneously
bool weighted_reduced(const Family& g, const mpz_class& A, const mpz_class& B);

struct SelmerOptions {
    RatioMode mode = RatioMode::pseudo;
    std::optional<long> prime_cap;
    FactorBudget budget;
    bool use_velu = true;  // base-model chain when available, else discriminant rows
};

// primes >= 5 dividing the minimal discriminant, not dividing level * deg(phi)
std::vector<long> tracked_bad_primes(const Family& g, const std::string& phi, const SampleCurve& c,
                                     const FactorBudget& budget = {});

LocalContribution local_contribution(const Family& g, const std::string& phi, const SampleCurve& c, long p,
                                     const SelmerOptions& opt, const std::vector<CurveModel>* chain);

SelmerRatio selmer_log_ratio(const Family& g, const std::string& phi, const SampleCurve& c,
                             const SelmerOptions& opt = {});

struct Moments {
    double mean = 0, variance = 0, skewness = 0, kurtosis = 0;  // kurtosis is the standardized fourth moment
};

Moments moments(const std::vector<double>& xs);

struct FrequencyCell {
    long q = 0;
    std::string condition;  // "good", "additive" or a ratio "r=..."
    long count = 0;
    long total = 0;
    mpq_class predicted;  // table density / (1 - q^-(wa+wb))
    double sigma = 0;     // (empirical - predicted) / binomial sd
    bool within = false;  // |sigma| <= 3
};

struct StatsOptions {
    std::optional<std::vector<long>> subgroup;  // default: full unit group
    std::optional<long> prime_cap;
    std::vector<long> frequency_primes{5, 7, 11, 13};
    long margin = 2;
    unsigned workers = 1;
    RatioMode mode = RatioMode::pseudo;
    bool keep_curves = false;
};

struct CurveRow {
    SampleCurve curve;
    SelmerRatio selmer;
};

struct StatsReport {
    std::string family, phi;
    int degree = 0;
    mpz_class height_bound;
    long margin = 2;
    std::optional<long> prime_cap;
    RatioMode mode = RatioMode::pseudo;
    long sources = 0;
    long curves = 0;
    long dropped = 0;  // factorization budget exceeded
    double loglog = 0;
    Moments empirical;
    ConstantsRow predicted;
    double predicted_mean = 0, predicted_variance = 0;
    std::vector<std::pair<std::string, long>> s_histogram;  // s(E) value -> count
    std::vector<FrequencyCell> frequencies;
    double frequency_pass_rate = 0;
    double proxy = 0;  // mean of max(d^s / d, 1)
    std::vector<CurveRow> rows;  // only with keep_curves
};

StatsReport report(const Family& g, const std::string& phi, const mpz_class& height_bound,
                   const StatsOptions& opt = {});

}  // namespace selmer
