#include "selmer/statistics.hpp"

#include "selmer/densities.hpp"
#include "selmer/isogeny.hpp"
#include "selmer/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

namespace selmer {

unsigned default_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

namespace {

mpz_class ipow(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

// floor(x^(num/den))
mpz_class root_power(const mpz_class& x, unsigned long num, unsigned long den) {
    mpz_class p = ipow(x, num), r;
    mpz_root(r.get_mpz_t(), p.get_mpz_t(), den);
    return r;
}

bool reduced_small(long A, long B, int wa, int wb) {
    long g = std::gcd(A, B);
    if (g < 0) g = -g;
    for (long p = 2; p * p <= g; ++p) {
        if (g % p) continue;
        while (g % p == 0) g /= p;
        int va = A == 0 ? wa : valuation(A, p), vb = B == 0 ? wb : valuation(B, p);
        if (va >= wa && vb >= wb) return false;
    }
    if (g > 1) {
        int va = A == 0 ? wa : valuation(A, g), vb = B == 0 ? wb : valuation(B, g);
        if (va >= wa && vb >= wb) return false;
    }
    return true;
}

bool source_less(const SampleCurve& x, const SampleCurve& y) {
    if (x.model.a != y.model.a) return x.model.a < y.model.a;
    if (x.model.b != y.model.b) return x.model.b < y.model.b;
    if (x.A != y.A) return x.A < y.A;
    return x.B < y.B;
}

long level_degree(const Family& g, int degree) { return g.level * degree; }

}  // namespace

bool weighted_reduced(const Family& g, const mpz_class& A, const mpz_class& B) {
    if (A == 0 && B == 0) return false;
    mpz_class d;
    mpz_gcd(d.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());
    if (d == 1) return true;
    for (const auto& [p, e] : factorize(d).factors) {
        (void)e;
        int va = A == 0 ? g.wa : valuation(A, p), vb = B == 0 ? g.wb : valuation(B, p);
        if (va >= g.wa && vb >= g.wb) return false;
    }
    return true;
}

FamilySample enumerate_family(const Family& g, const mpz_class& height_bound, const EnumerateOptions& opt) {
    if (opt.margin < 1) throw std::invalid_argument("margin must be at least 1");
    if (height_bound < 1) throw std::invalid_argument("height bound must be positive");
    FamilySample s;
    s.family = g.id;
    s.height_bound = height_bound;
    s.margin = opt.margin;
    unsigned long root = 12UL * static_cast<unsigned long>(g.delta);
    mpz_class X = ipow(mpz_class(opt.margin), root) * height_bound;
    s.box_a = root_power(X, static_cast<unsigned long>(g.wa), root);
    s.box_b = root_power(X, static_cast<unsigned long>(g.wb), root);
    if (!s.box_a.fits_slong_p() || !s.box_b.fits_slong_p() || (2 * s.box_a + 1) * (2 * s.box_b + 1) > 40000000000L)
        throw std::invalid_argument("enumeration box too large");
    long amax = s.box_a.get_si(), bmax = s.box_b.get_si();

    std::size_t n = static_cast<std::size_t>(2 * amax + 1);
    std::vector<std::vector<SampleCurve>> parts(n);
    std::vector<long> counts(n, 0);
    parallel_for(n, opt.workers, [&](std::size_t i) {
        long A = static_cast<long>(i) - amax;
        mpz_class Az = A;
        auto& out = parts[i];
        for (long B = -bmax; B <= bmax; ++B) {
            if (!reduced_small(A, B, g.wa, g.wb)) continue;
            mpz_class Bz = B;
            mpz_class a = g.f4.eval(Az, Bz), b = g.f6.eval(Az, Bz);
            if (short_discriminant(a, b) == 0) continue;
            ShortModel m = reduce12(a, b);
            mpz_class h = height(m);
            if (h > height_bound) continue;
            ++counts[i];
            out.push_back({Az, Bz, m, h});
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        s.sources += counts[i];
        for (auto& c : parts[i]) s.curves.push_back(std::move(c));
        parts[i].clear();
        parts[i].shrink_to_fit();
    }
    std::sort(s.curves.begin(), s.curves.end(), source_less);
    auto last = std::unique(s.curves.begin(), s.curves.end(), [](const SampleCurve& x, const SampleCurve& y) {
        return x.model.a == y.model.a && x.model.b == y.model.b;
    });
    s.curves.erase(last, s.curves.end());
    return s;
}

std::vector<long> tracked_bad_primes(const Family& g, const std::string& phi, const SampleCurve& c,
                                     const FactorBudget& budget) {
    int degree = g.kernel(phi).degree;
    long ld = level_degree(g, degree);
    const auto& orow = g.disc("O");
    std::set<long> primes;
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
        if (orow.exponents[i] == 0) continue;
        mpz_class v = g.factors[i].eval(c.A, c.B);
        if (v == 0) throw std::logic_error("singular source reached the Selmer computation");
        for (const auto& [p, e] : factorize(v, budget).factors) {
            (void)e;
            if (p < 5) continue;
            if (!p.fits_slong_p()) throw std::domain_error("prime too large for classification");
            long pl = p.get_si();
            if (ld % pl == 0) continue;
            primes.insert(pl);
        }
    }
    std::vector<long> out;
    for (long p : primes)
        if (minimal_valuation(c.model, p).disc > 0) out.push_back(p);
    return out;
}

LocalContribution local_contribution(const Family& g, const std::string& phi, const SampleCurve& c, long p,
                                     const SelmerOptions& opt, const std::vector<CurveModel>* chain) {
    LocalContribution out;
    out.p = p;
    out.record = classify(c.model, p);
    if (out.record.kind != ReductionKind::multiplicative) return out;
    auto primes = chain_primes(g, phi);
    for (int ell : primes)
        if (p % ell == 0) throw std::domain_error("ratio rule undefined at p | deg(phi)");
    out.chain_vdisc.push_back(out.record.vdisc);
    if (chain) {
        if (chain->size() != primes.size() + 1) throw std::logic_error("isogeny chain has the wrong length");
        for (std::size_t i = 1; i < chain->size(); ++i) {
            auto mv = minimal_valuation(short_form((*chain)[i]), p);
            if (!mv.c4 || *mv.c4 != 0 || mv.disc == 0)
                throw std::logic_error("isogenous curve without multiplicative reduction at " + std::to_string(p));
            out.chain_vdisc.push_back(mv.disc);
        }
    } else {
        mpz_class pz = p;
        std::vector<int> v;
        for (const auto& f : g.factors) {
            mpz_class x = f.eval(c.A, c.B);
            v.push_back(x == 0 ? 0 : valuation(x, pz));
        }
        auto row_valuation = [&](const DiscRow& row) {
            int s = 0;
            for (std::size_t i = 0; i < v.size(); ++i) s += row.exponents[i] * v[i];
            return s;
        };
        int shift = row_valuation(g.disc("O")) - out.record.vdisc;
        if (shift < 0 || shift % 12 != 0) throw std::logic_error("discriminant rows disagree with the minimal model");
        for (const auto& name : g.kernel(phi).chain) out.chain_vdisc.push_back(row_valuation(g.disc(name)) - shift);
    }
    bool split = *out.record.split;
    for (std::size_t i = 0; i < primes.size(); ++i)
        out.ratio *= step_ratio(out.chain_vdisc[i], out.chain_vdisc[i + 1], primes[i], split, opt.mode);
    out.ratio.canonicalize();
    return out;
}

SelmerRatio selmer_log_ratio(const Family& g, const std::string& phi, const SampleCurve& c, const SelmerOptions& opt) {
    SelmerRatio out;
    int degree = g.kernel(phi).degree;
    std::optional<std::vector<CurveModel>> chain;
    for (long p : tracked_bad_primes(g, phi, c, opt.budget)) {
        if (opt.prime_cap && p > *opt.prime_cap) continue;
        if (opt.use_velu && g.base_model && !chain && classify(c.model, p).kind == ReductionKind::multiplicative)
            chain = family_chain(g, phi, c.A, c.B);
        auto lc = local_contribution(g, phi, c, p, opt, chain ? &*chain : nullptr);
        if (lc.record.kind != ReductionKind::multiplicative) continue;
        out.ratio *= lc.ratio;
        out.local.push_back(std::move(lc));
    }
    out.ratio.canonicalize();
    out.s = log_ratio(out.ratio, degree);
    return out;
}

Moments moments(const std::vector<double>& xs) {
    Moments m;
    if (xs.empty()) return m;
    double n = static_cast<double>(xs.size()), sum = 0;
    for (double x : xs) sum += x;
    m.mean = sum / n;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double x : xs) {
        double d = x - m.mean, d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m.variance = m2;
    if (m2 > 0) {
        m.skewness = m3 / std::pow(m2, 1.5);
        m.kurtosis = m4 / (m2 * m2);
    }
    return m;
}

StatsReport report(const Family& g, const std::string& phi, const mpz_class& height_bound, const StatsOptions& opt) {
    StatsReport rep;
    rep.family = g.id;
    rep.phi = phi;
    rep.degree = g.kernel(phi).degree;
    rep.height_bound = height_bound;
    rep.margin = opt.margin;
    rep.prime_cap = opt.prime_cap;
    rep.mode = opt.mode;

    std::vector<long> subgroup;
    if (opt.subgroup)
        subgroup = *opt.subgroup;
    else
        subgroup = parse_subgroup("(Z/" + std::to_string(g.modulus) + "Z)^x", g.modulus);
    std::sort(subgroup.begin(), subgroup.end());
    rep.predicted = assemble(g, phi, subgroup);

    auto sample = enumerate_family(g, height_bound, {opt.margin, opt.workers});
    rep.sources = sample.sources;

    std::vector<long> fq;
    for (long q : opt.frequency_primes)
        if (q >= 5 && is_prime_u64(static_cast<std::uint64_t>(q)) && g.admissible(q, rep.degree)) fq.push_back(q);
    std::sort(fq.begin(), fq.end());
    fq.erase(std::unique(fq.begin(), fq.end()), fq.end());

    auto alphabet = g.alphabet(phi);
    // per prime: condition names good, additive, r=... in alphabet order
    std::vector<std::string> names{"good", "additive"};
    for (const auto& r : alphabet) names.push_back("r=" + to_string(r));

    SelmerOptions so;
    so.mode = opt.mode;
    so.prime_cap = opt.prime_cap;

    std::size_t n = sample.curves.size();
    std::vector<SelmerRatio> ratios(n);
    std::vector<char> dropped(n, 0);
    std::vector<std::vector<int>> cls(n, std::vector<int>(fq.size(), 0));
    parallel_for(n, opt.workers, [&](std::size_t i) {
        const auto& c = sample.curves[i];
        try {
            ratios[i] = selmer_log_ratio(g, phi, c, so);
        } catch (const FactorBudgetExceeded&) {
            dropped[i] = 1;
        }
        std::optional<std::vector<CurveModel>> chain;
        for (std::size_t k = 0; k < fq.size(); ++k) {
            long q = fq[k];
            auto rec = classify(c.model, q);
            if (rec.kind == ReductionKind::good) {
                cls[i][k] = 0;
            } else if (rec.kind == ReductionKind::additive) {
                cls[i][k] = 1;
            } else {
                if (g.base_model && !chain) chain = family_chain(g, phi, c.A, c.B);
                auto lc = local_contribution(g, phi, c, q, so, chain ? &*chain : nullptr);
                auto it = std::find(alphabet.begin(), alphabet.end(), lc.ratio);
                if (it == alphabet.end())
                    throw std::logic_error(g.id + ": local ratio " + to_string(lc.ratio) + " outside the alphabet");
                cls[i][k] = 2 + static_cast<int>(it - alphabet.begin());
            }
        }
    });

    std::vector<double> values;
    std::map<std::string, long> hist;
    std::map<std::string, double> hist_order;
    double proxy = 0;
    mpq_class d = rep.degree;
    for (std::size_t i = 0; i < n; ++i) {
        if (dropped[i]) {
            ++rep.dropped;
            continue;
        }
        double v = to_double(ratios[i].s);
        values.push_back(v);
        std::string key = to_string(ratios[i].s);
        ++hist[key];
        hist_order[key] = v;
        mpq_class t = ratios[i].ratio / d;
        proxy += t > 1 ? t.get_d() : 1.0;
    }
    rep.curves = static_cast<long>(values.size());
    if (rep.curves > 0) proxy /= static_cast<double>(rep.curves);
    rep.proxy = proxy;
    rep.empirical = moments(values);
    for (const auto& [k, c] : hist) rep.s_histogram.emplace_back(k, c);
    std::sort(rep.s_histogram.begin(), rep.s_histogram.end(), [&](const auto& x, const auto& y) {
        double a = hist_order[x.first], b = hist_order[y.first];
        return a != b ? a < b : x.first < y.first;
    });

    double B = height_bound.get_d();
    rep.loglog = B > std::exp(1.0) ? std::log(std::log(B)) : 0.0;
    rep.predicted_mean = to_double(rep.predicted.c_E) * rep.loglog;
    rep.predicted_variance = to_double(rep.predicted.c_V) * rep.loglog;

    long within = 0;
    for (std::size_t k = 0; k < fq.size(); ++k) {
        long q = fq[k];
        std::vector<long> count(names.size(), 0);
        for (std::size_t i = 0; i < n; ++i) ++count[static_cast<std::size_t>(cls[i][k])];
        mpq_class norm = 1 - mpq_class(1, ipow(mpz_class(q), static_cast<unsigned long>(g.weight_sum())));
        for (std::size_t j = 0; j < names.size(); ++j) {
            FrequencyCell cell;
            cell.q = q;
            cell.condition = names[j];
            cell.count = count[j];
            cell.total = static_cast<long>(n);
            ConditionKey key;
            if (j == 0)
                key.kind = Condition::good;
            else if (j == 1)
                key.kind = Condition::additive;
            else {
                key.kind = Condition::nclass;
                key.phi = phi;
                key.ratio = alphabet[j - 2];
            }
            cell.predicted = density_prediction(g, key, q) / norm;
            cell.predicted.canonicalize();
            double p = cell.predicted.get_d(), N = static_cast<double>(n);
            double sd = std::sqrt(N * p * (1 - p));
            double diff = static_cast<double>(cell.count) - N * p;
            if (sd > 0) {
                cell.sigma = diff / sd;
                cell.within = std::fabs(cell.sigma) <= 3;
            } else {
                cell.sigma = 0;
                cell.within = cell.count == static_cast<long>(N * p);
            }
            within += cell.within;
            rep.frequencies.push_back(cell);
        }
    }
    rep.frequency_pass_rate =
        rep.frequencies.empty() ? 1.0 : static_cast<double>(within) / static_cast<double>(rep.frequencies.size());

    if (opt.keep_curves)
        for (std::size_t i = 0; i < n; ++i)
            if (!dropped[i]) rep.rows.push_back({sample.curves[i], ratios[i]});
    return rep;
}

}  // namespace selmer
