#include "selmer/densities.hpp"

#include "selmer/arith.hpp"
#include "selmer/isogeny.hpp"
#include "selmer/parallel.hpp"
#include "selmer/reduction.hpp"

#include <algorithm>
#include <stdexcept>

namespace selmer {

namespace {

// evaluates a BiPoly mod q from per-residue power tables
class ModEval {
public:
    ModEval(const BiPoly& p, long q) : q_(q), coeffs_(p.coeffs_mod(q)) {
        for (const auto& t : p.terms()) {
            ia_.push_back(t.i);
            jb_.push_back(t.j);
        }
    }

    std::int64_t operator()(const std::vector<std::int64_t>& pa, const std::vector<std::int64_t>& pb) const {
        std::int64_t s = 0;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            s += coeffs_[k] * pa[ia_[k]] % q_ * pb[jb_[k]] % q_;
            if (s >= (std::int64_t(1) << 60)) s %= q_;
        }
        return s % q_;
    }

private:
    long q_;
    std::vector<std::int64_t> coeffs_;
    std::vector<int> ia_, jb_;
};

std::vector<std::vector<std::int64_t>> power_table(long q, int deg) {
    std::vector<std::vector<std::int64_t>> t(static_cast<std::size_t>(q), std::vector<std::int64_t>(deg + 1));
    for (long x = 0; x < q; ++x) {
        t[x][0] = 1;
        for (int k = 1; k <= deg; ++k) t[x][k] = t[x][k - 1] * x % q;
    }
    return t;
}

mpq_class frac(long n, long q) {
    mpq_class r(n, q * q);
    r.canonicalize();
    return r;
}

mpq_class qpow_inv(long q, int e) {
    mpz_class d;
    mpz_ui_pow_ui(d.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(e));
    return mpq_class(1) / mpq_class(d);
}

}  // namespace

long DensityCensus::count(const ConditionKey& key) const {
    switch (key.kind) {
        case Condition::good: return good;
        case Condition::mult: return mult;
        case Condition::split: return split;
        case Condition::additive: return additive0;
        case Condition::nclass: {
            auto it = nclass.find(key.phi);
            if (it == nclass.end()) throw std::invalid_argument("census has no kernel " + key.phi);
            auto jt = it->second.find(key.ratio);
            return jt == it->second.end() ? 0 : jt->second;
        }
    }
    return 0;
}

mpq_class DensityCensus::value(const ConditionKey& key) const {
    mpq_class v = frac(count(key), q);
    if (key.kind == Condition::additive) v += qpow_inv(q, 2) - qpow_inv(q, weight_sum);
    return v;
}

DensityCensus census(const Family& g, const std::optional<std::string>& phi, long q) {
    std::vector<std::string> kernels = phi ? std::vector<std::string>{*phi} : g.kernels();
    int maxdeg = 1;
    for (const auto& k : kernels) maxdeg = std::max(maxdeg, g.kernel(k).degree);
    if (!is_prime_u64(static_cast<std::uint64_t>(q))) throw std::domain_error("census needs a prime q");
    for (const auto& k : kernels)
        if (!g.admissible(q, g.kernel(k).degree)) throw std::domain_error("density undefined at bad prime");
    if (!g.admissible(q)) throw std::domain_error("density undefined at bad prime");

    DensityCensus c;
    c.family = g.id;
    c.phi = phi;
    c.q = q;
    c.weight_sum = g.weight_sum();
    for (const auto& k : kernels) c.nclass[k];

    int deg = 1;
    for (const BiPoly* p : {&g.f4, &g.f6}) deg = std::max({deg, p->deg_a(), p->deg_b()});
    for (const auto& f : g.factors) deg = std::max({deg, f.deg_a(), f.deg_b()});
    auto pw = power_table(q, deg);
    ModEval f4(g.f4, q), f6(g.f6, q);
    std::vector<ModEval> factors;
    for (const auto& f : g.factors) factors.emplace_back(f, q);

    std::vector<char> residue(static_cast<std::size_t>(q), 0);
    for (long x = 1; x < q; ++x) residue[x * x % q] = 1;

    const auto& orow = g.disc("O");
    struct Step {
        const DiscRow* row;
        int ell;
    };
    std::vector<std::vector<Step>> chains;
    for (const auto& k : kernels) {
        std::vector<Step> steps;
        auto primes = chain_primes(g, k);
        const auto& spec = g.kernel(k);
        for (std::size_t i = 0; i < primes.size(); ++i) steps.push_back({&g.disc(spec.chain[i]), primes[i]});
        chains.push_back(steps);
    }
    std::vector<char> seen(static_cast<std::size_t>(q * q), 0);

    for (long A = 0; A < q; ++A) {
        for (long B = 0; B < q; ++B) {
            if (A == 0 && B == 0) continue;
            ++c.pairs;
            const auto &pa = pw[A], &pb = pw[B];
            std::int64_t a = f4(pa, pb), b = f6(pa, pb);
            if (a == 0 && b == 0) {
                ++c.additive0;
                continue;
            }
            if (!seen[a * q + b]) {
                seen[a * q + b] = 1;
                ++c.image_pairs;
            }
            std::int64_t disc = (4 * (a * a % q) % q * a + 27 * (b * b % q)) % q;
            if (disc != 0) {
                ++c.good;
                continue;
            }
            ++c.mult;
            bool split = residue[mod_floor(-2 * (a * b % q), q)];
            if (split) ++c.split;
            if (kernels.empty()) continue;
            int vanishing = -1, n = 0;
            for (std::size_t i = 0; i < factors.size(); ++i) {
                if (orow.exponents[i] > 0 && factors[i](pa, pb) == 0) {
                    vanishing = static_cast<int>(i);
                    ++n;
                }
            }
            if (n != 1) {
                ++c.anomalies;
                continue;
            }
            for (std::size_t k = 0; k < kernels.size(); ++k) {
                int prev = orow.exponents[vanishing];
                mpq_class r = 1;
                for (const auto& st : chains[k]) {
                    int next = st.row->exponents[vanishing];
                    r *= step_ratio(prev, next, st.ell, split);
                    prev = next;
                }
                r.canonicalize();
                c.nclass[kernels[k]][r] += 1;
            }
        }
    }
    return c;
}

MultilevelAdditive census_additive_multilevel(const Family& g, long q, int depth) {
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");
    if (depth > 4) throw std::invalid_argument("depth budget exceeded (max 4)");
    if (!g.admissible(q)) throw std::domain_error("density undefined at bad prime");
    MultilevelAdditive out;
    out.q = q;
    out.depth = depth;
    out.closed_form = qpow_inv(q, 2) - qpow_inv(q, g.weight_sum());
    mpz_class qz = q;

    auto divisible = [&](const mpz_class& v, int e) {
        mpz_class m;
        mpz_pow_ui(m.get_mpz_t(), qz.get_mpz_t(), static_cast<unsigned long>(e));
        return mpz_divisible_p(v.get_mpz_t(), m.get_mpz_t()) != 0;
    };

    struct Cls {
        mpz_class A, B;
    };
    std::vector<Cls> open{{0, 0}};
    for (int k = 1; k <= depth && !open.empty(); ++k) {
        mpq_class measure = qpow_inv(q, 2 * k);
        std::vector<Cls> next;
        for (const auto& cl : open) {
            bool wdiv_all = k >= g.wa && k >= g.wb && divisible(cl.A, g.wa) && divisible(cl.B, g.wb);
            if (wdiv_all) {
                out.excluded += measure;
                continue;
            }
            mpz_class a = g.f4.eval(cl.A, cl.B), b = g.f6.eval(cl.A, cl.B);
            // a mod q^k and b mod q^k are constant on the class
            int ka = std::min(k, 4), kb = std::min(k, 6);
            if (!divisible(a, ka) || !divisible(b, kb)) {
                out.decided += measure;
                continue;
            }
            if (k == depth) {
                out.undecided += measure;
                continue;
            }
            mpz_class step;
            mpz_pow_ui(step.get_mpz_t(), qz.get_mpz_t(), static_cast<unsigned long>(k));
            for (long s = 0; s < q; ++s)
                for (long t = 0; t < q; ++t) next.push_back({cl.A + step * s, cl.B + step * t});
        }
        open = std::move(next);
    }
    return out;
}

long DensityReport::failures() const {
    long n = 0;
    for (const auto& c : checks) n += !c.pass;
    for (const auto& c : identities) n += !c.pass;
    for (const auto& c : multilevel) n += !c.pass;
    return n;
}

namespace {

struct FamilyPrimeResult {
    std::vector<DensityCheck> checks;
    std::vector<IdentityCheck> identities;
    std::vector<MultilevelCheck> multilevel;
};

FamilyPrimeResult check_family_prime(const Family& g, long q, const VerifyOptions& opt) {
    FamilyPrimeResult out;
    std::vector<std::string> kernels;
    for (const auto& k : g.kernels())
        if (!opt.phi || *opt.phi == k) kernels.push_back(k);
    int maxdeg = 1;
    for (const auto& k : kernels) maxdeg = std::max(maxdeg, g.kernel(k).degree);
    if (!g.admissible(q, maxdeg)) return out;

    DensityCensus c = census(g, std::nullopt, q);
    mpq_class qq = q;
    const LocalRow& lrow = g.local_row(q);
    auto push = [&](const std::string& row, const ConditionKey& key, const mpq_class& predicted) {
        DensityCheck d;
        d.family = g.id;
        d.q = q;
        d.row = row;
        d.condition = key.str();
        d.count = c.count(key);
        d.census = c.value(key);
        d.predicted = predicted;
        d.pass = d.census == d.predicted;
        out.checks.push_back(d);
    };
    if (!opt.phi) {
        push(lrow.cls.label, ConditionKey::parse("good"), lrow.good.eval_q(qq));
        push(lrow.cls.label, ConditionKey::parse("additive"), lrow.additive.eval_q(qq));
        push(lrow.cls.label, ConditionKey::parse("mult"), lrow.mult.eval_q(qq));
        push(lrow.cls.label, ConditionKey::parse("split"), lrow.split.eval_q(qq));
        IdentityCheck s;
        s.family = g.id;
        s.q = q;
        s.identity = "sum";
        s.row = lrow.cls.label;
        s.lhs = lrow.good.eval_q(qq) + lrow.additive.eval_q(qq) + lrow.mult.eval_q(qq);
        s.rhs = 1 - qpow_inv(q, g.weight_sum());
        s.pass = s.lhs == s.rhs;
        out.identities.push_back(s);
        if (c.anomalies) {
            DensityCheck d;
            d.family = g.id;
            d.q = q;
            d.row = lrow.cls.label;
            d.condition = "unique-vanishing-factor";
            d.count = c.anomalies;
            d.pass = false;
            out.checks.push_back(d);
        }
    }
    for (const auto& k : kernels) {
        const IsoDensityRow& row = g.iso_row(k, q);
        mpq_class sum = 0;
        for (std::size_t i = 0; i < row.alphabet.size(); ++i) {
            ConditionKey key;
            key.kind = Condition::nclass;
            key.phi = k;
            key.ratio = row.alphabet[i];
            mpq_class pred = row.kappa[i].eval_q(qq);
            sum += pred;
            push(row.cls.label, key, pred);
        }
        for (const auto& [r, n] : c.nclass.at(k)) {
            if (std::find(row.alphabet.begin(), row.alphabet.end(), r) != row.alphabet.end()) continue;
            DensityCheck d;
            d.family = g.id;
            d.q = q;
            d.row = row.cls.label;
            d.condition = k + ":r=" + to_string(r) + " (outside alphabet)";
            d.count = n;
            d.census = frac(n, q);
            d.predicted = 0;
            d.pass = false;
            out.checks.push_back(d);
        }
        IdentityCheck s;
        s.family = g.id;
        s.q = q;
        s.identity = "partition:" + k;
        s.row = row.cls.label;
        s.lhs = sum;
        s.rhs = lrow.mult.eval_q(qq);
        s.pass = s.lhs == s.rhs;
        out.identities.push_back(s);
    }
    if (!opt.phi && q <= opt.multilevel_q_max && opt.multilevel_depth > 0) {
        MultilevelCheck m;
        m.family = g.id;
        m.q = q;
        m.depth = opt.multilevel_depth;
        m.result = census_additive_multilevel(g, q, opt.multilevel_depth);
        m.table_value = lrow.additive.eval_q(qq) - frac(c.additive0, q);
        const auto& r = m.result;
        bool bracket = r.decided <= m.table_value && m.table_value <= r.decided + r.undecided;
        bool closed = r.decided <= r.closed_form && r.closed_form <= r.decided + r.undecided;
        bool measure = r.decided + r.undecided + r.excluded == qpow_inv(q, 2);
        m.pass = bracket && closed && measure && m.table_value == r.closed_form;
        out.multilevel.push_back(m);
    }
    return out;
}

}  // namespace

DensityReport verify_tables(const Registry& reg, const VerifyOptions& opt) {
    DensityReport rep;
    rep.q_max = opt.q_max;
    std::vector<const Family*> fams;
    for (const auto& g : reg.families())
        if (!opt.family || *opt.family == g.id) fams.push_back(&g);
    if (opt.family && fams.empty()) throw std::invalid_argument("unknown family " + *opt.family);
    if (opt.phi)
        for (const auto* g : fams) g->kernel(*opt.phi);

    struct Task {
        const Family* g;
        long q;
    };
    std::vector<Task> tasks;
    for (const auto* g : fams)
        for (long q : primes_up_to(opt.q_max))
            if (q >= opt.q_min) tasks.push_back({g, q});
    std::vector<FamilyPrimeResult> results(tasks.size());
    parallel_for(tasks.size(), opt.workers, [&](std::size_t i) {
        try {
            results[i] = check_family_prime(*tasks[i].g, tasks[i].q, opt);
        } catch (const std::exception& e) {
            throw std::runtime_error(tasks[i].g->id + " q=" + std::to_string(tasks[i].q) + ": " + e.what());
        }
    });
    for (auto& r : results) {
        rep.checks.insert(rep.checks.end(), r.checks.begin(), r.checks.end());
        rep.identities.insert(rep.identities.end(), r.identities.begin(), r.identities.end());
        rep.multilevel.insert(rep.multilevel.end(), r.multilevel.begin(), r.multilevel.end());
    }
    return rep;
}

}  // namespace selmer
