#include "selmer/isogeny.hpp"

#include "selmer/arith.hpp"

#include <random>
#include <stdexcept>

namespace selmer {

RationalPoint Isogeny::operator()(const RationalPoint& R) const {
    if (R.infinity) return R;
    const auto& a = domain.a;
    mpq_class X = R.x, Y = R.y;
    for (const auto& t : terms) {
        mpq_class d = R.x - t.x;
        if (d == 0) return RationalPoint::at_infinity();
        mpq_class d2 = d * d, d3 = d2 * d;
        X += t.v / d + t.u / d2;
        Y -= t.u * (2 * R.y + a[0] * R.x + a[2]) / d3 + t.v * (a[0] * d + R.y - t.y) / d2 + (a[0] * t.u - t.gx * t.gy) / d2;
    }
    X.canonicalize();
    Y.canonicalize();
    return RationalPoint::affine(X, Y);
}

Isogeny velu_isogeny(const CurveModel& E, const RationalPoint& P, int n) {
    if (n < 1) throw std::invalid_argument("kernel order must be positive");
    Isogeny phi;
    phi.domain = E;
    phi.degree = n;
    CurveModel Ec = E;
    Ec.marked.reset();
    Ec.marked_order = 0;
    if (n == 1) {
        if (!P.infinity) throw std::domain_error("point is not of the claimed order 1");
        phi.codomain = Ec;
        return phi;
    }
    std::vector<RationalPoint> kernel{RationalPoint::at_infinity()};
    RationalPoint R = P;
    for (int k = 1; k < n; ++k) {
        if (R.infinity) throw std::domain_error("point is not of the claimed order " + std::to_string(n));
        kernel.push_back(R);
        R = add(E, R, P);
    }
    if (!R.infinity) throw std::domain_error("point is not of the claimed order " + std::to_string(n));

    const auto& a = E.a;
    mpq_class v = 0, w = 0;
    for (int k = 1; k < n; ++k) {
        bool two_torsion = 2 * k == n;
        if (!two_torsion && k > n - k) continue;
        const auto& Q = kernel[k];
        Isogeny::KernelTerm t;
        t.x = Q.x;
        t.y = Q.y;
        t.gx = 3 * Q.x * Q.x + 2 * a[1] * Q.x + a[3] - a[0] * Q.y;
        t.gy = -2 * Q.y - a[0] * Q.x - a[2];
        t.v = two_torsion ? t.gx : mpq_class(2 * t.gx - a[0] * t.gy);
        t.u = t.gy * t.gy;
        v += t.v;
        w += t.u + Q.x * t.v;
        phi.terms.push_back(t);
    }
    CurveModel out = Ec;
    out.a[3] = a[3] - 5 * v;
    out.a[4] = a[4] - (a[0] * a[0] + 4 * a[1]) * v - 7 * w;
    for (auto& c : out.a) c.canonicalize();
    phi.codomain = out;
    return phi;
}

CurveModel velu_quotient(const CurveModel& E, const RationalPoint& P, int n) { return velu_isogeny(E, P, n).codomain; }

namespace {

std::vector<int> prime_factors_with_multiplicity(int n) {
    std::vector<int> out;
    for (int p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            out.push_back(p);
            n /= p;
        }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

std::vector<CurveModel> composite_chain(const CurveModel& E, const RationalPoint& P, int n, const std::vector<int>& primes) {
    std::vector<int> steps = primes.empty() ? prime_factors_with_multiplicity(n) : primes;
    int prod = 1;
    for (int l : steps) prod *= l;
    if (prod != n) throw std::invalid_argument("step degrees do not multiply to the kernel order");
    std::vector<CurveModel> chain{E};
    CurveModel cur = E;
    RationalPoint gen = P;
    int m = n;
    for (int l : steps) {
        RationalPoint K = multiple(cur, gen, m / l);
        Isogeny step = velu_isogeny(cur, K, l);
        gen = step(gen);
        m /= l;
        cur = step.codomain;
        chain.push_back(cur);
    }
    if (!gen.infinity) throw std::logic_error("kernel not exhausted by the chain");
    return chain;
}

mpq_class j_invariant(const CurveModel& E) {
    auto w = invariants(E);
    mpq_class j = w.c4 * w.c4 * w.c4 / w.disc;
    j.canonicalize();
    return j;
}

namespace {

mpq_class eval_ab(const Poly& p, const mpz_class& A, const mpz_class& B) {
    return p.eval({mpq_class(A), mpq_class(B), mpq_class(0), mpq_class(0)});
}

}  // namespace

RationalPoint family_point(const Family& g, const std::string& name, const mpz_class& A, const mpz_class& B) {
    if (!g.base_model) throw std::invalid_argument(g.id + " has no base model");
    auto it = g.base_model->points.find(name);
    if (it == g.base_model->points.end()) throw std::invalid_argument(g.id + " has no marked point " + name);
    return RationalPoint::affine(eval_ab(it->second.x, A, B), eval_ab(it->second.y, A, B));
}

CurveModel specialize(const Family& g, const mpz_class& A, const mpz_class& B) {
    if (!g.base_model) throw std::invalid_argument(g.id + " has no base model");
    CurveModel E;
    for (int i = 0; i < 5; ++i) E.a[i] = eval_ab(g.base_model->a[i], A, B);
    auto it = g.base_model->points.find("P");
    if (it != g.base_model->points.end()) {
        E.marked = family_point(g, "P", A, B);
        E.marked_order = it->second.order;
    }
    return E;
}

RationalPoint kernel_generator(const Family& g, const std::string& phi, const mpz_class& A, const mpz_class& B) {
    const auto& k = g.kernel(phi);
    if (!k.generator) throw std::invalid_argument(g.id + " " + phi + " has no kernel generator");
    CurveModel E = specialize(g, A, B);
    return multiple(E, family_point(g, k.generator->first, A, B), k.generator->second);
}

std::vector<int> chain_primes(const Family& g, const std::string& phi) {
    const auto& k = g.kernel(phi);
    std::vector<int> out;
    int prev = 1;
    for (const auto& step : k.chain) {
        int d = g.kernel(step).degree;
        if (d % prev != 0) throw std::logic_error("chain of " + phi + " is not a divisor chain");
        for (int p : prime_factors_with_multiplicity(d / prev)) out.push_back(p);
        prev = d;
    }
    if (prev != k.degree) throw std::logic_error("chain of " + phi + " does not end at its degree");
    return out;
}

std::vector<CurveModel> family_chain(const Family& g, const std::string& phi, const mpz_class& A, const mpz_class& B) {
    CurveModel E = specialize(g, A, B);
    RationalPoint P = kernel_generator(g, phi, A, B);
    return composite_chain(E, P, g.kernel(phi).degree, chain_primes(g, phi));
}

DualCheckReport dual_discriminant_check(const Family& g, const std::string& phi, int samples, std::uint64_t seed,
                                        long range) {
    DualCheckReport rep;
    rep.family = g.id;
    rep.phi = phi;
    g.disc(phi);
    if (!g.base_model) throw std::invalid_argument(g.id + " has no base model with a marked point");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(-range, range);
    int attempts = 0;
    while (rep.samples < samples && attempts < samples * 20) {
        ++attempts;
        mpz_class A = dist(rng), B = dist(rng);
        if (A == 0 && B == 0) continue;
        mpz_class table = table_discriminant(g, phi, A, B);
        if (table == 0) {
            ++rep.skipped;
            continue;
        }
        ++rep.samples;
        try {
            CurveModel E = specialize(g, A, B);
            mpq_class disc;
            if (phi == "O") {
                disc = invariants(E).disc;
                auto [a, b] = evaluate_f(g, A, B);
                mpq_class rs = mpq_class(short_discriminant(a, b)) / mpq_class(table);
                rs.canonicalize();
                auto us = twelfth_root_23(rs);
                if (!us)
                    rep.failures.push_back({A, B, "short-form ratio " + to_string(rs) + " is not u^12 with u a {2,3}-unit"});
                else if (rep.u_short && *rep.u_short != *us)
                    rep.failures.push_back({A, B, "short-form u = " + to_string(*us) + " differs from " + to_string(*rep.u_short)});
                else
                    rep.u_short = *us;
            } else {
                disc = invariants(family_chain(g, phi, A, B).back()).disc;
            }
            mpq_class ratio = disc / mpq_class(table);
            ratio.canonicalize();
            auto u = twelfth_root_23(ratio);
            if (!u) {
                rep.failures.push_back({A, B, "discriminant ratio " + to_string(ratio) + " is not u^12 with u a {2,3}-unit"});
            } else if (rep.u && *rep.u != *u) {
                rep.failures.push_back({A, B, "u = " + to_string(*u) + " differs from " + to_string(*rep.u)});
            } else {
                rep.u = *u;
            }
        } catch (const std::exception& e) {
            rep.failures.push_back({A, B, e.what()});
        }
    }
    return rep;
}

DualCheckReport example_model_check(const Family& g, const std::string& phi, int samples, std::uint64_t seed,
                                    long range) {
    auto it = g.example_models.find(phi);
    if (it == g.example_models.end()) throw std::invalid_argument(g.id + " has no example model for " + phi);
    DualCheckReport rep;
    rep.family = g.id;
    rep.phi = phi;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(-range, range);
    int attempts = 0;
    while (rep.samples < samples && attempts < samples * 20) {
        ++attempts;
        mpz_class A = dist(rng), B = dist(rng);
        if (A == 0 && B == 0) continue;
        if (table_discriminant(g, "O", A, B) == 0) {
            ++rep.skipped;
            continue;
        }
        mpz_class f4 = it->second.first.eval(A, B), f6 = it->second.second.eval(A, B);
        if (f4 == 0 || f6 == 0) {
            ++rep.skipped;
            continue;
        }
        ++rep.samples;
        try {
            CurveModel E = phi == "O" ? specialize(g, A, B) : family_chain(g, phi, A, B).back();
            auto w = invariants(E);
            mpq_class k4 = -27 * w.c4 / mpq_class(f4), k6 = -54 * w.c6 / mpq_class(f6);
            k4.canonicalize();
            k6.canonicalize();
            mpq_class u2 = k6 / k4;
            u2.canonicalize();
            if (u2 * u2 != k4 || u2 * u2 * u2 != k6)
                rep.failures.push_back({A, B, "(c4, c6) is not a rescaling of the example model"});
            else if (rep.u && *rep.u != u2)
                rep.failures.push_back({A, B, "u^2 = " + to_string(u2) + " differs from " + to_string(*rep.u)});
            else
                rep.u = u2;
        } catch (const std::exception& e) {
            rep.failures.push_back({A, B, e.what()});
        }
    }
    return rep;
}

}  // namespace selmer
