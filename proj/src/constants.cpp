#include "selmer/constants.hpp"

#include "selmer/arith.hpp"
#include "selmer/reduction.hpp"

#include <cmath>
#include <stdexcept>

namespace selmer {

namespace {

LogValue trim(LogValue v) {
    while (v.size() > 1 && v.back() == 0) v.pop_back();
    if (v.empty()) v.push_back(0);
    return v;
}

}  // namespace

LogValue log_value(const mpq_class& c) { return {c}; }

LogValue operator+(const LogValue& x, const LogValue& y) {
    LogValue r(std::max(x.size(), y.size()), mpq_class(0));
    for (std::size_t i = 0; i < x.size(); ++i) r[i] += x[i];
    for (std::size_t i = 0; i < y.size(); ++i) r[i] += y[i];
    return trim(r);
}

LogValue operator*(const LogValue& x, const LogValue& y) {
    if (x.empty() || y.empty()) return {0};
    LogValue r(x.size() + y.size() - 1, mpq_class(0));
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
    return trim(r);
}

LogValue scale(const LogValue& x, const mpq_class& c) { return x * LogValue{c}; }

bool same(const LogValue& x, const LogValue& y) { return trim(x) == trim(y); }

std::string to_string(const LogValue& v0) {
    LogValue v = trim(v0);
    if (v.size() == 1) return to_string(v[0]);
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        std::string coef = to_string(abs(v[i]));
        std::string term;
        if (i == 0)
            term = coef;
        else {
            term = (abs(v[i]) == 1 ? "" : coef + "*") + "log6(2)";
            if (i > 1) term += "^" + std::to_string(i);
        }
        if (s.empty())
            s = (v[i] < 0 ? "-" : "") + term;
        else
            s += (v[i] < 0 ? " - " : " + ") + term;
    }
    return s.empty() ? "0" : s;
}

double to_double(const LogValue& v) {
    double u = std::log(2.0) / std::log(6.0), acc = 0, p = 1;
    for (const auto& c : v) {
        acc += c.get_d() * p;
        p *= u;
    }
    return acc;
}

LogValue log_ratio(const mpq_class& r, int d) {
    if (auto t = rational_log(r, d)) return {*t};
    if (d == 6 && r > 0) {
        // r = 2^i 3^j, log_6 r = i u + j (1 - u)
        int e[2] = {0, 0};
        mpz_class num = r.get_num(), den = r.get_den();
        const long ps[2] = {2, 3};
        for (int k = 0; k < 2; ++k) {
            mpz_class p = ps[k];
            if (mpz_divisible_p(num.get_mpz_t(), p.get_mpz_t())) e[k] += valuation(num, p);
            if (mpz_divisible_p(den.get_mpz_t(), p.get_mpz_t())) e[k] -= valuation(den, p);
        }
        mpq_class check = 1;
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < std::abs(e[k]); ++i) check = e[k] > 0 ? mpq_class(check * ps[k]) : mpq_class(check / ps[k]);
        if (check == r) return trim({mpq_class(e[1]), mpq_class(e[0] - e[1])});
    }
    throw std::domain_error("ratio " + to_string(r) + " has no exact log to base " + std::to_string(d));
}

std::vector<mpq_class> derive_cn(const Family& g, const std::string& phi, const std::vector<long>& subgroup) {
    if (!is_subgroup(subgroup, g.modulus))
        throw std::invalid_argument("residue set is not a subgroup of the units mod " + std::to_string(g.modulus));
    auto alphabet = g.alphabet(phi);
    std::vector<mpq_class> c(alphabet.size(), mpq_class(0));
    for (long a : subgroup) {
        const IsoDensityRow* row = nullptr;
        for (const auto& r : g.iso_densities)
            if (r.phi == phi && r.cls.contains(a)) row = &r;
        if (!row) throw std::domain_error("no " + phi + " density row of " + g.id + " for residue " + std::to_string(a));
        if (row->alphabet != alphabet) throw std::logic_error("density rows of " + g.id + " " + phi + " use different alphabets");
        for (std::size_t i = 0; i < alphabet.size(); ++i) c[i] += row->kappa[i].leading_at_infinity(1);
    }
    for (auto& x : c) {
        x /= static_cast<long>(subgroup.size());
        x.canonicalize();
    }
    return c;
}

ConstantsRow assemble(const Family& g, const std::string& phi, const std::vector<long>& subgroup) {
    ConstantsRow row;
    row.family = g.id;
    row.phi = phi;
    row.subgroup = subgroup;
    row.alphabet = g.alphabet(phi);
    row.c = derive_cn(g, phi, subgroup);
    int d = g.kernel(phi).degree;
    row.c_E = {0};
    row.c_V = {0};
    for (std::size_t i = 0; i < row.alphabet.size(); ++i) {
        LogValue n = log_ratio(row.alphabet[i], d);
        row.n.push_back(n);
        row.c_E = row.c_E + scale(n, row.c[i]);
        row.c_V = row.c_V + scale(n * n, row.c[i]);
    }
    row.theta = row.c_E + scale(row.c_V, mpq_class(1, 2));
    std::string label;
    for (long a : subgroup) label += (label.empty() ? "{" : ",") + std::to_string(a);
    row.subgroup_label = label + "}";
    return row;
}

long AuditReport::mismatches() const {
    long n = 0;
    for (const auto& r : records) n += !r.pass;
    return n;
}

bool AuditReport::row_inconsistent(const std::string& family, const std::string& phi, const std::string& subgroup) const {
    for (const auto& r : records)
        if (r.family == family && r.phi == phi && r.subgroup == subgroup && r.kind == "internal" && !r.pass) return true;
    return false;
}

bool AuditReport::row_flagged(const std::string& family, const std::string& phi, const std::string& subgroup) const {
    for (const auto& r : records)
        if (r.family == family && r.phi == phi && r.subgroup == subgroup && !r.pass) return true;
    return false;
}

AuditReport audit_paper_tables(const Registry& reg) {
    AuditReport rep;
    for (const auto& g : reg.families()) {
        for (const auto& pc : g.constants) {
            auto add = [&](const std::string& quantity, const std::string& kind, const LogValue& derived,
                           const LogValue& printed) {
                AuditRecord r;
                r.family = g.id;
                r.phi = pc.phi;
                r.subgroup = pc.subgroup_label;
                r.quantity = quantity;
                r.kind = kind;
                r.derived = to_string(derived);
                r.printed = to_string(printed);
                r.pass = same(derived, printed);
                rep.records.push_back(r);
            };
            ConstantsRow row = assemble(g, pc.phi, pc.subgroup);
            int d = g.kernel(pc.phi).degree;
            LogValue pE{0}, pV{0};
            for (std::size_t i = 0; i < pc.c.size(); ++i) {
                std::string name = "c[" + to_string(row.n[i]) + "]";
                if (pc.c[i]) {
                    add(name, "derived", {row.c[i]}, *pc.c[i]);
                    LogValue n = log_ratio(pc.alphabet[i], d);
                    pE = pE + n * *pc.c[i];
                    pV = pV + n * n * *pc.c[i];
                }
            }
            add("c_E", "derived", row.c_E, pc.c_E);
            add("c_V", "derived", row.c_V, pc.c_V);
            add("theta", "derived", row.theta, pc.theta);
            add("c_E = sum n c_n", "internal", pE, pc.c_E);
            add("c_V = sum n^2 c_n", "internal", pV, pc.c_V);
            add("theta = c_E + c_V/2", "internal", pc.c_E + scale(pc.c_V, mpq_class(1, 2)), pc.theta);
        }
    }
    return rep;
}

std::vector<RowVerdict> verify_constants(const Registry& reg, const std::optional<std::string>& family) {
    if (family && !reg.has(*family)) throw std::invalid_argument("unknown family " + *family);
    AuditReport audit = audit_paper_tables(reg);
    std::vector<RowVerdict> out;
    for (const auto& g : reg.families()) {
        if (family && g.id != *family) continue;
        for (const auto& pc : g.constants) {
            RowVerdict v;
            v.derived = assemble(g, pc.phi, pc.subgroup);
            v.derived.subgroup_label = pc.subgroup_label;
            for (const auto& r : audit.records)
                if (r.family == g.id && r.phi == pc.phi && r.subgroup == pc.subgroup_label && r.kind == "derived" && !r.pass)
                    v.differing.push_back(r.quantity);
            if (audit.row_inconsistent(g.id, pc.phi, pc.subgroup_label))
                v.status = "flagged";
            else
                v.status = v.differing.empty() ? "match" : "mismatch";
            out.push_back(std::move(v));
        }
    }
    return out;
}

}  // namespace selmer
