#include "selmer/families.hpp"

#include "selmer/arith.hpp"
#include "selmer/curves.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace selmer {

using json = nlohmann::json;

bool ResidueClass::contains(long q) const {
    long r = mod_floor(q, modulus);
    return std::find(residues.begin(), residues.end(), r) != residues.end();
}

namespace {

std::string as_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

mpq_class as_rational(const json& v) { return parse_rational(as_text(v)); }

mpq_class q_of(long q) { return mpq_class(q); }

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ".") + x;
    return s;
}

json* locate(json& root, const std::vector<json>& path) {
    json* node = &root;
    for (const auto& step : path) {
        if (step.is_number_integer()) {
            auto i = step.get<std::size_t>();
            if (!node->is_array() || i >= node->size()) return nullptr;
            node = &(*node)[i];
        } else {
            auto key = step.get<std::string>();
            if (!node->is_object() || !node->contains(key)) return nullptr;
            node = &(*node)[key];
        }
    }
    return node;
}

ResidueClass parse_class(const json& row) {
    ResidueClass c;
    c.label = row.at("label").get<std::string>();
    c.modulus = row.at("modulus").get<long>();
    if (c.modulus < 1) throw std::runtime_error("modulus must be positive");
    for (const auto& r : row.at("residues")) c.residues.push_back(mod_floor(r.get<long>(), c.modulus));
    return c;
}

LogValue parse_log_value(const std::string& text) {
    Poly p = parse_expression(text).as_poly();
    if (!p.uses_only({Var::u})) throw std::runtime_error("constant '" + text + "' depends on A, B or q");
    auto v = p.coeffs_in(Var::u);
    if (v.empty()) v.push_back(0);
    return v;
}

Family parse_family(const json& j) {
    Family g;
    g.id = j.at("id").get<std::string>();
    std::string field;
    try {
        field = "M";
        g.M = j.at("M").get<int>();
        field = "N";
        g.N = j.at("N").get<int>();
        field = "level";
        g.level = j.at("level").get<long>();
        field = "table_label";
        g.table_label = j.at("table_label").get<std::string>();
        field = "modulus";
        g.modulus = j.at("modulus").get<long>();
        field = "weights";
        g.wa = j.at("weights").at(0).get<int>();
        g.wb = j.at("weights").at(1).get<int>();
        field = "delta";
        g.delta = j.at("delta").get<int>();
        field = "alpha";
        g.alpha = as_rational(j.at("alpha"));
        field = "beta";
        g.beta_constant = as_rational(j.at("beta").at("constant"));
        g.beta_per_degree = as_rational(j.at("beta").at("per_inverse_degree"));
        field = "f4";
        g.f4_text = j.at("f4").get<std::string>();
        g.f4 = BiPoly(parse_polynomial(g.f4_text));
        field = "f6";
        g.f6_text = j.at("f6").get<std::string>();
        g.f6 = BiPoly(parse_polynomial(g.f6_text));
        field = "disc_factors";
        for (const auto& f : j.at("disc_factors")) {
            g.factor_text.push_back(f.get<std::string>());
            g.factors.emplace_back(parse_polynomial(g.factor_text.back()));
        }
        for (const auto& [phi, row] : j.at("discriminants").items()) {
            field = "discriminants." + phi;
            DiscRow d;
            d.unit = mpz_class(as_text(row.at("unit")));
            for (const auto& e : row.at("exponents")) d.exponents.push_back(e.get<int>());
            d.source = row.value("source", "printed");
            if (d.exponents.size() != g.factors.size()) throw std::runtime_error("exponent count differs from factor count");
            g.discriminants.emplace(phi, d);
        }
        if (j.contains("base_model") && !j.at("base_model").is_null()) {
            field = "base_model";
            BaseModel bm;
            const auto& a = j.at("base_model").at("a");
            if (a.size() != 5) throw std::runtime_error("expected five coefficients a1 a2 a3 a4 a6");
            for (int i = 0; i < 5; ++i) bm.a[i] = parse_polynomial(a.at(i).get<std::string>());
            for (const auto& [name, pt] : j.at("base_model").at("points").items()) {
                MarkedPoint m;
                m.x = parse_polynomial(pt.at("x").get<std::string>());
                m.y = parse_polynomial(pt.at("y").get<std::string>());
                m.order = pt.at("order").get<int>();
                bm.points.emplace(name, m);
            }
            g.base_model = bm;
        }
        for (const auto& [phi, iso] : j.at("isogenies").items()) {
            field = "isogenies." + phi;
            KernelSpec k;
            k.phi = phi;
            k.degree = iso.at("degree").get<int>();
            if (iso.contains("generator") && !iso.at("generator").is_null())
                k.generator = std::make_pair(iso.at("generator").at("point").get<std::string>(),
                                             iso.at("generator").at("multiple").get<int>());
            for (const auto& c : iso.at("chain")) k.chain.push_back(c.get<std::string>());
            g.isogenies.emplace(phi, k);
        }
        if (j.contains("example_models")) {
            for (const auto& [phi, m] : j.at("example_models").items()) {
                field = "example_models." + phi;
                g.example_models.emplace(phi, std::make_pair(BiPoly(parse_polynomial(m.at("f4").get<std::string>())),
                                                             BiPoly(parse_polynomial(m.at("f6").get<std::string>()))));
            }
        }
        int i = 0;
        for (const auto& row : j.at("local_conditions")) {
            field = "local_conditions." + std::to_string(i++);
            LocalRow r;
            r.cls = parse_class(row);
            r.ramified = row.value("ramified", false);
            r.good = parse_expression(as_text(row.at("good")));
            r.additive = parse_expression(as_text(row.at("additive")));
            r.mult = parse_expression(as_text(row.at("mult")));
            r.split = parse_expression(as_text(row.at("split")));
            g.local_conditions.push_back(r);
        }
        i = 0;
        for (const auto& row : j.at("isogeny_densities")) {
            field = "isogeny_densities." + std::to_string(i++);
            IsoDensityRow r;
            r.phi = row.at("phi").get<std::string>();
            r.cls = parse_class(row);
            for (const auto& a : row.at("alphabet")) r.alphabet.push_back(as_rational(a));
            for (const auto& k : row.at("kappa")) r.kappa.push_back(parse_expression(as_text(k)));
            if (r.alphabet.size() != r.kappa.size()) throw std::runtime_error("alphabet and kappa lengths differ");
            g.iso_densities.push_back(r);
        }
        i = 0;
        for (const auto& row : j.at("constants")) {
            field = "constants." + std::to_string(i++);
            PrintedConstants c;
            c.phi = row.at("phi").get<std::string>();
            c.subgroup_label = row.at("subgroup").get<std::string>();
            for (const auto& a : row.at("alphabet")) c.alphabet.push_back(as_rational(a));
            for (const auto& v : row.at("c")) {
                if (v.is_null())
                    c.c.emplace_back(std::nullopt);
                else
                    c.c.emplace_back(parse_log_value(as_text(v)));
            }
            c.c_E = parse_log_value(as_text(row.at("c_E")));
            c.c_V = parse_log_value(as_text(row.at("c_V")));
            c.theta = parse_log_value(as_text(row.at("theta")));
            g.constants.push_back(c);
        }
    } catch (const std::exception& e) {
        throw std::runtime_error("load error in family " + g.id + ", field " + field + ": " + e.what());
    }
    // subgroups are resolved after all rows are read, since the modulus may be the odd one out
    for (auto& c : g.constants) {
        std::string err;
        c.subgroup = parse_subgroup(c.subgroup_label, g.modulus, &err);
    }
    return g;
}

void add_issue(std::vector<DataIssue>& out, const Family& g, std::vector<std::string> path, std::string msg) {
    out.push_back({g.id, std::move(path), std::move(msg)});
}

Poly to_poly(const BiPoly& p) {
    Poly r;
    for (const auto& t : p.terms())
        r = r + Poly(mpq_class(t.c)) * Poly::var(Var::A).pow(t.i) * Poly::var(Var::B).pow(t.j);
    return r;
}

// returns c with lhs = c * rhs, if such a constant exists
std::optional<mpq_class> proportional(const Poly& lhs, const Poly& rhs) {
    if (rhs.is_zero()) return std::nullopt;
    const auto& [m, c] = *rhs.terms().begin();
    auto it = lhs.terms().find(m);
    if (it == lhs.terms().end()) return std::nullopt;
    mpq_class k = it->second / c;
    if (lhs == rhs * Poly(k)) return k;
    return std::nullopt;
}

}  // namespace

std::optional<mpq_class> twelfth_root_23(const mpq_class& r) {
    if (r <= 0) return std::nullopt;
    mpq_class u = 1;
    for (const mpz_class* part : {&r.get_num(), &r.get_den()}) {
        mpz_class n = *part;
        mpq_class piece = 1;
        for (unsigned long p : {2ul, 3ul}) {
            int e = 0;
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
                mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
                ++e;
            }
            if (e % 12) return std::nullopt;
            for (int i = 0; i < e / 12; ++i) piece *= p;
        }
        if (n != 1) return std::nullopt;
        if (part == &r.get_num())
            u *= piece;
        else
            u /= piece;
    }
    return u;
}

bool is_subgroup(const std::vector<long>& residues, long modulus) {
    if (residues.empty()) return false;
    std::set<long> s;
    for (long r : residues) {
        long x = mod_floor(r, modulus);
        if (std::gcd(x, modulus) != 1) return false;
        s.insert(x);
    }
    if (!s.count(mod_floor(1, modulus))) return false;
    for (long x : s)
        for (long y : s)
            if (!s.count(mod_floor(x * y, modulus))) return false;
    return true;
}

std::vector<long> parse_subgroup(const std::string& label, long modulus, std::string* error) {
    auto fail = [&](const std::string& msg) {
        if (error) *error = msg;
        return std::vector<long>{};
    };
    std::string s;
    for (char c : label)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    std::vector<long> out;
    if (s.size() >= 2 && s.front() == '{' && s.back() == '}') {
        std::stringstream in(s.substr(1, s.size() - 2));
        std::string tok;
        while (std::getline(in, tok, ',')) {
            try {
                out.push_back(mod_floor(std::stol(tok), modulus));
            } catch (const std::exception&) {
                return fail("bad residue '" + tok + "'");
            }
        }
    } else if (s.rfind("(Z/", 0) == 0 && s.size() > 6 && s.substr(s.size() - 4) == "Z)^x") {
        long n = 0;
        try {
            n = std::stol(s.substr(3, s.size() - 7));
        } catch (const std::exception&) {
            return fail("bad unit group label");
        }
        if (n != modulus) return fail("unit group of Z/" + std::to_string(n) + " but modulus is " + std::to_string(modulus));
        for (long x = 0; x < modulus; ++x)
            if (std::gcd(x, modulus) == 1) out.push_back(x);
        if (modulus == 1) out = {0};
    } else {
        return fail("unrecognised subgroup label '" + label + "'");
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (!is_subgroup(out, modulus)) return fail("'" + label + "' is not a subgroup of the units mod " + std::to_string(modulus));
    return out;
}

std::string ConditionKey::str() const {
    switch (kind) {
        case Condition::good: return "good";
        case Condition::additive: return "additive";
        case Condition::mult: return "mult";
        case Condition::split: return "split";
        case Condition::nclass: return phi + ":r=" + to_string(ratio);
    }
    return "?";
}

ConditionKey ConditionKey::parse(const std::string& s) {
    ConditionKey k;
    if (s == "good") return k;
    if (s == "additive") {
        k.kind = Condition::additive;
        return k;
    }
    if (s == "mult") {
        k.kind = Condition::mult;
        return k;
    }
    if (s == "split") {
        k.kind = Condition::split;
        return k;
    }
    auto colon = s.find(':');
    if (colon == std::string::npos || s.compare(colon + 1, 2, "r=") != 0)
        throw std::invalid_argument("unknown condition '" + s + "' (use good, additive, mult, split or <phi>:r=<ratio>)");
    k.kind = Condition::nclass;
    k.phi = s.substr(0, colon);
    k.ratio = parse_rational(s.substr(colon + 3));
    return k;
}

bool Family::admissible(long q, int degree) const {
    if (q < 2) return false;
    return std::gcd(q, 6 * level * static_cast<long>(degree)) == 1;
}

std::vector<std::string> Family::kernels() const {
    std::vector<std::string> out;
    for (const auto& [phi, k] : isogenies) out.push_back(phi);
    return out;
}

const DiscRow& Family::disc(const std::string& phi) const {
    auto it = discriminants.find(phi);
    if (it == discriminants.end()) {
        std::string avail;
        for (const auto& [k, v] : discriminants) avail += (avail.empty() ? "" : ", ") + k;
        throw std::invalid_argument("unknown kernel " + phi + " for " + id + "; available: " + avail);
    }
    return it->second;
}

const KernelSpec& Family::kernel(const std::string& phi) const {
    auto it = isogenies.find(phi);
    if (it == isogenies.end()) {
        std::string avail;
        for (const auto& [k, v] : isogenies) avail += (avail.empty() ? "" : ", ") + k;
        throw std::invalid_argument("unknown kernel " + phi + " for " + id + "; available: " + avail);
    }
    return it->second;
}

const LocalRow& Family::local_row(long q) const {
    for (const auto& r : local_conditions)
        if (r.cls.contains(q)) return r;
    throw std::domain_error("no local-conditions row of " + id + " covers q = " + std::to_string(q));
}

const IsoDensityRow& Family::iso_row(const std::string& phi, long q) const {
    kernel(phi);
    for (const auto& r : iso_densities)
        if (r.phi == phi && r.cls.contains(q)) return r;
    throw std::domain_error("no " + phi + " density row of " + id + " covers q = " + std::to_string(q));
}

std::vector<mpq_class> Family::alphabet(const std::string& phi) const {
    for (const auto& r : iso_densities)
        if (r.phi == phi) return r.alphabet;
    kernel(phi);
    return {};
}

std::string Registry::default_data_path() {
#ifdef SELMER_DATA_FILE
    return SELMER_DATA_FILE;
#else
    return "data/families.json";
#endif
}

Registry Registry::load(const std::string& path, ErrataMode mode) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open data file " + path);
    json root;
    try {
        in >> root;
    } catch (const std::exception& e) {
        throw std::runtime_error("data file " + path + " is not valid JSON: " + e.what());
    }
    Registry reg;
    reg.mode_ = mode;
    if (!root.contains("families") || !root.at("families").is_array()) throw std::runtime_error("data file has no families list");

    for (const auto& e : root.value("errata", json::array())) {
        Erratum er;
        er.id = e.at("id").get<std::string>();
        er.family = e.at("family").get<std::string>();
        for (const auto& p : e.at("path")) er.path.push_back(p.is_string() ? p.get<std::string>() : p.dump());
        er.printed = as_text(e.at("printed"));
        er.corrected = as_text(e.at("corrected"));
        er.note = e.value("note", "");
        reg.errata_.push_back(er);
        if (mode != ErrataMode::apply) continue;
        json* fam = nullptr;
        for (auto& f : root["families"])
            if (f.at("id") == er.family) fam = &f;
        if (!fam) throw std::runtime_error("erratum " + er.id + " names unknown family " + er.family);
        json* node = locate(*fam, e.at("path").get<std::vector<json>>());
        if (!node) throw std::runtime_error("erratum " + er.id + ": path " + join(er.path) + " not found");
        if (*node != e.at("printed"))
            throw std::runtime_error("erratum " + er.id + ": data holds " + node->dump() + ", expected printed value " +
                                     e.at("printed").dump());
        *node = e.at("corrected");
    }

    for (const auto& f : root.at("families")) reg.families_.push_back(parse_family(f));
    std::set<std::string> seen;
    for (const auto& g : reg.families_) {
        if (!seen.insert(g.id).second) throw std::runtime_error("duplicate family " + g.id);
        auto issues = validate_family(g);
        reg.issues_.insert(reg.issues_.end(), issues.begin(), issues.end());
    }
    if (mode == ErrataMode::apply && !reg.issues_.empty()) {
        const auto& i = reg.issues_.front();
        throw std::runtime_error("load error in family " + i.family + ", field " + join(i.path) + ": " + i.message);
    }
    return reg;
}

const Family& Registry::get(const std::string& id) const {
    for (const auto& g : families_)
        if (g.id == id) return g;
    throw std::invalid_argument("unknown family " + id);
}

bool Registry::has(const std::string& id) const {
    return std::any_of(families_.begin(), families_.end(), [&](const Family& g) { return g.id == id; });
}

std::vector<std::string> Registry::ids() const {
    std::vector<std::string> out;
    for (const auto& g : families_) out.push_back(g.id);
    return out;
}

bool issue_documented(const DataIssue& issue, const std::vector<Erratum>& errata) {
    for (const auto& e : errata) {
        if (e.family != issue.family || e.path.size() < issue.path.size()) continue;
        if (std::equal(issue.path.begin(), issue.path.end(), e.path.begin())) return true;
    }
    return false;
}

std::pair<mpz_class, mpz_class> evaluate_f(const Family& g, const mpz_class& A, const mpz_class& B) {
    if (A == 0 && B == 0) throw std::invalid_argument("evaluate_f: (A,B) = (0,0)");
    return {g.f4.eval(A, B), g.f6.eval(A, B)};
}

mpz_class table_discriminant(const Family& g, const std::string& phi, const mpz_class& A, const mpz_class& B) {
    const auto& d = g.disc(phi);
    if (A == 0 && B == 0) throw std::invalid_argument("table_discriminant: (A,B) = (0,0)");
    mpz_class v = d.unit;
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
        if (d.exponents[i] == 0) continue;
        mpz_class f = g.factors[i].eval(A, B), t;
        mpz_pow_ui(t.get_mpz_t(), f.get_mpz_t(), static_cast<unsigned long>(d.exponents[i]));
        v *= t;
    }
    return v;
}

Poly table_discriminant_poly(const Family& g, const std::string& phi) {
    const auto& d = g.disc(phi);
    Poly v{mpq_class(d.unit)};
    for (std::size_t i = 0; i < g.factors.size(); ++i)
        if (d.exponents[i] > 0) v = v * to_poly(g.factors[i]).pow(static_cast<unsigned>(d.exponents[i]));
    return v;
}

mpq_class density_prediction(const Family& g, const ConditionKey& cond, long q) {
    int degree = cond.kind == Condition::nclass ? g.kernel(cond.phi).degree : 1;
    if (!g.admissible(q, degree)) throw std::domain_error("density undefined at bad prime");
    if (cond.kind == Condition::nclass) {
        const auto& row = g.iso_row(cond.phi, q);
        for (std::size_t i = 0; i < row.alphabet.size(); ++i)
            if (row.alphabet[i] == cond.ratio) return row.kappa[i].eval_q(q_of(q));
        throw std::invalid_argument("ratio " + to_string(cond.ratio) + " is not in the " + cond.phi + " alphabet of " + g.id);
    }
    const auto& row = g.local_row(q);
    switch (cond.kind) {
        case Condition::good: return row.good.eval_q(q_of(q));
        case Condition::additive: return row.additive.eval_q(q_of(q));
        case Condition::mult: return row.mult.eval_q(q_of(q));
        default: return row.split.eval_q(q_of(q));
    }
}

std::vector<DataIssue> validate_family(const Family& g) {
    std::vector<DataIssue> out;
    if (g.table_label != g.id) add_issue(out, g, {"table_label"}, "row label " + g.table_label + " differs from id");
    if (g.level != g.N || g.N % g.M != 0) add_issue(out, g, {"level"}, "level does not match the group G(M,MN)");

    int d4 = g.f4.weighted_degree(g.wa, g.wb), d6 = g.f6.weighted_degree(g.wa, g.wb);
    if (d4 != 4 * g.delta || d6 != 6 * g.delta)
        add_issue(out, g, {"weights"},
                  "f4, f6 are not weighted homogeneous of degrees 4*delta, 6*delta for weights (" + std::to_string(g.wa) +
                      "," + std::to_string(g.wb) + ")");
    if (std::gcd(static_cast<long>(g.wa) * g.wb, static_cast<long>(g.delta)) != 1)
        add_issue(out, g, {"delta"}, "gcd(w0*w1, delta) != 1");
    mpq_class alpha(g.wa + g.wb, 12 * g.delta);
    alpha.canonicalize();
    if (g.alpha != alpha)
        add_issue(out, g, {"alpha"}, "alpha != (w0+w1)/(12 delta)");

    for (const auto& [phi, d] : g.discriminants) {
        long deg = 0;
        bool homog = true;
        for (std::size_t i = 0; i < g.factors.size(); ++i) {
            int w = g.factors[i].weighted_degree(g.wa, g.wb);
            if (w < 0) homog = false;
            deg += static_cast<long>(w) * d.exponents[i];
        }
        if (homog && deg != 12L * g.delta)
            add_issue(out, g, {"discriminants", phi, "exponents"},
                      "weighted degree " + std::to_string(deg) + " != 12*delta");
    }

    Poly a = to_poly(g.f4), b = to_poly(g.f6);
    Poly short_disc = Poly(mpq_class(-16)) * (Poly(mpq_class(4)) * a.pow(3) + Poly(mpq_class(27)) * b.pow(2));
    if (g.discriminants.count("O")) {
        Poly table = table_discriminant_poly(g, "O");
        auto k = proportional(short_disc, table);
        if (!k)
            add_issue(out, g, {"f6"}, "short-form discriminant of (f4, f6) is not a constant multiple of the tabulated one");
        else if (!twelfth_root_23(*k))
            add_issue(out, g, {"discriminants", "O", "unit"},
                      "short-form discriminant is " + to_string(*k) + " times the tabulated one, not a 12th power");
        if (g.base_model) {
            auto w = weierstrass_data(g.base_model->a);
            if (!(w.disc == table)) {
                bool dup = std::any_of(out.begin(), out.end(), [](const DataIssue& i) {
                    return i.path == std::vector<std::string>{"discriminants", "O", "unit"};
                });
                if (!dup)
                    add_issue(out, g, {"discriminants", "O", "unit"},
                              "base model discriminant differs from the tabulated one");
            }
            auto k4 = proportional(a, w.c4), k6 = proportional(b, w.c6);
            if (!k4 || !k6 || *k6 * *k6 * 27 != -4 * *k4 * *k4 * *k4)
                add_issue(out, g, {"base_model"}, "base model invariants are not a rescaling of (f4, f6)");
        }
    } else {
        add_issue(out, g, {"discriminants"}, "no row for the trivial kernel O");
    }

    for (const auto& [phi, k] : g.isogenies) {
        if (!g.discriminants.count(phi)) add_issue(out, g, {"discriminants", phi}, "kernel without discriminant row");
        if (g.level % k.degree != 0) add_issue(out, g, {"isogenies", phi}, "degree does not divide level");
        if (k.generator && g.base_model && !g.base_model->points.count(k.generator->first))
            add_issue(out, g, {"isogenies", phi}, "generator names an unknown point");
    }

    RatFunc one_minus;
    {
        Poly qw = Poly::var(Var::q).pow(static_cast<unsigned>(g.weight_sum()));
        one_minus = RatFunc{qw - Poly(mpq_class(1)), qw};
    }
    for (std::size_t i = 0; i < g.local_conditions.size(); ++i) {
        const auto& r = g.local_conditions[i];
        const std::string idx = std::to_string(i);
        if (g.modulus % r.cls.modulus != 0)
            add_issue(out, g, {"modulus"},
                      "row modulus " + std::to_string(r.cls.modulus) + " does not divide family modulus " +
                          std::to_string(g.modulus));
        bool ram = std::all_of(r.cls.residues.begin(), r.cls.residues.end(),
                               [&](long x) { return std::gcd(x, r.cls.modulus) > 1; });
        if (ram != r.ramified) add_issue(out, g, {"local_conditions", idx, "ramified"}, "ramified flag inconsistent");
        if (!(r.good + r.additive + r.mult).same_as(one_minus))
            add_issue(out, g, {"local_conditions", idx},
                      "good + additive + mult != 1 - q^-" + std::to_string(g.weight_sum()) + " in class " + r.cls.label);
    }
    // every unit class must be covered exactly once
    {
        long L = 1;
        for (const auto& r : g.local_conditions) L = std::lcm(L, r.cls.modulus);
        for (long x = 0; x < L; ++x) {
            if (std::gcd(x, L) != 1 && L > 1) continue;
            int n = 0;
            for (const auto& r : g.local_conditions) n += r.cls.contains(x);
            if (n != 1) {
                add_issue(out, g, {"local_conditions"}, "unit class " + std::to_string(x) + " mod " + std::to_string(L) +
                                                            " covered " + std::to_string(n) + " times");
                break;
            }
        }
    }

    for (std::size_t i = 0; i < g.iso_densities.size(); ++i) {
        const auto& r = g.iso_densities[i];
        const std::string idx = std::to_string(i);
        if (!g.isogenies.count(r.phi)) {
            add_issue(out, g, {"isogeny_densities", idx, "phi"}, "unknown kernel " + r.phi);
            continue;
        }
        if (g.modulus % r.cls.modulus != 0)
            add_issue(out, g, {"modulus"},
                      "row modulus " + std::to_string(r.cls.modulus) + " does not divide family modulus " +
                          std::to_string(g.modulus));
        RatFunc sum;
        for (const auto& k : r.kappa) sum = sum + k;
        for (const auto& lc : g.local_conditions) {
            long L = std::lcm(lc.cls.modulus, r.cls.modulus);
            bool overlap = false;
            for (long x = 0; x < L && !overlap; ++x)
                overlap = std::gcd(x, L) == 1 && lc.cls.contains(x) && r.cls.contains(x) && !lc.ramified;
            if (overlap && !sum.same_as(lc.mult)) {
                add_issue(out, g, {"isogeny_densities", idx, "kappa"},
                          "n-classes do not partition the multiplicative density in class " + r.cls.label);
                break;
            }
        }
    }

    for (std::size_t i = 0; i < g.constants.size(); ++i) {
        const auto& c = g.constants[i];
        const std::string idx = std::to_string(i);
        std::string err;
        parse_subgroup(c.subgroup_label, g.modulus, &err);
        bool modulus_flagged = std::any_of(out.begin(), out.end(), [](const DataIssue& d) {
            return d.path == std::vector<std::string>{"modulus"};
        });
        if (!err.empty() && !modulus_flagged) add_issue(out, g, {"constants", idx, "subgroup"}, err);
        if (!g.isogenies.count(c.phi)) add_issue(out, g, {"constants", idx, "phi"}, "unknown kernel " + c.phi);
        if (c.alphabet != g.alphabet(c.phi)) add_issue(out, g, {"constants", idx, "alphabet"}, "alphabet differs from density rows");
        if (c.c.size() != c.alphabet.size()) add_issue(out, g, {"constants", idx, "c"}, "wrong number of c_n entries");
    }
    std::vector<DataIssue> unique;
    for (auto& i : out) {
        bool dup = std::any_of(unique.begin(), unique.end(),
                               [&](const DataIssue& u) { return u.path == i.path && u.message == i.message; });
        if (!dup) unique.push_back(std::move(i));
    }
    return unique;
}

}  // namespace selmer
