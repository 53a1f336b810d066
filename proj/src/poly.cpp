#include "selmer/poly.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace selmer {

std::string to_string(const mpq_class& v) {
    mpq_class c = v;
    c.canonicalize();
    return c.get_str();
}

mpq_class parse_rational(const std::string& s) {
    mpq_class r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
    r.canonicalize();
    return r;
}

Poly::Poly(const mpq_class& c) {
    if (c != 0) terms_[Monomial{}] = c;
}

Poly Poly::var(Var v) {
    Poly p;
    Monomial m{};
    m[static_cast<int>(v)] = 1;
    p.terms_[m] = 1;
    return p;
}

void Poly::add_term(const Monomial& m, const mpq_class& c) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        if (c != 0) terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{});
}

mpq_class Poly::constant_value() const {
    if (!is_constant()) throw std::logic_error("polynomial is not constant: " + str());
    return terms_.empty() ? mpq_class(0) : terms_.begin()->second;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

Poly Poly::operator-() const {
    Poly r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r;
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) {
            Monomial m;
            for (int k = 0; k < kVars; ++k) m[k] = m1[k] + m2[k];
            r.add_term(m, c1 * c2);
        }
    return r;
}

Poly Poly::pow(unsigned e) const {
    Poly r(mpq_class(1)), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

int Poly::degree(Var v) const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m[static_cast<int>(v)]);
    return d;
}

bool Poly::uses_only(std::initializer_list<Var> vars) const {
    for (const auto& [m, c] : terms_)
        for (int k = 0; k < kVars; ++k) {
            if (m[k] == 0) continue;
            bool ok = false;
            for (Var v : vars) ok = ok || static_cast<int>(v) == k;
            if (!ok) return false;
        }
    return true;
}

mpq_class Poly::eval(const std::array<mpq_class, kVars>& at) const {
    mpq_class s = 0;
    for (const auto& [m, c] : terms_) {
        mpq_class t = c;
        for (int k = 0; k < kVars; ++k)
            for (int e = 0; e < m[k]; ++e) t *= at[k];
        s += t;
    }
    return s;
}

mpq_class Poly::eval_q(const mpq_class& q) const {
    if (!uses_only({Var::q})) throw std::logic_error("expected a polynomial in q: " + str());
    std::array<mpq_class, kVars> at{0, 0, q, 0};
    return eval(at);
}

std::vector<mpq_class> Poly::coeffs_in(Var v) const {
    int d = degree(v);
    std::vector<mpq_class> out(d < 0 ? 0 : d + 1);
    for (const auto& [m, c] : terms_) {
        for (int k = 0; k < kVars; ++k)
            if (k != static_cast<int>(v) && m[k] != 0) throw std::logic_error("unexpected variable in " + str());
        out[m[static_cast<int>(v)]] += c;
    }
    return out;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    static const char* names[kVars] = {"A", "B", "q", "u"};
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        mpq_class a = abs(c);
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        bool unit = (m == Monomial{});
        if (a != 1 || unit) os << to_string(a) << (unit ? "" : "*");
        bool star = false;
        for (int k = 0; k < kVars; ++k) {
            if (!m[k]) continue;
            if (star) os << "*";
            os << names[k];
            if (m[k] > 1) os << "^" << m[k];
            star = true;
        }
    }
    return os.str();
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
    if (den == o.den) return {num + o.num, den};
    return {num * o.den + o.num * den, den * o.den};
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator-() const { return {-num, den}; }

RatFunc RatFunc::operator*(const RatFunc& o) const { return {num * o.num, den * o.den}; }

RatFunc RatFunc::operator/(const RatFunc& o) const {
    if (o.num.is_zero()) throw std::domain_error("division by zero in expression");
    if (o.num.is_constant()) {
        mpq_class c = o.num.constant_value();
        return {num * o.den * Poly(1 / c), den};
    }
    return {num * o.den, den * o.num};
}

RatFunc RatFunc::pow(unsigned e) const { return {num.pow(e), den.pow(e)}; }

bool RatFunc::same_as(const RatFunc& o) const { return num * o.den == o.num * den; }

Poly RatFunc::as_poly() const {
    if (!den.is_constant()) throw std::logic_error("expression is not a polynomial");
    return num * Poly(1 / den.constant_value());
}

mpq_class RatFunc::eval_q(const mpq_class& q) const {
    mpq_class d = den.eval_q(q);
    if (d == 0) throw std::domain_error("denominator vanishes");
    return num.eval_q(q) / d;
}

mpq_class RatFunc::leading_at_infinity(int k) const {
    if (num.is_zero()) return 0;
    auto n = num.coeffs_in(Var::q);
    auto d = den.coeffs_in(Var::q);
    int dn = static_cast<int>(n.size()) - 1 + k;
    int dd = static_cast<int>(d.size()) - 1;
    if (dn > dd) throw std::domain_error("expression grows without bound in q");
    if (dn < dd) return 0;
    return n.back() / d.back();
}

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    RatFunc parse() {
        RatFunc r = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return r;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) {
        throw std::invalid_argument(msg + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    RatFunc expr() {
        RatFunc r = term();
        for (;;) {
            if (eat('+')) r = r + term();
            else if (eat('-')) r = r - term();
            else return r;
        }
    }
    RatFunc term() {
        RatFunc r = unary();
        for (;;) {
            if (eat('*')) r = r * unary();
            else if (eat('/')) r = r / unary();
            else return r;
        }
    }
    RatFunc unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    RatFunc power() {
        RatFunc base = atom();
        if (eat('^')) {
            skip();
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected integer exponent");
            return base.pow(static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start))));
        }
        return base;
    }
    RatFunc atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            RatFunc r = expr();
            if (!eat(')')) fail("expected ')'");
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            mpz_class v(s_.substr(start, pos_ - start));
            return {Poly(mpq_class(v)), Poly(mpq_class(1))};
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            if (name == "log6") return log6();
            Poly one(mpq_class(1));
            if (name == "A") return {Poly::var(Var::A), one};
            if (name == "B") return {Poly::var(Var::B), one};
            if (name == "q") return {Poly::var(Var::q), one};
            if (name == "u") return {Poly::var(Var::u), one};
            fail("unknown identifier '" + name + "'");
        }
        fail("unexpected character");
    }
    // log_6 of 2^i 3^j, written in terms of u = log_6 2 and log_6 3 = 1 - u
    RatFunc log6() {
        if (!eat('(')) fail("expected '(' after log6");
        RatFunc arg = expr();
        if (!eat(')')) fail("expected ')'");
        if (!arg.num.is_constant() || !arg.den.is_constant()) fail("log6 needs a constant argument");
        mpq_class v = arg.num.constant_value() / arg.den.constant_value();
        if (v <= 0) fail("log6 of non-positive value");
        int e2 = 0, e3 = 0;
        mpz_class n = v.get_num(), d = v.get_den();
        auto strip = [](mpz_class& x, unsigned long p) {
            int e = 0;
            while (mpz_divisible_ui_p(x.get_mpz_t(), p)) {
                mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), p);
                ++e;
            }
            return e;
        };
        e2 = strip(n, 2) - strip(d, 2);
        e3 = strip(n, 3) - strip(d, 3);
        if (n != 1 || d != 1) fail("log6 argument must be supported on 2 and 3");
        Poly u = Poly::var(Var::u);
        Poly r = u * Poly(mpq_class(e2)) + (Poly(mpq_class(1)) - u) * Poly(mpq_class(e3));
        return {r, Poly(mpq_class(1))};
    }
};

}  // namespace

RatFunc parse_expression(const std::string& text) { return Parser(text).parse(); }

Poly parse_polynomial(const std::string& text) { return parse_expression(text).as_poly(); }

BiPoly::BiPoly(const Poly& p) {
    if (!p.uses_only({Var::A, Var::B})) throw std::invalid_argument("expected a polynomial in A and B: " + p.str());
    for (const auto& [m, c] : p.terms()) {
        if (c.get_den() != 1) throw std::invalid_argument("non-integral coefficient in " + p.str());
        terms_.push_back({m[0], m[1], c.get_num()});
        deg_a_ = std::max(deg_a_, m[0]);
        deg_b_ = std::max(deg_b_, m[1]);
    }
}

int BiPoly::weighted_degree(int wa, int wb) const {
    if (terms_.empty()) return 0;
    int d = terms_.front().i * wa + terms_.front().j * wb;
    for (const auto& t : terms_)
        if (t.i * wa + t.j * wb != d) return -1;
    return d;
}

mpz_class BiPoly::eval(const mpz_class& a, const mpz_class& b) const {
    std::vector<mpz_class> pa(deg_a_ + 1), pb(deg_b_ + 1);
    pa[0] = 1;
    pb[0] = 1;
    for (int k = 1; k <= deg_a_; ++k) pa[k] = pa[k - 1] * a;
    for (int k = 1; k <= deg_b_; ++k) pb[k] = pb[k - 1] * b;
    mpz_class s = 0;
    for (const auto& t : terms_) s += t.c * pa[t.i] * pb[t.j];
    return s;
}

std::vector<std::int64_t> BiPoly::coeffs_mod(long m) const {
    std::vector<std::int64_t> out;
    out.reserve(terms_.size());
    mpz_class r;
    for (const auto& t : terms_) {
        mpz_fdiv_r_ui(r.get_mpz_t(), t.c.get_mpz_t(), static_cast<unsigned long>(m));
        out.push_back(r.get_si());
    }
    return out;
}

std::string BiPoly::str() const {
    Poly p;
    for (const auto& t : terms_) {
        Monomial m{};
        m[0] = t.i;
        m[1] = t.j;
        Poly mono = Poly::var(Var::A).pow(t.i) * Poly::var(Var::B).pow(t.j) * Poly(mpq_class(t.c));
        p = p + mono;
    }
    return p.str();
}

}  // namespace selmer
