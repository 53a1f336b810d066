#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace selmer {

// Variables understood by the expression parser. u stands for log_6(2).
enum class Var : int { A = 0, B = 1, q = 2, u = 3 };
constexpr int kVars = 4;

using Monomial = std::array<int, kVars>;

class Poly {
public:
    Poly() = default;
    explicit Poly(const mpq_class& c);
    static Poly var(Var v);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    mpq_class constant_value() const;
    const std::map<Monomial, mpq_class>& terms() const { return terms_; }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    Poly pow(unsigned e) const;
    bool operator==(const Poly& o) const { return terms_ == o.terms_; }

    int degree(Var v) const;
    bool uses_only(std::initializer_list<Var> vars) const;

    mpq_class eval(const std::array<mpq_class, kVars>& at) const;
    mpq_class eval_q(const mpq_class& q) const;
    // coefficient list in u, index = power
    std::vector<mpq_class> coeffs_in(Var v) const;

    std::string str() const;

private:
    std::map<Monomial, mpq_class> terms_;
    void add_term(const Monomial& m, const mpq_class& c);
};

struct RatFunc {
    Poly num;
    Poly den{mpq_class(1)};

    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator/(const RatFunc& o) const;
    RatFunc operator-() const;
    RatFunc pow(unsigned e) const;

    bool same_as(const RatFunc& o) const;
    Poly as_poly() const;  // throws unless den is constant
    mpq_class eval_q(const mpq_class& q) const;
    // lim_{q->inf} q^k * f(q); throws if unbounded
    mpq_class leading_at_infinity(int k) const;
};

RatFunc parse_expression(const std::string& text);
Poly parse_polynomial(const std::string& text);

// integer polynomial in A, B used for fast exact and modular evaluation
struct BiTerm {
    int i = 0;
    int j = 0;
    mpz_class c;
};

class BiPoly {
public:
    BiPoly() = default;
    explicit BiPoly(const Poly& p);

    const std::vector<BiTerm>& terms() const { return terms_; }
    int deg_a() const { return deg_a_; }
    int deg_b() const { return deg_b_; }
    // weighted degree for the weights, or -1 when not weighted homogeneous
    int weighted_degree(int wa, int wb) const;

    mpz_class eval(const mpz_class& a, const mpz_class& b) const;
    // coefficients reduced mod m in [0, m)
    std::vector<std::int64_t> coeffs_mod(long m) const;

    std::string str() const;

private:
    std::vector<BiTerm> terms_;
    int deg_a_ = 0;
    int deg_b_ = 0;
};

std::string to_string(const mpq_class& v);
mpq_class parse_rational(const std::string& s);

}  // namespace selmer
