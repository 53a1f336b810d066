#include "common.hpp"

#include "selmer/constants.hpp"

#include <cmath>

#include <doctest.h>

using namespace selmer;
using selmer::test::family;
using selmer::test::registry;

namespace {

mpq_class c_at(const Family& g, const std::string& phi, const std::vector<long>& sub, const mpq_class& ratio) {
    auto alphabet = g.alphabet(phi);
    auto c = derive_cn(g, phi, sub);
    REQUIRE(c.size() == alphabet.size());
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == ratio) return c[i];
    FAIL("ratio not in the alphabet");
    return 0;
}

bool is(const LogValue& v, const mpq_class& x) { return same(v, log_value(x)); }

std::vector<long> full(long m) { return parse_subgroup("(Z/" + std::to_string(m) + "Z)^x", m); }

}  // namespace

TEST_CASE("LogValue arithmetic") {
    LogValue u{0, 1};
    CHECK(same(log_ratio(2, 6), u));
    CHECK(same(log_ratio(3, 6), LogValue{1, -1}));
    CHECK(same(log_ratio(mpq_class(1, 6), 6), log_value(-1)));
    CHECK(is(log_ratio(7, 7), 1));
    CHECK(is(log_ratio(3, 9), mpq_class(1, 2)));
    CHECK(same(u + log_value(1), LogValue{1, 1}));
    CHECK(same(u * u, LogValue{0, 0, 1}));
    CHECK(same(scale(u, 3), LogValue{0, 3}));
    CHECK(to_double(u) == doctest::Approx(std::log(2.0) / std::log(6.0)));
}

TEST_CASE("derive_cn examples") {
    const auto& g7 = family("G(1,7)");
    CHECK(c_at(g7, "C7", {1, 2, 4}, 7) == 1);
    CHECK(c_at(g7, "C7", {1, 2, 4}, mpq_class(1, 7)) == 3);

    const auto& g9 = family("G(1,9)");
    // class values 5, 0, 0, 2, 2, 0 averaged over the six units
    CHECK(c_at(g9, "C3", full(9), 3) == mpq_class(3, 2));

    CHECK_THROWS_AS(derive_cn(g7, "C7", {1, 3}), std::invalid_argument);
}

TEST_CASE("derive_cn agrees with the growth of the density formulas") {
    // q^2 kappa_n(q) / (q - 1) tends to the leading coefficient along each class
    for (const auto& g : registry().families())
        for (const auto& phi : g.kernels()) {
            CAPTURE(g.id);
            CAPTURE(phi);
            auto sub = full(g.modulus);
            auto alphabet = g.alphabet(phi);
            std::vector<double> mean(alphabet.size()), one(alphabet.size());
            for (long a : sub) {
                long q = a + g.modulus * 10000019L * 6 * g.level;
                const auto& row = g.iso_row(phi, q);
                for (std::size_t i = 0; i < alphabet.size(); ++i) {
                    mpq_class qq = q;
                    double L = mpq_class(row.kappa[i].eval_q(qq) * qq * qq / (qq - 1)).get_d();
                    mean[i] += L / static_cast<double>(sub.size());
                    if (a == 1) one[i] = L;
                }
            }
            auto c_full = derive_cn(g, phi, sub), c_one = derive_cn(g, phi, {1});
            for (std::size_t i = 0; i < alphabet.size(); ++i) {
                CHECK(c_full[i].get_d() == doctest::Approx(mean[i]).epsilon(1e-5));
                CHECK(c_one[i].get_d() == doctest::Approx(one[i]).epsilon(1e-5));
            }
        }
}

TEST_CASE("assemble examples") {
    auto r = assemble(family("G(1,7)"), "C7", full(7));
    CHECK(is(r.c_E, mpq_class(-5, 2)));
    CHECK(is(r.c_V, mpq_class(7, 2)));
    CHECK(is(r.theta, mpq_class(-3, 4)));

    auto r9 = assemble(family("G(1,9)"), "C9", {1});
    CHECK(is(r9.c_E, 0));
    CHECK(is(r9.c_V, 6));
    CHECK(is(r9.theta, 3));

    for (const auto& g : registry().families())
        for (const auto& phi : g.kernels()) {
            auto row = assemble(g, phi, full(g.modulus));
            LogValue e{0}, v{0};
            for (std::size_t i = 0; i < row.n.size(); ++i) {
                e = e + scale(row.n[i], row.c[i]);
                v = v + scale(row.n[i] * row.n[i], row.c[i]);
            }
            CAPTURE(g.id);
            CAPTURE(phi);
            CHECK(same(row.c_E, e));
            CHECK(same(row.c_V, v));
            CHECK(same(row.theta, row.c_E + scale(row.c_V, mpq_class(1, 2))));
        }
}

TEST_CASE("a row with all c_n zero") {
    auto g = family("G(1,7)");
    for (auto& row : g.iso_densities)
        for (auto& k : row.kappa) k = parse_expression("0");
    auto z = assemble(g, "C7", full(7));
    CHECK(is(z.c_E, 0));
    CHECK(is(z.c_V, 0));
    CHECK(is(z.theta, 0));
}

TEST_CASE("audit flags") {
    auto audit = audit_paper_tables(registry());
    CHECK(audit.records.size() > 50);
    CHECK(audit.row_inconsistent("G(4,4)", "C2", "{1}"));
    CHECK_FALSE(audit.row_inconsistent("G(1,7)", "C7", "(Z/7Z)^x"));
    CHECK_FALSE(audit.row_inconsistent("G(1,9)", "C9", "{1}"));
    CHECK_FALSE(audit.row_inconsistent("G(2,2)", "C2", "{1}"));
}

TEST_CASE("G(2,2) printed identity") {
    const auto& g = family("G(2,2)");
    bool found = false;
    for (const auto& pc : g.constants) {
        if (!is(pc.c_E, mpq_class(-3, 2))) continue;
        found = true;
        CHECK(is(pc.c_V, mpq_class(5, 2)));
        CHECK(is(pc.theta, mpq_class(-1, 4)));
        CHECK(same(pc.theta, pc.c_E + scale(pc.c_V, mpq_class(1, 2))));
    }
    CHECK(found);
}

TEST_CASE("verify_constants") {
    auto rows = verify_constants(registry());
    int flagged = 0;
    for (const auto& v : rows) {
        if (v.status == "flagged") ++flagged;
        if (v.derived.family == "G(1,6)" && v.derived.phi == "C6") CHECK(v.status == "match");
        if (v.derived.family == "G(1,7)") CHECK(v.status == "match");
        if (v.derived.family == "G(4,4)" && v.derived.subgroup == std::vector<long>{1}) CHECK(v.status == "flagged");
    }
    CHECK(flagged >= 1);
    CHECK_THROWS_AS(verify_constants(registry(), std::string("G(9,9)")), std::invalid_argument);
}
