#pragma once

#include "selmer/poly.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace selmer {

struct ResidueClass {
    std::string label;
    long modulus = 1;
    std::vector<long> residues;

    bool contains(long q) const;
};

struct DiscRow {
    mpz_class unit;
    std::vector<int> exponents;
    std::string source;
};

struct MarkedPoint {
    Poly x, y;
    int order = 0;
};

struct BaseModel {
    std::array<Poly, 5> a;  // a1 a2 a3 a4 a6
    std::map<std::string, MarkedPoint> points;
};

struct KernelSpec {
    std::string phi;
    int degree = 0;
    std::optional<std::pair<std::string, int>> generator;  // point name, multiple
    std::vector<std::string> chain;
};

struct LocalRow {
    ResidueClass cls;
    bool ramified = false;
    RatFunc good, additive, mult, split;
};

struct IsoDensityRow {
    std::string phi;
    ResidueClass cls;
    std::vector<mpq_class> alphabet;  // local Tamagawa ratios c(E')/c(E)
    std::vector<RatFunc> kappa;
};

// value a + b*u + c*u^2 with u = log_6(2); plain rationals have only a
using LogValue = std::vector<mpq_class>;

struct PrintedConstants {
    std::string phi;
    std::string subgroup_label;
    std::vector<long> subgroup;
    std::vector<mpq_class> alphabet;
    std::vector<std::optional<LogValue>> c;
    LogValue c_E, c_V, theta;
};

enum class Condition { good, additive, mult, split, nclass };

struct ConditionKey {
    Condition kind = Condition::good;
    std::string phi;
    mpq_class ratio;

    std::string str() const;
    static ConditionKey parse(const std::string& s);
};

struct Family {
    std::string id;
    std::string table_label;
    int M = 1, N = 1;
    long level = 1;
    long modulus = 1;
    int wa = 1, wb = 1;
    int delta = 1;
    mpq_class alpha;
    mpq_class beta_constant, beta_per_degree;
    std::string f4_text, f6_text;
    BiPoly f4, f6;
    std::vector<std::string> factor_text;
    std::vector<BiPoly> factors;
    std::map<std::string, DiscRow> discriminants;
    std::optional<BaseModel> base_model;
    std::map<std::string, KernelSpec> isogenies;
    std::vector<LocalRow> local_conditions;
    std::vector<IsoDensityRow> iso_densities;
    std::vector<PrintedConstants> constants;
    std::map<std::string, std::pair<BiPoly, BiPoly>> example_models;

    int weight_sum() const { return wa + wb; }
    bool admissible(long q, int degree = 1) const;
    std::vector<std::string> kernels() const;
    const DiscRow& disc(const std::string& phi) const;
    const KernelSpec& kernel(const std::string& phi) const;
    const LocalRow& local_row(long q) const;
    const IsoDensityRow& iso_row(const std::string& phi, long q) const;
    std::vector<mpq_class> alphabet(const std::string& phi) const;
};

struct Erratum {
    std::string id;
    std::string family;
    std::vector<std::string> path;
    std::string printed;
    std::string corrected;
    std::string note;
};

// something the loader found inconsistent in the data as read
struct DataIssue {
    std::string family;
    std::vector<std::string> path;
    std::string message;
};

enum class ErrataMode { apply, printed };

class Registry {
public:
    static Registry load(const std::string& path = default_data_path(), ErrataMode mode = ErrataMode::apply);
    static std::string default_data_path();

    const std::vector<Family>& families() const { return families_; }
    const Family& get(const std::string& id) const;
    bool has(const std::string& id) const;
    const std::vector<Erratum>& errata() const { return errata_; }
    const std::vector<DataIssue>& issues() const { return issues_; }
    ErrataMode mode() const { return mode_; }
    std::vector<std::string> ids() const;

private:
    std::vector<Family> families_;
    std::vector<Erratum> errata_;
    std::vector<DataIssue> issues_;
    ErrataMode mode_ = ErrataMode::apply;
};

// true when some erratum path starts with the issue path (same family)
bool issue_documented(const DataIssue& issue, const std::vector<Erratum>& errata);

std::pair<mpz_class, mpz_class> evaluate_f(const Family& g, const mpz_class& A, const mpz_class& B);
mpz_class table_discriminant(const Family& g, const std::string& phi, const mpz_class& A, const mpz_class& B);
Poly table_discriminant_poly(const Family& g, const std::string& phi);
mpq_class density_prediction(const Family& g, const ConditionKey& cond, long q);

// checks that do not need curves: homogeneity, alpha, sums, subgroup shape
std::vector<DataIssue> validate_family(const Family& g);

std::vector<long> parse_subgroup(const std::string& label, long modulus, std::string* error = nullptr);
bool is_subgroup(const std::vector<long>& residues, long modulus);

// (u^12 ratio test) returns u when r = u^12 with u a positive rational supported on 2 and 3
std::optional<mpq_class> twelfth_root_23(const mpq_class& r);

}  // namespace selmer
