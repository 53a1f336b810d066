#pragma once

#include "selmer/families.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace selmer {

struct DensityCensus {
    std::string family;
    std::optional<std::string> phi;
    long q = 0;
    long pairs = 0;        // source pairs (A,B) != (0,0) mod q
    long image_pairs = 0;  // distinct nonzero (a,b) mod q, diagnostic only
    long good = 0, mult = 0, split = 0, additive0 = 0;
    long anomalies = 0;  // multiplicative pairs where the vanishing factor is not unique
    // per kernel: local ratio -> number of source pairs
    std::map<std::string, std::map<mpq_class, long>> nclass;

    // census value of a condition: count / q^2, and for additive the full multilevel value
    mpq_class value(const ConditionKey& key) const;
    long count(const ConditionKey& key) const;
    int weight_sum = 0;
};

// counts for all kernels of the family when phi is empty
DensityCensus census(const Family& g, const std::optional<std::string>& phi, long q);

struct MultilevelAdditive {
    long q = 0;
    int depth = 0;
    mpq_class decided;     // additive measure certified up to depth
    mpq_class undecided;   // measure of classes still open at depth
    mpq_class excluded;    // weighted-divisible (non-reduced) measure
    // closed form of the additive measure on (A,B) = 0 mod q
    mpq_class closed_form;
};

MultilevelAdditive census_additive_multilevel(const Family& g, long q, int depth);

struct DensityCheck {
    std::string family;
    long q = 0;
    std::string row;  // residue class label of the table row
    std::string condition;
    long count = 0;
    mpq_class census;
    mpq_class predicted;
    bool pass = false;
};

struct IdentityCheck {
    std::string family;
    long q = 0;
    std::string identity;  // "sum" or "partition:<phi>"
    std::string row;
    mpq_class lhs, rhs;
    bool pass = false;
};

struct MultilevelCheck {
    std::string family;
    long q = 0;
    int depth = 0;
    mpq_class table_value;  // table additive minus the level-one census part
    MultilevelAdditive result;
    bool pass = false;
};

struct DensityReport {
    long q_max = 0;
    std::vector<DensityCheck> checks;
    std::vector<IdentityCheck> identities;
    std::vector<MultilevelCheck> multilevel;
    long failures() const;
};

struct VerifyOptions {
    long q_min = 5;
    long q_max = 50;
    std::optional<std::string> family;
    std::optional<std::string> phi;
    int multilevel_depth = 3;
    long multilevel_q_max = 13;
    unsigned workers = 1;
};

DensityReport verify_tables(const Registry& reg, const VerifyOptions& opt);

}  // namespace selmer
