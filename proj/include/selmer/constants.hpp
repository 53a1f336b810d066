#pragma once

#include "selmer/families.hpp"

#include <optional>
#include <string>
#include <vector>

namespace selmer {

// LogValue helpers; u = log_6(2) and log_6(3) = 1 - u
LogValue log_value(const mpq_class& c);
LogValue operator+(const LogValue& x, const LogValue& y);
LogValue operator*(const LogValue& x, const LogValue& y);
LogValue scale(const LogValue& x, const mpq_class& c);
bool same(const LogValue& x, const LogValue& y);
std::string to_string(const LogValue& v);
double to_double(const LogValue& v);

// n = log_d(r) for a local ratio r of a degree-d kernel
LogValue log_ratio(const mpq_class& r, int d);

struct ConstantsRow {
    std::string family, phi;
    std::vector<long> subgroup;
    std::string subgroup_label;
    std::vector<mpq_class> alphabet;
    std::vector<LogValue> n;
    std::vector<mpq_class> c;
    LogValue c_E, c_V, theta;
    std::string source = "derived";
};

std::vector<mpq_class> derive_cn(const Family& g, const std::string& phi, const std::vector<long>& subgroup);
ConstantsRow assemble(const Family& g, const std::string& phi, const std::vector<long>& subgroup);

struct AuditRecord {
    std::string family, phi, subgroup;
    std::string quantity;
    std::string kind;  // "derived" (printed vs derived) or "internal" (printed vs printed)
    std::string derived, printed;
    bool pass = false;
};

struct AuditReport {
    std::vector<AuditRecord> records;
    long mismatches() const;
    // a printed row is internally inconsistent when one of its "internal" records fails
    bool row_inconsistent(const std::string& family, const std::string& phi, const std::string& subgroup) const;
    bool row_flagged(const std::string& family, const std::string& phi, const std::string& subgroup) const;
};

AuditReport audit_paper_tables(const Registry& reg);

// derived rows against the printed ones; rows with a failing internal identity are "flagged" and exempt
struct RowVerdict {
    ConstantsRow derived;
    std::string status;  // "match", "mismatch" or "flagged"
    std::vector<std::string> differing;
};

std::vector<RowVerdict> verify_constants(const Registry& reg, const std::optional<std::string>& family = std::nullopt);

}  // namespace selmer
