#include "selmer/report.hpp"

#include <sstream>

namespace selmer {

using nlohmann::json;

json rational_json(const mpq_class& v) { return to_string(v); }

json log_json(const LogValue& v) {
    json coeffs = json::array();
    for (const auto& c : v) coeffs.push_back(to_string(c));
    return {{"text", to_string(v)}, {"coefficients", coeffs}, {"approx", to_double(v)}};
}

json to_json(const DensityReport& r, bool include_passing) {
    json checks = json::array(), ids = json::array(), ml = json::array();
    long nc = 0, ni = 0, nm = 0;
    for (const auto& c : r.checks) {
        nc += !c.pass;
        if (!c.pass || include_passing)
            checks.push_back({{"family", c.family},
                              {"q", c.q},
                              {"row", c.row},
                              {"condition", c.condition},
                              {"count", c.count},
                              {"census", rational_json(c.census)},
                              {"predicted", rational_json(c.predicted)},
                              {"pass", c.pass}});
    }
    for (const auto& c : r.identities) {
        ni += !c.pass;
        if (!c.pass || include_passing)
            ids.push_back({{"family", c.family},
                           {"q", c.q},
                           {"identity", c.identity},
                           {"row", c.row},
                           {"lhs", rational_json(c.lhs)},
                           {"rhs", rational_json(c.rhs)},
                           {"pass", c.pass}});
    }
    for (const auto& c : r.multilevel) {
        nm += !c.pass;
        if (!c.pass || include_passing)
            ml.push_back({{"family", c.family},
                          {"q", c.q},
                          {"depth", c.depth},
                          {"table_value", rational_json(c.table_value)},
                          {"decided", rational_json(c.result.decided)},
                          {"undecided", rational_json(c.result.undecided)},
                          {"excluded", rational_json(c.result.excluded)},
                          {"closed_form", rational_json(c.result.closed_form)},
                          {"pass", c.pass}});
    }
    return {{"q_max", r.q_max},
            {"summary",
             {{"checks", r.checks.size()},
              {"check_failures", nc},
              {"identities", r.identities.size()},
              {"identity_failures", ni},
              {"multilevel", r.multilevel.size()},
              {"multilevel_failures", nm}}},
            {"pass", r.failures() == 0},
            {"checks", checks},
            {"identities", ids},
            {"multilevel", ml}};
}

json to_json(const AuditReport& r) {
    json recs = json::array();
    for (const auto& a : r.records)
        recs.push_back({{"family", a.family},
                        {"phi", a.phi},
                        {"subgroup", a.subgroup},
                        {"quantity", a.quantity},
                        {"kind", a.kind},
                        {"derived", a.derived},
                        {"printed", a.printed},
                        {"pass", a.pass}});
    return {{"records", r.records.size()}, {"mismatches", r.mismatches()}, {"audit", recs}};
}

json to_json(const ConstantsRow& r) {
    json c = json::object(), alphabet = json::array(), n = json::array();
    for (std::size_t i = 0; i < r.alphabet.size(); ++i) {
        alphabet.push_back(rational_json(r.alphabet[i]));
        n.push_back(to_string(r.n[i]));
        c[to_string(r.n[i])] = rational_json(r.c[i]);
    }
    json sub = json::array();
    for (long a : r.subgroup) sub.push_back(a);
    return {{"family", r.family}, {"phi", r.phi},     {"subgroup", sub},   {"subgroup_label", r.subgroup_label},
            {"ratios", alphabet}, {"n", n},           {"c", c},            {"c_E", log_json(r.c_E)},
            {"c_V", log_json(r.c_V)}, {"theta", log_json(r.theta)}, {"source", r.source}};
}

json to_json(const DualCheckReport& r) {
    json fails = json::array();
    for (const auto& f : r.failures) fails.push_back({{"A", f.A.get_str()}, {"B", f.B.get_str()}, {"message", f.message}});
    return {{"family", r.family},
            {"phi", r.phi},
            {"samples", r.samples},
            {"skipped", r.skipped},
            {"u", r.u ? json(rational_json(*r.u)) : json(nullptr)},
            {"u_short", r.u_short ? json(rational_json(*r.u_short)) : json(nullptr)},
            {"pass", r.ok()},
            {"failures", fails}};
}

json to_json(const FamilySample& s, bool include_curves) {
    json j = {{"family", s.family},
              {"height_bound", s.height_bound.get_str()},
              {"margin", s.margin},
              {"box", {{"A", s.box_a.get_str()}, {"B", s.box_b.get_str()}}},
              {"sources", s.sources},
              {"curves", s.curves.size()},
              {"note", "counts are lower bounds: curves reached only from sources outside the box are missed"}};
    if (include_curves) {
        json rows = json::array();
        for (const auto& c : s.curves)
            rows.push_back({c.model.a.get_str(), c.model.b.get_str(), c.height.get_str(), c.A.get_str(), c.B.get_str()});
        j["columns"] = {"a", "b", "height", "A", "B"};
        j["rows"] = rows;
    }
    return j;
}

json to_json(const StatsReport& r) {
    json hist = json::array();
    for (const auto& [s, n] : r.s_histogram) hist.push_back({{"s", s}, {"count", n}});
    json freq = json::array();
    for (const auto& c : r.frequencies)
        freq.push_back({{"q", c.q},
                        {"condition", c.condition},
                        {"count", c.count},
                        {"total", c.total},
                        {"empirical", c.total ? static_cast<double>(c.count) / static_cast<double>(c.total) : 0.0},
                        {"predicted", rational_json(c.predicted)},
                        {"sigma", c.sigma},
                        {"within_3_sigma", c.within}});
    double var_ratio = r.loglog > 0 ? r.empirical.variance / r.loglog : 0.0;
    return {{"family", r.family},
            {"phi", r.phi},
            {"degree", r.degree},
            {"height_bound", r.height_bound.get_str()},
            {"margin", r.margin},
            {"prime_cap", r.prime_cap ? json(*r.prime_cap) : json(nullptr)},
            {"ratio_mode", r.mode == RatioMode::pseudo ? "pseudo" : "exact"},
            {"sources", r.sources},
            {"curves", r.curves},
            {"dropped", r.dropped},
            {"loglog_B", r.loglog},
            {"empirical",
             {{"mean", r.empirical.mean},
              {"variance", r.empirical.variance},
              {"skewness", r.empirical.skewness},
              {"kurtosis", r.empirical.kurtosis},
              {"excess_kurtosis", r.empirical.variance > 0 ? r.empirical.kurtosis - 3 : 0.0},
              {"variance_over_loglog", var_ratio}}},
            {"predicted",
             {{"constants", to_json(r.predicted)},
              {"mean", r.predicted_mean},
              {"variance", r.predicted_variance}}},
            {"caveat", "mean and variance agree with c*loglog(B) only up to O(1) terms, which dominate at this scale"},
            {"s_histogram", hist},
            {"frequencies", freq},
            {"frequency_pass_rate", r.frequency_pass_rate},
            {"lower_bound_proxy", r.proxy}};
}

json to_json(const Erratum& e) {
    json path = json::array();
    for (const auto& p : e.path) path.push_back(p);
    return {{"id", e.id},           {"family", e.family},       {"path", path},
            {"printed", e.printed}, {"corrected", e.corrected}, {"note", e.note}};
}

json to_json(const DataIssue& e) {
    json path = json::array();
    for (const auto& p : e.path) path.push_back(p);
    return {{"family", e.family}, {"path", path}, {"message", e.message}};
}

std::string curves_csv(const StatsReport& r) {
    std::ostringstream out;
    out << "A,B,a,b,height,ratio,s\n";
    for (const auto& row : r.rows)
        out << row.curve.A.get_str() << ',' << row.curve.B.get_str() << ',' << row.curve.model.a.get_str() << ','
            << row.curve.model.b.get_str() << ',' << row.curve.height.get_str() << ',' << to_string(row.selmer.ratio)
            << ",\"" << to_string(row.selmer.s) << "\"\n";
    return out.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace selmer
