#pragma once

#include "selmer/constants.hpp"
#include "selmer/densities.hpp"
#include "selmer/isogeny.hpp"
#include "selmer/statistics.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace selmer {

// rationals are written as "num/den" strings, log values as {"text", "coefficients"}
nlohmann::json rational_json(const mpq_class& v);
nlohmann::json log_json(const LogValue& v);

nlohmann::json to_json(const DensityReport& r, bool include_passing = false);
nlohmann::json to_json(const AuditReport& r);
nlohmann::json to_json(const ConstantsRow& r);
nlohmann::json to_json(const DualCheckReport& r);
nlohmann::json to_json(const FamilySample& s, bool include_curves = false);
nlohmann::json to_json(const StatsReport& r);
nlohmann::json to_json(const Erratum& e);
nlohmann::json to_json(const DataIssue& e);

// flat per-curve rows: A,B,a,b,height,ratio,s
std::string curves_csv(const StatsReport& r);

std::string dump(const nlohmann::json& j);

}  // namespace selmer
