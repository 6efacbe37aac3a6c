#pragma once

#include <string>

#include <json.hpp>

#include "causal/adjustment.hpp"
#include "causal/efficiency.hpp"
#include "causal/oracle.hpp"
#include "causal/time_dependent.hpp"

namespace causal::cli {

using nlohmann::json;

json to_json(const VertexSet& s);
json to_json(const TimeDepSet& z);
json to_json(const Dag& g);
json to_json(const AdjustmentReport& r);
json to_json(const Verdict& v);
json to_json(const TimeDepReport& r);
json to_json(const EifExpr& e);
json to_json(const EfficiencyReport& r);
json to_json(const IdentityReport& r);
json to_json(const CausalError& e);

std::string to_text(const AdjustmentReport& r);
std::string to_text(const Verdict& v);
std::string to_text(const TimeDepReport& r, const TimeDepSet& z);
std::string to_text(const EfficiencyReport& r);
std::string to_text(const IdentityReport& r);

}  // namespace causal::cli
