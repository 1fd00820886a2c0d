#pragma once

#include <string>

#include "json.hpp"
#include "steering/analytic_family.hpp"
#include "steering/quantum.hpp"
#include "steering/sdp.hpp"
#include "steering/seesaw.hpp"
#include "steering/steering_core.hpp"

namespace steering {

// Complex entries serialize as [re, im] pairs, matrices row-major; doubles
// round-trip at full precision. Schema violations throw
// std::invalid_argument naming the offending field.

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json state_to_json(const DensityOperator& rho);       // steering/state-v1
DensityOperator state_from_json(const nlohmann::json& j);

nlohmann::json assemblage_to_json(const Assemblage& e);         // steering/assemblage-v1
Assemblage assemblage_from_json(const nlohmann::json& j);

nlohmann::json functional_to_json(const SteeringFunctional& z); // steering/functional-v1
SteeringFunctional functional_from_json(const nlohmann::json& j);

nlohmann::json search_result_to_json(const SearchResult& r);    // steering/search-result-v1

nlohmann::json counterexample_report_to_json(const CounterexampleReport& rep);

/// Debug dump of a full SDP (blocks, objective, constraints) for reproducing
/// solver issues.
nlohmann::json dump_problem(const SdpProblem& p);

/// CSV with header `x,m1,m2,C,valid`; invalid points carry C = nan, valid = 0.
std::string scan_to_csv(const ScanTable& table);

std::string read_file(const std::string& path);
/// Write-once via temp file + rename in the target directory.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace steering
