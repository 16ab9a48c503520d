#pragma once

#include "pag/analysis.hpp"
#include "pag/json_util.hpp"

namespace pag {

// Report serializers used by the CLI. All rationals appear as exact "num/den"
// strings and every object is built in a fixed key order, so identical inputs
// produce byte-identical documents.

Json states_json(const StrategyMatrix& U);
Json best_response_json(const BestResponse& br, const Environment& env,
                        const std::string& country);
Json equilibrium_set_json(const EquilibriumSet& set, const UtilityModel& model);
Json dynamics_json(const DynamicsResult& result, const UtilityModel& model);
Json paradox_json(const ParadoxReport& report);
Json poa_json(const PoAReport& report);
Json poa_bounds_json(const PoaBounds& bounds);

}  // namespace pag
