// JSON coefficient schema shared by the CLI and the python module.
// A series document is {m, dim_out, K, modes: [{k, re, im}]}; an expansion
// bundles per-order series and history terms with {omega, orders}.

#pragma once

#include <nlohmann/json.hpp>

#include "phasered/model.hpp"

namespace phasered {

nlohmann::json to_json(const FourierSeries& s);
FourierSeries series_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PhaseHistoryField& f);
PhaseHistoryField history_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Expansion& e);
Expansion expansion_from_json(const nlohmann::json& j);

}  // namespace phasered
