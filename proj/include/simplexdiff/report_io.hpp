#ifndef SIMPLEXDIFF_REPORT_IO_HPP
#define SIMPLEXDIFF_REPORT_IO_HPP

#include "json.hpp"
#include "simplexdiff/diagnostics.hpp"

namespace simplexdiff {

// JSON bindings for the diagnostic report structs (lossless round-trip;
// doubles are emitted with shortest-exact formatting by the JSON layer).

void to_json(nlohmann::json& j, const KsReport& r);
void from_json(const nlohmann::json& j, KsReport& r);

void to_json(nlohmann::json& j, const KlEstimate& r);
void from_json(const nlohmann::json& j, KlEstimate& r);

void to_json(nlohmann::json& j, const RankReport& r);
void from_json(const nlohmann::json& j, RankReport& r);

void to_json(nlohmann::json& j, const MomentGridPoint& r);
void from_json(const nlohmann::json& j, MomentGridPoint& r);

void to_json(nlohmann::json& j, const MomentCheck& r);
void from_json(const nlohmann::json& j, MomentCheck& r);

}  // namespace simplexdiff

#endif
