#ifndef KSIL_REPORT_HPP
#define KSIL_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "ksil/core.hpp"
#include "ksil/protocol.hpp"

namespace ksil {

/// Text of a number exactly as it appears in the JSON documents.
std::string json_number(double value);

nlohmann::json to_json(const ComparisonReport& report);
std::string render_table(const ComparisonReport& report);

nlohmann::json to_json(const ApproxComparison& cmp);
std::string render_table(const std::vector<ApproxComparison>& rows);

nlohmann::json to_json(const SilhouetteReport& report);
nlohmann::json to_json(const RunResult& run, const Objective& objective);

} // namespace ksil

#endif
