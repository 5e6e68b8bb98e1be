#pragma once

#include <string>

#include <json.hpp>

#include "scsp/domain.hpp"

namespace scsp {

inline constexpr const char* kSchemaVersion = "scsp-1";

using Json = nlohmann::ordered_json;

Json to_json(const HorizonParams& h);
HorizonParams horizon_from_json(const Json& j);

Json to_json(const Patient& p);
Patient patient_from_json(const Json& j);

Json to_json(const Instance& inst);
/// Validates the result; throws StructuralError on schema or reference errors.
Instance instance_from_json(const Json& j);

/// Placements are written in ascending patient id so output is stable.
Json to_json(const Schedule& s);
Schedule schedule_from_json(const Json& j, std::size_t patient_count);

/// Reads a whole file; throws ConfigError naming the path on failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace scsp
