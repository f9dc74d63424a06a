#pragma once

// On-disk JSON schema ("rq/1") for point/vanishing configurations and run
// reports. Coordinates are complex: a scalar entry, or [re, im] where each
// part is a double, a decimal string, or an exact [numerator, denominator]
// integer pair.

#include <json.hpp>
#include <string>

#include "rq/projective.hpp"
#include "rq/scalar.hpp"
#include "rq/vanishing.hpp"

namespace rq::io {

using json = nlohmann::ordered_json;

struct ParsedConfig {
  std::string kind;  // "points" or "vanishing"
  vanishing::VanishingConfig vc;
};

c128 parse_scalar(const json& j);
json scalar_to_json(const c128& z, int digits = 40);

ParsedConfig parse_config(const json& j);
json config_to_json(const vanishing::VanishingConfig& vc, const std::string& kind);

json points_to_json(const geom::PointConfig<c128>& cfg);
geom::PointConfig<c128> points_from_json(const json& j, std::size_t ambient_dim);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& data);

}  // namespace rq::io
