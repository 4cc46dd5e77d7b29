#pragma once

#include <json.hpp>

#include "zeno/config.hpp"

namespace zeno::detail {

using Json = nlohmann::json;

Json config_json(const ProtocolConfig& config);
Json constants_json(const PhysicalConstants& c);

}  // namespace zeno::detail
