#pragma once

#include <string>

#include <json.hpp>

#include "ccn/admissible.hpp"
#include "ccn/colouring.hpp"
#include "ccn/network.hpp"
#include "ccn/orbit.hpp"

namespace ccn::io {

using nlohmann::json;

/// {"nodes":[{"id":1,"type":"A"}], "arrows":[{"tail":3,"head":1,"type":"solid"}]}
[[nodiscard]] Network network_from_json(const json& j);
[[nodiscard]] json network_to_json(const Network& net);

/// [[1,2],[3]] in node ids, or {"colouring": [[...]]}.
[[nodiscard]] Colouring colouring_from_json(const Network& net, const json& j);
[[nodiscard]] json colouring_to_json(const Network& net, const Colouring& col);

/// Text form "1,2|3" (node ids, classes separated by '|').
[[nodiscard]] Colouring parse_colouring(const Network& net, const std::string& text);

/// {"dims":{"A":2}, "node_dims":{"3":1}, "components":{"1":["...","..."]},
///  "symmetrise":true, "initial":[...], "period_guess":6.28}
[[nodiscard]] SystemSpec system_spec_from_json(const json& j);
[[nodiscard]] json system_spec_to_json(const SystemSpec& s);

/// {"anchor":[...], "period":T, "multipliers":[[re,im],...], ...}
[[nodiscard]] json orbit_to_json(const PeriodicOrbit& orbit);
[[nodiscard]] PeriodicOrbit orbit_from_json(const json& j);

[[nodiscard]] json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

/// Node ids of a node index list.
[[nodiscard]] json ids(const Network& net, const std::vector<std::size_t>& nodes);

}  // namespace ccn::io
