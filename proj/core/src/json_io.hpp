#pragma once

// JSON mapping for configuration and trajectory-file types. Private to the
// library; the public headers stay free of the JSON dependency.

#include <initializer_list>
#include <string>
#include <string_view>

#include "contrast/crowdnav.hpp"
#include "contrast/divergence.hpp"
#include "contrast/errors.hpp"
#include "json.hpp"

namespace contrast::json_io {

using Json = nlohmann::ordered_json;

/// Throws ConfigError naming `where` if `obj` has a key outside `allowed`.
void expect_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                 const std::string& where);

template <class T>
T get_or(const Json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    return it->template get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

Json to_json(crowdnav::Vec2 v);
crowdnav::Vec2 vec2_from_json(const Json& j);

Json to_json(const crowdnav::CrowdScenario& s);
crowdnav::CrowdScenario scenario_from_json(const Json& j);

Json to_json(const crowdnav::PolicyHandle& p);
crowdnav::PolicyHandle policy_from_json(const Json& j);

Json to_json(const crowdnav::CrowdDynamics& d);
crowdnav::CrowdDynamics dynamics_from_json(const Json& j);

Json to_json(const RewardConfig& r);
RewardConfig reward_from_json(const Json& j, std::size_t default_horizon);

}  // namespace contrast::json_io
