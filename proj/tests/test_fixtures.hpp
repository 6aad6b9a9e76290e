#pragma once

#include "vlcee/config.hpp"

namespace vlcee::testing {

inline NetworkConfig default_config() {
  return config_from_json(nlohmann::json::object());
}

// One LED straight above one user, default optics and QoS.
inline NetworkConfig tiny_config(nlohmann::json overrides = {}) {
  nlohmann::json j = {
      {"scene",
       {{"room", {5.0, 5.0, 3.0}},
        {"leds", {{2.5, 2.5, 3.0}}},
        {"users", {{2.5, 2.0, 0.0}}}}},
  };
  for (auto& [k, v] : overrides.items()) j[k] = v;
  return config_from_json(j);
}

}  // namespace vlcee::testing
