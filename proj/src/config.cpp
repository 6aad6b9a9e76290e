#include "vlcee/config.hpp"

#include <fstream>
#include <set>

namespace vlcee {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where, const std::set<std::string>& known,
                std::vector<std::string>& errors) {
  if (!j.is_object()) {
    errors.push_back(where + " must be an object");
    return;
  }
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) errors.push_back(where + ": unknown key '" + key + "'");
}

double number_at(const json& j, const std::string& where, std::vector<std::string>& errors,
                 double fallback) {
  if (!j.is_number()) {
    errors.push_back(where + " must be a number");
    return fallback;
  }
  return j.get<double>();
}

Eigen::VectorXd per_user_vector(const json& j, int K, const std::string& where,
                                std::vector<std::string>& errors) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(K);
  if (j.is_number()) {
    out.setConstant(j.get<double>());
  } else if (j.is_array() && static_cast<int>(j.size()) == K) {
    for (int k = 0; k < K; ++k) out[k] = number_at(j[k], where, errors, 0.0);
  } else {
    errors.push_back(where + " must be a scalar or a length-K array");
  }
  return out;
}

Eigen::Vector3d point_at(const json& j, const std::string& where,
                         std::vector<std::string>& errors) {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  if (!j.is_array() || j.size() != 3) {
    errors.push_back(where + " must be an [x, y, z] triple");
    return p;
  }
  for (int i = 0; i < 3; ++i) p[i] = number_at(j[i], where, errors, 0.0);
  return p;
}

CompressionProfile profile_from_json(const json& j, const std::string& where,
                                     std::vector<std::string>& errors) {
  CompressionProfile p;
  check_keys(j, where, {"segments", "rho_min"}, errors);
  if (!j.is_object()) return default_compression_profile();
  p.rho_min = number_at(j.value("rho_min", json(0.2)), where + ".rho_min", errors, 0.2);
  const json segs = j.value("segments", json::array());
  if (!segs.is_array() || segs.empty()) {
    errors.push_back(where + ".segments must be a non-empty array of [slope, intercept]");
    return p;
  }
  for (size_t m = 0; m < segs.size(); ++m) {
    const json& s = segs[m];
    if (!s.is_array() || s.size() != 2) {
      errors.push_back(where + ".segments[" + std::to_string(m) + "] must be a pair");
      continue;
    }
    p.segments.push_back({number_at(s[0], where, errors, -1.0),
                          number_at(s[1], where, errors, 1.0)});
  }
  return p;
}

json default_profile_json() {
  return json{{"segments", json::array({json::array({-1.0, 1.0}), json::array({-3.0, 2.2}),
                                        json::array({-8.0, 5.0})})},
              {"rho_min", 0.2}};
}

}  // namespace

json default_config_json() {
  json j;
  j["scene"] = {
      {"room", {5.0, 5.0, 3.0}},
      {"leds",
       {{2.0, 1.5, 3.0}, {2.0, 3.5, 3.0}, {3.0, 1.5, 3.0}, {3.0, 3.5, 3.0}}},
      {"users", {{1.5, 4.0, 0.0}, {2.5, 4.5, 0.0}}},
  };
  j["optical"] = {{"pd_area", 1.0},  // cm^2
                  {"filter_gain", 1.0},
                  {"refractive_index", 1.5},
                  {"semi_angle", 60.0},  // degrees
                  {"fov", 75.0}};
  j["qos"] = {{"knowledge_rate_min", 0.1},
              {"user_rate_min", 1.0},
              {"power_max", 10.0},
              {"drive_current", {0.1, 1.0}},
              {"led_voltage", 3.0},
              {"circuit_power", 2.0},
              {"noise_power", -100.0}};  // dBm
  j["compression"] = default_profile_json();
  j["eta"] = 1.0;
  j["scheme"] = "pscom-rsma";
  j["conventional_keep_knowledge"] = false;
  j["solver"] = {{"outer_tol", 1e-4},    {"outer_max_iters", 30},
                 {"sca_tol", 1e-4},      {"sca_max_iters", 50},
                 {"dinkelbach_tol", 1e-4}, {"dinkelbach_max_iters", 100},
                 {"dca_max_iters", 100}, {"barrier_tol", 1e-8},
                 {"seed", 20240901},     {"workers", 1}};
  return j;
}

NetworkConfig config_from_json(const json& user) {
  std::vector<std::string> errors;
  if (!user.is_object()) throw ValidationError("config root must be a JSON object");

  // Apply defaults: shallow per section so partial sections inherit fields.
  json j = default_config_json();
  check_keys(user, "config",
             {"scene", "optical", "qos", "compression", "eta", "scheme",
              "conventional_keep_knowledge", "solver"},
             errors);
  for (const auto& [key, value] : user.items()) {
    if (!j.contains(key)) continue;
    if (value.is_object() && j[key].is_object()) {
      for (const auto& [k2, v2] : value.items()) j[key][k2] = v2;
    } else {
      j[key] = value;
    }
  }
  // A user-supplied compression section replaces the default wholesale.
  if (user.contains("compression")) j["compression"] = user["compression"];
  // A user-supplied user list invalidates default per-user fields only if
  // they were provided as arrays of the wrong length; scalars broadcast.

  NetworkConfig cfg;
  cfg.raw = j;

  check_keys(j["scene"], "scene", {"room", "leds", "users"}, errors);
  cfg.scene.room = point_at(j["scene"]["room"], "scene.room", errors);
  for (const auto& [section, target] :
       {std::pair<const char*, std::vector<Eigen::Vector3d>*>{"leds", &cfg.scene.leds},
        {"users", &cfg.scene.users}}) {
    const json& list = j["scene"][section];
    if (!list.is_array() || list.empty()) {
      errors.push_back(std::string("scene.") + section + " must be a non-empty array");
      continue;
    }
    for (size_t i = 0; i < list.size(); ++i)
      target->push_back(point_at(list[i], std::string("scene.") + section, errors));
  }
  const int K = cfg.scene.num_users();

  check_keys(j["optical"], "optical",
             {"pd_area", "filter_gain", "refractive_index", "semi_angle", "fov"}, errors);
  cfg.optical.pd_area = cm2_to_m2(number_at(j["optical"]["pd_area"], "optical.pd_area", errors, 1.0));
  cfg.optical.filter_gain =
      number_at(j["optical"]["filter_gain"], "optical.filter_gain", errors, 1.0);
  cfg.optical.refractive_index =
      number_at(j["optical"]["refractive_index"], "optical.refractive_index", errors, 1.5);
  cfg.optical.semi_angle =
      deg2rad(number_at(j["optical"]["semi_angle"], "optical.semi_angle", errors, 60.0));
  cfg.optical.fov = deg2rad(number_at(j["optical"]["fov"], "optical.fov", errors, 75.0));

  check_keys(j["qos"], "qos",
             {"knowledge_rate_min", "user_rate_min", "power_max", "drive_current",
              "led_voltage", "circuit_power", "noise_power"},
             errors);
  cfg.qos.knowledge_rate_min =
      number_at(j["qos"]["knowledge_rate_min"], "qos.knowledge_rate_min", errors, 0.1);
  cfg.qos.user_rate_min =
      per_user_vector(j["qos"]["user_rate_min"], K, "qos.user_rate_min", errors);
  cfg.qos.power_max = number_at(j["qos"]["power_max"], "qos.power_max", errors, 10.0);
  const json& drive = j["qos"]["drive_current"];
  if (drive.is_array() && drive.size() == 2) {
    cfg.qos.drive_min = number_at(drive[0], "qos.drive_current[0]", errors, 0.1);
    cfg.qos.drive_max = number_at(drive[1], "qos.drive_current[1]", errors, 1.0);
  } else {
    errors.push_back("qos.drive_current must be [I_L, I_U]");
  }
  cfg.qos.led_voltage = number_at(j["qos"]["led_voltage"], "qos.led_voltage", errors, 3.0);
  cfg.qos.circuit_power =
      number_at(j["qos"]["circuit_power"], "qos.circuit_power", errors, 2.0);
  const Eigen::VectorXd noise_dbm =
      per_user_vector(j["qos"]["noise_power"], K, "qos.noise_power", errors);
  cfg.qos.noise_power.resize(K);
  for (int k = 0; k < K; ++k) cfg.qos.noise_power[k] = dbm_to_watts(noise_dbm[k]);

  const json& comp = j["compression"];
  if (comp.is_object() && comp.contains("profiles")) {
    check_keys(comp, "compression", {"profiles"}, errors);
    const json& list = comp["profiles"];
    if (!list.is_array() || static_cast<int>(list.size()) != K) {
      errors.push_back("compression.profiles must list one profile per user");
    } else {
      for (int k = 0; k < K; ++k)
        cfg.profiles.push_back(profile_from_json(
            list[k], "compression.profiles[" + std::to_string(k) + "]", errors));
    }
  } else {
    const CompressionProfile shared = profile_from_json(comp, "compression", errors);
    cfg.profiles.assign(K, shared);
  }

  cfg.eta = number_at(j["eta"], "eta", errors, 1.0);
  if (!(cfg.eta >= 0)) errors.push_back("eta must be >= 0");
  if (!j["scheme"].is_string())
    errors.push_back("scheme must be a string");
  else
    cfg.scheme = j["scheme"].get<std::string>();
  if (!j["conventional_keep_knowledge"].is_boolean())
    errors.push_back("conventional_keep_knowledge must be a boolean");
  else
    cfg.conventional_keep_knowledge = j["conventional_keep_knowledge"].get<bool>();

  check_keys(j["solver"], "solver",
             {"outer_tol", "outer_max_iters", "sca_tol", "sca_max_iters", "dinkelbach_tol",
              "dinkelbach_max_iters", "dca_max_iters", "barrier_tol", "seed", "workers"},
             errors);
  const json& sv = j["solver"];
  cfg.solver.outer_tol = number_at(sv["outer_tol"], "solver.outer_tol", errors, 1e-4);
  cfg.solver.outer_max_iters = static_cast<int>(
      number_at(sv["outer_max_iters"], "solver.outer_max_iters", errors, 30));
  cfg.solver.sca_tol = number_at(sv["sca_tol"], "solver.sca_tol", errors, 1e-4);
  cfg.solver.sca_max_iters =
      static_cast<int>(number_at(sv["sca_max_iters"], "solver.sca_max_iters", errors, 50));
  cfg.solver.dinkelbach_tol =
      number_at(sv["dinkelbach_tol"], "solver.dinkelbach_tol", errors, 1e-4);
  cfg.solver.dinkelbach_max_iters = static_cast<int>(
      number_at(sv["dinkelbach_max_iters"], "solver.dinkelbach_max_iters", errors, 100));
  cfg.solver.dca_max_iters = static_cast<int>(
      number_at(sv["dca_max_iters"], "solver.dca_max_iters", errors, 100));
  cfg.solver.barrier_tol = number_at(sv["barrier_tol"], "solver.barrier_tol", errors, 1e-8);
  cfg.solver.seed =
      static_cast<std::uint64_t>(number_at(sv["seed"], "solver.seed", errors, 20240901));
  cfg.solver.workers =
      static_cast<int>(number_at(sv["workers"], "solver.workers", errors, 1));

  // Semantic invariants.
  for (const auto& msg : validate_scene(cfg.scene)) errors.push_back("scene: " + msg);
  for (const auto& msg : validate_optical(cfg.optical)) errors.push_back("optical: " + msg);
  if (K > 0)
    for (const auto& msg : validate_qos(cfg.qos, K)) errors.push_back("qos: " + msg);
  for (int k = 0; k < static_cast<int>(cfg.profiles.size()); ++k)
    for (const auto& msg : validate_profile(cfg.profiles[k]))
      errors.push_back("compression[" + std::to_string(k) + "]: " + msg);
  static const std::set<std::string> kSchemes = {"pscom-rsma", "pscom-sdma", "pscom-noma",
                                                 "conventional-rsma"};
  if (!kSchemes.count(cfg.scheme)) errors.push_back("unknown scheme '" + cfg.scheme + "'");
  if (cfg.solver.workers < 1) errors.push_back("solver.workers must be >= 1");

  if (!errors.empty()) throw ValidationError("invalid config: " + join_violations(errors));
  return cfg;
}

NetworkConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("config parse error: " + std::string(e.what()));
  }
  return config_from_json(j);
}

void set_config_value(nlohmann::json& j, const std::string& dotted_path, double value) {
  json* node = &j;
  size_t start = 0;
  while (true) {
    const size_t dot = dotted_path.find('.', start);
    const std::string key = dotted_path.substr(start, dot - start);
    if (key.empty()) throw ValidationError("empty segment in parameter path " + dotted_path);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace vlcee
