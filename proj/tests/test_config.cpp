#include <doctest.h>

#include "vlcee/config.hpp"

using namespace vlcee;

TEST_CASE("empty object yields the full default scenario") {
  const NetworkConfig cfg = config_from_json(nlohmann::json::object());
  CHECK(cfg.num_leds() == 4);
  CHECK(cfg.num_users() == 2);
  CHECK(cfg.qos.power_max == doctest::Approx(10.0));
  CHECK(cfg.qos.circuit_power == doctest::Approx(2.0));
  CHECK(cfg.qos.led_voltage == doctest::Approx(3.0));
  CHECK(cfg.qos.drive_min == doctest::Approx(0.1));
  CHECK(cfg.qos.drive_max == doctest::Approx(1.0));
  CHECK(cfg.qos.noise_power[0] == doctest::Approx(1e-13).epsilon(1e-12));
  CHECK(cfg.qos.user_rate_min[1] == doctest::Approx(1.0));
  CHECK(cfg.optical.pd_area == doctest::Approx(1e-4));  // 1 cm^2 in m^2
  CHECK(cfg.optical.semi_angle == doctest::Approx(deg2rad(60.0)));
  CHECK(cfg.optical.fov == doctest::Approx(deg2rad(75.0)));
  CHECK(cfg.eta == doctest::Approx(1.0));
  CHECK(cfg.scheme == "pscom-rsma");
  REQUIRE(cfg.profiles.size() == 2);
  CHECK(cfg.profiles[0].rho_min == doctest::Approx(0.2));
  CHECK(cfg.profiles[0].segments.size() == 3);
}

TEST_CASE("partial sections inherit the remaining defaults") {
  nlohmann::json j;
  j["qos"] = {{"power_max", 12.0}};
  const NetworkConfig cfg = config_from_json(j);
  CHECK(cfg.qos.power_max == doctest::Approx(12.0));
  CHECK(cfg.qos.circuit_power == doctest::Approx(2.0));  // untouched default
}

TEST_CASE("unit conversions at load") {
  nlohmann::json j;
  j["optical"] = {{"pd_area", 2.0}, {"semi_angle", 45.0}};
  j["qos"] = {{"noise_power", -90.0}};
  const NetworkConfig cfg = config_from_json(j);
  CHECK(cfg.optical.pd_area == doctest::Approx(2e-4));
  CHECK(cfg.optical.semi_angle == doctest::Approx(kPi / 4));
  CHECK(cfg.qos.noise_power[0] == doctest::Approx(1e-12));
}

TEST_CASE("validation failures are collected") {
  nlohmann::json j;
  j["optical"] = {{"semi_angle", 95.0}};
  CHECK_THROWS_AS(config_from_json(j), ValidationError);

  nlohmann::json k0;
  k0["scene"] = {{"room", {5.0, 5.0, 3.0}},
                 {"leds", {{2.5, 2.5, 3.0}}},
                 {"users", nlohmann::json::array()}};
  CHECK_THROWS_AS(config_from_json(k0), ValidationError);

  nlohmann::json unknown;
  unknown["optics"] = {{"pd_area", 1.0}};
  CHECK_THROWS_AS(config_from_json(unknown), ValidationError);

  nlohmann::json bad_scheme;
  bad_scheme["scheme"] = "tdma";
  CHECK_THROWS_AS(config_from_json(bad_scheme), ValidationError);

  try {
    nlohmann::json multi;
    multi["optical"] = {{"semi_angle", 95.0}, {"pd_area", -1.0}};
    config_from_json(multi);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("semi_angle") != std::string::npos);
    CHECK(msg.find("pd_area") != std::string::npos);
  }
}

TEST_CASE("per-user compression profiles") {
  nlohmann::json j;
  j["compression"] = {
      {"profiles",
       {{{"segments", {{-2.0, 2.0}}}, {"rho_min", 0.3}},
        {{"segments", {{-1.0, 1.0}, {-4.0, 2.5}}}, {"rho_min", 0.25}}}}};
  const NetworkConfig cfg = config_from_json(j);
  REQUIRE(cfg.profiles.size() == 2);
  CHECK(cfg.profiles[0].rho_min == doctest::Approx(0.3));
  CHECK(cfg.profiles[1].segments.size() == 2);

  nlohmann::json wrong;
  wrong["compression"] = {
      {"profiles", {{{"segments", {{-2.0, 2.0}}}, {"rho_min", 0.3}}}}};  // one, need two
  CHECK_THROWS_AS(config_from_json(wrong), ValidationError);
}

TEST_CASE("per-user scalars broadcast") {
  nlohmann::json j;
  j["qos"] = {{"user_rate_min", {0.5, 1.5}}, {"noise_power", {-100.0, -95.0}}};
  const NetworkConfig cfg = config_from_json(j);
  CHECK(cfg.qos.user_rate_min[0] == doctest::Approx(0.5));
  CHECK(cfg.qos.user_rate_min[1] == doctest::Approx(1.5));
  CHECK(cfg.qos.noise_power[1] == doctest::Approx(dbm_to_watts(-95.0)));
}

TEST_CASE("dotted-path overrides reach nested fields") {
  nlohmann::json j = default_config_json();
  set_config_value(j, "optical.semi_angle", 50.0);
  set_config_value(j, "eta", 2.0);
  const NetworkConfig cfg = config_from_json(j);
  CHECK(cfg.optical.semi_angle == doctest::Approx(deg2rad(50.0)));
  CHECK(cfg.eta == doctest::Approx(2.0));

  // a typo creates an unknown key that the parse rejects
  nlohmann::json typo = default_config_json();
  set_config_value(typo, "optical.semiangle", 50.0);
  CHECK_THROWS_AS(config_from_json(typo), ValidationError);
}
