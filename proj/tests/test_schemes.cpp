#include <doctest.h>

#include "test_fixtures.hpp"
#include "vlcee/schemes.hpp"

using namespace vlcee;
using vlcee::testing::default_config;

TEST_CASE("scheme tags round-trip") {
  for (Scheme s : {Scheme::pscom_rsma, Scheme::pscom_sdma, Scheme::pscom_noma,
                   Scheme::conventional_rsma})
    CHECK(parse_scheme(to_string(s)) == s);
  CHECK_THROWS_AS(parse_scheme("pscom-ofdma"), ValidationError);
}

TEST_CASE("layered decoding order sorts weakest first") {
  Eigen::MatrixXd H(3, 2);
  H << 3e-6, 0.0, 1e-6, 0.0, 2e-6, 0.0;
  const auto order = noma_decode_order(H);
  CHECK(order == std::vector<int>{1, 2, 0});

  Eigen::MatrixXd tie(2, 1);
  tie << 1e-6, 1e-6;
  CHECK(noma_decode_order(tie) == std::vector<int>{0, 1});
}

TEST_CASE("rate-model structure per scheme") {
  const NetworkConfig cfg = default_config();
  const ChannelMatrix H = build_channel_matrix(cfg.scene, cfg.optical);

  const RateModel rsma = make_rate_model(Scheme::pscom_rsma, H);
  CHECK(rsma.has_common);
  CHECK(rsma.has_knowledge_stream);
  CHECK(!rsma.knowledge_unicast);
  CHECK(rsma.active_beams == std::vector<int>{0, 1, 2});
  CHECK(total_certs(rsma) == 4);

  const RateModel sdma = make_rate_model(Scheme::pscom_sdma, H);
  CHECK(!sdma.has_common);
  CHECK(sdma.knowledge_unicast);
  CHECK(sdma.active_beams == std::vector<int>{1, 2});
  CHECK(sdma.common.empty());
  REQUIRE(sdma.privates.size() == 2);
  CHECK(sdma.privates[0].certs.size() == 1);
  CHECK(sdma.privates[0].certs[0].interferers == std::vector<int>{2});

  const RateModel noma = make_rate_model(Scheme::pscom_noma, H);
  const auto order = noma_decode_order(H);
  const int weak = order[0], strong = order[1];
  REQUIRE(noma.privates.size() == 2);
  CHECK(noma.privates[weak].certs.size() == 2);   // decoded by both users
  CHECK(noma.privates[strong].certs.size() == 1);
  CHECK(noma.privates[strong].certs[0].interferers.empty());
  for (const auto& cert : noma.privates[weak].certs)
    CHECK(cert.interferers == std::vector<int>{strong + 1});

  const RateModel conv = make_rate_model(Scheme::conventional_rsma, H);
  CHECK(conv.has_common);
  CHECK(!conv.has_knowledge_stream);
  const RateModel conv_keep = make_rate_model(Scheme::conventional_rsma, H, true);
  CHECK(conv_keep.has_knowledge_stream);
}

TEST_CASE("single-user sdma without knowledge equals common-free rsma") {
  nlohmann::json j;
  j["scene"] = {{"room", {5.0, 5.0, 3.0}},
                {"leds", {{2.5, 2.5, 3.0}, {2.0, 2.0, 3.0}}},
                {"users", {{2.5, 2.0, 0.0}}}};
  j["qos"] = {{"knowledge_rate_min", 0.0}};
  const NetworkConfig cfg = config_from_json(j);
  const ChannelMatrix H = build_channel_matrix(cfg.scene, cfg.optical);

  const RateModel sdma = make_rate_model(Scheme::pscom_sdma, H);
  // with K = 1 and R0 = 0 the scheme is the private-only slice of RSMA
  RateModel stripped = rsma_rate_model(1, 2);
  stripped.has_common = false;
  stripped.has_knowledge_stream = false;
  stripped.knowledge_unicast = true;
  stripped.common.clear();
  stripped.active_beams = {1};

  CHECK(sdma.active_beams == stripped.active_beams);
  REQUIRE(sdma.privates[0].certs.size() == stripped.privates[0].certs.size());
  CHECK(sdma.privates[0].certs[0].interferers ==
        stripped.privates[0].certs[0].interferers);

  const SolveOutput a = solve_model(cfg, sdma, true);
  const SolveOutput b = solve_model(cfg, stripped, true);
  CHECK(a.report.energy_efficiency ==
        doctest::Approx(b.report.energy_efficiency).epsilon(1e-9));
}

TEST_CASE("symmetric users make both decode orders equivalent") {
  nlohmann::json j;
  j["scene"] = {{"room", {5.0, 5.0, 3.0}},
                {"leds",
                 {{2.0, 1.5, 3.0}, {2.0, 3.5, 3.0}, {3.0, 1.5, 3.0}, {3.0, 3.5, 3.0}}},
                {"users", {{1.5, 2.5, 0.0}, {3.5, 2.5, 0.0}}}};
  const NetworkConfig cfg = config_from_json(j);
  const SolveOutput out = solve_scheme(cfg, Scheme::pscom_noma);

  nlohmann::json j2 = j;
  j2["scene"]["users"] = {{3.5, 2.5, 0.0}, {1.5, 2.5, 0.0}};
  const SolveOutput swapped = solve_scheme(config_from_json(j2), Scheme::pscom_noma);
  CHECK(out.report.energy_efficiency ==
        doctest::Approx(swapped.report.energy_efficiency).epsilon(1e-6));
}

TEST_CASE("conventional scheme is blind to the computation coefficient") {
  nlohmann::json j;
  j["eta"] = 1.0;
  const SolveOutput a = solve_scheme(config_from_json(j), Scheme::conventional_rsma);
  j["eta"] = 3.0;
  const SolveOutput b = solve_scheme(config_from_json(j), Scheme::conventional_rsma);
  CHECK(a.report.energy_efficiency ==
        doctest::Approx(b.report.energy_efficiency).epsilon(1e-12));
  CHECK(a.report.power.comp == doctest::Approx(0.0));
  CHECK((a.design.rho.array() == 1.0).all());
}

TEST_CASE("the full design dominates every benchmark on the default scenario") {
  const NetworkConfig cfg = default_config();
  const double full = solve_scheme(cfg, Scheme::pscom_rsma).report.energy_efficiency;
  for (Scheme s : {Scheme::pscom_sdma, Scheme::pscom_noma, Scheme::conventional_rsma}) {
    const double other = solve_scheme(cfg, s).report.energy_efficiency;
    CHECK(full >= other - 1e-6);
  }
}

TEST_CASE("scheme evaluation recomputes the reported efficiency") {
  const NetworkConfig cfg = default_config();
  for (Scheme s : {Scheme::pscom_rsma, Scheme::pscom_noma}) {
    const SolveOutput out = solve_scheme(cfg, s);
    const EvalReport re = evaluate_scheme(cfg, s, out.design);
    CHECK(re.energy_efficiency ==
          doctest::Approx(out.report.energy_efficiency).epsilon(1e-12));
    CHECK(re.feasible());
  }
}
