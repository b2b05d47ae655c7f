#include <doctest.h>

#include <set>

#include "dectlink/config.hpp"
#include "dectlink/errors.hpp"

using namespace dectlink;
using namespace dectlink::config;

TEST_CASE("defaults") {
  const RunConfig c = resolve({}, {});
  CHECK(c.frequency_hz == 1.899e9);
  CHECK(c.budget.bandwidth_hz == 1.728e6);
  CHECK(c.budget.tx_power.value == 0.0);
  CHECK(c.budget.side_correction_tx.value == 1.0);
  CHECK(c.budget.side_correction_rx.value == 1.0);
  CHECK(c.budget.noise_figure.value == 10.0);
  CHECK(c.thresholds.min_success_rate_pct == 90.0);
  CHECK(c.thresholds.rssi_floor_indoor.value == -90.0);
  CHECK(c.thresholds.rssi_floor_outdoor.value == -95.0);
  CHECK(c.thresholds.snr_floor_indoor.value == 11.5);
  CHECK(c.thresholds.snr_floor_outdoor.value == 13.5);
  CHECK(c.environment == link_budget::Environment::kIndoor);
  CHECK(c.models == std::vector<propagation::ModelKind>{propagation::ModelKind::kFreeSpace});
  CHECK_FALSE(c.geometry().has_value());
  CHECK(c.antenna_gain == 1.0);
  CHECK(c.output.empty());
  CHECK_FALSE(c.fixtures_dir.empty());
}

TEST_CASE("flag beats file beats default for every field") {
  const RunConfig defaults = resolve({}, {});
  std::set<std::string_view> keys;
  for (const FieldSpec& f : fields()) {
    CAPTURE(f.key);
    keys.insert(f.key);
    REQUIRE(f.sample_a != f.sample_b);
    const KeyValues a{{std::string(f.key), std::string(f.sample_a)}};
    const KeyValues b{{std::string(f.key), std::string(f.sample_b)}};

    const std::string from_default = f.render(defaults);
    const std::string from_file = f.render(resolve(a, {}));
    const std::string from_flag = f.render(resolve({}, b));
    const std::string both = f.render(resolve(a, b));

    CHECK(from_file != from_default);
    CHECK(from_flag != from_file);
    CHECK(both == from_flag);
    // a second resolve from the file layer alone is stable
    CHECK(f.render(resolve(a, {})) == from_file);
    if (!f.default_text.empty()) {
      CHECK(f.render(resolve({{std::string(f.key), std::string(f.default_text)}}, {})) == from_default);
    }
  }
  CHECK(keys.size() == fields().size());
}

TEST_CASE("field lookup and flag names") {
  CHECK(find_field("frequency_hz") != nullptr);
  CHECK(find_field("frequency") == nullptr);
  CHECK(flag_name("rssi_floor_indoor_dbm") == "--rssi-floor-indoor-dbm");
}

TEST_CASE("bad values and unknown keys are domain errors") {
  CHECK_THROWS_AS(resolve({{"frequency", "1"}}, {}), DomainError);
  CHECK_THROWS_AS(resolve({}, {{"nope", "1"}}), DomainError);
  CHECK_THROWS_AS(resolve({{"frequency_hz", "-5"}}, {}), DomainError);
  CHECK_THROWS_AS(resolve({{"frequency_hz", "abc"}}, {}), DomainError);
  CHECK_THROWS_AS(resolve({{"bandwidth_hz", "0"}}, {}), DomainError);
  CHECK_THROWS_AS(resolve({{"min_success_rate_pct", "120"}}, {}), DomainError);
  CHECK_THROWS_AS(resolve({{"environment", "space"}}, {}), DomainError);
  CHECK_THROWS_AS(resolve({{"models", "fspl,hata"}}, {}), DomainError);
  CHECK_THROWS_AS(resolve({{"h_tx_m", "0"}}, {}), DomainError);
  CHECK_THROWS_AS(resolve({{"city_size", "huge"}}, {}), DomainError);
  CHECK_THROWS_AS(resolve({{"area_class", "rural"}}, {}), DomainError);
}

TEST_CASE("model lists") {
  CHECK(parse_model_list("fspl, two-ray").size() == 2);
  CHECK(parse_model_list("all").size() == 6);
  CHECK(format_model_list(parse_model_list("all")) == "fspl,inh-los,inf-los,two-ray,okumura-hata,cost231-hata");
  CHECK_THROWS_AS(parse_model_list(""), DomainError);
}

TEST_CASE("geometry needs both heights") {
  RunConfig c = resolve({{"h_tx_m", "10"}}, {});
  CHECK_FALSE(c.geometry().has_value());
  CHECK_THROWS_AS(c.model(propagation::ModelKind::kTwoRay), DomainError);
  c = resolve({{"h_tx_m", "10"}}, {{"h_rx_m", "1.5"}, {"antenna_gain", "2"}});
  REQUIRE(c.geometry().has_value());
  CHECK(c.geometry()->combined_gain() == 2.0);
  CHECK(c.model(propagation::ModelKind::kTwoRay).loss(Distance::meters(650.0)).value ==
        doctest::Approx(88.99471 - 10.0 * std::log10(2.0)).epsilon(1e-7));
}
