#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dectlink/errors.hpp"
#include "dectlink/kernels.hpp"
#include "dectlink/link_budget.hpp"
#include "dectlink/propagation.hpp"
#include "test_support.hpp"

using namespace dectlink;
using namespace dectlink::propagation;

namespace {

const Frequency k1899 = Frequency::megahertz(1899.0);
const AntennaGeometry kTheory{10.0, 1.5, 1.0};

// Random parameter draw inside each model's nominal domain.
struct Draw {
  Frequency f;
  AntennaGeometry geom;
  HataEnvironment env;
};

Draw draw(testing::Rng& rng, ModelKind kind) {
  double f_mhz = rng.uniform(500.0, 6000.0);
  if (kind == ModelKind::kOkumuraHata) f_mhz = rng.uniform(150.0, 1500.0);
  if (kind == ModelKind::kCost231Hata) f_mhz = rng.uniform(500.0, 2000.0);
  const bool hata = kind == ModelKind::kOkumuraHata || kind == ModelKind::kCost231Hata;
  const double h_tx = hata ? rng.uniform(30.0, 200.0) : rng.uniform(1.0, 60.0);
  const double h_rx = rng.uniform(1.0, 10.0);
  HataEnvironment env;
  env.city = rng.chance(0.5) ? CitySize::kLarge : CitySize::kSmallMedium;
  env.area = rng.chance(0.5) ? AreaClass::kUrban : AreaClass::kSuburbanOpen;
  return {Frequency::megahertz(f_mhz), AntennaGeometry(h_tx, h_rx, rng.uniform(0.5, 4.0)), env};
}

PathLossModel model_for(ModelKind kind, const Draw& p) { return PathLossModel::make(kind, p.f, p.geom, p.env); }

double distance_sample(testing::Rng& rng, ModelKind kind) {
  if (kind == ModelKind::kOkumuraHata || kind == ModelKind::kCost231Hata) return rng.log_uniform(1000.0, 20000.0);
  return rng.log_uniform(1.0, 5000.0);
}

double expected_decade_slope(ModelKind kind, const AntennaGeometry& geom) {
  switch (kind) {
    case ModelKind::kFreeSpace:
      return 20.0;
    case ModelKind::kInhLos:
      return 17.3;
    case ModelKind::kInfLos:
      return 21.5;
    case ModelKind::kTwoRay:
      return 40.0;
    default:
      return 44.9 - 6.55 * std::log10(geom.h_tx_m());
  }
}

}  // namespace

TEST_CASE("free-space loss examples") {
  CHECK(free_space_loss(Distance::meters(2294.0), k1899).value == doctest::Approx(105.23015).epsilon(1e-7));
  CHECK(free_space_loss(Distance::meters(2470.0), k1899).value == doctest::Approx(105.87222).epsilon(1e-7));
  CHECK(free_space_loss(Distance::meters(650.0), k1899).value == doctest::Approx(94.27655).epsilon(1e-7));
  // reference table values at the same distances
  CHECK(std::abs(free_space_loss(Distance::meters(2294.0), k1899).value - 105.16) <= 0.25);
  CHECK(std::abs(free_space_loss(Distance::meters(2470.0), k1899).value - 105.83) <= 0.25);
  const Distance d = Distance::meters(123.0);
  CHECK(free_space_loss(Distance::meters(246.0), k1899).value - free_space_loss(d, k1899).value ==
        doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
}

TEST_CASE("indoor 3GPP LOS examples") {
  CHECK(inh_los_loss(Distance::meters(40.0), k1899).value == doctest::Approx(65.68614).epsilon(1e-7));
  CHECK(inf_los_loss(Distance::meters(190.0), k1899).value == doctest::Approx(86.12518).epsilon(1e-7));
  CHECK(inh_los_loss(Distance::meters(1.0), Frequency::gigahertz(1.0)).value == doctest::Approx(32.4));
  CHECK(inf_los_loss(Distance::meters(1.0), Frequency::gigahertz(1.0)).value == doctest::Approx(31.84));
}

TEST_CASE("two-ray examples and crossover") {
  CHECK(two_ray_loss(Distance::meters(650.0), kTheory).value == doctest::Approx(88.99471).epsilon(1e-7));
  CHECK(two_ray_crossover(k1899, kTheory).in_meters() == doctest::Approx(1194.0029).epsilon(1e-7));
  // gain enters as 10*log10(G)
  CHECK(two_ray_loss(Distance::meters(650.0), AntennaGeometry(10.0, 1.5, 10.0)).value ==
        doctest::Approx(78.99471).epsilon(1e-7));

  const auto m = PathLossModel::two_ray(k1899, kTheory);
  CHECK(m.validity(Distance::meters(650.0)).has(ValidityFlags::kNearField));
  CHECK_FALSE(m.validity(Distance::meters(1200.0)).any());
}

TEST_CASE("Hata height correction") {
  CHECK(hata_height_correction(k1899, 1.5, CitySize::kSmallMedium).value == doctest::Approx(0.0450672).epsilon(1e-5));
  CHECK(hata_height_correction(k1899, 1.5, CitySize::kLarge).value == doctest::Approx(-0.000919).epsilon(1e-3));
  CHECK_THROWS_AS(hata_height_correction(k1899, 0.0, CitySize::kLarge), DomainError);
}

TEST_CASE("Hata family examples") {
  const HataEnvironment urban{CitySize::kSmallMedium, AreaClass::kUrban};
  CHECK(okumura_hata_loss(Distance::kilometers(2.47), k1899, kTheory, urban).value ==
        doctest::Approx(156.51107).epsilon(1e-7));
  CHECK(okumura_hata_loss(Distance::kilometers(0.65), k1899, kTheory, urban).value ==
        doctest::Approx(134.27637).epsilon(1e-7));
  CHECK(cost231_hata_loss(Distance::kilometers(0.65), k1899, kTheory, urban).value ==
        doctest::Approx(139.40216).epsilon(1e-7));
  CHECK(cost231_hata_loss(Distance::kilometers(2.47), k1899, kTheory, urban).value ==
        doctest::Approx(161.63686).epsilon(1e-7));
}

TEST_CASE("COST-231 urban minus suburban is exactly 3 dB") {
  testing::Rng rng(0x5eed0101);
  for (int i = 0; i < 200; ++i) {
    const auto p = draw(rng, ModelKind::kCost231Hata);
    const Distance d = Distance::meters(distance_sample(rng, ModelKind::kCost231Hata));
    HataEnvironment urban = p.env;
    HataEnvironment suburban = p.env;
    urban.area = AreaClass::kUrban;
    suburban.area = AreaClass::kSuburbanOpen;
    const double delta = cost231_hata_loss(d, p.f, p.geom, urban).value - cost231_hata_loss(d, p.f, p.geom, suburban).value;
    CHECK(std::abs(delta - 3.0) <= 1e-12);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(AntennaGeometry(0.0, 1.5), DomainError);
  CHECK_THROWS_AS(AntennaGeometry(10.0, -1.0), DomainError);
  CHECK_THROWS_AS(AntennaGeometry(10.0, 1.5, 0.0), DomainError);
  CHECK_THROWS_AS(PathLossModel::make(ModelKind::kTwoRay, k1899, std::nullopt), DomainError);
  CHECK_THROWS_AS(PathLossModel::make(ModelKind::kOkumuraHata, k1899, std::nullopt), DomainError);
  // 44.9 - 6.55*log10(h) <= 0 beyond roughly 7 km masts
  CHECK_THROWS_AS(PathLossModel::okumura_hata(k1899, AntennaGeometry(1e7, 1.5)), DomainError);
  // geometry is ignored where it is not needed
  CHECK_NOTHROW(PathLossModel::make(ModelKind::kFreeSpace, k1899, std::nullopt));
}

TEST_CASE("model names round trip") {
  for (ModelKind k : kAllModelKinds) {
    const auto parsed = parse_model_kind(model_name(k));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == k);
  }
  CHECK_FALSE(parse_model_kind("hata").has_value());
  CHECK(needs_geometry(ModelKind::kTwoRay));
  CHECK_FALSE(needs_geometry(ModelKind::kInfLos));
}

TEST_CASE("validity flags") {
  const auto oh = PathLossModel::okumura_hata(k1899, kTheory);
  const auto flags = oh.validity(Distance::meters(650.0));
  CHECK(flags.has(ValidityFlags::kFrequencyOutOfRange));
  CHECK(flags.has(ValidityFlags::kAntennaHeightOutOfRange));
  CHECK(flags.has(ValidityFlags::kDistanceOutOfRange));
  CHECK(flags.names() ==
        std::vector<std::string>{"frequency-out-of-range", "antenna-height-out-of-range", "distance-out-of-range"});

  const auto in_range = PathLossModel::cost231_hata(Frequency::megahertz(1800.0), AntennaGeometry(50.0, 1.5));
  CHECK_FALSE(in_range.validity(Distance::kilometers(5.0)).any());
  CHECK(in_range.validity(Distance::kilometers(25.0)).has(ValidityFlags::kDistanceOutOfRange));

  CHECK(PathLossModel::okumura_hata(Frequency::megahertz(900.0), AntennaGeometry(50.0, 1.5))
            .validity(Distance::kilometers(5.0))
            .bits() == 0);
  CHECK(PathLossModel::inh_los(Frequency::megahertz(400.0)).validity(Distance::meters(10.0)).has(
      ValidityFlags::kFrequencyOutOfRange));
  CHECK_FALSE(PathLossModel::free_space(Frequency::megahertz(10.0)).validity(Distance::meters(1.0)).any());
}

TEST_CASE("every model is finite and strictly increasing in distance") {
  testing::Rng rng(0x5eed0102);
  for (ModelKind kind : kAllModelKinds) {
    CAPTURE(model_name(kind));
    for (int i = 0; i < 200; ++i) {
      const auto m = model_for(kind, draw(rng, kind));
      double d1 = distance_sample(rng, kind);
      double d2 = distance_sample(rng, kind);
      if (d1 == d2) continue;
      if (d1 > d2) std::swap(d1, d2);
      const double pl1 = m.loss(Distance::meters(d1)).value;
      const double pl2 = m.loss(Distance::meters(d2)).value;
      CHECK(std::isfinite(pl1));
      CHECK(pl1 < pl2);
    }
  }
}

TEST_CASE("decade slopes") {
  testing::Rng rng(0x5eed0103);
  for (ModelKind kind : kAllModelKinds) {
    CAPTURE(model_name(kind));
    for (int i = 0; i < 200; ++i) {
      const auto p = draw(rng, kind);
      const auto m = model_for(kind, p);
      const double d = distance_sample(rng, kind) / 10.0;
      const double slope = m.loss(Distance::meters(10.0 * d)).value - m.loss(Distance::meters(d)).value;
      CHECK(std::abs(slope - expected_decade_slope(kind, p.geom)) <= 1e-9);
      CHECK(m.log_affine().slope_db_per_decade == doctest::Approx(expected_decade_slope(kind, p.geom)));
    }
  }
}

TEST_CASE("frequency slopes") {
  testing::Rng rng(0x5eed0104);
  for (int i = 0; i < 200; ++i) {
    const Distance d = Distance::meters(rng.log_uniform(1000.0, 20000.0));
    const Frequency f1 = Frequency::megahertz(rng.uniform(150.0, 6000.0));
    const Frequency f2 = Frequency::megahertz(rng.uniform(150.0, 6000.0));
    const double lr = std::log10(f2.in_hertz() / f1.in_hertz());

    CHECK(std::abs(free_space_loss(d, f2).value - free_space_loss(d, f1).value - 20.0 * lr) <= 1e-9);
    CHECK(std::abs(inh_los_loss(d, f2).value - inh_los_loss(d, f1).value - 20.0 * lr) <= 1e-9);
    CHECK(std::abs(inf_los_loss(d, f2).value - inf_los_loss(d, f1).value - 19.0 * lr) <= 1e-9);

    const auto p = draw(rng, ModelKind::kOkumuraHata);
    // C_H depends on f for small/medium cities; hold it fixed by adding it back.
    const double ch1 = hata_height_correction(f1, p.geom.h_rx_m(), p.env.city).value;
    const double ch2 = hata_height_correction(f2, p.geom.h_rx_m(), p.env.city).value;
    const double oh = (okumura_hata_loss(d, f2, p.geom, p.env).value + ch2) -
                      (okumura_hata_loss(d, f1, p.geom, p.env).value + ch1);
    CHECK(std::abs(oh - 26.16 * lr) <= 1e-9);
    const double ch = (cost231_hata_loss(d, f2, p.geom, p.env).value + ch2) -
                      (cost231_hata_loss(d, f1, p.geom, p.env).value + ch1);
    CHECK(std::abs(ch - 33.9 * lr) <= 1e-9);

    // large-city correction does not depend on frequency
    HataEnvironment large = p.env;
    large.city = CitySize::kLarge;
    CHECK(std::abs(okumura_hata_loss(d, f2, p.geom, large).value - okumura_hata_loss(d, f1, p.geom, large).value -
                   26.16 * lr) <= 1e-9);
  }
}

TEST_CASE("FSPL and two-ray meet at exactly one distance") {
  testing::Rng rng(0x5eed0105);
  for (int i = 0; i < 100; ++i) {
    const auto p = draw(rng, ModelKind::kTwoRay);
    const auto fs = PathLossModel::free_space(p.f);
    const auto tr = PathLossModel::two_ray(p.f, p.geom);
    const Distance x = link_budget::model_intersection(fs, tr);
    // closed form: 4*pi*h_t*h_r*sqrt(G)/lambda
    const double expected = two_ray_crossover(p.f, p.geom).in_meters() * std::sqrt(p.geom.combined_gain());
    CHECK(x.in_meters() == doctest::Approx(expected).epsilon(1e-6));
    CHECK(fs.loss(Distance::meters(0.5 * expected)).value > tr.loss(Distance::meters(0.5 * expected)).value);
    CHECK(fs.loss(Distance::meters(2.0 * expected)).value < tr.loss(Distance::meters(2.0 * expected)).value);
  }
  CHECK_THROWS_AS(link_budget::model_intersection(PathLossModel::free_space(k1899), PathLossModel::free_space(k1899)),
                  DomainError);
}

TEST_CASE("batch evaluation equals pointwise evaluation") {
  testing::Rng rng(0x5eed0106);
  for (ModelKind kind : kAllModelKinds) {
    const auto m = model_for(kind, draw(rng, kind));
    std::vector<double> d(37);
    for (auto& v : d) v = rng.log_uniform(0.5, 30000.0);
    std::vector<double> out(d.size());
    m.loss_batch(d, out);
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(out[i] == doctest::Approx(m.loss(Distance::meters(d[i])).value).epsilon(1e-12));
    }
  }
  const auto m = PathLossModel::free_space(k1899);
  std::vector<double> out(1);
  CHECK_THROWS_AS(m.loss_batch(std::vector<double>{1.0, 2.0}, out), DomainError);
  CHECK_THROWS_AS(m.loss_batch(std::vector<double>{-1.0}, out), DomainError);
}

TEST_CASE("sweep distances") {
  const auto lin = sweep_distances(Distance::meters(1.0), Distance::meters(5.0), 5, Spacing::kLinear);
  CHECK(lin == std::vector<double>{1.0, 2.0, 3.0, 4.0, 5.0});
  const auto lg = sweep_distances(Distance::meters(1.0), Distance::meters(1000.0), 4, Spacing::kLog);
  REQUIRE(lg.size() == 4);
  CHECK(lg[0] == 1.0);
  CHECK(lg[1] == doctest::Approx(10.0));
  CHECK(lg[2] == doctest::Approx(100.0));
  CHECK(lg[3] == 1000.0);
  CHECK_THROWS_AS(sweep_distances(Distance::meters(5.0), Distance::meters(1.0), 5, Spacing::kLinear), DomainError);
  CHECK_THROWS_AS(sweep_distances(Distance::meters(1.0), Distance::meters(5.0), 1, Spacing::kLinear), DomainError);
  CHECK_THROWS_AS(sweep_distances(Distance::meters(1.0), Distance::meters(std::nextafter(1.0, 2.0)), 10,
                                  Spacing::kLinear),
                  DomainError);

  const auto pts = evaluate_sweep(PathLossModel::free_space(k1899), Distance::meters(650.0),
                                  Distance::meters(2470.0), 3, Spacing::kLinear);
  REQUIRE(pts.size() == 3);
  CHECK(pts.front().loss.value == doctest::Approx(94.27655).epsilon(1e-7));
  CHECK(pts.back().loss.value == doctest::Approx(105.87222).epsilon(1e-7));
}
