#include "dectlink/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dectlink/errors.hpp"
#include "dectlink/kernels.hpp"

namespace dectlink::propagation {
namespace {

// 20*log10(4*pi/c), c in m/s
const double kFreeSpaceConstant = 20.0 * std::log10(4.0 * std::numbers::pi / kSpeedOfLight);

// Hata family ranges
constexpr double kOkumuraMinMHz = 150.0;
constexpr double kOkumuraMaxMHz = 1500.0;
constexpr double kCost231MinMHz = 500.0;
constexpr double kCost231MaxMHz = 2000.0;
constexpr double kHataMinBaseHeight = 30.0;
constexpr double kHataMaxBaseHeight = 200.0;
constexpr double kHataMinKm = 1.0;
constexpr double kHataMaxKm = 20.0;

// 3GPP channel model frequency range
constexpr double kIndoorMinGHz = 0.5;
constexpr double kIndoorMaxGHz = 100.0;

double hata_distance_slope(double h_base_m) { return 44.9 - 6.55 * std::log10(h_base_m); }

void require_hata_slope(const AntennaGeometry& geom) {
  if (!(hata_distance_slope(geom.h_tx_m()) > 0.0)) {
    throw DomainError("Hata base-station height too large: distance slope must be positive");
  }
}

ValidityFlags hata_validity(Distance d, Frequency f, const AntennaGeometry& geom, double min_mhz,
                            double max_mhz) {
  ValidityFlags flags;
  const double mhz = f.in_megahertz();
  const double km = d.in_kilometers();
  flags.set(ValidityFlags::kFrequencyOutOfRange, mhz < min_mhz || mhz > max_mhz);
  flags.set(ValidityFlags::kAntennaHeightOutOfRange,
            geom.h_tx_m() < kHataMinBaseHeight || geom.h_tx_m() > kHataMaxBaseHeight);
  flags.set(ValidityFlags::kDistanceOutOfRange, km < kHataMinKm || km > kHataMaxKm);
  return flags;
}

}  // namespace

AntennaGeometry::AntennaGeometry(double h_tx_m, double h_rx_m, double combined_gain)
    : h_tx_(detail::require_positive(h_tx_m, "TX antenna height")),
      h_rx_(detail::require_positive(h_rx_m, "RX antenna height")),
      gain_(detail::require_positive(combined_gain, "combined antenna gain")) {}

std::vector<std::string> ValidityFlags::names() const {
  std::vector<std::string> out;
  if (has(kFrequencyOutOfRange)) out.emplace_back("frequency-out-of-range");
  if (has(kAntennaHeightOutOfRange)) out.emplace_back("antenna-height-out-of-range");
  if (has(kDistanceOutOfRange)) out.emplace_back("distance-out-of-range");
  if (has(kNearField)) out.emplace_back("near-field");
  return out;
}

Db free_space_loss(Distance d, Frequency f) {
  return {20.0 * std::log10(d.in_meters()) + 20.0 * std::log10(f.in_hertz()) + kFreeSpaceConstant};
}

Db inh_los_loss(Distance d, Frequency f) {
  return {32.4 + 17.3 * std::log10(d.in_meters()) + 20.0 * std::log10(f.in_gigahertz())};
}

Db inf_los_loss(Distance d, Frequency f) {
  return {31.84 + 21.50 * std::log10(d.in_meters()) + 19.0 * std::log10(f.in_gigahertz())};
}

Db two_ray_loss(Distance d, const AntennaGeometry& geom) {
  const double ht = geom.h_tx_m();
  const double hr = geom.h_rx_m();
  return {40.0 * std::log10(d.in_meters()) - 10.0 * std::log10(geom.combined_gain() * ht * ht * hr * hr)};
}

Db hata_height_correction(Frequency f, double h_mobile_m, CitySize city) {
  detail::require_positive(h_mobile_m, "mobile antenna height");
  const double log_f = std::log10(f.in_megahertz());
  if (city == CitySize::kLarge) {
    const double t = std::log10(11.75 * h_mobile_m);
    return {3.2 * t * t - 4.97};
  }
  return {0.8 + (1.1 * log_f - 0.7) * h_mobile_m - 1.56 * log_f};
}

Db okumura_hata_loss(Distance d, Frequency f, const AntennaGeometry& geom, HataEnvironment env) {
  require_hata_slope(geom);
  const double log_hb = std::log10(geom.h_tx_m());
  const Db c_h = hata_height_correction(f, geom.h_rx_m(), env.city);
  return {69.55 + 26.16 * std::log10(f.in_megahertz()) - 13.82 * log_hb - c_h.value +
          (44.9 - 6.55 * log_hb) * std::log10(d.in_kilometers())};
}

Db cost231_hata_loss(Distance d, Frequency f, const AntennaGeometry& geom, HataEnvironment env) {
  require_hata_slope(geom);
  const double log_hb = std::log10(geom.h_tx_m());
  const Db a_hm = hata_height_correction(f, geom.h_rx_m(), env.city);
  return {46.3 + 33.9 * std::log10(f.in_megahertz()) - 13.82 * log_hb - a_hm.value +
          (44.9 - 6.55 * log_hb) * std::log10(d.in_kilometers()) + env.metropolitan_correction().value};
}

Distance two_ray_crossover(Frequency f, const AntennaGeometry& geom) {
  return Distance::meters(4.0 * std::numbers::pi * geom.h_tx_m() * geom.h_rx_m() / f.wavelength_m());
}

std::string_view model_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::kFreeSpace:
      return "fspl";
    case ModelKind::kInhLos:
      return "inh-los";
    case ModelKind::kInfLos:
      return "inf-los";
    case ModelKind::kTwoRay:
      return "two-ray";
    case ModelKind::kOkumuraHata:
      return "okumura-hata";
    case ModelKind::kCost231Hata:
      return "cost231-hata";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) noexcept {
  for (ModelKind k : kAllModelKinds) {
    if (model_name(k) == name) return k;
  }
  return std::nullopt;
}

bool needs_geometry(ModelKind kind) noexcept {
  return kind == ModelKind::kTwoRay || kind == ModelKind::kOkumuraHata ||
         kind == ModelKind::kCost231Hata;
}

PathLossModel::PathLossModel(ModelKind kind, Frequency f, std::optional<AntennaGeometry> geom,
                             HataEnvironment env)
    : kind_(kind), frequency_(f), geometry_(std::move(geom)), environment_(env) {
  if (needs_geometry(kind_) && !geometry_) {
    throw DomainError(std::string("model '") + std::string(model_name(kind_)) +
                      "' requires antenna geometry (TX/RX heights)");
  }
  if (kind_ == ModelKind::kOkumuraHata || kind_ == ModelKind::kCost231Hata) {
    require_hata_slope(*geometry_);
  }
}

PathLossModel PathLossModel::free_space(Frequency f) { return {ModelKind::kFreeSpace, f, std::nullopt, {}}; }
PathLossModel PathLossModel::inh_los(Frequency f) { return {ModelKind::kInhLos, f, std::nullopt, {}}; }
PathLossModel PathLossModel::inf_los(Frequency f) { return {ModelKind::kInfLos, f, std::nullopt, {}}; }
PathLossModel PathLossModel::two_ray(Frequency f, AntennaGeometry geom) {
  return {ModelKind::kTwoRay, f, geom, {}};
}
PathLossModel PathLossModel::okumura_hata(Frequency f, AntennaGeometry geom, HataEnvironment env) {
  return {ModelKind::kOkumuraHata, f, geom, env};
}
PathLossModel PathLossModel::cost231_hata(Frequency f, AntennaGeometry geom, HataEnvironment env) {
  return {ModelKind::kCost231Hata, f, geom, env};
}

PathLossModel PathLossModel::make(ModelKind kind, Frequency f, std::optional<AntennaGeometry> geom,
                                  HataEnvironment env) {
  if (!needs_geometry(kind)) geom.reset();
  return {kind, f, std::move(geom), env};
}

Db PathLossModel::loss(Distance d) const {
  switch (kind_) {
    case ModelKind::kFreeSpace:
      return free_space_loss(d, frequency_);
    case ModelKind::kInhLos:
      return inh_los_loss(d, frequency_);
    case ModelKind::kInfLos:
      return inf_los_loss(d, frequency_);
    case ModelKind::kTwoRay:
      return two_ray_loss(d, *geometry_);
    case ModelKind::kOkumuraHata:
      return okumura_hata_loss(d, frequency_, *geometry_, environment_);
    case ModelKind::kCost231Hata:
      return cost231_hata_loss(d, frequency_, *geometry_, environment_);
  }
  throw DomainError("unknown model kind");
}

ValidityFlags PathLossModel::validity(Distance d) const {
  ValidityFlags flags;
  switch (kind_) {
    case ModelKind::kFreeSpace:
      break;
    case ModelKind::kInhLos:
    case ModelKind::kInfLos: {
      const double ghz = frequency_.in_gigahertz();
      flags.set(ValidityFlags::kFrequencyOutOfRange, ghz < kIndoorMinGHz || ghz > kIndoorMaxGHz);
      break;
    }
    case ModelKind::kTwoRay:
      flags.set(ValidityFlags::kNearField, d < two_ray_crossover(frequency_, *geometry_));
      break;
    case ModelKind::kOkumuraHata:
      flags = hata_validity(d, frequency_, *geometry_, kOkumuraMinMHz, kOkumuraMaxMHz);
      break;
    case ModelKind::kCost231Hata:
      flags = hata_validity(d, frequency_, *geometry_, kCost231MinMHz, kCost231MaxMHz);
      break;
  }
  return flags;
}

LogAffine PathLossModel::log_affine() const {
  switch (kind_) {
    case ModelKind::kFreeSpace:
      return {20.0 * std::log10(frequency_.in_hertz()) + kFreeSpaceConstant, 20.0};
    case ModelKind::kInhLos:
      return {32.4 + 20.0 * std::log10(frequency_.in_gigahertz()), 17.3};
    case ModelKind::kInfLos:
      return {31.84 + 19.0 * std::log10(frequency_.in_gigahertz()), 21.5};
    default:
      break;
  }
  // Remaining kinds: the value at 1 m is the intercept. Hata slopes are per
  // decade of km, which is also per decade of m.
  const double at_one_meter = loss(Distance::meters(1.0)).value;
  if (kind_ == ModelKind::kTwoRay) return {at_one_meter, 40.0};
  return {at_one_meter, hata_distance_slope(geometry_->h_tx_m())};
}

void PathLossModel::loss_batch(std::span<const double> distances_m, std::span<double> out) const {
  if (out.size() != distances_m.size()) {
    throw DomainError("loss_batch: output size does not match input size");
  }
  for (double d : distances_m) {
    detail::require_positive(d, "distance");
  }
  const LogAffine a = log_affine();
  kernels::affine_log10(distances_m, a.intercept_db, a.slope_db_per_decade, out);
}

std::vector<double> sweep_distances(Distance start, Distance end, std::size_t points, Spacing spacing) {
  if (!(start < end)) throw DomainError("sweep: start distance must be below end distance");
  if (points < 2) throw DomainError("sweep: at least 2 points are required");

  const double a = start.in_meters();
  const double b = end.in_meters();
  const double last = static_cast<double>(points - 1);
  std::vector<double> d(points);
  if (spacing == Spacing::kLinear) {
    for (std::size_t i = 0; i < points; ++i) d[i] = a + (b - a) * (static_cast<double>(i) / last);
  } else {
    const double la = std::log10(a);
    const double lb = std::log10(b);
    for (std::size_t i = 0; i < points; ++i) {
      d[i] = std::pow(10.0, la + (lb - la) * (static_cast<double>(i) / last));
    }
  }
  d.front() = a;
  d.back() = b;
  if (std::adjacent_find(d.begin(), d.end(), std::greater_equal<>()) != d.end()) {
    throw DomainError("sweep: range too narrow for the requested number of points");
  }
  return d;
}

std::vector<SweepPoint> evaluate_sweep(const PathLossModel& model, Distance start, Distance end,
                                       std::size_t points, Spacing spacing) {
  const std::vector<double> d = sweep_distances(start, end, points, spacing);
  std::vector<double> pl(d.size());
  model.loss_batch(d, pl);
  std::vector<SweepPoint> out;
  out.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    out.push_back({Distance::meters(d[i]), Db{pl[i]}});
  }
  return out;
}

}  // namespace dectlink::propagation
