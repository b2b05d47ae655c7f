#pragma once

// Deterministic path-loss models: free space, 3GPP indoor hotspot and indoor
// factory LOS, two-ray ground reflection, Okumura-Hata and COST-231 Hata.
//
// Every public input is SI (metres, hertz). Each model converts to its own
// native units: Hz/m for free space, GHz/m for the 3GPP indoor models,
// MHz/km for the Hata family. All six are affine in log10(distance), which
// is what PathLossModel::log_affine() exposes for the batch kernels.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dectlink/units.hpp"

namespace dectlink::propagation {

class AntennaGeometry {
public:
  // combined_gain is linear (dimensionless), not dB.
  AntennaGeometry(double h_tx_m, double h_rx_m, double combined_gain = 1.0);

  double h_tx_m() const noexcept { return h_tx_; }
  double h_rx_m() const noexcept { return h_rx_; }
  double combined_gain() const noexcept { return gain_; }

  bool operator==(const AntennaGeometry&) const = default;

private:
  double h_tx_;
  double h_rx_;
  double gain_;
};

enum class CitySize { kSmallMedium, kLarge };
enum class AreaClass { kUrban, kSuburbanOpen };

struct HataEnvironment {
  CitySize city = CitySize::kSmallMedium;
  AreaClass area = AreaClass::kUrban;

  // C_m of COST-231: 3 dB urban, 0 dB suburban/open.
  Db metropolitan_correction() const noexcept { return {area == AreaClass::kUrban ? 3.0 : 0.0}; }
  bool operator==(const HataEnvironment&) const = default;
};

// Structured validity flags. A flagged evaluation still returns a value.
class ValidityFlags {
public:
  enum Bit : unsigned {
    kFrequencyOutOfRange = 1u << 0,
    kAntennaHeightOutOfRange = 1u << 1,
    kDistanceOutOfRange = 1u << 2,
    kNearField = 1u << 3,
  };

  constexpr ValidityFlags() = default;
  constexpr explicit ValidityFlags(unsigned bits) : bits_(bits) {}

  constexpr bool any() const noexcept { return bits_ != 0; }
  constexpr bool has(Bit b) const noexcept { return (bits_ & b) != 0; }
  constexpr unsigned bits() const noexcept { return bits_; }
  constexpr ValidityFlags& set(Bit b, bool on = true) noexcept {
    if (on) bits_ |= b;
    return *this;
  }

  // e.g. ["frequency-out-of-range", "near-field"]
  std::vector<std::string> names() const;

  constexpr bool operator==(const ValidityFlags&) const = default;

private:
  unsigned bits_ = 0;
};

// Single-expression model formulas (native unit conversions applied inside).
Db free_space_loss(Distance d, Frequency f);
Db inh_los_loss(Distance d, Frequency f);
Db inf_los_loss(Distance d, Frequency f);
Db two_ray_loss(Distance d, const AntennaGeometry& geom);
Db okumura_hata_loss(Distance d, Frequency f, const AntennaGeometry& geom, HataEnvironment env);
Db cost231_hata_loss(Distance d, Frequency f, const AntennaGeometry& geom, HataEnvironment env);

// Mobile-antenna height correction: C_H in Okumura-Hata, a(h_m) in COST-231.
Db hata_height_correction(Frequency f, double h_mobile_m, CitySize city);

// Distance where free space and the asymptotic two-ray form cross:
// 4*pi*h_t*h_r / lambda.
Distance two_ray_crossover(Frequency f, const AntennaGeometry& geom);

enum class ModelKind { kFreeSpace, kInhLos, kInfLos, kTwoRay, kOkumuraHata, kCost231Hata };

inline constexpr ModelKind kAllModelKinds[] = {ModelKind::kFreeSpace,   ModelKind::kInhLos,
                                               ModelKind::kInfLos,      ModelKind::kTwoRay,
                                               ModelKind::kOkumuraHata, ModelKind::kCost231Hata};

// CLI names: fspl, inh-los, inf-los, two-ray, okumura-hata, cost231-hata.
std::string_view model_name(ModelKind kind) noexcept;
std::optional<ModelKind> parse_model_kind(std::string_view name) noexcept;
bool needs_geometry(ModelKind kind) noexcept;

struct PathLoss {
  Db loss;
  ValidityFlags flags;
};

// PL(d) = intercept + slope * log10(d / 1 m)
struct LogAffine {
  double intercept_db;
  double slope_db_per_decade;
};

class PathLossModel {
public:
  static PathLossModel free_space(Frequency f);
  static PathLossModel inh_los(Frequency f);
  static PathLossModel inf_los(Frequency f);
  static PathLossModel two_ray(Frequency f, AntennaGeometry geom);
  static PathLossModel okumura_hata(Frequency f, AntennaGeometry geom, HataEnvironment env = {});
  static PathLossModel cost231_hata(Frequency f, AntennaGeometry geom, HataEnvironment env = {});

  // Throws DomainError when kind needs geometry and none is given.
  static PathLossModel make(ModelKind kind, Frequency f, std::optional<AntennaGeometry> geom,
                            HataEnvironment env = {});

  ModelKind kind() const noexcept { return kind_; }
  Frequency frequency() const noexcept { return frequency_; }
  const std::optional<AntennaGeometry>& geometry() const noexcept { return geometry_; }
  HataEnvironment environment() const noexcept { return environment_; }

  Db loss(Distance d) const;
  ValidityFlags validity(Distance d) const;
  PathLoss evaluate(Distance d) const { return {loss(d), validity(d)}; }

  LogAffine log_affine() const;

  // out[i] = PL(distances_m[i]) through the SIMD kernels. Distances must be
  // positive; out.size() must equal distances_m.size().
  void loss_batch(std::span<const double> distances_m, std::span<double> out) const;

private:
  PathLossModel(ModelKind kind, Frequency f, std::optional<AntennaGeometry> geom,
                HataEnvironment env);

  ModelKind kind_;
  Frequency frequency_;
  std::optional<AntennaGeometry> geometry_;
  HataEnvironment environment_;
};

enum class Spacing { kLinear, kLog };

struct SweepPoint {
  Distance distance;
  Db loss;
};

// Strictly increasing distances from start to end inclusive; endpoints are
// exact.
std::vector<double> sweep_distances(Distance start, Distance end, std::size_t points, Spacing spacing);

std::vector<SweepPoint> evaluate_sweep(const PathLossModel& model, Distance start, Distance end,
                                       std::size_t points, Spacing spacing);

}  // namespace dectlink::propagation
