#pragma once

// Link budget arithmetic around a path-loss model: empirical path loss from
// measured power, predicted RX power and SNR, and the inverse problem of
// finding the longest distance that still meets an RSSI or SNR floor.

#include "dectlink/propagation.hpp"
#include "dectlink/units.hpp"

namespace dectlink::link_budget {

struct LinkBudget {
  Dbm tx_power{0.0};
  // Antenna gain minus connector/internal loss, per side.
  Db side_correction_tx{1.0};
  Db side_correction_rx{1.0};
  double bandwidth_hz = 1.728e6;
  Db noise_figure{10.0};

  Db total_correction() const noexcept { return side_correction_tx + side_correction_rx; }
};

enum class Environment { kIndoor, kOutdoor };
enum class Criterion { kRssi, kSnr };

struct ReliabilityThresholds {
  double min_success_rate_pct = 90.0;
  Dbm rssi_floor_indoor{-90.0};
  Dbm rssi_floor_outdoor{-95.0};
  Db snr_floor_indoor{11.5};
  Db snr_floor_outdoor{13.5};

  Dbm rssi_floor(Environment env) const noexcept {
    return env == Environment::kIndoor ? rssi_floor_indoor : rssi_floor_outdoor;
  }
  Db snr_floor(Environment env) const noexcept {
    return env == Environment::kIndoor ? snr_floor_indoor : snr_floor_outdoor;
  }

  // Throws DomainError when a field is out of range.
  void validate() const;
};

// P_tx - P_rx + (G_tx - L_tx) + (G_rx - L_rx)
Db empirical_path_loss(Dbm tx_power, Dbm rx_power, const LinkBudget& budget);

Dbm predict_rx_power(const LinkBudget& budget, const propagation::PathLossModel& model, Distance d);

// -174 dBm/Hz + 10*log10(B) + NF
Dbm noise_floor(const LinkBudget& budget);

Db predict_snr(const LinkBudget& budget, const propagation::PathLossModel& model, Distance d);

struct SolverOptions {
  double min_distance_m = 0.1;
  double initial_max_distance_m = 1e6;
  // Bracket expansion stops here; beyond it the floor is treated as never
  // reached.
  double hard_max_distance_m = 1e15;
  // Bisection stops when hi/lo - 1 falls below this.
  double relative_width = 1e-6;
};

// Largest path loss the budget tolerates for the selected floor.
Db allowed_path_loss(const LinkBudget& budget, const ReliabilityThresholds& thresholds,
                     Environment env, Criterion criterion);

// Distance at which predicted RX power (or SNR) meets the selected floor.
// Throws ThresholdUnreachable if the floor is already violated at
// options.min_distance_m.
Distance max_link_distance(const LinkBudget& budget, const propagation::PathLossModel& model,
                           const ReliabilityThresholds& thresholds, Environment env,
                           Criterion criterion, const SolverOptions& options = {});

// Bisection on log10(distance) for PL(d) == target. Exposed for round-trip
// tests and for callers with a precomputed allowed loss.
Distance distance_for_path_loss(const propagation::PathLossModel& model, Db target,
                                const SolverOptions& options = {});

// Distance at which two models predict the same loss, by bisection on
// log10(distance). Throws DomainError when the curves do not cross inside
// [min_distance_m, hard_max_distance_m].
Distance model_intersection(const propagation::PathLossModel& a, const propagation::PathLossModel& b,
                            const SolverOptions& options = {});

enum class Reliability { kReliable, kUnreliable };

// Strict exceedance: reliable iff sr > min_success_rate_pct. sr in [0, 100].
Reliability classify_reliability(double success_rate_pct, const ReliabilityThresholds& thresholds);

}  // namespace dectlink::link_budget
