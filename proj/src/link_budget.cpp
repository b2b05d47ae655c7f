#include "dectlink/link_budget.hpp"

#include <cmath>
#include <string>

#include "dectlink/errors.hpp"

namespace dectlink::link_budget {
namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

void ReliabilityThresholds::validate() const {
  if (!(min_success_rate_pct > 0.0 && min_success_rate_pct <= 100.0)) {
    throw DomainError("min success rate must lie in (0, 100]");
  }
  require_finite(rssi_floor_indoor.value, "indoor RSSI floor");
  require_finite(rssi_floor_outdoor.value, "outdoor RSSI floor");
  require_finite(snr_floor_indoor.value, "indoor SNR floor");
  require_finite(snr_floor_outdoor.value, "outdoor SNR floor");
}

Db empirical_path_loss(Dbm tx_power, Dbm rx_power, const LinkBudget& budget) {
  require_finite(tx_power.value, "TX power");
  require_finite(rx_power.value, "RX power");
  require_finite(budget.side_correction_tx.value, "TX side correction");
  require_finite(budget.side_correction_rx.value, "RX side correction");
  return (tx_power - rx_power) + budget.side_correction_tx + budget.side_correction_rx;
}

Dbm predict_rx_power(const LinkBudget& budget, const propagation::PathLossModel& model, Distance d) {
  return budget.tx_power + budget.total_correction() - model.loss(d);
}

Dbm noise_floor(const LinkBudget& budget) {
  detail::require_positive(budget.bandwidth_hz, "bandwidth");
  return Dbm{-174.0 + 10.0 * std::log10(budget.bandwidth_hz)} + budget.noise_figure;
}

Db predict_snr(const LinkBudget& budget, const propagation::PathLossModel& model, Distance d) {
  return predict_rx_power(budget, model, d) - noise_floor(budget);
}

Db allowed_path_loss(const LinkBudget& budget, const ReliabilityThresholds& thresholds,
                     Environment env, Criterion criterion) {
  // Lowest acceptable RX power for the chosen criterion.
  const Dbm min_rx = criterion == Criterion::kRssi ? thresholds.rssi_floor(env)
                                                   : noise_floor(budget) + thresholds.snr_floor(env);
  return (budget.tx_power - min_rx) + budget.total_correction();
}

Distance distance_for_path_loss(const propagation::PathLossModel& model, Db target,
                                const SolverOptions& options) {
  require_finite(target.value, "target path loss");
  auto pl_at_log = [&](double log_d) { return model.loss(Distance::meters(std::pow(10.0, log_d))).value; };

  double lo = std::log10(options.min_distance_m);
  if (pl_at_log(lo) > target.value) {
    throw ThresholdUnreachable("threshold unreachable: path loss at the minimum search distance (" +
                               std::to_string(options.min_distance_m) + " m) already exceeds " +
                               std::to_string(target.value) + " dB");
  }
  double hi = std::log10(options.initial_max_distance_m);
  const double hard_max = std::log10(options.hard_max_distance_m);
  while (pl_at_log(hi) < target.value) {
    lo = hi;
    hi += 1.0;
    if (hi > hard_max) {
      throw ThresholdUnreachable("floor never reached below " + std::to_string(options.hard_max_distance_m) +
                                 " m");
    }
  }
  // Invariant: PL(lo) <= target <= PL(hi).
  const double log_width = std::log10(1.0 + options.relative_width);
  while (hi - lo > log_width) {
    const double mid = 0.5 * (lo + hi);
    if (pl_at_log(mid) <= target.value) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Distance::meters(std::pow(10.0, 0.5 * (lo + hi)));
}

Distance model_intersection(const propagation::PathLossModel& a, const propagation::PathLossModel& b,
                            const SolverOptions& options) {
  auto gap_at_log = [&](double log_d) {
    const Distance d = Distance::meters(std::pow(10.0, log_d));
    return a.loss(d).value - b.loss(d).value;
  };
  double lo = std::log10(options.min_distance_m);
  const bool lo_sign = gap_at_log(lo) < 0.0;
  double hi = std::log10(options.initial_max_distance_m);
  const double hard_max = std::log10(options.hard_max_distance_m);
  while ((gap_at_log(hi) < 0.0) == lo_sign) {
    lo = hi;
    hi += 1.0;
    if (hi > hard_max) throw DomainError("models do not intersect inside the search range");
  }
  const double log_width = std::log10(1.0 + options.relative_width);
  while (hi - lo > log_width) {
    const double mid = 0.5 * (lo + hi);
    if ((gap_at_log(mid) < 0.0) == lo_sign) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Distance::meters(std::pow(10.0, 0.5 * (lo + hi)));
}

Distance max_link_distance(const LinkBudget& budget, const propagation::PathLossModel& model,
                           const ReliabilityThresholds& thresholds, Environment env,
                           Criterion criterion, const SolverOptions& options) {
  thresholds.validate();
  return distance_for_path_loss(model, allowed_path_loss(budget, thresholds, env, criterion), options);
}

Reliability classify_reliability(double success_rate_pct, const ReliabilityThresholds& thresholds) {
  if (!(success_rate_pct >= 0.0 && success_rate_pct <= 100.0)) {
    throw DomainError("success rate must lie in [0, 100]");
  }
  return success_rate_pct > thresholds.min_success_rate_pct ? Reliability::kReliable
                                                            : Reliability::kUnreliable;
}

}  // namespace dectlink::link_budget
