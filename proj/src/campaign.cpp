#include "dectlink/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "dectlink/errors.hpp"
#include "dectlink/kernels.hpp"

namespace dectlink::campaign {
namespace {

// RSSI above this is almost certainly a logging or unit error.
constexpr double kSuspiciousRssiDbm = 10.0;

void require_non_empty_finite(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("sample list is empty");
  for (double x : xs) {
    if (!std::isfinite(x)) throw DomainError("sample list contains a non-finite value");
  }
}

double rate(std::size_t ok, std::size_t requests) {
  if (requests == 0) throw DomainError("request count must be positive");
  return 100.0 * static_cast<double>(ok) / static_cast<double>(requests);
}

std::optional<PowerStats> power_stats(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  const kernels::SumMinMax s = kernels::sum_min_max(xs);
  return PowerStats{mean_power_db(xs), Db{std_dev_db(xs)}, Dbm{s.min}, Dbm{s.max}, xs.size()};
}

}  // namespace

std::string to_string(SiteEnvironment env) {
  std::string out = env.setting == link_budget::Environment::kIndoor ? "indoor" : "outdoor";
  out += env.propagation == Propagation::kLos ? "-los" : "-nlos";
  return out;
}

std::optional<SiteEnvironment> parse_site_environment(std::string_view text) noexcept {
  using link_budget::Environment;
  if (text == "indoor-los") return SiteEnvironment{Environment::kIndoor, Propagation::kLos};
  if (text == "indoor-nlos") return SiteEnvironment{Environment::kIndoor, Propagation::kNlos};
  if (text == "outdoor-los") return SiteEnvironment{Environment::kOutdoor, Propagation::kLos};
  if (text == "outdoor-nlos") return SiteEnvironment{Environment::kOutdoor, Propagation::kNlos};
  return std::nullopt;
}

void LocationCapture::validate() const {
  if (request_count == 0) throw DomainError("capture '" + location_id + "': request count must be positive");
  if (samples.size() > request_count) {
    throw DomainError("capture '" + location_id + "': more log rows than requests");
  }
  if (!std::isfinite(tx_power.value)) throw DomainError("capture '" + location_id + "': TX power not finite");
  for (const MeasurementSample& s : samples) {
    if ((s.pcc_crc_ok && !s.pcc_rssi_dbm) || (s.pdc_crc_ok && !s.pdc_rssi_dbm)) {
      throw DomainError("capture '" + location_id + "': sample " + std::to_string(s.sequence) +
                        " has CRC ok without a received RSSI");
    }
    for (const auto& v : {s.pcc_rssi_dbm, s.pdc_rssi_dbm, s.snr_db}) {
      if (v && !std::isfinite(*v)) {
        throw DomainError("capture '" + location_id + "': sample " + std::to_string(s.sequence) +
                          " has a non-finite value");
      }
    }
  }
}

Dbm mean_power_db(std::span<const double> samples_db) {
  require_non_empty_finite(samples_db);
  // Factor out the maximum so every term is in (0, 1].
  const double shift = kernels::sum_min_max(samples_db).max;
  const double sum = kernels::sum_db_to_linear(samples_db, shift);
  return Dbm{shift + 10.0 * std::log10(sum / static_cast<double>(samples_db.size()))};
}

double std_dev_db(std::span<const double> samples_db) {
  require_non_empty_finite(samples_db);
  if (samples_db.size() == 1) return 0.0;
  const double n = static_cast<double>(samples_db.size());
  const double mean = kernels::sum_min_max(samples_db).sum / n;
  return std::sqrt(kernels::sum_squared_deviation(samples_db, mean) / (n - 1.0));
}

double success_rate_pcc(const LocationCapture& capture) {
  const auto ok = std::count_if(capture.samples.begin(), capture.samples.end(),
                                [](const MeasurementSample& s) { return s.pcc_crc_ok; });
  return rate(static_cast<std::size_t>(ok), capture.request_count);
}

double success_rate_pdc(const LocationCapture& capture) {
  const auto ok = std::count_if(capture.samples.begin(), capture.samples.end(),
                                [](const MeasurementSample& s) { return s.pdc_crc_ok; });
  return rate(static_cast<std::size_t>(ok), capture.request_count);
}

CampaignRecord summarize(const LocationCapture& capture, const link_budget::LinkBudget& budget) {
  capture.validate();

  std::vector<double> pcc;
  std::vector<double> pdc;
  std::vector<double> snr;
  pcc.reserve(capture.samples.size());
  pdc.reserve(capture.samples.size());
  snr.reserve(capture.samples.size());
  for (const MeasurementSample& s : capture.samples) {
    if (s.pcc_rssi_dbm) pcc.push_back(*s.pcc_rssi_dbm);
    if (s.pdc_rssi_dbm) pdc.push_back(*s.pdc_rssi_dbm);
    if (s.snr_db) snr.push_back(*s.snr_db);
  }

  CampaignRecord r;
  r.location_id = capture.location_id;
  r.distance = capture.distance;
  r.environment = capture.environment;
  r.tx_power = capture.tx_power;
  r.request_count = capture.request_count;
  r.rssi_pcc = power_stats(pcc);
  r.rssi_pdc = power_stats(pdc);
  if (!snr.empty()) {
    r.snr = SnrStats{Db{mean_power_db(snr).value}, Db{std_dev_db(snr)}, snr.size()};
  }
  r.sr_pcc_pct = success_rate_pcc(capture);
  r.sr_pdc_pct = success_rate_pdc(capture);
  if (r.rssi_pcc) r.empirical_pl_pcc = link_budget::empirical_path_loss(capture.tx_power, r.rssi_pcc->mean, budget);
  if (r.rssi_pdc) r.empirical_pl_pdc = link_budget::empirical_path_loss(capture.tx_power, r.rssi_pdc->mean, budget);

  const double max_seen = std::max(r.rssi_pcc ? r.rssi_pcc->max.value : -HUGE_VAL,
                                   r.rssi_pdc ? r.rssi_pdc->max.value : -HUGE_VAL);
  if (max_seen > kSuspiciousRssiDbm) {
    r.warnings.push_back("RSSI above +10 dBm; check units");
  }
  if (pcc.empty() && pdc.empty()) {
    r.warnings.push_back("no samples received");
  }
  return r;
}

Distance max_reliable_distance(std::span<const CampaignRecord> records,
                               const link_budget::ReliabilityThresholds& thresholds) {
  using link_budget::Reliability;
  if (records.empty()) throw DomainError("record series is empty");
  std::optional<Distance> best;
  for (const CampaignRecord& r : records) {
    const bool reliable =
        link_budget::classify_reliability(r.sr_pcc_pct, thresholds) == Reliability::kReliable &&
        link_budget::classify_reliability(r.sr_pdc_pct, thresholds) == Reliability::kReliable;
    if (reliable && (!best || r.distance > *best)) best = r.distance;
  }
  if (!best) throw NoReliablePoint("no reliable point in series");
  return *best;
}

void sort_records(std::vector<CampaignRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const CampaignRecord& a, const CampaignRecord& b) {
    return std::tie(a.location_id, a.distance) < std::tie(b.location_id, b.distance);
  });
}

}  // namespace dectlink::campaign
