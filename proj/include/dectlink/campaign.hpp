#pragma once

// Per-location aggregation of per-second device logs: linear-domain power
// averaging, dB-domain spread, PCC/PDC success rates and empirical path loss.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dectlink/link_budget.hpp"
#include "dectlink/units.hpp"

namespace dectlink::campaign {

enum class Propagation { kLos, kNlos };

struct SiteEnvironment {
  link_budget::Environment setting = link_budget::Environment::kIndoor;
  Propagation propagation = Propagation::kLos;

  bool operator==(const SiteEnvironment&) const = default;
};

// "indoor-los", "indoor-nlos", "outdoor-los", "outdoor-nlos"
std::string to_string(SiteEnvironment env);
std::optional<SiteEnvironment> parse_site_environment(std::string_view text) noexcept;

// One logged request. Empty RSSI/SNR means nothing was received for that
// channel; such rows must carry CRC flags of 0.
struct MeasurementSample {
  std::size_t sequence = 0;
  std::optional<double> pcc_rssi_dbm;
  std::optional<double> pdc_rssi_dbm;
  std::optional<double> snr_db;
  bool pcc_crc_ok = false;
  bool pdc_crc_ok = false;
};

struct LocationCapture {
  std::string location_id;
  Distance distance = Distance::meters(1.0);
  SiteEnvironment environment;
  Dbm tx_power{0.0};
  // Requests sent. Requests with no log row at all count as failures.
  std::size_t request_count = 0;
  std::vector<MeasurementSample> samples;

  // Throws DomainError on inconsistent content.
  void validate() const;
};

struct PowerStats {
  Dbm mean;    // linear-domain mean
  Db std_dev;  // sample standard deviation of the dB values
  Dbm min;
  Dbm max;
  std::size_t count = 0;
};

struct SnrStats {
  Db mean;  // linear-domain mean
  Db std_dev;
  std::size_t count = 0;
};

struct CampaignRecord {
  std::string location_id;
  Distance distance = Distance::meters(1.0);
  SiteEnvironment environment;
  Dbm tx_power{0.0};
  std::size_t request_count = 0;

  std::optional<PowerStats> rssi_pcc;
  std::optional<PowerStats> rssi_pdc;
  std::optional<SnrStats> snr;
  double sr_pcc_pct = 0.0;
  double sr_pdc_pct = 0.0;
  std::optional<Db> empirical_pl_pcc;
  std::optional<Db> empirical_pl_pdc;

  std::vector<std::string> warnings;
};

// 10*log10(mean(10^(x/10))). Throws DomainError on empty or non-finite input.
Dbm mean_power_db(std::span<const double> samples_db);

// Sample standard deviation (n - 1 normalisation); 0 for a single value.
double std_dev_db(std::span<const double> samples_db);

double success_rate_pcc(const LocationCapture& capture);
double success_rate_pdc(const LocationCapture& capture);

CampaignRecord summarize(const LocationCapture& capture, const link_budget::LinkBudget& budget);

// Largest distance whose record is reliable on both PCC and PDC. Throws
// NoReliablePoint when none qualifies.
Distance max_reliable_distance(std::span<const CampaignRecord> records,
                               const link_budget::ReliabilityThresholds& thresholds);

// Records sorted by (location_id, distance).
void sort_records(std::vector<CampaignRecord>& records);

}  // namespace dectlink::campaign
