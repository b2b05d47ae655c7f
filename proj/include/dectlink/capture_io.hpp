#pragma once

// Capture log files.
//
// CSV, one row per request, mandatory header:
//   seq,pcc_rssi_dbm,pdc_rssi_dbm,snr_db,pcc_crc_ok,pdc_crc_ok
// CRC flags are 0/1. A request with no reception has empty RSSI/SNR fields
// and 0 flags.
//
// Metadata sidecar next to the CSV (same stem, ".meta" extension), key=value:
//   location_id, distance_m, environment, p_tx_dbm, request_count
// request_count defaults to the number of CSV rows.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dectlink/campaign.hpp"
#include "dectlink/kv_text.hpp"

namespace dectlink::capture_io {

inline constexpr std::string_view kCaptureHeader = "seq,pcc_rssi_dbm,pdc_rssi_dbm,snr_db,pcc_crc_ok,pdc_crc_ok";

// Throws ParseError with the 1-based line number.
std::vector<campaign::MeasurementSample> parse_capture_csv(std::string_view text);
std::string format_capture_csv(const std::vector<campaign::MeasurementSample>& samples);

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

// Builds a capture from sidecar metadata and parsed rows.
campaign::LocationCapture make_capture(const KeyValues& meta, std::vector<campaign::MeasurementSample> samples);
std::string format_sidecar(const campaign::LocationCapture& capture);

// Reads <csv_path> and its sidecar. Errors name the offending file.
campaign::LocationCapture read_capture(const std::filesystem::path& csv_path);

// Writes <csv_path> and its sidecar.
void write_capture(const std::filesystem::path& csv_path, const campaign::LocationCapture& capture);

}  // namespace dectlink::capture_io
