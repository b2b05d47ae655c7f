#include "dectlink/capture_io.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <optional>
#include <fstream>

#include "dectlink/errors.hpp"

namespace dectlink::capture_io {
namespace {

constexpr std::size_t kColumns = 6;

std::array<std::string_view, kColumns> split_row(std::string_view line, std::size_t line_no) {
  std::array<std::string_view, kColumns> out{};
  std::size_t col = 0;
  while (true) {
    const auto comma = line.find(',');
    if (col == kColumns) throw ParseError("too many columns (expected 6)", line_no);
    out[col++] = trim(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line = line.substr(comma + 1);
  }
  if (col != kColumns) throw ParseError("too few columns (expected 6)", line_no);
  return out;
}

std::optional<double> optional_number(std::string_view field, const char* name, std::size_t line_no) {
  if (field.empty()) return std::nullopt;
  double v = 0.0;
  if (!parse_double(field, v) || !std::isfinite(v)) {
    throw ParseError(std::string("bad ") + name + " value '" + std::string(field) + "'", line_no);
  }
  return v;
}

bool flag(std::string_view field, const char* name, std::size_t line_no) {
  if (field == "0") return false;
  if (field == "1") return true;
  throw ParseError(std::string(name) + " must be 0 or 1, got '" + std::string(field) + "'", line_no);
}

std::string optional_text(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); }

const std::string& require_key(const KeyValues& meta, const char* key) {
  const auto it = meta.find(key);
  if (it == meta.end()) throw ParseError(std::string("sidecar is missing '") + key + "'");
  return it->second;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << content;
}

}  // namespace

std::vector<campaign::MeasurementSample> parse_capture_csv(std::string_view text) {
  std::vector<campaign::MeasurementSample> rows;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty()) continue;

    if (!header_seen) {
      if (line != kCaptureHeader) {
        throw ParseError("expected header '" + std::string(kCaptureHeader) + "'", line_no);
      }
      header_seen = true;
      continue;
    }

    const auto f = split_row(line, line_no);
    campaign::MeasurementSample s;
    if (!parse_size(f[0], s.sequence)) throw ParseError("bad seq value '" + std::string(f[0]) + "'", line_no);
    s.pcc_rssi_dbm = optional_number(f[1], "pcc_rssi_dbm", line_no);
    s.pdc_rssi_dbm = optional_number(f[2], "pdc_rssi_dbm", line_no);
    s.snr_db = optional_number(f[3], "snr_db", line_no);
    s.pcc_crc_ok = flag(f[4], "pcc_crc_ok", line_no);
    s.pdc_crc_ok = flag(f[5], "pdc_crc_ok", line_no);
    if ((s.pcc_crc_ok && !s.pcc_rssi_dbm) || (s.pdc_crc_ok && !s.pdc_rssi_dbm)) {
      throw ParseError("CRC ok flag set on a row without RSSI", line_no);
    }
    rows.push_back(s);
  }
  if (!header_seen) throw ParseError("missing header", line_no == 0 ? 1 : line_no);
  return rows;
}

std::string format_capture_csv(const std::vector<campaign::MeasurementSample>& samples) {
  std::string out(kCaptureHeader);
  out += '\n';
  for (const auto& s : samples) {
    out += fmt::format("{},{},{},{},{},{}\n", s.sequence, optional_text(s.pcc_rssi_dbm),
                       optional_text(s.pdc_rssi_dbm), optional_text(s.snr_db), s.pcc_crc_ok ? 1 : 0,
                       s.pdc_crc_ok ? 1 : 0);
  }
  return out;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".meta");
  return p;
}

campaign::LocationCapture make_capture(const KeyValues& meta, std::vector<campaign::MeasurementSample> samples) {
  campaign::LocationCapture c;
  c.location_id = require_key(meta, "location_id");

  double distance = 0.0;
  if (!parse_double(require_key(meta, "distance_m"), distance)) throw ParseError("bad distance_m");
  try {
    c.distance = Distance::meters(distance);
  } catch (const DomainError& e) {
    throw ParseError(std::string("distance_m: ") + e.what());
  }

  const auto env = campaign::parse_site_environment(require_key(meta, "environment"));
  if (!env) throw ParseError("environment must be one of indoor-los, indoor-nlos, outdoor-los, outdoor-nlos");
  c.environment = *env;

  double p_tx = 0.0;
  if (!parse_double(require_key(meta, "p_tx_dbm"), p_tx) || !std::isfinite(p_tx)) throw ParseError("bad p_tx_dbm");
  c.tx_power = Dbm{p_tx};

  c.request_count = samples.size();
  if (const auto it = meta.find("request_count"); it != meta.end()) {
    if (!parse_size(it->second, c.request_count)) throw ParseError("bad request_count");
  }
  c.samples = std::move(samples);
  return c;
}

std::string format_sidecar(const campaign::LocationCapture& capture) {
  return fmt::format("location_id={}\ndistance_m={}\nenvironment={}\np_tx_dbm={}\nrequest_count={}\n",
                     capture.location_id, capture.distance.in_meters(), campaign::to_string(capture.environment),
                     capture.tx_power.value, capture.request_count);
}

campaign::LocationCapture read_capture(const std::filesystem::path& csv_path) {
  std::vector<campaign::MeasurementSample> rows;
  try {
    rows = parse_capture_csv(read_text_file(csv_path));
  } catch (const ParseError& e) {
    throw e.in(csv_path.string());
  }
  const auto meta_path = sidecar_path(csv_path);
  try {
    campaign::LocationCapture c = make_capture(read_key_values(meta_path), std::move(rows));
    c.validate();
    return c;
  } catch (const ParseError& e) {
    throw e.in(meta_path.string());
  } catch (const DomainError& e) {
    throw ParseError(e.what(), 0, meta_path.string());
  }
}

void write_capture(const std::filesystem::path& csv_path, const campaign::LocationCapture& capture) {
  write_file(csv_path, format_capture_csv(capture.samples));
  write_file(sidecar_path(csv_path), format_sidecar(capture));
}

}  // namespace dectlink::capture_io
