#include "dectlink/config.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>

#include "dectlink/errors.hpp"

#ifndef DECTLINK_FIXTURE_DIR
#define DECTLINK_FIXTURE_DIR "data/fixtures"
#endif

namespace dectlink::config {
namespace {

using link_budget::Environment;
using propagation::AreaClass;
using propagation::CitySize;

double number(std::string_view key, std::string_view text) {
  double v = 0.0;
  if (!parse_double(text, v) || !std::isfinite(v)) {
    throw DomainError(fmt::format("{}: expected a finite number, got '{}'", key, text));
  }
  return v;
}

double positive(std::string_view key, std::string_view text) {
  const double v = number(key, text);
  if (!(v > 0.0)) throw DomainError(fmt::format("{}: must be positive, got '{}'", key, text));
  return v;
}

std::string num(double v) { return fmt::format("{}", v); }

// clang-format off
const std::array kFields = {
  FieldSpec{"frequency_hz", "carrier frequency (Hz)", "1899000000",
    [](RunConfig& c, std::string_view t) { c.frequency_hz = positive("frequency_hz", t); },
    [](const RunConfig& c) { return num(c.frequency_hz); }, "868000000", "2400000000"},
  FieldSpec{"bandwidth_hz", "channel bandwidth (Hz)", "1728000",
    [](RunConfig& c, std::string_view t) { c.budget.bandwidth_hz = positive("bandwidth_hz", t); },
    [](const RunConfig& c) { return num(c.budget.bandwidth_hz); }, "3456000", "6912000"},
  FieldSpec{"tx_power_dbm", "TX power (dBm)", "0",
    [](RunConfig& c, std::string_view t) { c.budget.tx_power = Dbm{number("tx_power_dbm", t)}; },
    [](const RunConfig& c) { return num(c.budget.tx_power.value); }, "-20", "19"},
  FieldSpec{"side_correction_tx_db", "TX antenna gain minus losses (dB)", "1",
    [](RunConfig& c, std::string_view t) { c.budget.side_correction_tx = Db{number("side_correction_tx_db", t)}; },
    [](const RunConfig& c) { return num(c.budget.side_correction_tx.value); }, "0", "2.5"},
  FieldSpec{"side_correction_rx_db", "RX antenna gain minus losses (dB)", "1",
    [](RunConfig& c, std::string_view t) { c.budget.side_correction_rx = Db{number("side_correction_rx_db", t)}; },
    [](const RunConfig& c) { return num(c.budget.side_correction_rx.value); }, "0", "-1.5"},
  FieldSpec{"noise_figure_db", "receiver noise figure (dB)", "10",
    [](RunConfig& c, std::string_view t) { c.budget.noise_figure = Db{number("noise_figure_db", t)}; },
    [](const RunConfig& c) { return num(c.budget.noise_figure.value); }, "5", "7"},
  FieldSpec{"min_success_rate_pct", "success rate that must be exceeded (%)", "90",
    [](RunConfig& c, std::string_view t) {
      const double v = number("min_success_rate_pct", t);
      if (!(v > 0.0 && v <= 100.0)) throw DomainError("min_success_rate_pct: must lie in (0, 100]");
      c.thresholds.min_success_rate_pct = v;
    },
    [](const RunConfig& c) { return num(c.thresholds.min_success_rate_pct); }, "95", "99"},
  FieldSpec{"rssi_floor_indoor_dbm", "indoor RSSI floor (dBm)", "-90",
    [](RunConfig& c, std::string_view t) { c.thresholds.rssi_floor_indoor = Dbm{number("rssi_floor_indoor_dbm", t)}; },
    [](const RunConfig& c) { return num(c.thresholds.rssi_floor_indoor.value); }, "-85", "-92"},
  FieldSpec{"rssi_floor_outdoor_dbm", "outdoor RSSI floor (dBm)", "-95",
    [](RunConfig& c, std::string_view t) { c.thresholds.rssi_floor_outdoor = Dbm{number("rssi_floor_outdoor_dbm", t)}; },
    [](const RunConfig& c) { return num(c.thresholds.rssi_floor_outdoor.value); }, "-93", "-97"},
  FieldSpec{"snr_floor_indoor_db", "indoor SNR floor (dB)", "11.5",
    [](RunConfig& c, std::string_view t) { c.thresholds.snr_floor_indoor = Db{number("snr_floor_indoor_db", t)}; },
    [](const RunConfig& c) { return num(c.thresholds.snr_floor_indoor.value); }, "11", "12"},
  FieldSpec{"snr_floor_outdoor_db", "outdoor SNR floor (dB)", "13.5",
    [](RunConfig& c, std::string_view t) { c.thresholds.snr_floor_outdoor = Db{number("snr_floor_outdoor_db", t)}; },
    [](const RunConfig& c) { return num(c.thresholds.snr_floor_outdoor.value); }, "12", "15"},
  FieldSpec{"environment", "indoor or outdoor (selects floors)", "indoor",
    [](RunConfig& c, std::string_view t) {
      if (t == "indoor") c.environment = Environment::kIndoor;
      else if (t == "outdoor") c.environment = Environment::kOutdoor;
      else throw DomainError(fmt::format("environment: expected indoor or outdoor, got '{}'", t));
    },
    [](const RunConfig& c) { return std::string(c.environment == Environment::kIndoor ? "indoor" : "outdoor"); },
    "outdoor", "indoor"},
  FieldSpec{"models", "comma-separated model list", "fspl",
    [](RunConfig& c, std::string_view t) { c.models = parse_model_list(t); },
    [](const RunConfig& c) { return format_model_list(c.models); }, "two-ray,okumura-hata", "inh-los"},
  FieldSpec{"h_tx_m", "TX / base-station antenna height (m)", "",
    [](RunConfig& c, std::string_view t) { c.h_tx_m = positive("h_tx_m", t); },
    [](const RunConfig& c) { return c.h_tx_m ? num(*c.h_tx_m) : std::string(); }, "10", "30"},
  FieldSpec{"h_rx_m", "RX / mobile antenna height (m)", "",
    [](RunConfig& c, std::string_view t) { c.h_rx_m = positive("h_rx_m", t); },
    [](const RunConfig& c) { return c.h_rx_m ? num(*c.h_rx_m) : std::string(); }, "1.5", "2"},
  FieldSpec{"antenna_gain", "combined TX-RX antenna gain for two-ray (linear)", "1",
    [](RunConfig& c, std::string_view t) { c.antenna_gain = positive("antenna_gain", t); },
    [](const RunConfig& c) { return num(c.antenna_gain); }, "2", "4"},
  FieldSpec{"city_size", "Hata city size: small-medium or large", "small-medium",
    [](RunConfig& c, std::string_view t) {
      if (t == "small-medium") c.hata.city = CitySize::kSmallMedium;
      else if (t == "large") c.hata.city = CitySize::kLarge;
      else throw DomainError(fmt::format("city_size: expected small-medium or large, got '{}'", t));
    },
    [](const RunConfig& c) { return std::string(c.hata.city == CitySize::kLarge ? "large" : "small-medium"); },
    "large", "small-medium"},
  FieldSpec{"area_class", "COST-231 area: urban or suburban", "urban",
    [](RunConfig& c, std::string_view t) {
      if (t == "urban") c.hata.area = AreaClass::kUrban;
      else if (t == "suburban") c.hata.area = AreaClass::kSuburbanOpen;
      else throw DomainError(fmt::format("area_class: expected urban or suburban, got '{}'", t));
    },
    [](const RunConfig& c) { return std::string(c.hata.area == AreaClass::kUrban ? "urban" : "suburban"); },
    "suburban", "urban"},
  FieldSpec{"output", "output file (stdout when empty)", "",
    [](RunConfig& c, std::string_view t) { c.output = std::string(t); },
    [](const RunConfig& c) { return c.output; }, "a.csv", "b.csv"},
  FieldSpec{"fixtures_dir", "directory holding reference fixture CSVs", DECTLINK_FIXTURE_DIR,
    [](RunConfig& c, std::string_view t) { c.fixtures_dir = std::string(t); },
    [](const RunConfig& c) { return c.fixtures_dir; }, "/tmp/fixtures-a", "/tmp/fixtures-b"},
};
// clang-format on

void apply_layer(RunConfig& c, const KeyValues& values, std::string_view layer) {
  for (const auto& [key, value] : values) {
    const FieldSpec* f = find_field(key);
    if (f == nullptr) throw DomainError(fmt::format("{}: unknown config key '{}'", layer, key));
    f->apply(c, value);
  }
}

}  // namespace

std::optional<propagation::AntennaGeometry> RunConfig::geometry() const {
  if (!h_tx_m || !h_rx_m) return std::nullopt;
  return propagation::AntennaGeometry(*h_tx_m, *h_rx_m, antenna_gain);
}

propagation::PathLossModel RunConfig::model(propagation::ModelKind kind) const {
  return propagation::PathLossModel::make(kind, frequency(), geometry(), hata);
}

std::span<const FieldSpec> fields() { return kFields; }

const FieldSpec* find_field(std::string_view key) {
  for (const FieldSpec& f : kFields) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

std::string flag_name(std::string_view key) {
  std::string out = "--";
  for (char ch : key) out += ch == '_' ? '-' : ch;
  return out;
}

RunConfig resolve(const KeyValues& file_values, const KeyValues& flag_values) {
  RunConfig c;
  for (const FieldSpec& f : kFields) {
    if (!f.default_text.empty()) f.apply(c, f.default_text);
  }
  apply_layer(c, file_values, "config file");
  apply_layer(c, flag_values, "command line");
  return c;
}

std::vector<propagation::ModelKind> parse_model_list(std::string_view text) {
  std::vector<propagation::ModelKind> out;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view name = trim(text.substr(0, comma));
    if (name == "all") {
      out.assign(std::begin(propagation::kAllModelKinds), std::end(propagation::kAllModelKinds));
    } else if (const auto kind = propagation::parse_model_kind(name)) {
      out.push_back(*kind);
    } else {
      throw DomainError(fmt::format("unknown model '{}' (expected fspl, inh-los, inf-los, two-ray, okumura-hata, "
                                    "cost231-hata or all)",
                                    name));
    }
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

std::string format_model_list(std::span<const propagation::ModelKind> models) {
  std::string out;
  for (const auto kind : models) {
    if (!out.empty()) out += ',';
    out += propagation::model_name(kind);
  }
  return out;
}

}  // namespace dectlink::config
