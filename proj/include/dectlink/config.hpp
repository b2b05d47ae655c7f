#pragma once

// Run configuration for the CLI. Resolution order per field: command-line
// flag, then config file, then the documented default. The config file is
// flat key=value text; its path comes from --config or DECTLINK_CONFIG.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dectlink/kv_text.hpp"
#include "dectlink/link_budget.hpp"
#include "dectlink/propagation.hpp"

namespace dectlink::config {

inline constexpr std::string_view kConfigEnvVar = "DECTLINK_CONFIG";

struct RunConfig {
  double frequency_hz = 1.899e9;
  link_budget::LinkBudget budget;
  link_budget::ReliabilityThresholds thresholds;
  link_budget::Environment environment = link_budget::Environment::kIndoor;

  std::vector<propagation::ModelKind> models{propagation::ModelKind::kFreeSpace};
  std::optional<double> h_tx_m;
  std::optional<double> h_rx_m;
  double antenna_gain = 1.0;
  propagation::HataEnvironment hata;

  std::string output;
  std::string fixtures_dir;

  Frequency frequency() const { return Frequency::hertz(frequency_hz); }
  // nullopt unless both heights are set.
  std::optional<propagation::AntennaGeometry> geometry() const;
  propagation::PathLossModel model(propagation::ModelKind kind) const;
};

struct FieldSpec {
  std::string_view key;
  std::string_view help;
  // Rendered default; empty when the field has none.
  std::string_view default_text;
  // Parses text into the field; throws DomainError on bad input.
  void (*apply)(RunConfig&, std::string_view);
  std::string (*render)(const RunConfig&);
  // Two distinct valid values, used by the precedence tests.
  std::string_view sample_a;
  std::string_view sample_b;
};

std::span<const FieldSpec> fields();
const FieldSpec* find_field(std::string_view key);

// "frequency_hz" -> "--frequency-hz"
std::string flag_name(std::string_view key);

// Applies file values over defaults, then flag values over those. Unknown
// keys in either layer throw DomainError.
RunConfig resolve(const KeyValues& file_values, const KeyValues& flag_values);

std::vector<propagation::ModelKind> parse_model_list(std::string_view text);
std::string format_model_list(std::span<const propagation::ModelKind> models);

}  // namespace dectlink::config
