#pragma once

// Reference scenario data shipped as CSV files under data/fixtures/. Each
// file starts with '#' provenance comments, then a header row. Fields that
// contain commas are double-quoted. "-" marks a value the source does not
// report.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dectlink/campaign.hpp"
#include "dectlink/link_budget.hpp"
#include "dectlink/units.hpp"

namespace dectlink::fixtures {

inline constexpr std::string_view kParametersFile = "measurement_parameters.csv";
inline constexpr std::string_view kIndoorFile = "indoor_max_distance.csv";
inline constexpr std::string_view kOutdoorFile = "outdoor_max_distance.csv";
inline constexpr std::string_view kOutdoorPathLossFile = "outdoor_path_loss.csv";
inline constexpr std::string_view kChecksumFile = "CHECKSUMS";

struct Parameter {
  std::string name;
  std::string value;
};

struct ScenarioFixture {
  std::string name;
  campaign::Propagation propagation = campaign::Propagation::kLos;
  link_budget::Environment setting = link_budget::Environment::kIndoor;
  std::string separated_by;
  Distance max_distance = Distance::meters(1.0);
  std::optional<Dbm> min_tx_power;
  std::optional<double> height_difference_m;
  std::optional<Db> empirical_pl_pcc;
  std::optional<Db> empirical_pl_pdc;
  std::optional<Db> fspl;
  std::optional<Db> two_ray;
  std::optional<Db> okumura_hata;
  std::optional<Db> cost231_hata;
};

struct FixtureSet {
  std::vector<Parameter> parameters;
  std::vector<ScenarioFixture> indoor;
  std::vector<ScenarioFixture> outdoor;
  std::vector<ScenarioFixture> outdoor_path_loss;
};

// Rows of a CSV document; '#' comment lines and blank lines skipped.
// Throws ParseError on an unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

FixtureSet load_fixtures(const std::filesystem::path& dir);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

struct ChecksumCheck {
  std::string file;
  std::uint64_t expected = 0;
  std::uint64_t actual = 0;
  bool ok() const noexcept { return expected == actual; }
};

// Verifies every file listed in <dir>/CHECKSUMS ("<16 hex digits>  <name>").
std::vector<ChecksumCheck> verify_checksums(const std::filesystem::path& dir);

}  // namespace dectlink::fixtures
