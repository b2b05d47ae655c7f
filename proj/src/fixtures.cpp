#include "dectlink/fixtures.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "dectlink/errors.hpp"
#include "dectlink/kv_text.hpp"

namespace dectlink::fixtures {
namespace {

class Table {
public:
  Table(std::vector<std::vector<std::string>> rows, std::string source) : source_(std::move(source)) {
    if (rows.empty()) throw ParseError("missing header row", 0, source_);
    for (std::size_t i = 0; i < rows.front().size(); ++i) columns_[rows.front()[i]] = i;
    rows_.assign(std::make_move_iterator(rows.begin() + 1), std::make_move_iterator(rows.end()));
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (rows_[r].size() != columns_.size()) {
        throw ParseError(fmt::format("data row {} has {} fields, header has {}", r + 1, rows_[r].size(),
                                     columns_.size()),
                         0, source_);
      }
    }
  }

  std::size_t size() const { return rows_.size(); }

  const std::string& text(std::size_t row, std::string_view column) const {
    const auto it = columns_.find(std::string(column));
    if (it == columns_.end()) throw ParseError(fmt::format("missing column '{}'", column), 0, source_);
    return rows_[row][it->second];
  }

  std::optional<double> optional_number(std::size_t row, std::string_view column) const {
    const std::string& t = text(row, column);
    if (t == "-") return std::nullopt;
    double v = 0.0;
    if (!parse_double(t, v) || !std::isfinite(v)) {
      throw ParseError(fmt::format("column '{}': bad number '{}'", column, t), 0, source_);
    }
    return v;
  }

  double number(std::size_t row, std::string_view column) const {
    const auto v = optional_number(row, column);
    if (!v) throw ParseError(fmt::format("column '{}' must not be '-'", column), 0, source_);
    return *v;
  }

  const std::string& source() const { return source_; }

private:
  std::string source_;
  std::map<std::string, std::size_t> columns_;
  std::vector<std::vector<std::string>> rows_;
};

Table read_table(const std::filesystem::path& dir, std::string_view name) {
  const auto path = dir / name;
  return Table(parse_csv(read_text_file(path)), path.string());
}

campaign::Propagation propagation(const Table& t, std::size_t row) {
  const std::string& v = t.text(row, "propagation");
  if (v == "LOS") return campaign::Propagation::kLos;
  if (v == "NLOS") return campaign::Propagation::kNlos;
  throw ParseError("propagation must be LOS or NLOS, got '" + v + "'", 0, t.source());
}

std::optional<Db> optional_db(const Table& t, std::size_t row, std::string_view column) {
  const auto v = t.optional_number(row, column);
  return v ? std::optional<Db>(Db{*v}) : std::nullopt;
}

std::vector<ScenarioFixture> max_distance_rows(const Table& t, link_budget::Environment setting) {
  std::vector<ScenarioFixture> out;
  for (std::size_t r = 0; r < t.size(); ++r) {
    ScenarioFixture f;
    f.name = t.text(r, "location");
    f.propagation = propagation(t, r);
    f.setting = setting;
    f.separated_by = t.text(r, "separated_by");
    f.max_distance = Distance::meters(t.number(r, "max_distance_m"));
    f.min_tx_power = Dbm{t.number(r, "min_tx_power_dbm")};
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;

    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (quoted) {
        if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else if (ch == '"') {
          quoted = false;
        } else {
          fields.back() += ch;
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        fields.emplace_back();
      } else {
        fields.back() += ch;
      }
    }
    if (quoted) throw ParseError("unterminated quoted field", line_no);
    rows.push_back(std::move(fields));
  }
  return rows;
}

FixtureSet load_fixtures(const std::filesystem::path& dir) {
  FixtureSet set;

  const Table params = read_table(dir, kParametersFile);
  for (std::size_t r = 0; r < params.size(); ++r) {
    set.parameters.push_back({params.text(r, "parameter"), params.text(r, "value")});
  }
  set.indoor = max_distance_rows(read_table(dir, kIndoorFile), link_budget::Environment::kIndoor);
  set.outdoor = max_distance_rows(read_table(dir, kOutdoorFile), link_budget::Environment::kOutdoor);

  const Table pl = read_table(dir, kOutdoorPathLossFile);
  for (std::size_t r = 0; r < pl.size(); ++r) {
    ScenarioFixture f;
    f.name = pl.text(r, "scenario");
    f.propagation = campaign::Propagation::kLos;
    f.setting = link_budget::Environment::kOutdoor;
    f.max_distance = Distance::meters(pl.number(r, "distance_m"));
    f.height_difference_m = pl.optional_number(r, "height_difference_m");
    f.empirical_pl_pcc = optional_db(pl, r, "empirical_pl_pcc_db");
    f.empirical_pl_pdc = optional_db(pl, r, "empirical_pl_pdc_db");
    f.fspl = optional_db(pl, r, "fspl_db");
    f.two_ray = optional_db(pl, r, "two_ray_db");
    f.okumura_hata = optional_db(pl, r, "okumura_hata_db");
    f.cost231_hata = optional_db(pl, r, "cost231_hata_db");
    set.outdoor_path_loss.push_back(std::move(f));
  }
  return set;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<ChecksumCheck> verify_checksums(const std::filesystem::path& dir) {
  const auto manifest = dir / kChecksumFile;
  const std::string text = read_text_file(manifest);
  std::vector<ChecksumCheck> out;
  std::size_t line_no = 0;
  std::string_view rest = text;
  while (!rest.empty()) {
    ++line_no;
    const auto nl = rest.find('\n');
    const std::string_view line = trim(rest.substr(0, nl));
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;

    const auto space = line.find(' ');
    if (space == std::string_view::npos) throw ParseError("expected '<hash>  <file>'", line_no, manifest.string());
    const std::string_view hex = line.substr(0, space);
    ChecksumCheck check;
    check.file = std::string(trim(line.substr(space)));
    const auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), check.expected, 16);
    if (ec != std::errc() || ptr != hex.data() + hex.size()) {
      throw ParseError("bad checksum '" + std::string(hex) + "'", line_no, manifest.string());
    }
    check.actual = fnv1a64(read_text_file(dir / check.file));
    out.push_back(std::move(check));
  }
  return out;
}

}  // namespace dectlink::fixtures
