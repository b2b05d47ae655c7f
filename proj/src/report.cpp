#include "dectlink/report.hpp"

#include <fmt/format.h>

#include <cmath>

#include "dectlink/errors.hpp"

namespace dectlink::report {
namespace {

using propagation::ModelKind;

constexpr ModelKind kCompared[] = {ModelKind::kFreeSpace, ModelKind::kTwoRay, ModelKind::kOkumuraHata,
                                   ModelKind::kCost231Hata};

std::optional<double> value(const std::optional<Db>& v) {
  return v ? std::optional<double>(v->value) : std::nullopt;
}

std::optional<double> reported(const fixtures::ScenarioFixture& f, ModelKind kind) {
  switch (kind) {
    case ModelKind::kFreeSpace:
      return value(f.fspl);
    case ModelKind::kTwoRay:
      return value(f.two_ray);
    case ModelKind::kOkumuraHata:
      return value(f.okumura_hata);
    case ModelKind::kCost231Hata:
      return value(f.cost231_hata);
    default:
      return std::nullopt;
  }
}

std::string fixed2(const std::optional<double>& v) { return v ? fmt::format("{:.2f}", *v) : std::string("-"); }

std::string column_stem(ModelKind kind) {
  std::string s(propagation::model_name(kind));
  for (char& c : s) {
    if (c == '-') c = '_';
  }
  return s;
}

std::string status(const ModelComparison& m, double tolerance) {
  if (!m.reported_db) return "not-reported";
  return m.exceeds(tolerance) ? "FLAG" : "ok";
}

}  // namespace

bool ModelComparison::exceeds(double tolerance_db) const {
  const auto d = delta_db();
  return d && std::abs(*d) > tolerance_db;
}

const ModelComparison& ReportRow::model(ModelKind kind) const {
  for (const auto& m : models) {
    if (m.kind == kind) return m;
  }
  throw DomainError("report row has no entry for model " + std::string(propagation::model_name(kind)));
}

std::vector<ReportRow> compare_outdoor_path_loss(const std::vector<fixtures::ScenarioFixture>& rows,
                                                 const ReportOptions& options) {
  std::vector<ReportRow> out;
  for (const auto& f : rows) {
    ReportRow row;
    row.scenario = f.name;
    row.distance = f.max_distance;
    row.height_difference_m = f.height_difference_m;
    row.empirical_pl_pcc_db = value(f.empirical_pl_pcc);
    row.empirical_pl_pdc_db = value(f.empirical_pl_pdc);
    for (ModelKind kind : kCompared) {
      const auto model =
          propagation::PathLossModel::make(kind, options.frequency, options.geometry, options.hata);
      const auto pl = model.evaluate(f.max_distance);
      row.models.push_back({kind, reported(f, kind), pl.loss.value, pl.flags});
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string format_report_csv(const std::vector<ReportRow>& rows, const ReportOptions& options) {
  std::string out = "scenario,distance_m,height_difference_m,empirical_pl_pcc_db,empirical_pl_pdc_db";
  for (ModelKind kind : kCompared) {
    const std::string s = column_stem(kind);
    out += fmt::format(",{0}_reported_db,{0}_computed_db,{0}_delta_db,{0}_status", s);
  }
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{},{:.2f},{},{},{}", r.scenario, r.distance.in_meters(), fixed2(r.height_difference_m),
                       fixed2(r.empirical_pl_pcc_db), fixed2(r.empirical_pl_pdc_db));
    for (const auto& m : r.models) {
      out += fmt::format(",{},{:.2f},{},{}", fixed2(m.reported_db), m.computed_db, fixed2(m.delta_db()),
                         status(m, options.tolerance_db));
    }
    out += '\n';
  }
  return out;
}

std::string format_report_table(const std::vector<ReportRow>& rows, const ReportOptions& options) {
  std::string out = fmt::format(
      "Outdoor path loss: reference vs computed at {:.0f} MHz (h_tx {:.2f} m, h_rx {:.2f} m, G {:.2f}; "
      "flag when |delta| > {:.2f} dB)\n",
      options.frequency.in_megahertz(), options.geometry.h_tx_m(), options.geometry.h_rx_m(),
      options.geometry.combined_gain(), options.tolerance_db);
  out += fmt::format("{:<20} {:>10} {:>9} {:>9}  {:<14} {:>9} {:>9} {:>8}  {}\n", "scenario", "distance_m",
                     "emp_pcc", "emp_pdc", "model", "reported", "computed", "delta", "status");
  for (const auto& r : rows) {
    bool first = true;
    for (const auto& m : r.models) {
      const std::string flags = m.validity.any() ? " [" + fmt::format("{}", fmt::join(m.validity.names(), ",")) + "]"
                                                 : std::string();
      out += fmt::format("{:<20} {:>10} {:>9} {:>9}  {:<14} {:>9} {:>9.2f} {:>8}  {}{}\n",
                         first ? r.scenario : "", first ? fmt::format("{:.2f}", r.distance.in_meters()) : "",
                         first ? fixed2(r.empirical_pl_pcc_db) : "", first ? fixed2(r.empirical_pl_pdc_db) : "",
                         propagation::model_name(m.kind), fixed2(m.reported_db), m.computed_db,
                         fixed2(m.delta_db()), status(m, options.tolerance_db), flags);
      first = false;
    }
  }
  return out;
}

}  // namespace dectlink::report
