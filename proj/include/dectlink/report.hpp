#pragma once

// Side-by-side comparison of reference outdoor path-loss rows with freshly
// computed model values.

#include <optional>
#include <string>
#include <vector>

#include "dectlink/fixtures.hpp"
#include "dectlink/propagation.hpp"

namespace dectlink::report {

struct ReportOptions {
  Frequency frequency = Frequency::megahertz(1899.0);
  // Theory-curve geometry: 10 m TX, 1.5 m RX, unity gain.
  propagation::AntennaGeometry geometry{10.0, 1.5, 1.0};
  propagation::HataEnvironment hata;
  double tolerance_db = 0.25;
};

struct ModelComparison {
  propagation::ModelKind kind;
  std::optional<double> reported_db;
  double computed_db = 0.0;
  propagation::ValidityFlags validity;

  // computed - reported
  std::optional<double> delta_db() const {
    return reported_db ? std::optional<double>(computed_db - *reported_db) : std::nullopt;
  }
  bool exceeds(double tolerance_db) const;
};

struct ReportRow {
  std::string scenario;
  Distance distance = Distance::meters(1.0);
  std::optional<double> height_difference_m;
  std::optional<double> empirical_pl_pcc_db;
  std::optional<double> empirical_pl_pdc_db;
  std::vector<ModelComparison> models;  // fspl, two-ray, okumura-hata, cost231-hata

  const ModelComparison& model(propagation::ModelKind kind) const;
};

std::vector<ReportRow> compare_outdoor_path_loss(const std::vector<fixtures::ScenarioFixture>& rows,
                                                 const ReportOptions& options);

std::string format_report_csv(const std::vector<ReportRow>& rows, const ReportOptions& options);
std::string format_report_table(const std::vector<ReportRow>& rows, const ReportOptions& options);

}  // namespace dectlink::report
