#pragma once

// Least-squares fitting of path-loss curves to (distance, PL) scatter.
//
// fit_log_distance() solves the log-distance model in closed form (it is
// linear in its parameters). fit_general() is a damped Gauss-Newton
// (Levenberg-Marquardt) engine with a central-difference Jacobian for any
// smooth parametric curve.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dectlink/units.hpp"

namespace dectlink::fitting {

struct FitPoint {
  Distance distance;
  double loss_db;
};

// PL(d) = pl0 + 10 * n * log10(d / d0)
struct LogDistanceModel {
  double pl0_db = 0.0;
  double exponent = 2.0;
  double d0_m = 1.0;

  double predict(Distance d) const;
};

struct FitSummary {
  double rmse_db = 0.0;
  // observed - predicted, in input order
  std::vector<double> residuals_db;
  std::size_t iterations = 0;
  bool converged = false;
  // Sum of squared residuals at the start and after every accepted step.
  std::vector<double> cost_history;
  // ||J^T r||_inf at the returned parameters.
  double gradient_norm = 0.0;
};

struct LogDistanceFit {
  LogDistanceModel model;
  FitSummary summary;
};

struct GeneralFit {
  std::vector<double> parameters;
  FitSummary summary;
};

// Must be reentrant: fits may run concurrently.
using CurveFn = std::function<double(std::span<const double> params, double distance_m)>;

struct NlsOptions {
  std::size_t max_iterations = 200;
  // converged iff ||J^T r||_inf <= ||J||_F * (gradient_tolerance * ||r||_2 + 16 eps ||y||_2),
  // i.e. the residual is numerically orthogonal to every Jacobian column
  // (y: observed losses; the eps term covers exact fits)
  double gradient_tolerance = 1e-8;
  // stop when ||step||_2 <= step_tolerance * (||params||_2 + step_tolerance)
  double step_tolerance = 1e-12;
  double initial_damping = 1e-3;
};

// Closed-form normal-equation solution. Throws DomainError with fewer than
// two points or when all distances are equal.
LogDistanceFit fit_log_distance(std::span<const FitPoint> points, double d0_m = 1.0);

GeneralFit fit_general(const CurveFn& curve, std::span<const double> initial, std::span<const FitPoint> points,
                       const NlsOptions& options = {});

// params = {pl0_db, exponent}
CurveFn log_distance_curve(double d0_m = 1.0);

// Row-major points.size() x params.size() matrix of d curve / d param,
// central differences with step max(1e-6, 1e-6 * |param|).
std::vector<double> finite_difference_jacobian(const CurveFn& curve, std::span<const double> params,
                                               std::span<const FitPoint> points);

}  // namespace dectlink::fitting
