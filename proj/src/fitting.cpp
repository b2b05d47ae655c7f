#include "dectlink/fitting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "dectlink/errors.hpp"
#include "dectlink/kernels.hpp"

namespace dectlink::fitting {
namespace {

constexpr double kMaxDamping = 1e16;
constexpr double kMinDamping = 1e-15;

void require_points(std::span<const FitPoint> points, std::size_t min_count) {
  if (points.size() < min_count) {
    throw DomainError("fit needs at least " + std::to_string(min_count) + " points");
  }
  for (const FitPoint& p : points) {
    if (!std::isfinite(p.loss_db)) throw DomainError("fit point has a non-finite path loss");
  }
}

Eigen::VectorXd residuals(const CurveFn& curve, std::span<const double> params, std::span<const FitPoint> points) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    r(static_cast<Eigen::Index>(i)) = points[i].loss_db - curve(params, points[i].distance.in_meters());
  }
  return r;
}

Eigen::MatrixXd jacobian(const CurveFn& curve, std::span<const double> params, std::span<const FitPoint> points) {
  const std::vector<double> flat = finite_difference_jacobian(curve, params, points);
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      flat.data(), static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(params.size()));
}

// residual_floor absorbs rounding in r when the data are fit exactly.
bool gradient_small(const Eigen::VectorXd& g, const Eigen::MatrixXd& jac, const Eigen::VectorXd& r,
                    double residual_floor, const NlsOptions& options) {
  return g.lpNorm<Eigen::Infinity>() <= jac.norm() * (options.gradient_tolerance * r.norm() + residual_floor);
}

void finish_summary(FitSummary& s, const Eigen::VectorXd& r) {
  s.residuals_db.assign(r.data(), r.data() + r.size());
  s.rmse_db = std::sqrt(r.squaredNorm() / static_cast<double>(r.size()));
}

}  // namespace

double LogDistanceModel::predict(Distance d) const {
  return pl0_db + 10.0 * exponent * std::log10(d.in_meters() / d0_m);
}

LogDistanceFit fit_log_distance(std::span<const FitPoint> points, double d0_m) {
  detail::require_positive(d0_m, "reference distance");
  require_points(points, 2);

  std::vector<double> d(points.size());
  std::transform(points.begin(), points.end(), d.begin(), [](const FitPoint& p) { return p.distance.in_meters(); });
  // x_i = 10*log10(d_i / d0)
  std::vector<double> x(points.size());
  kernels::affine_log10(d, -10.0 * std::log10(d0_m), 10.0, x);

  const double n = static_cast<double>(points.size());
  double x_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    x_mean += x[i];
    y_mean += points[i].loss_db;
  }
  x_mean /= n;
  y_mean /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double dx = x[i] - x_mean;
    sxx += dx * dx;
    sxy += dx * (points[i].loss_db - y_mean);
  }
  if (!(sxx > 0.0)) throw DomainError("degenerate fit input: all distances are equal");

  LogDistanceFit fit;
  fit.model.exponent = sxy / sxx;
  fit.model.pl0_db = y_mean - fit.model.exponent * x_mean;
  fit.model.d0_m = d0_m;

  Eigen::VectorXd r(static_cast<Eigen::Index>(points.size()));
  double gradient_pl0 = 0.0;
  double gradient_n = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double ri = points[i].loss_db - (fit.model.pl0_db + fit.model.exponent * x[i]);
    r(static_cast<Eigen::Index>(i)) = ri;
    gradient_pl0 += ri;
    gradient_n += ri * x[i];
  }
  finish_summary(fit.summary, r);
  fit.summary.iterations = 0;
  fit.summary.converged = true;
  fit.summary.cost_history = {r.squaredNorm()};
  fit.summary.gradient_norm = std::max(std::abs(gradient_pl0), std::abs(gradient_n));
  return fit;
}

CurveFn log_distance_curve(double d0_m) {
  detail::require_positive(d0_m, "reference distance");
  return [d0_m](std::span<const double> p, double distance_m) {
    return p[0] + 10.0 * p[1] * std::log10(distance_m / d0_m);
  };
}

std::vector<double> finite_difference_jacobian(const CurveFn& curve, std::span<const double> params,
                                               std::span<const FitPoint> points) {
  const std::size_t m = points.size();
  const std::size_t k = params.size();
  std::vector<double> jac(m * k);
  std::vector<double> probe(params.begin(), params.end());
  for (std::size_t j = 0; j < k; ++j) {
    const double h = std::max(1e-6, 1e-6 * std::abs(params[j]));
    for (std::size_t i = 0; i < m; ++i) {
      const double d = points[i].distance.in_meters();
      probe[j] = params[j] + h;
      const double up = curve(probe, d);
      probe[j] = params[j] - h;
      const double down = curve(probe, d);
      jac[i * k + j] = (up - down) / (2.0 * h);
    }
    probe[j] = params[j];
  }
  return jac;
}

GeneralFit fit_general(const CurveFn& curve, std::span<const double> initial, std::span<const FitPoint> points,
                       const NlsOptions& options) {
  if (initial.empty()) throw DomainError("fit needs at least one parameter");
  require_points(points, initial.size());

  std::vector<double> theta(initial.begin(), initial.end());
  Eigen::VectorXd r = residuals(curve, theta, points);
  double cost = r.squaredNorm();
  if (!std::isfinite(cost)) throw DomainError("curve is not finite at the initial guess");

  double observed_norm = 0.0;
  for (const FitPoint& p : points) observed_norm += p.loss_db * p.loss_db;
  const double residual_floor = 16.0 * DBL_EPSILON * std::sqrt(observed_norm);

  GeneralFit fit;
  fit.summary.cost_history.push_back(cost);
  double lambda = options.initial_damping;
  const auto k = static_cast<Eigen::Index>(theta.size());

  std::size_t iter = 0;
  while (iter < options.max_iterations) {
    ++iter;
    const Eigen::MatrixXd jac = jacobian(curve, theta, points);
    const Eigen::VectorXd g = jac.transpose() * r;
    if (gradient_small(g, jac, r, residual_floor, options)) break;

    const Eigen::MatrixXd a = jac.transpose() * jac;
    bool accepted = false;
    double step_norm = 0.0;
    std::vector<double> trial(theta.size());
    Eigen::VectorXd trial_r;
    double trial_cost = cost;
    while (lambda <= kMaxDamping) {
      Eigen::MatrixXd damped = a;
      for (Eigen::Index i = 0; i < k; ++i) damped(i, i) += lambda * std::max(a(i, i), DBL_EPSILON);
      const Eigen::VectorXd step = damped.ldlt().solve(g);
      for (Eigen::Index i = 0; i < k; ++i) trial[static_cast<std::size_t>(i)] = theta[static_cast<std::size_t>(i)] + step(i);
      step_norm = step.norm();
      trial_r = residuals(curve, trial, points);
      trial_cost = trial_r.squaredNorm();
      if (std::isfinite(trial_cost) && trial_cost <= cost) {
        accepted = true;
        lambda = std::max(lambda / 3.0, kMinDamping);
        break;
      }
      lambda *= 4.0;
    }
    if (!accepted) break;  // damping exhausted: no descent step left

    const double theta_norm = Eigen::Map<const Eigen::VectorXd>(theta.data(), k).norm();
    theta = trial;
    r = trial_r;
    cost = trial_cost;
    fit.summary.cost_history.push_back(cost);
    if (cost == 0.0 || step_norm <= options.step_tolerance * (theta_norm + options.step_tolerance)) break;
  }

  const Eigen::MatrixXd jac = jacobian(curve, theta, points);
  const Eigen::VectorXd g = jac.transpose() * r;
  fit.summary.gradient_norm = g.lpNorm<Eigen::Infinity>();
  fit.summary.converged = std::isfinite(cost) && gradient_small(g, jac, r, residual_floor, options);
  fit.summary.iterations = iter;
  finish_summary(fit.summary, r);
  fit.parameters = std::move(theta);
  return fit;
}

}  // namespace dectlink::fitting
