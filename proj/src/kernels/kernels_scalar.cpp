#include <algorithm>
#include <cmath>

#include "dectlink/kernels.hpp"

namespace dectlink::kernels::scalar {

void affine_log10(std::span<const double> x, double intercept, double slope, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = intercept + slope * std::log10(x[i]);
  }
}

double sum_db_to_linear(std::span<const double> db, double shift) {
  double sum = 0.0;
  for (double v : db) {
    sum += std::pow(10.0, (v - shift) / 10.0);
  }
  return sum;
}

SumMinMax sum_min_max(std::span<const double> x) {
  SumMinMax r{0.0, x[0], x[0]};
  for (double v : x) {
    r.sum += v;
    r.min = std::min(r.min, v);
    r.max = std::max(r.max, v);
  }
  return r;
}

double sum_squared_deviation(std::span<const double> x, double center) {
  double acc = 0.0;
  for (double v : x) {
    const double d = v - center;
    acc += d * d;
  }
  return acc;
}

}  // namespace dectlink::kernels::scalar
