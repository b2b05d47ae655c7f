#pragma once

// Data-parallel inner loops shared by the propagation, campaign and fitting
// modules. Every kernel has a scalar reference implementation (libm based)
// and, on x86-64, an AVX2/FMA variant. The dispatching entry points pick the
// variant at runtime from CPUID; DECTLINK_SIMD=scalar|avx2|auto overrides the
// choice at first use and set_active_isa() overrides it programmatically.
//
// The variants agree to a few ulp, not bit-for-bit: the AVX2 path uses
// polynomial log/exp and a 4-lane summation order.

#include <span>
#include <string_view>

namespace dectlink::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa) noexcept;
bool isa_supported(Isa isa) noexcept;

// Best ISA supported by this CPU and this build.
Isa detected_isa() noexcept;
Isa active_isa() noexcept;
// Throws DomainError when the ISA is not supported here.
void set_active_isa(Isa isa);

struct SumMinMax {
  double sum = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// out[i] = intercept + slope * log10(x[i]); x[i] must be positive and
// finite, out.size() == x.size().
void affine_log10(std::span<const double> x, double intercept, double slope, std::span<double> out);

// sum_i 10^((db[i] - shift) / 10). Terms below the double range flush to 0.
double sum_db_to_linear(std::span<const double> db, double shift);

// x must be non-empty.
SumMinMax sum_min_max(std::span<const double> x);

// sum_i (x[i] - center)^2
double sum_squared_deviation(std::span<const double> x, double center);

namespace scalar {
void affine_log10(std::span<const double> x, double intercept, double slope, std::span<double> out);
double sum_db_to_linear(std::span<const double> db, double shift);
SumMinMax sum_min_max(std::span<const double> x);
double sum_squared_deviation(std::span<const double> x, double center);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define DECTLINK_HAVE_AVX2_KERNELS 1
// Only call these when isa_supported(Isa::kAvx2).
namespace avx2 {
void affine_log10(std::span<const double> x, double intercept, double slope, std::span<double> out);
double sum_db_to_linear(std::span<const double> db, double shift);
SumMinMax sum_min_max(std::span<const double> x);
double sum_squared_deviation(std::span<const double> x, double center);
}  // namespace avx2
#endif

}  // namespace dectlink::kernels
