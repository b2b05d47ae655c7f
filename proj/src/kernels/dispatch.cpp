#include <atomic>
#include <cstdlib>
#include <string>

#include "dectlink/errors.hpp"
#include "dectlink/kernels.hpp"

namespace dectlink::kernels {
namespace {

Isa initial_isa() noexcept {
  const char* env = std::getenv("DECTLINK_SIMD");
  if (env != nullptr) {
    const std::string_view v(env);
    if (v == "scalar") return Isa::kScalar;
    if (v == "avx2" && isa_supported(Isa::kAvx2)) return Isa::kAvx2;
  }
  return detected_isa();
}

std::atomic<Isa>& active() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(DECTLINK_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() noexcept { return isa_supported(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar; }

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw DomainError("kernel ISA '" + std::string(isa_name(isa)) + "' is not supported on this CPU");
  }
  active().store(isa, std::memory_order_relaxed);
}

#if defined(DECTLINK_HAVE_AVX2_KERNELS)
#define DECTLINK_DISPATCH(fn, ...)                 \
  (active_isa() == Isa::kAvx2 ? avx2::fn(__VA_ARGS__) \
                              : scalar::fn(__VA_ARGS__))
#else
#define DECTLINK_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void affine_log10(std::span<const double> x, double intercept, double slope, std::span<double> out) {
  DECTLINK_DISPATCH(affine_log10, x, intercept, slope, out);
}

double sum_db_to_linear(std::span<const double> db, double shift) {
  return DECTLINK_DISPATCH(sum_db_to_linear, db, shift);
}

SumMinMax sum_min_max(std::span<const double> x) { return DECTLINK_DISPATCH(sum_min_max, x); }

double sum_squared_deviation(std::span<const double> x, double center) {
  return DECTLINK_DISPATCH(sum_squared_deviation, x, center);
}

}  // namespace dectlink::kernels
