#pragma once

// Strong types for the quantities that cross module boundaries. Public
// inputs are SI (metres, hertz); each propagation model converts to its
// native units internally.

#include <cmath>
#include <compare>
#include <string>

#include "dectlink/errors.hpp"

namespace dectlink {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

namespace detail {
inline double require_positive(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
  return v;
}
}  // namespace detail

class Frequency {
public:
  static Frequency hertz(double hz) { return Frequency(detail::require_positive(hz, "frequency")); }
  static Frequency megahertz(double mhz) { return hertz(mhz * 1e6); }
  static Frequency gigahertz(double ghz) { return hertz(ghz * 1e9); }

  double in_hertz() const noexcept { return hz_; }
  double in_megahertz() const noexcept { return hz_ / 1e6; }
  double in_gigahertz() const noexcept { return hz_ / 1e9; }

  double wavelength_m() const noexcept { return kSpeedOfLight / hz_; }

  auto operator<=>(const Frequency&) const = default;

private:
  explicit Frequency(double hz) : hz_(hz) {}
  double hz_;
};

class Distance {
public:
  static Distance meters(double m) { return Distance(detail::require_positive(m, "distance")); }
  static Distance kilometers(double km) { return meters(km * 1e3); }

  double in_meters() const noexcept { return m_; }
  double in_kilometers() const noexcept { return m_ / 1e3; }

  auto operator<=>(const Distance&) const = default;

private:
  explicit Distance(double m) : m_(m) {}
  double m_;
};

// Power ratio in dB (gains, losses, path loss, SNR).
struct Db {
  double value = 0.0;
  auto operator<=>(const Db&) const = default;
};

// Absolute power in dBm.
struct Dbm {
  double value = 0.0;
  auto operator<=>(const Dbm&) const = default;
};

constexpr Db operator+(Db a, Db b) { return {a.value + b.value}; }
constexpr Db operator-(Db a, Db b) { return {a.value - b.value}; }
constexpr Db operator-(Db a) { return {-a.value}; }
constexpr Dbm operator+(Dbm p, Db g) { return {p.value + g.value}; }
constexpr Dbm operator-(Dbm p, Db l) { return {p.value - l.value}; }
constexpr Db operator-(Dbm a, Dbm b) { return {a.value - b.value}; }

}  // namespace dectlink
