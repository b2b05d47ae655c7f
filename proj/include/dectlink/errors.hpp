#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace dectlink {

// Invalid argument for a model, budget or statistic (non-positive distance,
// empty sample list, SR outside [0, 100], ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// The planning floor is violated even at the minimum search distance.
class ThresholdUnreachable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// No record in a location series satisfies the success-rate criterion.
class NoReliablePoint : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. line() is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(std::string message, std::size_t line = 0, std::string source = {})
      : std::runtime_error(render(message, line, source)),
        message_(std::move(message)),
        line_(line),
        source_(std::move(source)) {}

  // Same error attributed to a file.
  ParseError in(std::string source) const { return ParseError(message_, line_, std::move(source)); }

  std::size_t line() const noexcept { return line_; }
  const std::string& source() const noexcept { return source_; }

private:
  static std::string render(const std::string& message, std::size_t line, const std::string& source) {
    std::string out = source;
    if (line != 0) out += (out.empty() ? "line " : ":") + std::to_string(line);
    if (!out.empty()) out += ": ";
    return out + message;
  }

  std::string message_;
  std::size_t line_;
  std::string source_;
};

}  // namespace dectlink
