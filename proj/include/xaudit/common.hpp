// Shared error types and small utilities used across the library.
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace xaudit {

/// Malformed or unusable input data (bad CSV, degenerate dataset, ...).
/// Distinct from std::invalid_argument, which we reserve for caller errors
/// (bad parameter values), so the CLI can map them to different exit codes.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Printf-style %.17g formatting: enough digits to round-trip any double.
std::string format_g17(double v);

/// Shortest %g representation that still parses back to exactly `v`
/// (e.g. 0.3 -> "0.3", not "0.29999999999999999"). For human-facing text;
/// CSV cells and JSON keep their own exact encodings.
std::string format_compact(double v);

}  // namespace xaudit
