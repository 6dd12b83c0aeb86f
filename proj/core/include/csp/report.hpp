#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace csp {

/// Run metadata emitted at the top of every report. The timestamp lives only
/// here; report bodies depend solely on config and seed.
struct Provenance {
  std::string tool;            ///< "csplab 0.1.0"
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string timestamp;       ///< ISO-8601 UTC, filled by now_utc()

  static std::string now_utc();
};

std::uint64_t fnv1a_hash(std::string_view text);

/// Shortest round-trip decimal formatting ("%.17g").
std::string format_double(double v);

/// CSV with '#'-prefixed provenance header lines, one schema row, then data
/// rows. body() excludes the header and is byte-stable for a fixed config.
class CsvBuilder {
 public:
  CsvBuilder(Provenance provenance, std::vector<std::string> schema);

  void add_row(std::vector<std::string> cells);

  std::string str() const;  ///< header + body
  std::string body() const; ///< schema row + data rows

  struct Parsed {
    std::map<std::string, std::string> header;
    std::vector<std::string> schema;
    std::vector<std::vector<std::string>> rows;
  };

  /// Parses header/schema/rows back out; the test suite round-trips reports
  /// through this.
  static Parsed parse(const std::string& text);

 private:
  Provenance provenance_;
  std::vector<std::string> schema_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes via a temp file in the same directory plus an atomic rename.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// Drops '#'-prefixed header lines; what determinism guarantees cover.
std::string csv_body_of(const std::string& text);

} // namespace csp
