#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "csp/report.hpp"
#include "csp/version.hpp"

using namespace csp;

namespace {

CsvBuilder sample_builder() {
  Provenance prov;
  prov.tool = std::string(kToolName) + " " + std::string(kVersion);
  prov.config_hash = fnv1a_hash("suite=demo\nseed=42\n");
  prov.seed = 42;
  prov.timestamp = "2026-01-01T00:00:00Z";
  CsvBuilder builder(prov, {"step", "value"});
  builder.add_row({"0", format_double(1.5)});
  builder.add_row({"1", format_double(-0.25)});
  return builder;
}

} // namespace

TEST_CASE("csv reports round-trip through the parser") {
  const CsvBuilder builder = sample_builder();
  const CsvBuilder::Parsed parsed = CsvBuilder::parse(builder.str());
  CHECK(parsed.header.at("seed") == "42");
  CHECK(parsed.header.count("tool") == 1);
  CHECK(parsed.header.count("config_hash") == 1);
  CHECK(parsed.header.count("generated") == 1);
  REQUIRE(parsed.schema == std::vector<std::string>{"step", "value"});
  REQUIRE(parsed.rows.size() == 2);
  CHECK(parsed.rows[0] == std::vector<std::string>{"0", "1.5"});
  CHECK(parsed.rows[1] == std::vector<std::string>{"1", "-0.25"});
}

TEST_CASE("csv body excludes the provenance header") {
  const CsvBuilder builder = sample_builder();
  CHECK(builder.body() == "step,value\n0,1.5\n1,-0.25\n");
  CHECK(csv_body_of(builder.str()) == builder.body());
}

TEST_CASE("format_double survives value round-trips") {
  for (const double v : {0.1, 1.0 / 3.0, -2.5e-13, 1e17, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("fnv1a hash is stable and input-sensitive") {
  CHECK(fnv1a_hash("abc") == fnv1a_hash("abc"));
  CHECK(fnv1a_hash("abc") != fnv1a_hash("abd"));
}

TEST_CASE("atomic writes leave no temp file behind") {
  const std::string path = "report_atomic_test.csv";
  write_file_atomic(path, "hello\n");
  CHECK(read_file(path) == "hello\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  write_file_atomic(path, "replaced\n");
  CHECK(read_file(path) == "replaced\n");
  std::remove(path.c_str());
}
