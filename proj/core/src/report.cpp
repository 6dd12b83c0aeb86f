#include "csp/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "csp/error.hpp"

namespace csp {

std::string Provenance::now_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::uint64_t fnv1a_hash(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char ch : text) {
    hash ^= static_cast<unsigned char>(ch);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvBuilder::CsvBuilder(Provenance provenance, std::vector<std::string> schema)
    : provenance_(std::move(provenance)), schema_(std::move(schema)) {}

void CsvBuilder::add_row(std::vector<std::string> cells) {
  if (cells.size() != schema_.size()) {
    throw ShapeError("csv row has " + std::to_string(cells.size()) + " cells, schema has " +
                     std::to_string(schema_.size()));
  }
  rows_.push_back(std::move(cells));
}

namespace {

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  return line;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

char hash_hex_digit(std::uint64_t v) {
  return "0123456789abcdef"[v & 0xf];
}

std::string hash_hex(std::uint64_t v) {
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hash_hex_digit(v);
    v >>= 4;
  }
  return out;
}

} // namespace

std::string CsvBuilder::body() const {
  std::string out = join(schema_) + "\n";
  for (const auto& row : rows_) out += join(row) + "\n";
  return out;
}

std::string CsvBuilder::str() const {
  std::string out;
  out += "# tool: " + provenance_.tool + "\n";
  out += "# config_hash: " + hash_hex(provenance_.config_hash) + "\n";
  out += "# seed: " + std::to_string(provenance_.seed) + "\n";
  out += "# generated: " + provenance_.timestamp + "\n";
  out += body();
  return out;
}

CsvBuilder::Parsed CsvBuilder::parse(const std::string& text) {
  Parsed parsed;
  std::stringstream stream(text);
  std::string line;
  bool schema_seen = false;
  while (std::getline(stream, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::size_t colon = line.find(':');
      if (colon != std::string::npos) {
        std::string key = line.substr(1, colon - 1);
        std::string value = line.substr(colon + 1);
        const auto trim = [](std::string& s) {
          while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
          while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.pop_back();
        };
        trim(key);
        trim(value);
        parsed.header[key] = value;
      }
      continue;
    }
    if (!schema_seen) {
      parsed.schema = split(line);
      schema_seen = true;
      continue;
    }
    parsed.rows.push_back(split(line));
  }
  return parsed;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) {
    std::filesystem::create_directories(target.parent_path());
  }
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) {
      throw Error("cannot open " + tmp.string() + " for writing");
    }
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!file) {
      throw Error("short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw Error("cannot open " + path);
  }
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

std::string csv_body_of(const std::string& text) {
  std::string body;
  std::stringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line[0] == '#') continue;
    body += line + "\n";
  }
  return body;
}

} // namespace csp
