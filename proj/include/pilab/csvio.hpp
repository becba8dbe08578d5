#pragma once
// Deterministic experiment output: shortest round-trip number formatting,
// RFC-4180 cells, FNV-1a config hashes, and key = value sidecars. No
// timestamps anywhere — identical configs must yield bit-identical bytes.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pilab {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
};

// Shortest representation that parses back to the same double; '.' decimal
// point regardless of locale.
std::string format_double(double v);

std::string csv_escape(const std::string& cell);
std::string to_csv(const Table& t);

uint64_t fnv1a(const std::string& bytes);
std::string config_hash(const std::map<std::string, std::string>& cfg);

void write_file(const std::string& path, const std::string& bytes);

}  // namespace pilab
