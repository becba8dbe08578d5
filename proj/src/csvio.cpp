#include "pilab/csvio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pilab {

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != header.size())
    throw std::invalid_argument("table row width " + std::to_string(cells.size()) +
                                " does not match header width " +
                                std::to_string(header.size()));
  rows.push_back(std::move(cells));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& cell) {
  bool needs = false;
  for (char c : cell)
    if (c == ',' || c == '"' || c == '\n' || c == '\r') { needs = true; break; }
  if (!needs) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string to_csv(const Table& t) {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(cells[i]);
    }
    out += '\n';
  };
  emit(t.header);
  for (const auto& r : t.rows) emit(r);
  return out;
}

uint64_t fnv1a(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const std::map<std::string, std::string>& cfg) {
  std::string canon;
  for (const auto& [k, v] : cfg) {  // std::map iterates in sorted key order
    canon += k;
    canon += '=';
    canon += v;
    canon += '\n';
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(canon)));
  return buf;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace pilab
