#include "robagg/text.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace robagg {

std::string fmt_double(double v, int significant) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, significant);
  return std::string(buf, res.ptr);
}

std::string fmt_vector(const std::vector<double>& v, int significant) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt_double(v[i], significant);
  }
  return out;
}

std::vector<std::vector<double>> parse_vectors_text(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
      if (p >= end) break;
      double v = 0;
      auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc{})
        throw std::runtime_error("parse error at line " +
                                 std::to_string(lineno) + ": bad number");
      p = res.ptr;
      row.push_back(v);
    }
    if (row.empty()) continue;  // blank line
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("parse error at line " + std::to_string(lineno) +
                               ": expected " +
                               std::to_string(rows.front().size()) +
                               " fields, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<double>> load_vectors_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_vectors_text(ss.str());
}

}  // namespace robagg
