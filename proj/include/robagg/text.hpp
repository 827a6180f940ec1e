#pragma once

#include <string>
#include <vector>

namespace robagg {

// Locale-independent decimal formatting, %.17g style by default so that
// doubles round-trip. Never emits a locale comma.
std::string fmt_double(double v, int significant = 17);

// One vector per line, coordinates space-separated.
std::string fmt_vector(const std::vector<double>& v, int significant = 17);

// Parses a vector file (one vector per line, space-separated decimals,
// blank lines ignored). Throws std::runtime_error with the 1-based line
// number on ragged rows or unparsable fields.
std::vector<std::vector<double>> parse_vectors_text(const std::string& text);
std::vector<std::vector<double>> load_vectors_file(const std::string& path);

}  // namespace robagg
