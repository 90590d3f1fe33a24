#pragma once

#include <string>

#include "nlvortex/biphoton.hpp"
#include "nlvortex/optics.hpp"

namespace nlv {

// Bit-exact CSV emission: '#' metadata lines, data rows of comma-separated
// values printed with 17 significant digits, LF line endings.

std::string format_double(double x);  // %.17g

void write_map_csv(const std::string& path, const CoincidenceMap& map);
CoincidenceMap read_map_csv(const std::string& path);

void write_counts_csv(const std::string& path, const CountMap& counts);

void write_field_csv(const std::string& path, const FieldGrid& field);  // re,im column pairs
FieldGrid read_field_csv(const std::string& path);

void write_scan_csv(const std::string& path, const FringeScan& scan);
FringeScan read_scan_csv(const std::string& path);

// 16-bit binary portable graymap, values mapped linearly from [0, max].
void write_pgm16(const std::string& path, const std::vector<double>& values,
                 std::size_t rows, std::size_t cols);

}  // namespace nlv
