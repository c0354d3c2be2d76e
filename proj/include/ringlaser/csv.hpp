// deterministic CSV output

#pragma once

#include <string>
#include <vector>

namespace ringlaser {

// Shortest round-trip is not used: always 17 significant digits, so the text
// only depends on the bits of the value.
std::string format_double(double value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(const std::string& name) const; // throws invalid_parameter
    std::vector<double> column(const std::string& name) const; // non-numeric cells -> nan
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

} // namespace ringlaser
