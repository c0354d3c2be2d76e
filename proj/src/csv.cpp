#include "ringlaser/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ringlaser/error.hpp"

namespace ringlaser {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific, 16);
    if (ec != std::errc()) fail(ErrorKind::invalid_parameter, "cannot format value");
    return std::string(buf, ptr);
}

std::size_t CsvTable::column_index(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k] == name) return k;
    }
    fail(ErrorKind::invalid_parameter, "no column named '" + name + "'");
}

std::vector<double> CsvTable::column(const std::string& name) const {
    const std::size_t k = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        double value = std::numeric_limits<double>::quiet_NaN();
        if (k < row.size()) {
            const std::string& cell = row[k];
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (ec != std::errc() || ptr != cell.data() + cell.size()) {
                value = std::numeric_limits<double>::quiet_NaN();
            }
        }
        out.push_back(value);
    }
    return out;
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::invalid_config, "cannot write '" + path + "'");
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) out << ',';
            out << cells[k];
        }
        out << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) {
            fail(ErrorKind::invalid_parameter, "row width does not match the header");
        }
        line(row);
    }
    if (!out) fail(ErrorKind::invalid_config, "write to '" + path + "' failed");
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::invalid_config, "cannot open '" + path + "'");
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    if (first) fail(ErrorKind::invalid_config, "'" + path + "' has no header");
    return table;
}

} // namespace ringlaser
