// SVG heatmap of a long-format CSV grid (x, y, value columns)

#pragma once

#include <string>

#include "ringlaser/csv.hpp"

namespace ringlaser {

struct HeatmapOptions {
    std::string x_column{"x"};
    std::string y_column{"y"};
    std::string value_column{"value"};
    bool log_scale{false}; // non-positive values are drawn as missing
    std::string title;
    int cell_pixels{4};
};

std::string render_heatmap(const CsvTable& table, const HeatmapOptions& options);

} // namespace ringlaser
