#pragma once

// CSV conventions shared by every output file: fixed header row, comma
// separator, '.' decimal point, 17 significant digits (round-trippable
// doubles). Cells are assembled into strings so parallel producers can hand
// finished blocks to a single ordered writer.

#include <cstdio>
#include <string>
#include <vector>

namespace nuqwalk {

inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_row(const std::vector<std::string>& cells) {
    std::string row;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += cells[i];
    }
    row += '\n';
    return row;
}

} // namespace nuqwalk
