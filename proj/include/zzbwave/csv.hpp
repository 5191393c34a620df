#pragma once

#include <string>
#include <vector>

namespace zzbwave {

// Minimal CSV with a fixed header row; numeric cells are written with
// shortest-round-trip precision.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 when missing
};

std::string format_double(double v);

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

// Throws ArgumentError naming the first missing column.
void require_columns(const CsvTable& table, const std::vector<std::string>& names,
                     const std::string& context);

} // namespace zzbwave
