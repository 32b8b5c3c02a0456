#pragma once

#include <string>
#include <vector>

namespace dhf::csv {

// Shortest representation that round-trips the exact double (std::to_chars).
std::string format_double(double v);

double parse_double(const std::string& s);

std::vector<std::string> split_line(const std::string& line);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Table read_file(const std::string& path);

void write_file(const std::string& path, const Table& table);

} // namespace dhf::csv
