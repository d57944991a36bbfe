#pragma once

#include <string>
#include <vector>

#include "fermiblock/types.hpp"

namespace fermiblock {

/// Rows sharing one header schema; emitted in insertion (sweep) order.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
};

/// Shortest round-trip decimal representation; identical bytes for
/// identical doubles.
std::string format_double(double v);

/// RFC-4180-style quoting (quotes around fields containing comma, quote or
/// newline; embedded quotes doubled).
std::string csv_quote(const std::string& field);

void emit_csv(const CsvTable& table, const std::string& path);
std::string csv_to_string(const CsvTable& table);

}  // namespace fermiblock
