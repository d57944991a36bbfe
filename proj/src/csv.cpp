#include "fermiblock/csv.hpp"

#include <cstdio>
#include <fstream>

namespace fermiblock {

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header.size())
        throw std::invalid_argument("CsvTable: row width does not match header");
    rows.push_back(std::move(row));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& field) {
    const bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_to_string(const CsvTable& table) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (size_t k = 0; k < cells.size(); ++k) {
            if (k) out += ',';
            out += csv_quote(cells[k]);
        }
        out += '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
    return out;
}

void emit_csv(const CsvTable& table, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("emit_csv: cannot write " + path);
    f << csv_to_string(table);
    if (!f) throw std::runtime_error("emit_csv: write failed for " + path);
}

}  // namespace fermiblock
