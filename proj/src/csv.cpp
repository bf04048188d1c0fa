#include "ramanforge/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ramanforge/errors.hpp"

namespace ramanforge::csv {

namespace {

std::string render(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
    return std::get<std::string>(c);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != header_.size()) throw ConfigurationError("csv: row width differs from header");
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (const auto& c : row) cells.push_back(render(c));
    rows_.push_back(std::move(cells));
}

std::string Table::to_string() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

void write_table(const std::filesystem::path& path, const Table& table) { write_file(path, table.to_string()); }

std::vector<double> ParsedTable::numeric_column(const std::string& name) const {
    std::size_t idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) idx = i;
    }
    if (idx == header.size()) throw ConfigurationError("csv: no column named '" + name + "'");
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(std::stod(r.at(idx)));
    return out;
}

ParsedTable read_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    ParsedTable t;
    std::string line;
    if (!std::getline(in, line)) throw IoError(path.string() + " is empty");
    t.header = split(line);
    while (std::getline(in, line)) {
        if (!line.empty()) t.rows.push_back(split(line));
    }
    return t;
}

}  // namespace ramanforge::csv
