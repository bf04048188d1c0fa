#pragma once

// Minimal CSV tables: header row, LF line endings, numbers as %.12g.

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace ramanforge::csv {

using Cell = std::variant<double, long, std::string>;

std::string format_number(double value);

class Table {
public:
    explicit Table(std::vector<std::string> header);

    // Throws ConfigurationError when the row width differs from the header.
    void add_row(std::vector<Cell> row);

    const std::vector<std::string>& header() const noexcept { return header_; }
    std::size_t size() const noexcept { return rows_.size(); }
    std::string to_string() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Creates parent directories. Throws IoError on failure.
void write_file(const std::filesystem::path& path, const std::string& content);
void write_table(const std::filesystem::path& path, const Table& table);

struct ParsedTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column by header name, parsed as doubles. Throws ConfigurationError for a missing column.
    std::vector<double> numeric_column(const std::string& name) const;
};

// Plain comma splitting (no quoting). Throws IoError when the file cannot be read.
ParsedTable read_table(const std::filesystem::path& path);

}  // namespace ramanforge::csv
