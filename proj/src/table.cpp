#include "ratekit/table.hpp"

#include "ratekit/error.hpp"
#include "ratekit/util.hpp"

#include <json.hpp>

#include <sstream>

using nlohmann::ordered_json;

namespace ratekit {

Table& Table::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) {
        fail(ErrorCode::Validation, "table '" + id + "': row width " +
                                        std::to_string(row.size()) + " != column count " +
                                        std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
    return *this;
}

TableFormat parse_table_format(const std::string& s) {
    if (s == "grid") return TableFormat::Grid;
    if (s == "structured") return TableFormat::Structured;
    if (s == "markdown") return TableFormat::Markdown;
    fail(ErrorCode::Validation, "unknown table format '" + s + "'");
}

const char* table_format_extension(TableFormat format) {
    switch (format) {
        case TableFormat::Grid: return "tsv";
        case TableFormat::Structured: return "json";
        case TableFormat::Markdown: return "md";
    }
    return "txt";
}

std::string to_grid(const Table& table) {
    std::ostringstream out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i > 0) out << '\t';
        out << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << '\t';
            out << row[i];
        }
        out << '\n';
    }
    return out.str();
}

std::string to_structured(const Table& table) {
    ordered_json j;
    j["id"] = table.id;
    j["columns"] = table.columns;
    j["rows"] = ordered_json::array();
    for (const auto& row : table.rows) j["rows"].push_back(row);
    return j.dump(2) + "\n";
}

std::string to_markdown(const Table& table) {
    std::ostringstream out;
    out << '|';
    for (const auto& col : table.columns) out << ' ' << col << " |";
    out << "\n|";
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << " --- |";
    out << '\n';
    for (const auto& row : table.rows) {
        out << '|';
        for (const auto& cell : row) out << ' ' << cell << " |";
        out << '\n';
    }
    return out.str();
}

std::string render_table(const Table& table, TableFormat format) {
    switch (format) {
        case TableFormat::Grid: return to_grid(table);
        case TableFormat::Structured: return to_structured(table);
        case TableFormat::Markdown: return to_markdown(table);
    }
    return {};
}

void write_table(const Table& table, const std::string& dir, TableFormat format) {
    write_text_file(dir + "/" + table.id + "." + table_format_extension(format),
                    render_table(table, format));
}

} // namespace ratekit
