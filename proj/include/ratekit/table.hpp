#pragma once
// Uniform table emission: every analysis output renders to a delimited text
// grid (the bit-exact golden form), a structured JSON document, and a
// markdown table.

#include <string>
#include <vector>

namespace ratekit {

struct Table {
    std::string id; // file stem, e.g. "profile_diffs_3c"
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    Table& add_row(std::vector<std::string> row);
};

enum class TableFormat { Grid, Structured, Markdown };

TableFormat parse_table_format(const std::string& s); // grid|structured|markdown
const char* table_format_extension(TableFormat format); // "tsv"|"json"|"md"

std::string to_grid(const Table& table);       // tab-separated, trailing newline
std::string to_structured(const Table& table); // JSON document
std::string to_markdown(const Table& table);

std::string render_table(const Table& table, TableFormat format);

// Writes <dir>/<table.id>.<ext> for the given format.
void write_table(const Table& table, const std::string& dir, TableFormat format);

} // namespace ratekit
