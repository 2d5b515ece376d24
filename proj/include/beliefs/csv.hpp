#pragma once

#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace beliefs::csv {

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// Shortest decimal form that round-trips to the same double.
std::string number(double v);

/// Writes one LF-terminated row.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws DataError when missing.
    std::size_t column(std::string_view name) const;
};

/// Parses RFC 4180 text with a header row. Throws DataError on unterminated
/// quotes or rows whose width differs from the header.
Table parse(std::string_view text);
Table read_file(const std::filesystem::path& path);

double to_double(std::string_view field, std::size_t line);
long long to_int(std::string_view field, std::size_t line);

}  // namespace beliefs::csv
