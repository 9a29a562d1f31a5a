#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mimix/core.hpp"

namespace mimix::io {

/// A numeric CSV file: header row of column names, then one row per sample.
struct CsvTable {
    std::vector<std::string> header;
    Table values;
};

/// 17 significant digits with a '.' decimal point; every double round-trips.
std::string format_double(double v);

/// Locale-independent parse of a whole cell. Throws InputError on garbage.
double parse_double(std::string_view cell);

CsvTable parse_csv(std::string_view text, const std::string& source = "<memory>");
CsvTable read_csv(const std::filesystem::path& path);

std::string to_csv(const std::vector<std::string>& header, const Table& values);

/// Writes via a temporary sibling file and rename. Throws InputError when the
/// destination is not writable.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Parses "0-4,7,9-10" into an ordered index list.
std::vector<std::size_t> parse_column_spec(const std::string& spec);

/// Formats indices back into compact ranges ("0-4,7").
std::string format_column_spec(const std::vector<std::size_t>& cols);

/// Hex SHA-256 of the file's bytes.
std::string file_digest(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace mimix::io
