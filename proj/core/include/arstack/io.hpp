#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace arstack {

/// Writes `bytes` to a sibling temp file and renames it over `path`.
/// Creates parent directories as needed.  Throws WriteError.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

/// Whole-file read.  Throws LoadError.
std::string read_file(const std::filesystem::path& path);

/// printf-style formatting into a std::string.
std::string format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

/// Minimal CSV reader: splits on commas, no quoting.  The first row is the
/// header and is checked against `expected_header`.  Blank lines are skipped.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const std::vector<std::string>& expected_header);

/// Parses a full-string double; throws InvalidData naming `what` otherwise.
double parse_double(const std::string& text, const std::string& what);

}  // namespace arstack
