#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mixedframe::csv {

/// Shortest representation that round-trips to the same double (at most 17
/// significant digits).
std::string format(double value);

/// Column-oriented CSV: header row, then one row per index. LF line endings.
std::string render(std::span<const std::string> header,
                   std::span<const std::vector<double>> columns);

/// Writes to a sibling temporary file and renames it over the target.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace mixedframe::csv
