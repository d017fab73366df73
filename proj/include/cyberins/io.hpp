/**
 * @file io.hpp
 * @brief Small file helpers shared by the report writers.
 */

#pragma once

#include <filesystem>
#include <string>

namespace cyberins {

/// 12 significant digits, '.' decimal point, locale independent.
std::string format_csv_number(double v);

/// Write to "<path>.tmp" then rename over path.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace cyberins
