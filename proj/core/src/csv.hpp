#pragma once

// Internal CSV helpers shared by the dataset and report writers.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace orthomap::detail {

/// 17 significant digits, enough to round-trip any double.
void append_double(std::string& out, double v);
std::string format_double(double v);

std::vector<std::string_view> split_fields(std::string_view line);

struct CsvTable {
    std::vector<std::string> header;
    Eigen::MatrixXd values;
};

/// Header line plus rows of numbers. `what` names the file in diagnostics.
CsvTable read_numeric_csv(const std::filesystem::path& path, std::string_view what);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace orthomap::detail
