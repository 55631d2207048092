#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace satqkd::io {

/// Six significant digits, '.' decimal separator, independent of locale.
std::string format_number(double value);

/// Rounds to the value format_number would print.
double round_sig6(double value);

/// Minimal CSV builder: header row, '\n' line endings, numbers via format_number.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::initializer_list<double> values);
    void add_row(const std::vector<double>& values);

    std::string str() const;
    std::size_t rows() const noexcept { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
};

/// Writes via a temporary sibling file and rename, so readers never observe
/// a partially written artifact.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace satqkd::io
