#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace rbit {

/// 17 significant digits, locale independent.
std::string format_real(double x);

using CsvCell = std::variant<std::int64_t, std::uint64_t, double, std::string>;

/// Comma-separated output with a header row; rows must match the header width.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> header);

    void row(const std::vector<CsvCell>& cells);
    std::size_t rows() const noexcept { return rows_; }

private:
    std::ostream& out_;
    std::size_t width_;
    std::size_t rows_ = 0;
};

} // namespace rbit
