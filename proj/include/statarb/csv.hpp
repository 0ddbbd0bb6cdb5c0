// csv.hpp
// Minimal strict CSV I/O: comma-delimited, no quoting, '.' decimal separator.

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "statarb/errors.hpp"

namespace statarb {

// Reads a CSV file with a mandatory header row. Field counts are enforced per
// row; parse failures report the offending line number.
class CsvReader {
public:
    CsvReader(const std::string& path, const std::vector<std::string>& expected_header);

    // Advances to the next data row; returns false at end of file.
    bool next();

    const std::vector<std::string>& fields() const { return fields_; }
    const std::string& field(size_t i) const { return fields_[i]; }
    size_t line_number() const { return line_number_; }
    const std::string& path() const { return path_; }

    double parse_double(size_t i) const;
    long long parse_int(size_t i) const;

    [[noreturn]] void fail(const std::string& reason) const;

private:
    std::string path_;
    std::ifstream in_;
    std::vector<std::string> fields_;
    size_t n_cols_ = 0;
    size_t line_number_ = 0;
    std::string line_;
};

void split_csv_line(const std::string& line, std::vector<std::string>& out);

// Fixed-point formatting used by all report writers ("%.*f").
std::string format_fixed(double value, int decimals);

}  // namespace statarb
