#include "statarb/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>

namespace statarb {

void split_csv_line(const std::string& line, std::vector<std::string>& out) {
    out.clear();
    size_t start = 0;
    while (true) {
        size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.emplace_back(line.substr(start));
            return;
        }
        out.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

CsvReader::CsvReader(const std::string& path, const std::vector<std::string>& expected_header)
    : path_(path), in_(path) {
    if (!in_) raise(ErrorCode::IoError, "cannot open " + path);
    if (!std::getline(in_, line_)) raise(ErrorCode::MalformedRow, path + ": empty file");
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    ++line_number_;
    split_csv_line(line_, fields_);
    if (fields_ != expected_header) {
        std::string want;
        for (size_t i = 0; i < expected_header.size(); ++i)
            want += (i ? "," : "") + expected_header[i];
        raise(ErrorCode::MalformedRow,
              path + ":1: header mismatch, expected \"" + want + "\", got \"" + line_ + "\"");
    }
    n_cols_ = expected_header.size();
}

bool CsvReader::next() {
    while (std::getline(in_, line_)) {
        ++line_number_;
        if (!line_.empty() && line_.back() == '\r') line_.pop_back();
        if (line_.empty()) continue;
        split_csv_line(line_, fields_);
        if (fields_.size() != n_cols_)
            fail("expected " + std::to_string(n_cols_) + " fields, got " +
                 std::to_string(fields_.size()));
        return true;
    }
    return false;
}

double CsvReader::parse_double(size_t i) const {
    const std::string& s = fields_[i];
    if (s.empty()) fail("empty numeric field");
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size())
        fail("not a number: \"" + s + "\"");
    return v;
}

long long CsvReader::parse_int(size_t i) const {
    const std::string& s = fields_[i];
    if (s.empty()) fail("empty integer field");
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size())
        fail("not an integer: \"" + s + "\"");
    return v;
}

void CsvReader::fail(const std::string& reason) const {
    raise(ErrorCode::MalformedRow, path_ + ":" + std::to_string(line_number_) + ": " + reason);
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

}  // namespace statarb
