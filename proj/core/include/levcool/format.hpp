#pragma once

#include <string>
#include <vector>

namespace levcool {

// Shortest round-trip representation; "nan"/"inf" spelled out.
std::string fmt(double v);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    CsvWriter& cell(double v);
    CsvWriter& cell(long long v);
    CsvWriter& cell(const std::string& s);
    CsvWriter& empty();
    void end_row();
    const std::string& str() const { return out_; }

private:
    std::string out_;
    std::size_t columns_;
    std::size_t in_row_ = 0;
};

// FNV-1a, 64 bit, as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

}  // namespace levcool
