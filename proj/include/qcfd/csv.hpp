#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace qcfd {

// Minimal CSV writer. Numeric cells use 12 significant digits, the precision
// the trajectory format promises.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) body_ += ',';
            body_ += header[i];
        }
        body_ += '\n';
    }

    CsvWriter& cell(double value) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", value);
        append(buf);
        return *this;
    }

    CsvWriter& cell(std::uint64_t value) { return append(std::to_string(value)), *this; }
    CsvWriter& cell(int value) { return append(std::to_string(value)), *this; }
    CsvWriter& cell(const std::string& value) { return append(value), *this; }

    void end_row() {
        body_ += '\n';
        row_open_ = false;
    }

    const std::string& str() const { return body_; }

private:
    void append(const std::string& token) {
        if (row_open_) body_ += ',';
        body_ += token;
        row_open_ = true;
    }

    std::string body_;
    bool row_open_ = false;
};

}  // namespace qcfd
