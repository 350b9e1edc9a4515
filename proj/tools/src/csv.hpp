// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace derw_lab {

/// Row-oriented CSV accumulator. Reals print with '.' decimal and 17
/// significant digits so every double round-trips exactly.
class CsvBuilder {
  public:
    explicit CsvBuilder(std::string header) { text_ = std::move(header) + "\n"; }

    CsvBuilder& field(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        append(buf);
        return *this;
    }
    CsvBuilder& field(std::int64_t v) {
        append(std::to_string(v));
        return *this;
    }
    CsvBuilder& field(const std::string& v) {
        append(v);
        return *this;
    }
    void end_row() {
        text_ += '\n';
        row_open_ = false;
    }

    const std::string& text() const { return text_; }

  private:
    void append(const std::string& s) {
        if (row_open_) text_ += ',';
        text_ += s;
        row_open_ = true;
    }

    std::string text_;
    bool row_open_ = false;
};

}  // namespace derw_lab
