// Copyright 2026 The qst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qst/csv.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace qst {

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    std::string s(buf);
    if (s == "-0") {
        s = "0";
    }
    return s;
}

double round_sig6(double v) {
    if (!std::isfinite(v)) {
        return v;
    }
    return std::strtod(format_number(v).c_str(), nullptr);
}

CsvWriter::CsvWriter(std::ostream &out, std::initializer_list<std::string_view> header) : out_(out) {
    for (auto h : header) {
        cell(h);
    }
    end_row();
}

CsvWriter::CsvWriter(std::ostream &out, std::span<const std::string> header) : out_(out) {
    for (const auto &h : header) {
        cell(std::string_view(h));
    }
    end_row();
}

void CsvWriter::separator() {
    if (!first_in_row_) {
        out_ << ',';
    }
    first_in_row_ = false;
}

CsvWriter &CsvWriter::cell(double v) {
    separator();
    out_ << format_number(v);
    return *this;
}

CsvWriter &CsvWriter::cell(long long v) {
    separator();
    out_ << v;
    return *this;
}

CsvWriter &CsvWriter::cell(std::string_view v) {
    separator();
    out_ << v;
    return *this;
}

void CsvWriter::end_row() {
    out_ << '\n';
    first_in_row_ = true;
}

}  // namespace qst
