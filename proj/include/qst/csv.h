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

#ifndef QST_CSV_H
#define QST_CSV_H

#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace qst {

/// Fixed six-significant-digit rendering used by every exported file.
std::string format_number(double v);

/// Rounds to the value `format_number` prints.
double round_sig6(double v);

class CsvWriter {
   public:
    CsvWriter(std::ostream &out, std::initializer_list<std::string_view> header);
    CsvWriter(std::ostream &out, std::span<const std::string> header);

    CsvWriter &cell(double v);
    CsvWriter &cell(long long v);
    CsvWriter &cell(std::string_view v);
    void end_row();

   private:
    void separator();

    std::ostream &out_;
    bool first_in_row_ = true;
};

}  // namespace qst

#endif
