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

#ifndef QST_DISORDER_H
#define QST_DISORDER_H

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qst/fidelity.h"
#include "qst/propagator.h"

namespace qst {

enum class Deviation { delta_alpha, delta_beta };

const char *to_string(Deviation d);
Deviation parse_deviation(const std::string &name);

/// Applies (delta_alpha, delta_beta) to Bob's side of both driven
/// Hamiltonians; the miswired bond is a property of the hardware, not of
/// either half-period.
DriveProtocol with_deviation(const DriveProtocol &protocol, double delta_alpha, double delta_beta);

struct DisorderScan {
    std::vector<double> delta_values;
    /// Empty optional where peak detection failed.
    std::vector<std::optional<double>> f_peak_values;
    double baseline = 0;
};

/// Deviation grid from `from` to `to` (inclusive) in steps of `step`. The
/// grid point nearest zero is snapped to exactly 0.
std::vector<double> deviation_grid(double from, double to, double step);

DisorderScan disorder_scan(const DriveProtocol &protocol, const Scenario &scenario, Deviation which, double from,
                           double to, double step, const PeakConfig &config, int jobs = 1);

std::vector<FidelitySeries> disorder_time_series(const DriveProtocol &protocol, const Scenario &scenario,
                                                 std::span<const std::pair<double, double>> delta_pairs,
                                                 const PeakConfig &config);

}  // namespace qst

#endif
