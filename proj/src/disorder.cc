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

#include "qst/disorder.h"

#include <cmath>

#include "qst/errors.h"
#include "parallel.h"

namespace qst {

const char *to_string(Deviation d) { return d == Deviation::delta_alpha ? "delta_alpha" : "delta_beta"; }

Deviation parse_deviation(const std::string &name) {
    if (name == "delta_alpha") {
        return Deviation::delta_alpha;
    }
    if (name == "delta_beta") {
        return Deviation::delta_beta;
    }
    throw ConfigError("unknown deviation '" + name + "' (expected delta_alpha or delta_beta)");
}

DriveProtocol with_deviation(const DriveProtocol &protocol, double delta_alpha, double delta_beta) {
    DriveProtocol out = protocol;
    out.first.delta_alpha = out.second.delta_alpha = delta_alpha;
    out.first.delta_beta = out.second.delta_beta = delta_beta;
    out.validate();
    return out;
}

std::vector<double> deviation_grid(double from, double to, double step) {
    if (!std::isfinite(from) || !std::isfinite(to) || !std::isfinite(step) || !(step > 0) || from > to) {
        throw ConfigError("deviation range needs finite from <= to and a positive step");
    }
    if (!(from > -1)) {
        throw ConfigError("deviation below -1 makes a coupling non-positive");
    }
    const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double v = from + static_cast<double>(i) * step;
        grid[i] = std::abs(v) < step * 1e-6 ? 0.0 : v;
    }
    return grid;
}

DisorderScan disorder_scan(const DriveProtocol &protocol, const Scenario &scenario, Deviation which, double from,
                           double to, double step, const PeakConfig &config, int jobs) {
    protocol.validate();
    DisorderScan scan;
    scan.delta_values = deviation_grid(from, to, step);
    scan.f_peak_values.resize(scan.delta_values.size());

    auto point = [&](double delta) {
        const double da = which == Deviation::delta_alpha ? delta : 0.0;
        const double db = which == Deviation::delta_beta ? delta : 0.0;
        return first_arrival_peak(Evolver::driven(with_deviation(protocol, da, db)), scenario, config).f_star;
    };

    // Configuration errors (a deviation pushing a coupling to zero) are fatal
    // and checked up front; only detection failures are recorded per point.
    for (double d : scan.delta_values) {
        with_deviation(protocol, which == Deviation::delta_alpha ? d : 0.0, which == Deviation::delta_beta ? d : 0.0);
    }

    detail::parallel_for(scan.delta_values.size(), jobs, [&](std::size_t i) {
        try {
            scan.f_peak_values[i] = point(scan.delta_values[i]);
        } catch (const ComputationError &) {
        }
    });

    scan.baseline = point(0.0);
    return scan;
}

std::vector<FidelitySeries> disorder_time_series(const DriveProtocol &protocol, const Scenario &scenario,
                                                 std::span<const std::pair<double, double>> delta_pairs,
                                                 const PeakConfig &config) {
    std::vector<FidelitySeries> out;
    out.reserve(delta_pairs.size());
    for (const auto &[da, db] : delta_pairs) {
        out.push_back(fidelity_series(Evolver::driven(with_deviation(protocol, da, db)), scenario, config));
    }
    return out;
}

}  // namespace qst
