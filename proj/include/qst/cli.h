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

#ifndef QST_CLI_H
#define QST_CLI_H

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qst/chain.h"
#include "qst/parrondo.h"

namespace qst::cli {

/// Everything a subcommand can be configured with. Loaded from
/// `--config <file>` first; command-line flags then override single fields.
struct RunConfig {
    std::string scenario = "single";
    ChainSpec chain;
    /// Coupling that is scanned or driven; empty picks alpha for the
    /// single-qubit scenario and beta for the Bell scenario.
    std::string coupling;
    double value1 = 0.5;
    double value2 = 1.5;
    double omega = 1.42;
    double eta = 0.5;

    double theta = 3.141592653589793;
    double phi = 0.0;
    int sign = 1;

    std::optional<double> tau_max;
    double dtau = 0.01;
    double threshold = 0.5;

    /// Scan range; unset picks the subcommand's own default.
    std::optional<double> range_from;
    std::optional<double> range_to;
    std::optional<double> range_step;

    std::optional<SweepGrid> grid;

    bool evolve_static = false;
    bool evolve_driven = false;
    bool evolve_effective = false;

    int table_id = 1;
    bool table_sweep = true;
    /// Empty: the bundled reference file; "none": no comparison columns.
    std::string reference_file;

    std::string deviation = "delta_alpha";
    std::vector<std::pair<double, double>> deviation_pairs;
    bool disorder_scan = true;

    std::string series_file;
    std::string output_dir = ".";
    std::string format = "csv";
    int jobs = 1;

    bool operator==(const RunConfig &) const = default;

    Scenario resolved_scenario() const;
    Coupling resolved_coupling() const;
    PeakConfig peak_config() const;
    SweepGrid resolved_grid() const;
    /// Throws ConfigError on any invalid field.
    void validate() const;
    /// The two driven chains built from `chain` with the driven coupling set
    /// to value1 / value2.
    DriveProtocol protocol() const;
};

void to_json(nlohmann::json &j, const RunConfig &c);
void from_json(const nlohmann::json &j, RunConfig &c);

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation; `args` excludes the program name. Returns the exit
/// code. Results go to files under the output directory, summaries to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace qst::cli

#endif
