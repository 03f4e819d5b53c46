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

#ifndef QST_PARRONDO_H
#define QST_PARRONDO_H

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qst/fidelity.h"
#include "qst/propagator.h"

namespace qst {

enum class Coupling { alpha, beta };

const char *to_string(Coupling c);
Coupling parse_coupling(const std::string &name);

/// Chain of length n with all couplings uniform except `which`, set to `value`.
ChainSpec chain_with(int n, Coupling which, double value);

/// First-arrival peak fidelity of a static chain.
double static_peak_fidelity(const ChainSpec &spec, const Scenario &scenario, const PeakConfig &config);

/// F_0: the uniform chain of the same length.
double reference_fidelity(int n, const Scenario &scenario, const PeakConfig &config);

struct StaticScanPoint {
    double coupling_value;
    double f_peak;
    double ratio;
};

std::vector<StaticScanPoint> static_scan(const Scenario &scenario, int n, Coupling which,
                                         std::span<const double> values, const PeakConfig &config);

struct ParrondoOutcome {
    double f_h1 = 0;
    double f_h2 = 0;
    double f_0 = 0;
    double f_p = 0;
    bool is_parrondo = false;

    /// Both static Hamiltonians lose against the uniform chain while their
    /// alternation wins.
    static bool classify(double f_h1, double f_h2, double f_0, double f_p) {
        return f_h1 < f_0 && f_h2 < f_0 && f_p > f_0;
    }
};

ParrondoOutcome evaluate_protocol(const DriveProtocol &protocol, const Scenario &scenario, const PeakConfig &config);

struct SweepGrid {
    double omega_min = 0.50;
    double omega_max = 3.50;
    double omega_step = 0.01;
    double eta_min = 0.00;
    double eta_max = 1.00;
    double eta_step = 0.01;

    static SweepGrid single_qubit_default() { return {}; }
    /// The Bell range nominally starts at omega = 0, where the period
    /// diverges; the first usable point is one step above it.
    static SweepGrid bell_default() { return {0.01, 3.00, 0.01, 0.00, 1.00, 0.01}; }

    void validate() const;
    std::vector<double> omegas() const;
    std::vector<double> etas() const;

    bool operator==(const SweepGrid &) const = default;
};


struct SweepRecord {
    double omega;
    double eta;
    /// NaN when the point failed (e.g. no arrival detected).
    double f_p;
};

struct SweepResult {
    double best_omega = 0;
    double best_eta = 0;
    double best_f_p = 0;
    /// Omega-major, eta-minor, in grid order.
    std::vector<SweepRecord> grid;
    std::size_t failures = 0;
};

/// Exhaustive (omega, eta) scan of the driven fidelity for the coupling pair
/// of `protocol_template` (its own omega and eta are ignored). Ties go to the
/// smaller omega, then the smaller eta. `jobs` worker threads share the work;
/// the result does not depend on it.
SweepResult sweep(const DriveProtocol &protocol_template, const SweepGrid &grid, const Scenario &scenario,
                  const PeakConfig &config, int jobs = 1);

/// Picks the best record by pure argmax over a finished grid.
void select_best(SweepResult &result);

/// Bell-state sweeps for (beta_a first, beta_b second) and the swapped order.
std::pair<SweepResult, SweepResult> order_dependence(double beta_a, double beta_b, int n, const SweepGrid &grid,
                                                     const PeakConfig &config, int jobs = 1);

struct TableRow {
    int n = 0;
    double coupling1 = 0;
    double coupling2 = 0;
    double f_0 = 0;
    double f_h1 = 0;
    double f_h2 = 0;
    /// Sweep optimum; NaN when the sweep was skipped.
    double best_omega = 0;
    double best_eta = 0;
    double best_f_p = 0;
    /// Operating point listed with the table definition and the driven
    /// fidelity evaluated there.
    double listed_omega = 0;
    double listed_eta = 0;
    double f_p_at_listed = 0;
    bool is_parrondo = false;
};

struct TableOptions {
    PeakConfig config;
    /// Overrides the table's own grid.
    std::optional<SweepGrid> grid;
    bool run_sweep = true;
    int jobs = 1;
};

struct TableResult {
    int id = 0;
    Coupling driven = Coupling::alpha;
    std::vector<TableRow> rows;
};

/// Table 1: single-qubit, alternating alpha, N = 8..20.
/// Table 2: Bell, alternating beta, N = 8..12.
/// Table 3: Bell, N = 10, every ordered pair of beta in {0.57, 0.79, 1.18}.
TableResult reproduce_table(int table_id, const TableOptions &options = {});

Scenario table_scenario(int table_id);
SweepGrid table_grid(int table_id);

}  // namespace qst

#endif
