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

#include "qst/parrondo.h"

#include <cmath>
#include <limits>
#include <memory>

#include "qst/errors.h"
#include "parallel.h"

namespace qst {

namespace {

struct TableEntry {
    int n;
    double c1;
    double c2;
    double omega;
    double eta;
};

// Coupling pairs and operating points the tables are defined by.
constexpr TableEntry kTable1[] = {
    {8, 0.55, 1.01, 1.46, 0.51},  {9, 0.53, 1.01, 1.29, 0.46},  {10, 0.51, 1.01, 1.14, 0.42},
    {11, 0.49, 1.01, 2.01, 0.65}, {12, 0.47, 1.01, 1.84, 0.64}, {13, 0.46, 1.01, 1.71, 0.64},
    {14, 0.45, 1.01, 1.60, 0.63}, {15, 0.44, 1.01, 1.50, 0.62}, {16, 0.43, 1.01, 2.08, 0.65},
    {17, 0.42, 1.01, 1.95, 0.66}, {18, 0.41, 1.01, 1.85, 0.66}, {19, 0.40, 1.01, 1.75, 0.67},
    {20, 0.39, 1.01, 1.66, 0.67},
};

constexpr TableEntry kTable2[] = {
    {8, 0.77, 1.28, 0.98, 0.22},  {9, 0.78, 1.23, 0.88, 0.03},  {10, 0.79, 1.18, 2.17, 0.50},
    {11, 0.81, 1.14, 1.99, 0.50}, {12, 0.80, 1.06, 1.78, 0.43},
};

constexpr TableEntry kTable3[] = {
    {10, 0.57, 0.79, 0.95, 0.48}, {10, 0.57, 1.18, 1.05, 0.66}, {10, 0.79, 0.57, 0.57, 0.59},
    {10, 0.79, 1.18, 2.17, 0.50}, {10, 1.18, 0.57, 1.57, 0.61}, {10, 1.18, 0.79, 1.52, 0.54},
};

std::span<const TableEntry> table_entries(int id) {
    switch (id) {
        case 1:
            return kTable1;
        case 2:
            return kTable2;
        case 3:
            return kTable3;
        default:
            throw ConfigError("unknown table " + std::to_string(id));
    }
}

std::vector<double> grid_axis(double lo, double hi, double step) {
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> axis(count);
    for (std::size_t i = 0; i < count; ++i) {
        axis[i] = lo + static_cast<double>(i) * step;
    }
    return axis;
}

ChainSpec with_coupling(ChainSpec spec, Coupling which, double value) {
    (which == Coupling::alpha ? spec.alpha : spec.beta) = value;
    return spec;
}

}  // namespace

const char *to_string(Coupling c) { return c == Coupling::alpha ? "alpha" : "beta"; }

Coupling parse_coupling(const std::string &name) {
    if (name == "alpha") {
        return Coupling::alpha;
    }
    if (name == "beta") {
        return Coupling::beta;
    }
    throw ConfigError("unknown coupling '" + name + "' (expected alpha or beta)");
}

ChainSpec chain_with(int n, Coupling which, double value) {
    ChainSpec spec;
    spec.n = n;
    return with_coupling(spec, which, value);
}

double static_peak_fidelity(const ChainSpec &spec, const Scenario &scenario, const PeakConfig &config) {
    return first_arrival_peak(Evolver::static_chain(spec), scenario, config).f_star;
}

double reference_fidelity(int n, const Scenario &scenario, const PeakConfig &config) {
    ChainSpec uniform;
    uniform.n = n;
    return static_peak_fidelity(uniform, scenario, config);
}

std::vector<StaticScanPoint> static_scan(const Scenario &scenario, int n, Coupling which,
                                         std::span<const double> values, const PeakConfig &config) {
    const double f0 = reference_fidelity(n, scenario, config);
    std::vector<StaticScanPoint> points;
    points.reserve(values.size());
    for (double v : values) {
        if (!(v > 0)) {
            throw ConfigError("scanned coupling values must be positive, got " + std::to_string(v));
        }
        try {
            const double f = static_peak_fidelity(chain_with(n, which, v), scenario, config);
            points.push_back({v, f, f / f0});
        } catch (const NoArrivalError &e) {
            throw NoArrivalError(std::string(to_string(which)) + "=" + std::to_string(v) + ": " + e.what());
        }
    }
    return points;
}

ParrondoOutcome evaluate_protocol(const DriveProtocol &protocol, const Scenario &scenario, const PeakConfig &config) {
    protocol.validate();
    auto d1 = std::make_shared<const SpectralDecomposition>(diagonalize(build_hamiltonian(protocol.first)));
    auto d2 = std::make_shared<const SpectralDecomposition>(diagonalize(build_hamiltonian(protocol.second)));
    ParrondoOutcome out;
    out.f_h1 = first_arrival_peak(Evolver::static_chain(d1), scenario, config).f_star;
    out.f_h2 = first_arrival_peak(Evolver::static_chain(d2), scenario, config).f_star;
    out.f_0 = reference_fidelity(protocol.first.n, scenario, config);
    out.f_p = first_arrival_peak(Evolver::driven(d1, d2, protocol.omega, protocol.eta), scenario, config).f_star;
    out.is_parrondo = ParrondoOutcome::classify(out.f_h1, out.f_h2, out.f_0, out.f_p);
    return out;
}

void SweepGrid::validate() const {
    const double values[] = {omega_min, omega_max, omega_step, eta_min, eta_max, eta_step};
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw ConfigError("sweep grid bounds must be finite");
        }
    }
    if (!(omega_min > 0)) {
        throw ConfigError("sweep needs omega_min > 0 (the period diverges at omega = 0)");
    }
    if (omega_min > omega_max || eta_min > eta_max) {
        throw ConfigError("sweep grid needs min <= max");
    }
    if (!(omega_step > 0) || !(eta_step > 0)) {
        throw ConfigError("sweep steps must be positive");
    }
    if (eta_min < 0 || eta_max > 1) {
        throw ConfigError("eta range must lie within [0, 1]");
    }
}

std::vector<double> SweepGrid::omegas() const { return grid_axis(omega_min, omega_max, omega_step); }

std::vector<double> SweepGrid::etas() const {
    auto axis = grid_axis(eta_min, eta_max, eta_step);
    for (double &e : axis) {
        e = std::min(e, 1.0);
    }
    return axis;
}

void select_best(SweepResult &result) {
    const SweepRecord *best = nullptr;
    for (const auto &r : result.grid) {
        if (std::isnan(r.f_p)) {
            continue;
        }
        if (best == nullptr || r.f_p > best->f_p ||
            (r.f_p == best->f_p && (r.omega < best->omega || (r.omega == best->omega && r.eta < best->eta)))) {
            best = &r;
        }
    }
    if (best == nullptr) {
        throw ComputationError("every sweep point failed");
    }
    result.best_omega = best->omega;
    result.best_eta = best->eta;
    result.best_f_p = best->f_p;
}

SweepResult sweep(const DriveProtocol &protocol_template, const SweepGrid &grid, const Scenario &scenario,
                  const PeakConfig &config, int jobs) {
    grid.validate();
    DriveProtocol probe = protocol_template;
    probe.omega = 1;
    probe.eta = 0.5;
    probe.validate();
    config.validate(static_cast<std::size_t>(probe.first.n));

    auto d1 = std::make_shared<const SpectralDecomposition>(diagonalize(build_hamiltonian(probe.first)));
    auto d2 = std::make_shared<const SpectralDecomposition>(diagonalize(build_hamiltonian(probe.second)));
    const auto omegas = grid.omegas();
    const auto etas = grid.etas();

    SweepResult result;
    result.grid.resize(omegas.size() * etas.size());
    detail::parallel_for(result.grid.size(), jobs, [&](std::size_t i) {
        const double omega = omegas[i / etas.size()];
        const double eta = etas[i % etas.size()];
        double f = std::numeric_limits<double>::quiet_NaN();
        try {
            f = first_arrival_peak(Evolver::driven(d1, d2, omega, eta), scenario, config).f_star;
        } catch (const ComputationError &) {
        }
        result.grid[i] = {omega, eta, f};
    });
    for (const auto &r : result.grid) {
        result.failures += std::isnan(r.f_p) ? 1 : 0;
    }
    select_best(result);
    return result;
}

std::pair<SweepResult, SweepResult> order_dependence(double beta_a, double beta_b, int n, const SweepGrid &grid,
                                                     const PeakConfig &config, int jobs) {
    const Scenario bell = BellScenario{BellSign::plus};
    DriveProtocol forward{chain_with(n, Coupling::beta, beta_a), chain_with(n, Coupling::beta, beta_b), 1, 0.5};
    return {sweep(forward, grid, bell, config, jobs), sweep(forward.swapped(), grid, bell, config, jobs)};
}

Scenario table_scenario(int table_id) {
    table_entries(table_id);
    if (table_id == 1) {
        return SingleQubitScenario{};
    }
    return BellScenario{BellSign::plus};
}

SweepGrid table_grid(int table_id) {
    table_entries(table_id);
    return table_id == 1 ? SweepGrid::single_qubit_default() : SweepGrid::bell_default();
}

TableResult reproduce_table(int table_id, const TableOptions &options) {
    const auto entries = table_entries(table_id);
    const Scenario scenario = table_scenario(table_id);
    const SweepGrid grid = options.grid.value_or(table_grid(table_id));

    TableResult table;
    table.id = table_id;
    table.driven = table_id == 1 ? Coupling::alpha : Coupling::beta;
    for (const auto &e : entries) {
        DriveProtocol protocol{chain_with(e.n, table.driven, e.c1), chain_with(e.n, table.driven, e.c2), e.omega,
                               e.eta};
        const auto listed = evaluate_protocol(protocol, scenario, options.config);

        TableRow row;
        row.n = e.n;
        row.coupling1 = e.c1;
        row.coupling2 = e.c2;
        row.f_0 = listed.f_0;
        row.f_h1 = listed.f_h1;
        row.f_h2 = listed.f_h2;
        row.listed_omega = e.omega;
        row.listed_eta = e.eta;
        row.f_p_at_listed = listed.f_p;
        if (options.run_sweep) {
            const auto best = sweep(protocol, grid, scenario, options.config, options.jobs);
            row.best_omega = best.best_omega;
            row.best_eta = best.best_eta;
            row.best_f_p = best.best_f_p;
        } else {
            row.best_omega = row.best_eta = row.best_f_p = std::numeric_limits<double>::quiet_NaN();
        }
        const double f_p = options.run_sweep ? row.best_f_p : row.f_p_at_listed;
        row.is_parrondo = ParrondoOutcome::classify(row.f_h1, row.f_h2, row.f_0, f_p);
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace qst
