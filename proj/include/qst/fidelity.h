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

#ifndef QST_FIDELITY_H
#define QST_FIDELITY_H

#include <iosfwd>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qst/propagator.h"

namespace qst {

/// Polar angle theta in [0, pi], azimuth phi in [0, 2pi).
struct BlochAngles {
    double theta = std::numbers::pi;
    double phi = 0.0;

    void validate() const;
};

enum class BellSign { plus = 1, minus = -1 };

inline double sign_value(BellSign s) { return s == BellSign::plus ? 1.0 : -1.0; }

/// Alice encodes a qubit on site 1; Bob reads site N.
struct SingleQubitScenario {
    BlochAngles angles;
};

/// Alice prepares (|01> +- |10>)/sqrt(2) on sites (1,2); Bob reads (N-1, N).
struct BellScenario {
    BellSign sign = BellSign::plus;
};

using Scenario = std::variant<SingleQubitScenario, BellScenario>;

struct FidelitySeries {
    std::vector<double> taus;
    std::vector<double> values;
};

struct PeakConfig {
    /// Scan horizon; unset means 2N.
    std::optional<double> tau_max;
    double dtau = 0.01;
    double threshold_fraction = 0.5;

    double resolved_tau_max(std::size_t num_sites) const;
    /// Number of samples j*dtau with j*dtau <= tau_max.
    std::size_t sample_count(std::size_t num_sites) const;
    void validate(std::size_t num_sites) const;
};

struct Peak {
    double tau_star = 0;
    double f_star = 0;
};

double single_qubit_fidelity(cplx f_n1, double theta);
double bell_fidelity(cplx a_nm1, cplx a_n, BellSign sign);

AmplitudeState initial_state_single(const BlochAngles &angles, int n);
AmplitudeState initial_state_bell(BellSign sign, int n);

/// Reduced state of site N in the basis {|0>, |1>}.
Eigen::Matrix2cd reduced_density_last_site(const AmplitudeState &state);
/// Reduced state of sites (N-1, N) in the basis {|00>, |01>, |10>, |11>}.
Eigen::Matrix4cd reduced_density_last_pair(const AmplitudeState &state);

/// <psi|rho|psi> against the qubit the angles describe.
double single_qubit_overlap(const Eigen::Matrix2cd &rho, const BlochAngles &angles);
/// <psi+-|rho|psi+-> for Bob's target Bell state.
double bell_overlap(const Eigen::Matrix4cd &rho, BellSign sign);

FidelitySeries fidelity_series(const Evolver &evolver, const Scenario &scenario, const PeakConfig &config);

Peak first_arrival_peak(const FidelitySeries &series, const PeakConfig &config);

/// Convenience: first-arrival peak of the series the evolver produces.
Peak first_arrival_peak(const Evolver &evolver, const Scenario &scenario, const PeakConfig &config);

/// Two-column CSV (tau, fidelity) with a header row.
void write_csv(std::ostream &out, const FidelitySeries &series);

}  // namespace qst

#endif
