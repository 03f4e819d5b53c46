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

#include "qst/fidelity.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "qst/csv.h"
#include "qst/errors.h"

namespace qst {

namespace {

constexpr double kRoundoff = 1e-12;

double clamp_fidelity(double f) {
    if (f > 1 + kRoundoff || f < -kRoundoff || std::isnan(f)) {
        throw ComputationError("fidelity " + std::to_string(f) + " outside [0, 1]; propagation is not unitary");
    }
    return std::clamp(f, 0.0, 1.0);
}

void require_sites(int n, int minimum) {
    if (n < minimum) {
        throw ConfigError("chain needs at least " + std::to_string(minimum) + " sites");
    }
}

}  // namespace

void BlochAngles::validate() const {
    if (!(theta >= 0 && theta <= std::numbers::pi)) {
        throw ConfigError("theta must lie in [0, pi]");
    }
    if (!(phi >= 0 && phi < 2 * std::numbers::pi)) {
        throw ConfigError("phi must lie in [0, 2pi)");
    }
}

double PeakConfig::resolved_tau_max(std::size_t num_sites) const {
    return tau_max.value_or(2.0 * static_cast<double>(num_sites));
}

std::size_t PeakConfig::sample_count(std::size_t num_sites) const {
    return static_cast<std::size_t>(std::floor(resolved_tau_max(num_sites) / dtau + 1e-9)) + 1;
}

void PeakConfig::validate(std::size_t num_sites) const {
    const double horizon = resolved_tau_max(num_sites);
    if (!std::isfinite(horizon) || !(horizon > 0)) {
        throw ConfigError("tau_max must be positive");
    }
    if (!std::isfinite(dtau) || !(dtau > 0)) {
        throw ConfigError("dtau must be positive");
    }
    if (horizon / dtau < 10) {
        throw ConfigError("tau_max must span at least 10 samples");
    }
    if (!(threshold_fraction > 0 && threshold_fraction <= 1)) {
        throw ConfigError("threshold_fraction must lie in (0, 1]");
    }
}

double single_qubit_fidelity(cplx f_n1, double theta) {
    const double m2 = std::norm(f_n1);
    if (m2 > 1 + kRoundoff) {
        throw ComputationError("transition amplitude exceeds unit modulus");
    }
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const double st = std::sin(theta);
    return clamp_fidelity(c * c + 0.5 * st * st * f_n1.real() - std::cos(theta) * s * s * m2);
}

double bell_fidelity(cplx a_nm1, cplx a_n, BellSign sign) {
    if (std::norm(a_nm1) + std::norm(a_n) > 1 + kRoundoff) {
        throw ComputationError("Bob's amplitudes exceed unit norm");
    }
    return clamp_fidelity(0.5 * std::norm(a_nm1 + sign_value(sign) * a_n));
}

AmplitudeState initial_state_single(const BlochAngles &angles, int n) {
    angles.validate();
    require_sites(n, 2);
    AmplitudeState s;
    s.vacuum = std::cos(angles.theta / 2);
    s.sites = Eigen::VectorXcd::Zero(n);
    s.sites[0] = std::polar(std::sin(angles.theta / 2), angles.phi);
    return s;
}

AmplitudeState initial_state_bell(BellSign sign, int n) {
    require_sites(n, 4);
    AmplitudeState s;
    s.sites = Eigen::VectorXcd::Zero(n);
    s.sites[0] = std::numbers::sqrt2 / 2;
    s.sites[1] = sign_value(sign) * std::numbers::sqrt2 / 2;
    return s;
}

Eigen::Matrix2cd reduced_density_last_site(const AmplitudeState &state) {
    const auto n = static_cast<Eigen::Index>(state.num_sites());
    const cplx a0 = state.vacuum;
    const cplx an = state.sites[n - 1];
    const double rest = std::norm(a0) + state.sites.head(n - 1).squaredNorm();
    Eigen::Matrix2cd rho;
    rho << rest, a0 * std::conj(an), an * std::conj(a0), std::norm(an);
    return rho;
}

Eigen::Matrix4cd reduced_density_last_pair(const AmplitudeState &state) {
    const auto n = static_cast<Eigen::Index>(state.num_sites());
    const cplx a0 = state.vacuum;
    const cplx a1 = state.sites[n - 2];  // |10>: excitation on N-1
    const cplx a2 = state.sites[n - 1];  // |01>: excitation on N
    const double rest = std::norm(a0) + state.sites.head(n - 2).squaredNorm();
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    rho(0, 0) = rest;
    rho(0, 1) = a0 * std::conj(a2);
    rho(0, 2) = a0 * std::conj(a1);
    rho(1, 0) = std::conj(rho(0, 1));
    rho(2, 0) = std::conj(rho(0, 2));
    rho(1, 1) = std::norm(a2);
    rho(1, 2) = a2 * std::conj(a1);
    rho(2, 1) = a1 * std::conj(a2);
    rho(2, 2) = std::norm(a1);
    return rho;
}

double single_qubit_overlap(const Eigen::Matrix2cd &rho, const BlochAngles &angles) {
    Eigen::Vector2cd psi(std::cos(angles.theta / 2), std::polar(std::sin(angles.theta / 2), angles.phi));
    return (psi.adjoint() * rho * psi)(0, 0).real();
}

double bell_overlap(const Eigen::Matrix4cd &rho, BellSign sign) {
    const double h = std::numbers::sqrt2 / 2;
    Eigen::Vector4cd psi(0, h, sign_value(sign) * h, 0);
    return (psi.adjoint() * rho * psi)(0, 0).real();
}

FidelitySeries fidelity_series(const Evolver &evolver, const Scenario &scenario, const PeakConfig &config) {
    const std::size_t n = evolver.dimension();
    config.validate(n);
    const std::size_t count = config.sample_count(n);
    const int last = static_cast<int>(n) - 1;

    FidelitySeries series;
    series.taus.resize(count);
    series.values.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
        series.taus[j] = static_cast<double>(j) * config.dtau;
    }

    if (const auto *single = std::get_if<SingleQubitScenario>(&scenario)) {
        single->angles.validate();
        // Only the excited component moves, so f_{N,1} alone fixes the fidelity.
        AmplitudeState excitation;
        excitation.sites = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
        excitation.sites[0] = 1.0;
        const int sites[] = {last};
        const auto f = evolver.sample_sites(excitation, sites, config.dtau, count);
        for (std::size_t j = 0; j < count; ++j) {
            series.values[j] = single_qubit_fidelity(f[j], single->angles.theta);
        }
    } else {
        const auto sign = std::get<BellScenario>(scenario).sign;
        const int sites[] = {last - 1, last};
        const auto a = evolver.sample_sites(initial_state_bell(sign, static_cast<int>(n)), sites, config.dtau, count);
        for (std::size_t j = 0; j < count; ++j) {
            series.values[j] = bell_fidelity(a[2 * j], a[2 * j + 1], sign);
        }
    }
    return series;
}

// The first arrival is the earliest maximal run of samples at or above
// threshold_fraction * (series maximum). Its highest sample (earliest on ties)
// must be an interior local maximum; a run that splits into two humps still
// counts as one arrival.
Peak first_arrival_peak(const FidelitySeries &series, const PeakConfig &config) {
    const auto &v = series.values;
    if (v.empty() || v.size() != series.taus.size()) {
        throw ConfigError("fidelity series is empty or malformed");
    }
    const double global_max = *std::max_element(v.begin(), v.end());
    const double floor = config.threshold_fraction * global_max;
    auto no_arrival = [&](const std::string &why) {
        return NoArrivalError("no arrival detected: " + why);
    };
    if (!(global_max > 0)) {
        throw no_arrival("fidelity is identically zero");
    }

    std::size_t j = 0;
    while (v[j] < floor) {
        ++j;
    }
    std::size_t best = j;
    for (; j < v.size() && v[j] >= floor; ++j) {
        if (v[j] > v[best]) {
            best = j;
        }
    }
    if (best == 0 || best + 1 == v.size()) {
        throw no_arrival("the first excursion above " + std::to_string(config.threshold_fraction) +
                         " of the maximum peaks at the edge of the scan window");
    }

    const double y0 = v[best - 1], y1 = v[best], y2 = v[best + 1];
    const double curvature = y0 - 2 * y1 + y2;
    Peak peak{series.taus[best], y1};
    if (curvature < 0) {
        const double x = (y0 - y2) / (2 * curvature);
        peak.tau_star += x * (series.taus[best + 1] - series.taus[best - 1]) / 2;
        peak.f_star = y1 - (y2 - y0) * (y2 - y0) / (8 * curvature);
    }
    peak.f_star = std::clamp(peak.f_star, 0.0, 1.0);
    return peak;
}

Peak first_arrival_peak(const Evolver &evolver, const Scenario &scenario, const PeakConfig &config) {
    return first_arrival_peak(fidelity_series(evolver, scenario, config), config);
}

void write_csv(std::ostream &out, const FidelitySeries &series) {
    CsvWriter csv(out, {"tau", "fidelity"});
    for (std::size_t j = 0; j < series.taus.size(); ++j) {
        csv.cell(series.taus[j]).cell(series.values[j]);
        csv.end_row();
    }
}

}  // namespace qst
