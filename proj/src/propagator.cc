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

#include "qst/propagator.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qst/errors.h"

namespace qst {

namespace {

// Plain complex product; std::complex's operator* carries NaN recovery that
// costs a library call per multiply in the sampling loops.
inline cplx mul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline cplx phase(double angle) { return {std::cos(angle), -std::sin(angle)}; }

void apply_phases(const Eigen::VectorXd &energies, double dt, Eigen::VectorXcd &c) {
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        c[k] = mul(c[k], phase(energies[k] * dt));
    }
}

Eigen::VectorXcd to_eigenbasis(const Eigen::MatrixXd &v, const Eigen::VectorXcd &a) {
    Eigen::VectorXcd c(a.size());
    c.real() = v.transpose() * a.real();
    c.imag() = v.transpose() * a.imag();
    return c;
}

Eigen::VectorXcd apply_real(const Eigen::MatrixXd &m, const Eigen::VectorXcd &c) {
    Eigen::VectorXcd out(m.rows());
    out.real() = m * c.real();
    out.imag() = m * c.imag();
    return out;
}

// The QL eigenvectors are orthonormal only to ~1e-15; every round trip through
// the eigenbasis then scales the norm by the same tiny factor, which adds up
// linearly over many propagations. Two Newton-Schulz steps in extended
// precision leave V^T V - I at the rounding floor.
Eigen::MatrixXd polish_orthonormal(const Eigen::MatrixXd &v) {
    using Wide = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    Wide w = v.cast<long double>();
    const Wide three = 3 * Wide::Identity(w.cols(), w.cols());
    for (int iter = 0; iter < 2; ++iter) {
        w = w * (three - w.transpose() * w) / 2;
    }
    return w.cast<double>();
}

void require_time(double tau) {
    if (!std::isfinite(tau) || tau < 0) {
        throw ConfigError("evolution time must be finite and non-negative, got " + std::to_string(tau));
    }
}

void require_dimension(std::size_t expected, std::size_t got) {
    if (expected != got) {
        throw ConfigError("dimension mismatch: expected " + std::to_string(expected) + " sites, got " +
                          std::to_string(got));
    }
}

}  // namespace

SpectralDecomposition diagonalize(const HamiltonianMatrix &h) {
    const auto n = static_cast<Eigen::Index>(h.dimension());
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        sub[k] = h.offdiagonal()[static_cast<std::size_t>(k)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw ComputationError("eigensolver failed to converge for a " + std::to_string(n) + "x" +
                               std::to_string(n) + " Hamiltonian");
    }
    return {solver.eigenvalues(), polish_orthonormal(solver.eigenvectors())};
}

AmplitudeState propagate_static(const SpectralDecomposition &decomp, const AmplitudeState &state, double tau) {
    require_time(tau);
    require_dimension(decomp.dimension(), state.num_sites());
    Eigen::VectorXcd c = to_eigenbasis(decomp.eigenvectors, state.sites);
    apply_phases(decomp.eigenvalues, tau, c);
    return {state.vacuum, apply_real(decomp.eigenvectors, c)};
}

cplx transition_amplitude(const SpectralDecomposition &decomp, int from_site, int to_site, double tau) {
    require_time(tau);
    const int n = static_cast<int>(decomp.dimension());
    if (from_site < 1 || from_site > n || to_site < 1 || to_site > n) {
        throw ConfigError("site index out of range 1.." + std::to_string(n));
    }
    const auto &v = decomp.eigenvectors;
    cplx sum{0, 0};
    for (int k = 0; k < n; ++k) {
        sum += v(to_site - 1, k) * v(from_site - 1, k) * phase(decomp.eigenvalues[k] * tau);
    }
    return sum;
}

Eigen::MatrixXcd static_unitary(const SpectralDecomposition &decomp, double tau) {
    const auto n = static_cast<Eigen::Index>(decomp.dimension());
    Eigen::VectorXcd phases(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        phases[k] = phase(decomp.eigenvalues[k] * tau);
    }
    Eigen::MatrixXcd v = decomp.eigenvectors.cast<cplx>();
    return v * phases.asDiagonal() * v.transpose();
}

void DriveProtocol::validate() const {
    first.validate();
    second.validate();
    if (first.n != second.n) {
        throw ConfigError("driven chains must have equal length");
    }
    if (!std::isfinite(omega) || !(omega > 0)) {
        throw ConfigError("driving frequency must be positive, got " + std::to_string(omega));
    }
    if (!(eta >= 0 && eta <= 1)) {
        throw ConfigError("duty parameter eta must lie in [0, 1], got " + std::to_string(eta));
    }
}

double DriveProtocol::period() const { return 2 * std::numbers::pi / omega; }

DriveProtocol DriveProtocol::swapped() const { return {second, first, omega, eta}; }

Evolver Evolver::static_chain(std::shared_ptr<const SpectralDecomposition> decomp) {
    Evolver e;
    e.pieces_.push_back({std::move(decomp), std::numeric_limits<double>::infinity()});
    e.period_ = std::numeric_limits<double>::infinity();
    return e;
}

Evolver Evolver::static_chain(const ChainSpec &spec) {
    return static_chain(std::make_shared<const SpectralDecomposition>(diagonalize(build_hamiltonian(spec))));
}

Evolver Evolver::driven(std::shared_ptr<const SpectralDecomposition> first,
                        std::shared_ptr<const SpectralDecomposition> second, double omega, double eta) {
    if (!std::isfinite(omega) || !(omega > 0) || !(eta >= 0 && eta <= 1)) {
        throw ConfigError("invalid drive: omega must be positive and eta in [0, 1]");
    }
    require_dimension(first->dimension(), second->dimension());
    const double period = 2 * std::numbers::pi / omega;
    const double t1 = eta * period;
    const double t2 = period - t1;
    if (t2 <= 0) {
        return static_chain(std::move(first));
    }
    if (t1 <= 0) {
        return static_chain(std::move(second));
    }
    Evolver e;
    e.pieces_.push_back({std::move(first), t1});
    e.pieces_.push_back({std::move(second), t2});
    e.period_ = period;
    e.build_overlaps();
    return e;
}

Evolver Evolver::driven(const DriveProtocol &protocol) {
    protocol.validate();
    auto d1 = std::make_shared<const SpectralDecomposition>(diagonalize(build_hamiltonian(protocol.first)));
    auto d2 = std::make_shared<const SpectralDecomposition>(diagonalize(build_hamiltonian(protocol.second)));
    return driven(std::move(d1), std::move(d2), protocol.omega, protocol.eta);
}

void Evolver::build_overlaps() {
    overlaps_.clear();
    for (std::size_t p = 0; p < pieces_.size(); ++p) {
        const auto &cur = pieces_[p].decomp->eigenvectors;
        const auto &next = pieces_[(p + 1) % pieces_.size()].decomp->eigenvectors;
        overlaps_.push_back(next.transpose() * cur);
    }
}

double Evolver::piece_end(long long cycle, std::size_t piece) const {
    if (pieces_.size() == 1) {
        return std::numeric_limits<double>::infinity();
    }
    const double start = static_cast<double>(cycle) * period_;
    return piece == 0 ? start + pieces_[0].duration : static_cast<double>(cycle + 1) * period_;
}

AmplitudeState Evolver::propagate(const AmplitudeState &state, double tau) const {
    if (is_static()) {
        return propagate_static(*pieces_.front().decomp, state, tau);
    }
    require_time(tau);
    require_dimension(dimension(), state.num_sites());
    std::size_t p = 0;
    long long cycle = 0;
    double t = 0;
    Eigen::VectorXcd c = to_eigenbasis(pieces_[0].decomp->eigenvectors, state.sites);
    for (;;) {
        const double end = piece_end(cycle, p);
        const auto &energies = pieces_[p].decomp->eigenvalues;
        if (tau < end) {
            apply_phases(energies, tau - t, c);
            break;
        }
        apply_phases(energies, end - t, c);
        t = end;
        c = apply_real(overlaps_[p], c);
        if (++p == pieces_.size()) {
            p = 0;
            ++cycle;
        }
    }
    return {state.vacuum, apply_real(pieces_[p].decomp->eigenvectors, c)};
}

std::vector<cplx> Evolver::sample_sites(const AmplitudeState &initial, std::span<const int> sites, double dtau,
                                        std::size_t count) const {
    require_dimension(dimension(), initial.num_sites());
    if (!std::isfinite(dtau) || !(dtau > 0)) {
        throw ConfigError("sample spacing must be positive");
    }
    const auto n = static_cast<Eigen::Index>(dimension());
    for (int s : sites) {
        if (s < 0 || s >= n) {
            throw ConfigError("readout site out of range");
        }
    }

    std::vector<Eigen::VectorXcd> step(pieces_.size());
    for (std::size_t p = 0; p < pieces_.size(); ++p) {
        step[p] = Eigen::VectorXcd::Ones(n);
        apply_phases(pieces_[p].decomp->eigenvalues, dtau, step[p]);
    }

    const std::size_t ns = sites.size();
    std::vector<cplx> out(count * ns);
    std::size_t p = 0;
    long long cycle = 0;
    double t = 0;
    bool on_grid = false;
    Eigen::VectorXcd c = to_eigenbasis(pieces_[0].decomp->eigenvectors, initial.sites);
    for (std::size_t j = 0; j < count; ++j) {
        const double tau = static_cast<double>(j) * dtau;
        for (double end = piece_end(cycle, p); tau >= end; end = piece_end(cycle, p)) {
            apply_phases(pieces_[p].decomp->eigenvalues, end - t, c);
            t = end;
            c = apply_real(overlaps_[p], c);
            on_grid = false;
            if (++p == pieces_.size()) {
                p = 0;
                ++cycle;
            }
        }
        if (on_grid) {
            const auto &s = step[p];
            for (Eigen::Index k = 0; k < n; ++k) {
                c[k] = mul(c[k], s[k]);
            }
        } else {
            apply_phases(pieces_[p].decomp->eigenvalues, tau - t, c);
            on_grid = true;
        }
        t = tau;

        const auto &v = pieces_[p].decomp->eigenvectors;
        for (std::size_t s = 0; s < ns; ++s) {
            double re = 0, im = 0;
            for (Eigen::Index k = 0; k < n; ++k) {
                const double w = v(sites[s], k);
                re += w * c[k].real();
                im += w * c[k].imag();
            }
            out[j * ns + s] = {re, im};
        }
    }
    return out;
}

AmplitudeState driven_propagate(const DriveProtocol &protocol, const AmplitudeState &state, double tau) {
    return Evolver::driven(protocol).propagate(state, tau);
}

Eigen::MatrixXcd one_period_propagator(const DriveProtocol &protocol) {
    protocol.validate();
    const auto d1 = diagonalize(build_hamiltonian(protocol.first));
    const auto d2 = diagonalize(build_hamiltonian(protocol.second));
    return static_unitary(d2, protocol.second_duration()) * static_unitary(d1, protocol.first_duration());
}

std::pair<double, double> effective_couplings(const DriveProtocol &protocol) {
    const double w = protocol.eta;
    return {w * protocol.first.alpha + (1 - w) * protocol.second.alpha,
            w * protocol.first.beta + (1 - w) * protocol.second.beta};
}

ChainSpec effective_spec(const DriveProtocol &protocol) {
    protocol.validate();
    if (protocol.first.delta_alpha != protocol.second.delta_alpha ||
        protocol.first.delta_beta != protocol.second.delta_beta) {
        throw ConfigError("effective chain needs identical deviations on both driven Hamiltonians");
    }
    ChainSpec spec = protocol.first;
    std::tie(spec.alpha, spec.beta) = effective_couplings(protocol);
    spec.validate();
    return spec;
}

AmplitudeState effective_propagate(const DriveProtocol &protocol, const AmplitudeState &state, double tau) {
    return propagate_static(diagonalize(build_hamiltonian(effective_spec(protocol))), state, tau);
}

MagnusTerms magnus_terms(const HamiltonianMatrix &h1, const HamiltonianMatrix &h2, double period,
                         double time_offset) {
    require_dimension(h1.dimension(), h2.dimension());
    if (!(std::abs(time_offset) <= period / 2)) {
        throw ConfigError("time offset must satisfy |dT| <= T/2");
    }
    const Eigen::MatrixXd a = h1.dense();
    const Eigen::MatrixXd b = h2.dense();
    const cplx minus_i{0, -1};
    const Eigen::MatrixXd generator = (a + b) * (period / 2) - (b - a) * time_offset;
    const Eigen::MatrixXd commutator = a * b - b * a;
    // Second-order term for U(T) = exp(-i H2 T2) exp(-i H1 T1):
    // (1/2)[-i H2 T2, -i H1 T1] = (T1 T2 / 2)[H1, H2], with T1 T2 = (T^2 - 4 dT^2) / 4.
    const double weight = period * period - 4 * time_offset * time_offset;
    return {minus_i * generator.cast<cplx>(), (weight / 8) * commutator.cast<cplx>()};
}

Eigen::MatrixXcd exp_anti_hermitian(const Eigen::MatrixXcd &a) {
    const cplx i{0, 1};
    const Eigen::MatrixXcd k = i * a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(k);
    if (solver.info() != Eigen::Success) {
        throw ComputationError("eigensolver failed on a " + std::to_string(a.rows()) + "x" +
                               std::to_string(a.cols()) + " generator");
    }
    Eigen::VectorXcd phases(a.rows());
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
        phases[j] = phase(solver.eigenvalues()[j]);
    }
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace qst
