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

#ifndef QST_PROPAGATOR_H
#define QST_PROPAGATOR_H

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qst/chain.h"

namespace qst {

using cplx = std::complex<double>;

/// Vacuum amplitude plus one complex amplitude per site (0-based).
struct AmplitudeState {
    cplx vacuum{0.0, 0.0};
    Eigen::VectorXcd sites;

    std::size_t num_sites() const { return static_cast<std::size_t>(sites.size()); }
    double norm_squared() const { return std::norm(vacuum) + sites.squaredNorm(); }
};

/// H = V diag(eigenvalues) V^T with orthonormal real eigenvector columns,
/// eigenvalues ascending.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;

    std::size_t dimension() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

SpectralDecomposition diagonalize(const HamiltonianMatrix &h);

/// exp(-i H tau) applied to the single-excitation block; the vacuum amplitude
/// is carried along unchanged.
AmplitudeState propagate_static(const SpectralDecomposition &decomp, const AmplitudeState &state, double tau);

/// <to| exp(-i H tau) |from>, sites 1-based.
cplx transition_amplitude(const SpectralDecomposition &decomp, int from_site, int to_site, double tau);

/// Dense exp(-i H tau) in the site basis.
Eigen::MatrixXcd static_unitary(const SpectralDecomposition &decomp, double tau);

/// Piecewise-constant alternation: `first` acts for eta*T, then `second` for
/// (1-eta)*T, repeated with period T = 2*pi/omega.
struct DriveProtocol {
    ChainSpec first;
    ChainSpec second;
    double omega = 1.0;
    double eta = 0.5;

    void validate() const;

    double period() const;
    double first_duration() const { return eta * period(); }
    double second_duration() const { return period() - first_duration(); }
    /// Signed offset of the first sub-period from T/2.
    double time_offset() const { return (eta - 0.5) * period(); }

    /// Same couplings, applied in the opposite order.
    DriveProtocol swapped() const;
};

/// Time evolution generated by either one static Hamiltonian or a periodic
/// sequence of static pieces. Decompositions are shared and immutable, so an
/// Evolver can be copied freely and used from several threads.
class Evolver {
   public:
    static Evolver static_chain(std::shared_ptr<const SpectralDecomposition> decomp);
    static Evolver static_chain(const ChainSpec &spec);
    static Evolver driven(std::shared_ptr<const SpectralDecomposition> first,
                          std::shared_ptr<const SpectralDecomposition> second, double omega, double eta);
    static Evolver driven(const DriveProtocol &protocol);

    std::size_t dimension() const { return pieces_.front().decomp->dimension(); }
    bool is_static() const { return pieces_.size() == 1; }

    AmplitudeState propagate(const AmplitudeState &state, double tau) const;

    /// Site amplitudes (0-based `sites`) at tau = j*dtau for j in [0, count),
    /// row-major: result[j * sites.size() + s]. Evolves continuously through
    /// piece boundaries, so samples need not fall on multiples of the period.
    std::vector<cplx> sample_sites(const AmplitudeState &initial, std::span<const int> sites, double dtau,
                                   std::size_t count) const;

   private:
    struct Piece {
        std::shared_ptr<const SpectralDecomposition> decomp;
        double duration;
    };

    Evolver() = default;
    void build_overlaps();
    double piece_end(long long cycle, std::size_t piece) const;

    std::vector<Piece> pieces_;
    double period_ = 0;
    // overlaps_[p] maps eigen-coefficients of piece p onto the basis of the next piece.
    std::vector<Eigen::MatrixXd> overlaps_;
};

AmplitudeState driven_propagate(const DriveProtocol &protocol, const AmplitudeState &state, double tau);

/// U(T) = exp(-i H2 T2) exp(-i H1 T1).
Eigen::MatrixXcd one_period_propagator(const DriveProtocol &protocol);

/// Time-averaged boundary couplings eta*c1 + (1-eta)*c2.
std::pair<double, double> effective_couplings(const DriveProtocol &protocol);

/// Static chain with the time-averaged couplings. Requires both pieces to
/// share the same chain length and deviations.
ChainSpec effective_spec(const DriveProtocol &protocol);

AmplitudeState effective_propagate(const DriveProtocol &protocol, const AmplitudeState &state, double tau);

/// First two terms of the Magnus expansion of the one-period propagator.
struct MagnusTerms {
    Eigen::MatrixXcd omega1;
    Eigen::MatrixXcd omega2;
};

MagnusTerms magnus_terms(const HamiltonianMatrix &h1, const HamiltonianMatrix &h2, double period,
                         double time_offset);

/// exp(A) for anti-Hermitian A, via the eigendecomposition of the Hermitian iA.
Eigen::MatrixXcd exp_anti_hermitian(const Eigen::MatrixXcd &a);

}  // namespace qst

#endif
