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

#ifndef QST_CHAIN_H
#define QST_CHAIN_H

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace qst {

/// Mirror-symmetric XX chain with tunable boundary couplings.
///
/// All couplings are in units of the bulk coupling, which is fixed to 1.
/// `alpha` sits on bonds (1,2) and (N-1,N), `beta` on bonds (2,3) and
/// (N-2,N-1). The deviations only touch Bob's side: bond (N-1,N) becomes
/// alpha*(1+delta_alpha) and bond (N-2,N-1) becomes beta*(1+delta_beta).
struct ChainSpec {
    int n = 10;
    double alpha = 1.0;
    double beta = 1.0;
    double delta_alpha = 0.0;
    double delta_beta = 0.0;

    /// Throws ConfigError unless every invariant holds.
    void validate() const;

    bool operator==(const ChainSpec &) const = default;
};

inline constexpr int kMinChainLength = 6;

/// Nearest-neighbour couplings J_{i,i+1}, 0-based (entry i couples sites i and i+1).
class CouplingVector {
   public:
    explicit CouplingVector(std::vector<double> values);

    std::size_t num_sites() const { return values_.size() + 1; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double> &values() const { return values_; }

    bool operator==(const CouplingVector &) const = default;

   private:
    std::vector<double> values_;
};

/// The chain Hamiltonian restricted to the single-excitation sector: an NxN
/// real symmetric tridiagonal matrix with zero diagonal. The vacuum has zero
/// energy and is not part of this block.
class HamiltonianMatrix {
   public:
    explicit HamiltonianMatrix(CouplingVector couplings) : couplings_(std::move(couplings)) {}

    std::size_t dimension() const { return couplings_.num_sites(); }
    const CouplingVector &offdiagonal() const { return couplings_; }
    Eigen::MatrixXd dense() const;

   private:
    CouplingVector couplings_;
};

CouplingVector build_couplings(const ChainSpec &spec);
HamiltonianMatrix build_hamiltonian(const CouplingVector &couplings);

inline HamiltonianMatrix build_hamiltonian(const ChainSpec &spec) {
    return build_hamiltonian(build_couplings(spec));
}

void to_json(nlohmann::json &j, const ChainSpec &spec);
void from_json(const nlohmann::json &j, ChainSpec &spec);

}  // namespace qst

#endif
