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

#include "qst/chain.h"

#include <cmath>
#include <string>

#include "qst/errors.h"

namespace qst {

namespace {

void require_finite(double v, const char *name) {
    if (!std::isfinite(v)) {
        throw ConfigError(std::string("chain parameter '") + name + "' must be finite");
    }
}

}  // namespace

void ChainSpec::validate() const {
    if (n < kMinChainLength) {
        throw ConfigError("chain length must be at least " + std::to_string(kMinChainLength) + ", got " +
                          std::to_string(n));
    }
    require_finite(alpha, "alpha");
    require_finite(beta, "beta");
    require_finite(delta_alpha, "delta_alpha");
    require_finite(delta_beta, "delta_beta");
    if (!(alpha > 0) || !(beta > 0)) {
        throw ConfigError("boundary couplings must be positive (alpha=" + std::to_string(alpha) +
                          ", beta=" + std::to_string(beta) + ")");
    }
    if (!(1 + delta_alpha > 0) || !(1 + delta_beta > 0)) {
        throw ConfigError("deviation makes a coupling non-positive (delta_alpha=" + std::to_string(delta_alpha) +
                          ", delta_beta=" + std::to_string(delta_beta) + ")");
    }
}

CouplingVector::CouplingVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw ConfigError("coupling vector needs at least one bond");
    }
    for (double v : values_) {
        if (!std::isfinite(v) || !(v > 0)) {
            throw ConfigError("couplings must be positive and finite, got " + std::to_string(v));
        }
    }
}

Eigen::MatrixXd HamiltonianMatrix::dense() const {
    const auto n = static_cast<Eigen::Index>(dimension());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        h(k, k + 1) = couplings_[k];
        h(k + 1, k) = couplings_[k];
    }
    return h;
}

CouplingVector build_couplings(const ChainSpec &spec) {
    spec.validate();
    const auto bonds = static_cast<std::size_t>(spec.n - 1);
    std::vector<double> v(bonds, 1.0);
    v[0] = spec.alpha;
    v[1] = spec.beta;
    v[bonds - 2] = spec.beta * (1 + spec.delta_beta);
    v[bonds - 1] = spec.alpha * (1 + spec.delta_alpha);
    return CouplingVector(std::move(v));
}

HamiltonianMatrix build_hamiltonian(const CouplingVector &couplings) {
    return HamiltonianMatrix(couplings);
}

void to_json(nlohmann::json &j, const ChainSpec &spec) {
    j = nlohmann::json{{"n", spec.n},
                       {"alpha", spec.alpha},
                       {"beta", spec.beta},
                       {"delta_alpha", spec.delta_alpha},
                       {"delta_beta", spec.delta_beta}};
}

void from_json(const nlohmann::json &j, ChainSpec &spec) {
    try {
        spec.n = j.at("n").get<int>();
        spec.alpha = j.at("alpha").get<double>();
        spec.beta = j.at("beta").get<double>();
        spec.delta_alpha = j.value("delta_alpha", 0.0);
        spec.delta_beta = j.value("delta_beta", 0.0);
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("invalid chain spec: ") + e.what());
    }
}

}  // namespace qst
