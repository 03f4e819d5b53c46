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

#include <algorithm>
#include <random>

#include "gtest/gtest.h"
#include "oracle.h"
#include "qst/errors.h"
#include "qst/propagator.h"

namespace qst {
namespace {

TEST(chain, couplings_follow_bond_layout) {
    ChainSpec spec{8, 0.4, 0.7, 0.1, -0.2};
    const CouplingVector c = build_couplings(spec);
    ASSERT_EQ(c.size(), 7u);
    ASSERT_EQ(c.num_sites(), 8u);
    EXPECT_EQ(c.values(), (std::vector<double>{0.4, 0.7, 1, 1, 1, 0.7 * 0.8, 0.4 * 1.1}));
}

TEST(chain, dense_matrix_matches_oracle) {
    for (int n : {6, 7, 10, 20}) {
        ChainSpec spec{n, 0.55, 1.2, -0.05, 0.15};
        const Eigen::MatrixXd h = build_hamiltonian(spec).dense();
        const Eigen::MatrixXd expected = oracle::chain_matrix(n, 0.55, 1.2, -0.05, 0.15);
        EXPECT_EQ(h, expected) << "n=" << n;
        EXPECT_EQ(h, h.transpose());
        EXPECT_EQ(h.diagonal().cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(chain, uniform_spectrum_is_cosine_band) {
    for (int n : {6, 10, 15, 20}) {
        const auto d = diagonalize(build_hamiltonian(ChainSpec{n}));
        auto expected = oracle::uniform_spectrum(n);
        std::sort(expected.begin(), expected.end());
        for (int k = 0; k < n; ++k) {
            EXPECT_NEAR(d.eigenvalues[k], expected[k], 1e-12) << "n=" << n << " k=" << k;
        }
    }
}

TEST(chain, spectrum_is_symmetric_about_zero) {
    // Bipartite hopping matrix: eigenvalues come in +-E pairs.
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.2, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        ChainSpec spec{6 + trial % 10, u(rng), u(rng), u(rng) - 0.5, u(rng) - 0.5};
        const auto e = diagonalize(build_hamiltonian(spec)).eigenvalues;
        for (int k = 0; k < e.size(); ++k) {
            EXPECT_NEAR(e[k], -e[e.size() - 1 - k], 1e-12);
        }
    }
}

TEST(chain, mirror_symmetry_without_deviation) {
    const Eigen::MatrixXd h = build_hamiltonian(ChainSpec{11, 0.47, 1.3}).dense();
    const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(11, 11).rowwise().reverse();
    EXPECT_EQ(r * h * r, h);
    const Eigen::MatrixXd skewed = build_hamiltonian(ChainSpec{11, 0.47, 1.3, 0.1, 0}).dense();
    EXPECT_NE(r * skewed * r, skewed);
}

TEST(chain, rejects_invalid_specs) {
    EXPECT_THROW((ChainSpec{5}.validate()), ConfigError);
    EXPECT_THROW((ChainSpec{10, 0.0}.validate()), ConfigError);
    EXPECT_THROW((ChainSpec{10, 1.0, -0.3}.validate()), ConfigError);
    EXPECT_THROW((ChainSpec{10, 1.0, 1.0, -1.0}.validate()), ConfigError);
    EXPECT_THROW((ChainSpec{10, 1.0, 1.0, 0.0, -1.5}.validate()), ConfigError);
    EXPECT_THROW((ChainSpec{10, std::nan(""), 1.0}.validate()), ConfigError);
    EXPECT_THROW(build_couplings(ChainSpec{4}), ConfigError);
    EXPECT_THROW(CouplingVector({1.0, 0.0, 1.0}), ConfigError);
    EXPECT_THROW(CouplingVector({}), ConfigError);
    EXPECT_NO_THROW((ChainSpec{6, 0.01, 3.0, 0.5, -0.5}.validate()));
}

TEST(chain, json_round_trip_and_defaults) {
    const ChainSpec spec{12, 0.47, 1.01, -0.2, 0.05};
    nlohmann::json j = spec;
    EXPECT_EQ(j.get<ChainSpec>(), spec);
    EXPECT_EQ(j.size(), 5u);

    const auto partial = nlohmann::json::parse(R"({"n": 9, "alpha": 0.5, "beta": 1.5})").get<ChainSpec>();
    EXPECT_EQ(partial, (ChainSpec{9, 0.5, 1.5, 0, 0}));

    EXPECT_THROW(nlohmann::json::parse(R"({"n": 9})").get<ChainSpec>(), ConfigError);
    EXPECT_THROW(nlohmann::json::parse(R"({"n": "ten", "alpha": 1, "beta": 1})").get<ChainSpec>(), ConfigError);
}

}  // namespace
}  // namespace qst
