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

// Acceptance checks. `qst_acceptance` runs every criterion; `qst_acceptance K`
// runs criterion K only. Prints one PASS/FAIL line per criterion and exits
// non-zero if any selected criterion fails.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracle.h"
#include "qst/disorder.h"
#include "qst/fidelity.h"
#include "qst/parrondo.h"
#include "qst/propagator.h"

namespace {

using namespace qst;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

// Published values, three decimals.
struct Published {
    int n;
    double c1, c2;
    double f_0, f_h1, f_h2;  // f_h* < 0: not printed
    double f_p;
};

constexpr Published kTable1[] = {
    {8, 0.55, 1.01, 0.854, 0.843, 0.845, 0.997},  {9, 0.53, 1.01, 0.828, 0.822, 0.818, 0.993},
    {10, 0.51, 1.01, 0.804, 0.798, 0.793, 0.989}, {11, 0.49, 1.01, 0.781, 0.771, 0.770, 0.991},
    {12, 0.47, 1.01, 0.760, 0.742, 0.749, 0.993}, {13, 0.46, 1.01, 0.740, 0.729, 0.729, 0.994},
    {14, 0.45, 1.01, 0.722, 0.716, 0.710, 0.990}, {15, 0.44, 1.01, 0.705, 0.702, 0.693, 0.984},
    {16, 0.43, 1.01, 0.688, 0.687, 0.676, 0.975}, {17, 0.42, 1.01, 0.673, 0.671, 0.661, 0.977},
    {18, 0.41, 1.01, 0.659, 0.655, 0.646, 0.977}, {19, 0.40, 1.01, 0.645, 0.638, 0.633, 0.976},
    {20, 0.39, 1.01, 0.632, 0.626, 0.620, 0.973},
};

constexpr Published kTable2[] = {
    {8, 0.77, 1.28, 0.807, 0.717, 0.716, 0.962},  {9, 0.78, 1.23, 0.767, 0.694, 0.694, 0.879},
    {10, 0.79, 1.18, 0.730, 0.679, 0.679, 0.791}, {11, 0.81, 1.14, 0.696, 0.662, 0.661, 0.746},
    {12, 0.80, 1.06, 0.664, 0.653, 0.654, 0.706},
};

constexpr Published kTable3[] = {
    {10, 0.57, 0.79, 0.730, -1, -1, 0.836}, {10, 0.57, 1.18, 0.730, -1, -1, 0.873},
    {10, 0.79, 0.57, 0.730, -1, -1, 0.773}, {10, 0.79, 1.18, 0.730, -1, -1, 0.791},
    {10, 1.18, 0.57, 0.730, -1, -1, 0.820}, {10, 1.18, 0.79, 0.730, -1, -1, 0.792},
};

// Largest first-peak drop over |delta| <= 0.02, frozen from an oracle run
// (dense-exponential propagation) before this check was written: 1.1e-3 for
// the single-qubit configuration, 2.2e-3 for the Bell one.
constexpr double kSmallDeviationDropBound = 5e-3;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail << " [x] " << what << ";";
        }
    }
};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

// -------------------------------------------------------------------------

void uniform_references(Verdict &v) {
    const PeakConfig config;
    const double single = static_peak_fidelity(ChainSpec{10}, SingleQubitScenario{}, config);
    const double bell = static_peak_fidelity(ChainSpec{10}, BellScenario{}, config);
    v.detail << "single " << fmt(single) << " (0.804), bell " << fmt(bell) << " (0.730)";
    v.require(std::abs(single - 0.804) <= 0.005, "single-qubit reference off by more than 0.005");
    v.require(std::abs(bell - 0.730) <= 0.005, "Bell reference off by more than 0.005");
}

void table_check(Verdict &v, int id, std::span<const Published> published, bool check_parrondo) {
    TableOptions options;
    options.jobs = jobs();
    const TableResult t = reproduce_table(id, options);
    v.detail << t.rows.size() << " rows;";
    v.require(t.rows.size() == published.size(), "row count " + std::to_string(t.rows.size()));
    for (std::size_t k = 0; k < std::min(t.rows.size(), published.size()); ++k) {
        const TableRow &r = t.rows[k];
        const Published &p = published[k];
        const std::string tag = "N=" + std::to_string(r.n) + " (" + fmt(r.coupling1, 2) + "," + fmt(r.coupling2, 2) + ")";
        v.require(std::abs(r.f_0 - p.f_0) <= 0.005, tag + " F0 " + fmt(r.f_0) + " vs " + fmt(p.f_0, 3));
        if (p.f_h1 >= 0) {
            v.require(std::abs(r.f_h1 - p.f_h1) <= 0.005, tag + " F_H1 " + fmt(r.f_h1) + " vs " + fmt(p.f_h1, 3));
            v.require(std::abs(r.f_h2 - p.f_h2) <= 0.005, tag + " F_H2 " + fmt(r.f_h2) + " vs " + fmt(p.f_h2, 3));
        }
        v.require(std::abs(r.f_p_at_listed - p.f_p) <= 0.01,
                  tag + " F_P at listed point " + fmt(r.f_p_at_listed) + " vs " + fmt(p.f_p, 3));
        v.require(r.best_f_p >= p.f_p - 0.01, tag + " sweep optimum " + fmt(r.best_f_p) + " at (" +
                                                  fmt(r.best_omega, 2) + "," + fmt(r.best_eta, 2) + ") below " +
                                                  fmt(p.f_p, 3) + " - 0.01");
        if (check_parrondo) {
            v.require(ParrondoOutcome::classify(r.f_h1, r.f_h2, r.f_0, r.best_f_p), tag + " not a Parrondo row");
        }
        std::cerr << "  table " << id << " " << tag << ": F0 " << fmt(r.f_0) << " F_H1 " << fmt(r.f_h1) << " F_H2 "
                  << fmt(r.f_h2) << " F_P(listed) " << fmt(r.f_p_at_listed) << " best " << fmt(r.best_f_p) << " @ ("
                  << fmt(r.best_omega, 2) << "," << fmt(r.best_eta, 2) << ")\n";
    }
    if (id == 3 && t.rows.size() == 6) {
        v.detail << " (0.57,0.79) " << fmt(t.rows[0].f_p_at_listed) << " vs (0.79,0.57) " << fmt(t.rows[2].f_p_at_listed)
                 << ";";
        v.require(t.rows[0].f_p_at_listed > t.rows[2].f_p_at_listed, "order asymmetry (listed points) not reproduced");
        v.require(t.rows[0].best_f_p > t.rows[2].best_f_p, "order asymmetry (sweep optima) not reproduced");
    }
}

void fig3_claim(Verdict &v) {
    const PeakConfig config;
    const SweepGrid grid{0.50, 3.50, 0.01, 0.5, 0.5, 0.01};
    const DriveProtocol p{chain_with(10, Coupling::alpha, 0.5), chain_with(10, Coupling::alpha, 1.5), 1, 0.5};
    const SweepResult r = sweep(p, grid, SingleQubitScenario{}, config, jobs());
    v.detail << "best omega " << fmt(r.best_omega, 2) << " with F " << fmt(r.best_f_p) << " (need >= 0.854)";
    v.require(r.best_f_p >= 0.804 + 0.05, "no omega beats the reference by 0.05");
}

void high_frequency_limit(Verdict &v) {
    const DriveProtocol base{ChainSpec{10, 0.5}, ChainSpec{10, 1.5}, 1, 0.5};
    AmplitudeState s;
    s.sites = Eigen::VectorXcd::Zero(10);
    s.sites[0] = 1;
    std::vector<double> diffs;
    for (double omega : {50.0, 100.0, 200.0}) {
        DriveProtocol p = base;
        p.omega = omega;
        diffs.push_back((driven_propagate(p, s, 10).sites - effective_propagate(p, s, 10).sites).cwiseAbs().maxCoeff());
    }
    const double r1 = diffs[0] / diffs[1], r2 = diffs[1] / diffs[2];
    v.detail << "diffs " << sci(diffs[0]) << ", " << sci(diffs[1]) << ", " << sci(diffs[2]) << "; ratios " << fmt(r1, 3)
             << ", " << fmt(r2, 3);
    v.require(r1 >= 1.5 && r1 <= 2.5, "50->100 ratio outside [1.5, 2.5]");
    v.require(r2 >= 1.5 && r2 <= 2.5, "100->200 ratio outside [1.5, 2.5]");
}

void magnus_order(Verdict &v) {
    const HamiltonianMatrix h1 = build_hamiltonian(ChainSpec{10, 0.5});
    const HamiltonianMatrix h2 = build_hamiltonian(ChainSpec{10, 1.5});
    for (double eta : {0.5, 0.3}) {
        std::vector<double> errs;
        for (int halving = 0; halving <= 3; ++halving) {
            const double period = 0.2 / (1 << halving);
            const DriveProtocol p{ChainSpec{10, 0.5}, ChainSpec{10, 1.5}, 2 * kPi / period, eta};
            const MagnusTerms m = magnus_terms(h1, h2, period, p.time_offset());
            errs.push_back((exp_anti_hermitian(m.omega1 + m.omega2) - one_period_propagator(p)).cwiseAbs().maxCoeff());
        }
        v.detail << "eta " << eta << ": ratios";
        for (std::size_t k = 1; k < errs.size(); ++k) {
            const double ratio = errs[k - 1] / errs[k];
            v.detail << " " << fmt(ratio, 2);
            v.require(ratio >= 6 && ratio <= 10, "ratio " + fmt(ratio, 2) + " outside [6, 10]");
        }
        v.detail << "; ";
    }
    const bool same = magnus_terms(h1, h1, 0.2, 0.03).omega2.cwiseAbs().maxCoeff() == 0;
    const bool edge = magnus_terms(h1, h2, 0.2, 0.1).omega2.cwiseAbs().maxCoeff() == 0 &&
                      magnus_terms(h1, h2, 0.2, -0.1).omega2.cwiseAbs().maxCoeff() == 0;
    v.detail << "Omega2 zero for H1=H2: " << same << ", for |dT|=T/2: " << edge;
    v.require(same && edge, "Omega2 not exactly zero in a degenerate case");
}

void invariant_suites(Verdict &v) {
    std::mt19937 rng(314159);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, 1.0);

    // Unitarity over 10^4 propagations.
    AmplitudeState s;
    s.vacuum = {0.6, 0};
    s.sites = Eigen::VectorXcd::Zero(10);
    s.sites[0] = {0, 0.8};
    const Evolver driven = Evolver::driven(DriveProtocol{ChainSpec{10, 0.51}, ChainSpec{10, 1.01}, 1.14, 0.42});
    for (int k = 0; k < 10000; ++k) {
        s = driven.propagate(s, 0.173);
    }
    const double drift = std::abs(s.norm_squared() - 1);
    v.detail << "norm drift " << sci(drift);
    v.require(drift <= 1e-12, "norm drift above 1e-12");

    // phi-invariance of the single-qubit fidelity.
    double phi_gap = 0;
    const PeakConfig config;
    for (double theta : {kPi, 2.0, 0.7}) {
        const auto base = fidelity_series(driven, SingleQubitScenario{{theta, 0}}, config);
        for (double phi : {1.0, 2.5, 5.9}) {
            const BlochAngles angles{theta, phi};
            const AmplitudeState start = initial_state_single(angles, 10);
            for (std::size_t j = 0; j < base.taus.size(); j += 111) {
                const double via_rho =
                    single_qubit_overlap(reduced_density_last_site(driven.propagate(start, base.taus[j])), angles);
                phi_gap = std::max(phi_gap, std::abs(via_rho - base.values[j]));
            }
        }
    }
    v.detail << "; phi gap " << sci(phi_gap);
    v.require(phi_gap <= 1e-12, "phi dependence above 1e-12");

    // Dense exponential oracle for random N <= 8 chains.
    double dense_gap = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 7;
        std::vector<double> bonds(n - 1);
        for (auto &b : bonds) {
            b = 0.1 + 2 * u(rng);
        }
        const HamiltonianMatrix h(CouplingVector{bonds});
        const double tau = 15 * u(rng);
        dense_gap = std::max(
            dense_gap, (static_unitary(diagonalize(h), tau) - oracle::evolution(h.dense(), tau)).cwiseAbs().maxCoeff());
    }
    v.detail << "; dense gap " << sci(dense_gap);
    v.require(dense_gap <= 1e-9, "dense-oracle gap above 1e-9");

    // Stroboscopic vs continuous at tau = mT.
    const DriveProtocol p{ChainSpec{10, 0.5}, ChainSpec{10, 1.5}, 1.42, 0.37};
    const Eigen::MatrixXcd u_period = one_period_propagator(p);
    AmplitudeState start;
    start.sites = Eigen::VectorXcd::Zero(10);
    start.sites[0] = 1;
    Eigen::VectorXcd strobe = start.sites;
    double strobe_gap = 0;
    for (int m = 1; m <= 30; ++m) {
        strobe = u_period * strobe;
        strobe_gap =
            std::max(strobe_gap, (driven_propagate(p, start, m * p.period()).sites - strobe).cwiseAbs().maxCoeff());
    }
    v.detail << "; strobe gap " << sci(strobe_gap);
    v.require(strobe_gap <= 1e-10, "stroboscopic gap above 1e-10");

    // Bell fidelity: amplitude formula vs pair density-matrix overlap.
    double bell_gap = 0;
    const Evolver bell = Evolver::driven(DriveProtocol{ChainSpec{10, 1, 0.79}, ChainSpec{10, 1, 1.18}, 2.17, 0.5});
    for (BellSign sign : {BellSign::plus, BellSign::minus}) {
        const auto series = fidelity_series(bell, BellScenario{sign}, config);
        const AmplitudeState b0 = initial_state_bell(sign, 10);
        for (std::size_t j = 0; j < series.taus.size(); j += 37) {
            const double overlap = bell_overlap(reduced_density_last_pair(bell.propagate(b0, series.taus[j])), sign);
            bell_gap = std::max(bell_gap, std::abs(overlap - series.values[j]));
        }
    }
    v.detail << "; Bell gap " << sci(bell_gap);
    v.require(bell_gap <= 1e-12, "Bell dual-route gap above 1e-12");
}

// Dense-oracle first-peak fidelity for a deviated protocol.
double oracle_peak(const DriveProtocol &p, const Scenario &scenario, double da, double db) {
    const int n = p.first.n;
    const auto h1 = oracle::chain_matrix(n, p.first.alpha, p.first.beta, da, db);
    const auto h2 = oracle::chain_matrix(n, p.second.alpha, p.second.beta, da, db);
    const PeakConfig config;
    const bool single = std::holds_alternative<SingleQubitScenario>(scenario);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
    if (single) {
        psi[0] = 1;
    } else {
        psi[0] = psi[1] = std::sqrt(0.5);
    }
    FidelitySeries series;
    double t = 0;
    for (std::size_t j = 0; j < config.sample_count(n); ++j) {
        const double tau = static_cast<double>(j) * config.dtau;
        psi = oracle::driven_state(h1, h2, p.omega, p.eta, psi, t, tau);
        t = tau;
        series.taus.push_back(tau);
        series.values.push_back(single ? oracle::single_qubit_fidelity(psi[n - 1], kPi, 0)
                                       : 0.5 * std::norm(psi[n - 2] + psi[n - 1]));
    }
    return first_arrival_peak(series, config).f_star;
}

void disorder_robustness(Verdict &v) {
    struct Case {
        const char *name;
        DriveProtocol protocol;
        Scenario scenario;
        Deviation which;
    };
    const Case cases[] = {
        {"single/delta_alpha", {ChainSpec{12, 0.47}, ChainSpec{12, 1.01}, 1.84, 0.64}, SingleQubitScenario{},
         Deviation::delta_alpha},
        {"bell/delta_beta", {ChainSpec{12, 1, 0.80}, ChainSpec{12, 1, 1.06}, 1.78, 0.43}, BellScenario{},
         Deviation::delta_beta},
    };
    const PeakConfig config;
    for (const Case &c : cases) {
        const DisorderScan scan = disorder_scan(c.protocol, c.scenario, c.which, -0.2, 0.2, 0.01, config, jobs());
        const double clean = first_arrival_peak(Evolver::driven(c.protocol), c.scenario, config).f_star;
        const std::string tag = c.name;
        v.require(scan.delta_values.size() == 41, tag + " scan has " + std::to_string(scan.delta_values.size()) + " points");
        bool all_present = true;
        for (const auto &f : scan.f_peak_values) {
            all_present = all_present && f.has_value();
        }
        v.require(all_present, tag + " has failed points");
        if (scan.delta_values.size() != 41 || !all_present) {
            continue;
        }
        v.require(scan.delta_values[20] == 0.0 && *scan.f_peak_values[20] == clean && scan.baseline == clean,
                  tag + " delta=0 not bit-identical to the clean run");
        const double lo = *scan.f_peak_values.front(), hi = *scan.f_peak_values.back();
        v.require(lo < clean && hi < clean, tag + " endpoint not below baseline");

        double worst_drop = 0, oracle_gap = 0, oracle_worst = 0;
        const double oracle_clean = oracle_peak(c.protocol, c.scenario, 0, 0);
        for (std::size_t k = 18; k <= 22; ++k) {
            worst_drop = std::max(worst_drop, clean - *scan.f_peak_values[k]);
            const double d = scan.delta_values[k];
            const double da = c.which == Deviation::delta_alpha ? d : 0, db = c.which == Deviation::delta_beta ? d : 0;
            const double reference = oracle_peak(c.protocol, c.scenario, da, db);
            oracle_gap = std::max(oracle_gap, std::abs(reference - *scan.f_peak_values[k]));
            oracle_worst = std::max(oracle_worst, oracle_clean - reference);
        }
        v.detail << tag << ": F(0) " << fmt(clean) << ", F(-0.2) " << fmt(lo) << ", F(+0.2) " << fmt(hi)
                 << ", max drop |d|<=0.02 " << sci(worst_drop) << " (oracle " << sci(oracle_worst) << ", gap "
                 << sci(oracle_gap) << "); ";
        v.require(worst_drop <= kSmallDeviationDropBound, tag + " small-deviation drop above the frozen bound");
        v.require(oracle_gap <= 1e-8, tag + " disagrees with the dense oracle");
    }
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

void determinism(Verdict &v) {
    const fs::path root = fs::temp_directory_path() / "qst_acceptance_determinism";
    fs::remove_all(root);
    const std::string exe = QST_CLI_EXE;
    const std::vector<std::string> commands = {
        "sweep --omega-min 1 --omega-max 2 --omega-step 0.1 --eta-step 0.1 --jobs 3",
        "table --id 3 --no-sweep",
        "disorder --n 12 --value1 0.47 --value2 1.01 --omega 1.84 --eta 0.64 --pairs 0:0,0.1:0 --jobs 2",
        "scan-static --scenario bell --coupling beta --from 0.4 --to 1.4 --step 0.05 --format json",
        "evolve --driven --effective --static",
    };
    std::size_t files = 0;
    for (std::size_t k = 0; k < commands.size(); ++k) {
        const fs::path a = root / ("a" + std::to_string(k)), b = root / ("b" + std::to_string(k));
        for (const fs::path &dir : {a, b}) {
            const std::string cmd = exe + " " + commands[k] + " --out " + dir.string() + " > /dev/null";
            v.require(std::system(cmd.c_str()) == 0, "'" + commands[k] + "' failed");
        }
        for (const auto &entry : fs::directory_iterator(a)) {
            ++files;
            const fs::path twin = b / entry.path().filename();
            v.require(fs::exists(twin) && slurp(entry.path()) == slurp(twin),
                      entry.path().filename().string() + " differs between runs");
        }
    }
    v.detail << files << " files compared across " << commands.size() << " commands";
    fs::remove_all(root);
}

struct Criterion {
    int id;
    const char *name;
    std::function<void(Verdict &)> run;
};

}  // namespace

int main(int argc, char **argv) {
    const std::vector<Criterion> criteria = {
        {1, "uniform-chain reference fidelities", uniform_references},
        {2, "table 1 reproduction", [](Verdict &v) { table_check(v, 1, kTable1, true); }},
        {3, "table 2 reproduction", [](Verdict &v) { table_check(v, 2, kTable2, true); }},
        {4, "table 3 reproduction and order asymmetry", [](Verdict &v) { table_check(v, 3, kTable3, false); }},
        {5, "equal-period driving beats the uniform chain", fig3_claim},
        {6, "high-frequency limit", high_frequency_limit},
        {7, "Magnus truncation order", magnus_order},
        {8, "invariant suites", invariant_suites},
        {9, "disorder robustness", disorder_robustness},
        {10, "CLI determinism", determinism},
    };
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    bool all_pass = true;
    for (const auto &c : criteria) {
        if (only != 0 && c.id != only) {
            continue;
        }
        Verdict v;
        try {
            c.run(v);
        } catch (const std::exception &e) {
            v.pass = false;
            v.detail << " exception: " << e.what();
        }
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << v.detail.str()
                  << std::endl;
        all_pass = all_pass && v.pass;
    }
    return all_pass ? 0 : 1;
}
