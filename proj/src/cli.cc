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

#include "qst/cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "qst/csv.h"
#include "qst/disorder.h"
#include "qst/errors.h"

#ifndef QST_DATA_DIR
#define QST_DATA_DIR "data"
#endif

namespace qst::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------- RunConfig

Scenario RunConfig::resolved_scenario() const {
    if (scenario == "single") {
        return SingleQubitScenario{BlochAngles{theta, phi}};
    }
    if (scenario == "bell") {
        return BellScenario{sign > 0 ? BellSign::plus : BellSign::minus};
    }
    throw ConfigError("scenario must be 'single' or 'bell', got '" + scenario + "'");
}

Coupling RunConfig::resolved_coupling() const {
    if (coupling.empty()) {
        return scenario == "bell" ? Coupling::beta : Coupling::alpha;
    }
    return parse_coupling(coupling);
}

PeakConfig RunConfig::peak_config() const { return PeakConfig{tau_max, dtau, threshold}; }

SweepGrid RunConfig::resolved_grid() const {
    if (grid) {
        return *grid;
    }
    return scenario == "bell" ? SweepGrid::bell_default() : SweepGrid::single_qubit_default();
}

DriveProtocol RunConfig::protocol() const {
    const Coupling which = resolved_coupling();
    DriveProtocol p{chain, chain, omega, eta};
    (which == Coupling::alpha ? p.first.alpha : p.first.beta) = value1;
    (which == Coupling::alpha ? p.second.alpha : p.second.beta) = value2;
    return p;
}

void RunConfig::validate() const {
    const Scenario s = resolved_scenario();
    if (sign != 1 && sign != -1) {
        throw ConfigError("sign must be +1 or -1");
    }
    if (std::holds_alternative<SingleQubitScenario>(s)) {
        std::get<SingleQubitScenario>(s).angles.validate();
    }
    chain.validate();
    resolved_coupling();
    parse_deviation(deviation);
    peak_config().validate(static_cast<std::size_t>(chain.n));
    if (!(std::isfinite(omega) && omega > 0) || !(eta >= 0 && eta <= 1)) {
        throw ConfigError("drive needs omega > 0 and eta in [0, 1]");
    }
    if (grid) {
        grid->validate();
    }
    if (format != "csv" && format != "json") {
        throw ConfigError("format must be 'csv' or 'json', got '" + format + "'");
    }
    if (jobs < 0) {
        throw ConfigError("jobs must be >= 0 (0 = one per hardware thread)");
    }
    if (output_dir.empty()) {
        throw ConfigError("output directory must not be empty");
    }
}

namespace {

template <class T>
json optional_to_json(const std::optional<T> &v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
void read_optional(const json &j, const char *key, std::optional<T> &v) {
    if (!j.contains(key)) {
        return;
    }
    if (j.at(key).is_null()) {
        v.reset();
    } else {
        v = j.at(key).get<T>();
    }
}

template <class T>
void read(const json &j, const char *key, T &v) {
    if (j.contains(key)) {
        v = j.at(key).get<T>();
    }
}

constexpr const char *kConfigKeys[] = {
    "scenario", "chain", "coupling", "value1", "value2", "omega", "eta", "theta", "phi", "sign",
    "tau_max", "dtau", "threshold", "from", "to", "step", "grid", "static", "driven", "effective",
    "table_id", "table_sweep", "reference", "deviation", "pairs", "disorder_scan", "series", "out",
    "format", "jobs",
};

}  // namespace

void to_json(json &j, const RunConfig &c) {
    j = json{
        {"scenario", c.scenario},
        {"chain", c.chain},
        {"coupling", c.coupling},
        {"value1", c.value1},
        {"value2", c.value2},
        {"omega", c.omega},
        {"eta", c.eta},
        {"theta", c.theta},
        {"phi", c.phi},
        {"sign", c.sign},
        {"tau_max", optional_to_json(c.tau_max)},
        {"dtau", c.dtau},
        {"threshold", c.threshold},
        {"from", optional_to_json(c.range_from)},
        {"to", optional_to_json(c.range_to)},
        {"step", optional_to_json(c.range_step)},
        {"static", c.evolve_static},
        {"driven", c.evolve_driven},
        {"effective", c.evolve_effective},
        {"table_id", c.table_id},
        {"table_sweep", c.table_sweep},
        {"reference", c.reference_file},
        {"deviation", c.deviation},
        {"pairs", c.deviation_pairs},
        {"disorder_scan", c.disorder_scan},
        {"series", c.series_file},
        {"out", c.output_dir},
        {"format", c.format},
        {"jobs", c.jobs},
    };
    if (c.grid) {
        const SweepGrid &g = *c.grid;
        j["grid"] = json{{"omega_min", g.omega_min}, {"omega_max", g.omega_max}, {"omega_step", g.omega_step},
                         {"eta_min", g.eta_min},     {"eta_max", g.eta_max},     {"eta_step", g.eta_step}};
    } else {
        j["grid"] = nullptr;
    }
}

void from_json(const json &j, RunConfig &c) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    for (const auto &[key, value] : j.items()) {
        if (std::find_if(std::begin(kConfigKeys), std::end(kConfigKeys),
                         [&](const char *k) { return key == k; }) == std::end(kConfigKeys)) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    try {
        read(j, "scenario", c.scenario);
        if (j.contains("chain")) {
            c.chain = j.at("chain").get<ChainSpec>();
        }
        read(j, "coupling", c.coupling);
        read(j, "value1", c.value1);
        read(j, "value2", c.value2);
        read(j, "omega", c.omega);
        read(j, "eta", c.eta);
        read(j, "theta", c.theta);
        read(j, "phi", c.phi);
        read(j, "sign", c.sign);
        read_optional(j, "tau_max", c.tau_max);
        read(j, "dtau", c.dtau);
        read(j, "threshold", c.threshold);
        read_optional(j, "from", c.range_from);
        read_optional(j, "to", c.range_to);
        read_optional(j, "step", c.range_step);
        if (j.contains("grid")) {
            const json &g = j.at("grid");
            if (g.is_null()) {
                c.grid.reset();
            } else {
                SweepGrid grid = c.resolved_grid();
                read(g, "omega_min", grid.omega_min);
                read(g, "omega_max", grid.omega_max);
                read(g, "omega_step", grid.omega_step);
                read(g, "eta_min", grid.eta_min);
                read(g, "eta_max", grid.eta_max);
                read(g, "eta_step", grid.eta_step);
                c.grid = grid;
            }
        }
        read(j, "static", c.evolve_static);
        read(j, "driven", c.evolve_driven);
        read(j, "effective", c.evolve_effective);
        read(j, "table_id", c.table_id);
        read(j, "table_sweep", c.table_sweep);
        read(j, "reference", c.reference_file);
        read(j, "deviation", c.deviation);
        read(j, "pairs", c.deviation_pairs);
        read(j, "disorder_scan", c.disorder_scan);
        read(j, "series", c.series_file);
        read(j, "out", c.output_dir);
        read(j, "format", c.format);
        read(j, "jobs", c.jobs);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
}

namespace {

// ------------------------------------------------------------------ output

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Sheet {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

ordered_json number(double v) { return std::isfinite(v) ? ordered_json(round_sig6(v)) : ordered_json(nullptr); }

class Output {
   public:
    Output(const RunConfig &config, std::ostream &log) : dir_(config.output_dir), format_(config.format), log_(log) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) {
            throw ConfigError("output directory '" + dir_.string() + "' is not writable");
        }
    }

    /// Writes `<stem>.csv` or `<stem>.json` depending on the configured format.
    void sheet(const std::string &stem, const Sheet &s) const {
        std::ostringstream body;
        if (format_ == "csv") {
            CsvWriter csv(body, std::span<const std::string>(s.header));
            for (const auto &row : s.rows) {
                for (const Cell &c : row) {
                    std::visit(
                        [&](const auto &v) {
                            using V = std::decay_t<decltype(v)>;
                            if constexpr (std::is_same_v<V, std::monostate>) {
                                csv.cell(std::string_view());
                            } else if constexpr (std::is_same_v<V, double>) {
                                std::isfinite(v) ? csv.cell(v) : csv.cell(std::string_view());
                            } else if constexpr (std::is_same_v<V, std::string>) {
                                csv.cell(std::string_view(v));
                            } else {
                                csv.cell(v);
                            }
                        },
                        c);
                }
                csv.end_row();
            }
            write(stem + ".csv", body.str());
        } else {
            ordered_json rows = ordered_json::array();
            for (const auto &row : s.rows) {
                ordered_json obj = ordered_json::object();
                for (std::size_t k = 0; k < row.size(); ++k) {
                    obj[s.header[k]] = std::visit(
                        [](const auto &v) -> ordered_json {
                            using V = std::decay_t<decltype(v)>;
                            if constexpr (std::is_same_v<V, std::monostate>) {
                                return nullptr;
                            } else if constexpr (std::is_same_v<V, double>) {
                                return number(v);
                            } else {
                                return v;
                            }
                        },
                        row[k]);
                }
                rows.push_back(std::move(obj));
            }
            write(stem + ".json", rows.dump(2) + "\n");
        }
    }

    void summary(const std::string &name, const ordered_json &j) const { write(name, j.dump(2) + "\n"); }

   private:
    void write(const std::string &name, const std::string &content) const {
        const fs::path path = dir_ / name;
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << content;
        f.close();
        if (!f) {
            throw ConfigError("cannot write '" + path.string() + "'");
        }
        log_ << "wrote " << path.string() << '\n';
    }

    fs::path dir_;
    std::string format_;
    std::ostream &log_;
};

Sheet series_sheet(const FidelitySeries &series) {
    Sheet s{{"tau", "fidelity"}, {}};
    s.rows.reserve(series.taus.size());
    for (std::size_t j = 0; j < series.taus.size(); ++j) {
        s.rows.push_back({series.taus[j], series.values[j]});
    }
    return s;
}

ordered_json peak_json(const FidelitySeries &series, const PeakConfig &config) {
    try {
        const Peak p = first_arrival_peak(series, config);
        return {{"tau_star", number(p.tau_star)}, {"f_star", number(p.f_star)}};
    } catch (const NoArrivalError &e) {
        return {{"tau_star", nullptr}, {"f_star", nullptr}, {"error", e.what()}};
    }
}

ordered_json outcome_json(const ParrondoOutcome &o) {
    return {{"f_0", number(o.f_0)},
            {"f_h1", number(o.f_h1)},
            {"f_h2", number(o.f_h2)},
            {"f_p", number(o.f_p)},
            {"is_parrondo", o.is_parrondo}};
}

std::vector<double> scan_values(double from, double to, double step) {
    if (!(std::isfinite(from) && std::isfinite(to) && std::isfinite(step))) {
        throw ConfigError("scan range must be finite");
    }
    if (!(step > 0) || to < from) {
        throw ConfigError("empty scan range");
    }
    const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    std::vector<double> values(count);
    for (std::size_t k = 0; k < count; ++k) {
        values[k] = from + static_cast<double>(k) * step;
    }
    return values;
}

// ---------------------------------------------------------------- commands

int cmd_scan_static(const RunConfig &c, const Output &io, std::ostream &out) {
    const bool bell = c.scenario == "bell";
    const auto values = scan_values(c.range_from.value_or(bell ? 0.4 : 0.3), c.range_to.value_or(bell ? 1.4 : 1.7),
                                    c.range_step.value_or(0.01));
    const Coupling which = c.resolved_coupling();
    const auto points = static_scan(c.resolved_scenario(), c.chain.n, which, values, c.peak_config());
    Sheet s{{to_string(which), "f_peak", "ratio"}, {}};
    for (const auto &p : points) {
        s.rows.push_back({p.coupling_value, p.f_peak, p.ratio});
    }
    io.sheet(std::string("scan_static_") + to_string(which), s);
    const auto best = std::max_element(points.begin(), points.end(),
                                       [](const auto &a, const auto &b) { return a.f_peak < b.f_peak; });
    out << "reference F0 = " << format_number(best->f_peak / best->ratio) << "; best " << to_string(which) << " = "
        << format_number(best->coupling_value) << " with F = " << format_number(best->f_peak) << '\n';
    return kExitOk;
}

int cmd_evolve(const RunConfig &c, const Output &io, std::ostream &out) {
    const Scenario scenario = c.resolved_scenario();
    const PeakConfig config = c.peak_config();
    const bool none = !c.evolve_static && !c.evolve_driven && !c.evolve_effective;

    std::vector<std::pair<std::string, Evolver>> modes;
    if (c.evolve_static || none) {
        modes.emplace_back("static", Evolver::static_chain(c.chain));
    }
    if (c.evolve_driven) {
        modes.emplace_back("driven", Evolver::driven(c.protocol()));
    }
    if (c.evolve_effective) {
        modes.emplace_back("effective", Evolver::static_chain(effective_spec(c.protocol())));
    }

    ordered_json peaks = ordered_json::object();
    for (const auto &[name, evolver] : modes) {
        const FidelitySeries series = fidelity_series(evolver, scenario, config);
        io.sheet("evolve_" + name, series_sheet(series));
        peaks[name] = peak_json(series, config);
        const auto &f = peaks[name]["f_star"];
        out << name << ": first peak " << (f.is_null() ? std::string("not found") : format_number(f.get<double>()))
            << '\n';
    }
    ordered_json summary = {{"scenario", c.scenario}, {"n", c.chain.n}};
    if (c.evolve_driven || c.evolve_effective) {
        summary["drive"] = {{"coupling", to_string(c.resolved_coupling())},
                            {"value1", number(c.value1)},
                            {"value2", number(c.value2)},
                            {"omega", number(c.omega)},
                            {"eta", number(c.eta)}};
    }
    summary["peaks"] = std::move(peaks);
    io.summary("evolve_summary.json", summary);
    return kExitOk;
}

int cmd_sweep(const RunConfig &c, const Output &io, std::ostream &out) {
    const Scenario scenario = c.resolved_scenario();
    const PeakConfig config = c.peak_config();
    const SweepGrid grid = c.resolved_grid();
    const DriveProtocol base = c.protocol();
    const SweepResult result = sweep(base, grid, scenario, config, c.jobs);

    Sheet s{{"omega", "eta", "f_p"}, {}};
    s.rows.reserve(result.grid.size());
    for (const auto &r : result.grid) {
        s.rows.push_back({r.omega, r.eta, r.f_p});
    }
    io.sheet("sweep_grid", s);

    DriveProtocol best = base;
    best.omega = result.best_omega;
    best.eta = result.best_eta;
    const ParrondoOutcome outcome = evaluate_protocol(best, scenario, config);
    const ordered_json summary = {
        {"scenario", c.scenario},
        {"n", c.chain.n},
        {"coupling", to_string(c.resolved_coupling())},
        {"value1", number(c.value1)},
        {"value2", number(c.value2)},
        {"best", {{"omega", number(result.best_omega)}, {"eta", number(result.best_eta)}, {"f_p", number(result.best_f_p)}}},
        {"outcome", outcome_json(outcome)},
        {"points", result.grid.size()},
        {"failures", result.failures},
    };
    io.summary("sweep_summary.json", summary);
    out << "best omega = " << format_number(result.best_omega) << ", eta = " << format_number(result.best_eta)
        << ", F_P = " << format_number(result.best_f_p) << (outcome.is_parrondo ? " (parrondo)" : "") << '\n';
    return kExitOk;
}

struct ReferenceRow {
    int n;
    double coupling1, coupling2;
    json values;
};

std::vector<ReferenceRow> load_reference(const RunConfig &c, int table_id) {
    if (c.reference_file == "none") {
        return {};
    }
    fs::path path = c.reference_file;
    if (path.empty()) {
        path = fs::path(QST_DATA_DIR) / "reference_tables.json";
        if (!fs::exists(path)) {
            return {};
        }
    }
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("cannot read reference file '" + path.string() + "'");
    }
    std::vector<ReferenceRow> rows;
    try {
        const json doc = json::parse(f);
        const std::string key = std::to_string(table_id);
        if (!doc.at("tables").contains(key)) {
            return {};
        }
        for (const json &r : doc.at("tables").at(key)) {
            rows.push_back({r.at("n").get<int>(), r.at("coupling1").get<double>(), r.at("coupling2").get<double>(), r});
        }
    } catch (const json::exception &e) {
        throw ConfigError("malformed reference file '" + path.string() + "': " + e.what());
    }
    return rows;
}

Cell reference_cell(const ReferenceRow *ref, const char *key) {
    if (ref == nullptr || !ref->values.contains(key) || ref->values.at(key).is_null()) {
        return std::monostate{};
    }
    return ref->values.at(key).get<double>();
}

Cell difference(double computed, const Cell &reference) {
    if (!std::isfinite(computed) || !std::holds_alternative<double>(reference)) {
        return std::monostate{};
    }
    return computed - std::get<double>(reference);
}

int cmd_table(const RunConfig &c, const Output &io, std::ostream &out) {
    TableOptions options;
    options.config = c.peak_config();
    options.grid = c.grid;
    options.run_sweep = c.table_sweep;
    options.jobs = c.jobs;
    // Resolve the reference before the (slow) reproduction so bad paths fail fast.
    const auto refs = load_reference(c, c.table_id);
    const TableResult table = reproduce_table(c.table_id, options);

    const std::string c1 = std::string(to_string(table.driven)) + "1";
    const std::string c2 = std::string(to_string(table.driven)) + "2";
    Sheet s{{"n", c1, c2, "f_0", "f_h1", "f_h2", "omega", "eta", "f_p", "listed_omega", "listed_eta",
             "f_p_listed", "parrondo"},
            {}};
    if (!refs.empty()) {
        for (const char *h : {"ref_f_0", "ref_f_h1", "ref_f_h2", "ref_omega", "ref_eta", "ref_f_p", "diff_f_p",
                              "diff_f_p_listed"}) {
            s.header.emplace_back(h);
        }
    }
    for (const TableRow &r : table.rows) {
        std::vector<Cell> row{static_cast<long long>(r.n),
                              r.coupling1,
                              r.coupling2,
                              r.f_0,
                              r.f_h1,
                              r.f_h2,
                              r.best_omega,
                              r.best_eta,
                              r.best_f_p,
                              r.listed_omega,
                              r.listed_eta,
                              r.f_p_at_listed,
                              static_cast<long long>(r.is_parrondo)};
        if (!refs.empty()) {
            const auto it = std::find_if(refs.begin(), refs.end(), [&](const ReferenceRow &ref) {
                return ref.n == r.n && std::abs(ref.coupling1 - r.coupling1) < 1e-9 &&
                       std::abs(ref.coupling2 - r.coupling2) < 1e-9;
            });
            const ReferenceRow *ref = it == refs.end() ? nullptr : &*it;
            const Cell ref_fp = reference_cell(ref, "f_p");
            for (const char *k : {"f_0", "f_h1", "f_h2", "omega", "eta"}) {
                row.push_back(reference_cell(ref, k));
            }
            row.push_back(ref_fp);
            row.push_back(difference(r.best_f_p, ref_fp));
            row.push_back(difference(r.f_p_at_listed, ref_fp));
        }
        s.rows.push_back(std::move(row));
    }
    io.sheet("table" + std::to_string(c.table_id), s);
    out << "table " << c.table_id << ": " << table.rows.size() << " rows\n";
    return kExitOk;
}

int cmd_disorder(const RunConfig &c, const Output &io, std::ostream &out) {
    const Scenario scenario = c.resolved_scenario();
    const PeakConfig config = c.peak_config();
    const DriveProtocol protocol = c.protocol();
    if (!c.disorder_scan && c.deviation_pairs.empty()) {
        throw ConfigError("nothing to do: scan disabled and no deviation pairs given");
    }
    // Validate every requested pair before any output is produced.
    for (const auto &[da, db] : c.deviation_pairs) {
        with_deviation(protocol, da, db);
    }
    if (c.disorder_scan) {
        const Deviation which = parse_deviation(c.deviation);
        const double from = c.range_from.value_or(-0.2);
        const double to = c.range_to.value_or(0.2);
        const double step = c.range_step.value_or(0.01);
        scan_values(from, to, step);  // same emptiness rule as the other scans
        const DisorderScan scan = disorder_scan(protocol, scenario, which, from, to, step, config, c.jobs);
        Sheet s{{"delta", "f_peak"}, {}};
        for (std::size_t k = 0; k < scan.delta_values.size(); ++k) {
            const auto &f = scan.f_peak_values[k];
            s.rows.push_back({scan.delta_values[k], f ? Cell(*f) : Cell(std::monostate{})});
        }
        io.sheet(std::string("disorder_scan_") + to_string(which), s);
        out << "baseline F = " << format_number(scan.baseline) << " over " << scan.delta_values.size()
            << " deviations\n";
    }
    if (!c.deviation_pairs.empty()) {
        const auto series = disorder_time_series(protocol, scenario, c.deviation_pairs, config);
        for (std::size_t k = 0; k < series.size(); ++k) {
            const auto &[da, db] = c.deviation_pairs[k];
            io.sheet("timeseries_da" + format_number(da) + "_db" + format_number(db), series_sheet(series[k]));
        }
    }
    return kExitOk;
}

FidelitySeries read_series(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("cannot read series file '" + path + "'");
    }
    FidelitySeries series;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || (line_no == 1 && line.rfind("tau", 0) == 0)) {
            continue;
        }
        const auto comma = line.find(',');
        try {
            if (comma == std::string::npos) {
                throw std::invalid_argument("missing comma");
            }
            series.taus.push_back(std::stod(line.substr(0, comma)));
            series.values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception &) {
            throw ConfigError("malformed line " + std::to_string(line_no) + " in '" + path + "'");
        }
    }
    if (series.taus.size() < 3) {
        throw ConfigError("series file '" + path + "' needs at least three samples");
    }
    return series;
}

int cmd_peak(const RunConfig &c, const Output &io, std::ostream &out) {
    const PeakConfig config = c.peak_config();
    FidelitySeries series;
    if (!c.series_file.empty()) {
        series = read_series(c.series_file);
    } else if (c.evolve_driven) {
        series = fidelity_series(Evolver::driven(c.protocol()), c.resolved_scenario(), config);
    } else {
        series = fidelity_series(Evolver::static_chain(c.chain), c.resolved_scenario(), config);
    }
    const Peak p = first_arrival_peak(series, config);
    io.summary("peak.json", {{"tau_star", number(p.tau_star)}, {"f_star", number(p.f_star)}});
    out << "tau* = " << format_number(p.tau_star) << ", F = " << format_number(p.f_star) << '\n';
    return kExitOk;
}

// ------------------------------------------------------------ argument wiring

std::optional<std::string> find_config_path(const std::vector<std::string> &args) {
    std::optional<std::string> path;
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size()) {
            path = args[k + 1];
        } else if (args[k].rfind("--config=", 0) == 0) {
            path = args[k].substr(9);
        }
    }
    return path;
}

RunConfig load_config(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception &e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return j.get<RunConfig>();
}

struct Flags {
    explicit Flags(RunConfig &c) : cfg(c) {}

    RunConfig &cfg;
    std::string config_path;
    bool dump = false;
    std::optional<double> grid_fields[6];

    void common(CLI::App *sub) {
        sub->add_option("--config", config_path, "JSON config file; flags override its fields");
        sub->add_flag("--dump-config", dump, "Print the resolved config as JSON and exit");
        sub->add_option("--out", cfg.output_dir, "Output directory");
        sub->add_option("--format", cfg.format, "Tabular output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--jobs", cfg.jobs, "Worker threads (0 = hardware threads)");
    }

    void scenario(CLI::App *sub) {
        sub->add_option("--scenario", cfg.scenario, "single | bell")->check(CLI::IsMember({"single", "bell"}));
        sub->add_option("--n", cfg.chain.n, "Chain length");
        sub->add_option("--alpha", cfg.chain.alpha, "Boundary coupling J_1 = J_{N-1}");
        sub->add_option("--beta", cfg.chain.beta, "Next-to-boundary coupling J_2 = J_{N-2}");
        sub->add_option("--delta-alpha", cfg.chain.delta_alpha, "Relative deviation of J_{N-1}");
        sub->add_option("--delta-beta", cfg.chain.delta_beta, "Relative deviation of J_{N-2}");
        sub->add_option("--theta", cfg.theta, "Polar angle of the sent qubit");
        sub->add_option("--phi", cfg.phi, "Azimuth of the sent qubit");
        sub->add_option("--sign", cfg.sign, "Bell state sign, +1 or -1");
    }

    void peak(CLI::App *sub) {
        sub->add_option_function<double>(
            "--tau-max", [this](double v) { cfg.tau_max = v; }, "Time horizon (default 2N)");
        sub->add_option("--dtau", cfg.dtau, "Sampling step");
        sub->add_option("--threshold", cfg.threshold, "First-arrival threshold, fraction of the global max");
    }

    void coupling(CLI::App *sub) {
        sub->add_option("--coupling", cfg.coupling, "alpha | beta (default: alpha for single, beta for bell)");
    }

    void drive(CLI::App *sub) {
        coupling(sub);
        sub->add_option("--value1", cfg.value1, "Coupling value during the first sub-period");
        sub->add_option("--value2", cfg.value2, "Coupling value during the second sub-period");
        sub->add_option("--omega", cfg.omega, "Driving frequency");
        sub->add_option("--eta", cfg.eta, "Fraction of the period spent on the first Hamiltonian");
    }

    void range(CLI::App *sub) {
        sub->add_option_function<double>("--from", [this](double v) { cfg.range_from = v; }, "Scan start");
        sub->add_option_function<double>("--to", [this](double v) { cfg.range_to = v; }, "Scan end (inclusive)");
        sub->add_option_function<double>("--step", [this](double v) { cfg.range_step = v; }, "Scan step");
    }

    void grid(CLI::App *sub) {
        const char *names[6] = {"--omega-min", "--omega-max", "--omega-step", "--eta-min", "--eta-max", "--eta-step"};
        for (int k = 0; k < 6; ++k) {
            sub->add_option_function<double>(names[k], [this, k](double v) { grid_fields[k] = v; });
        }
    }

    void merge_grid() {
        if (std::none_of(std::begin(grid_fields), std::end(grid_fields), [](const auto &f) { return f.has_value(); })) {
            return;
        }
        SweepGrid g = cfg.resolved_grid();
        double *dst[6] = {&g.omega_min, &g.omega_max, &g.omega_step, &g.eta_min, &g.eta_max, &g.eta_step};
        for (int k = 0; k < 6; ++k) {
            if (grid_fields[k]) {
                *dst[k] = *grid_fields[k];
            }
        }
        cfg.grid = g;
    }
};

std::vector<std::pair<double, double>> parse_pairs(const std::string &text) {
    std::vector<std::pair<double, double>> pairs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        try {
            if (colon == std::string::npos) {
                throw std::invalid_argument(item);
            }
            std::size_t used_a = 0, used_b = 0;
            const std::string a = item.substr(0, colon), b = item.substr(colon + 1);
            const double da = std::stod(a, &used_a), db = std::stod(b, &used_b);
            if (used_a != a.size() || used_b != b.size()) {
                throw std::invalid_argument(item);
            }
            pairs.emplace_back(da, db);
        } catch (const std::exception &) {
            throw ConfigError("--pairs expects 'da:db,da:db,...', got '" + item + "'");
        }
    }
    return pairs;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    RunConfig cfg;
    try {
        if (const auto path = find_config_path(args)) {
            cfg = load_config(*path);
        }
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    Flags flags(cfg);
    std::string pairs_text;
    CLI::App app{"Quantum state transfer through driven XX spin chains.", "qst"};
    app.require_subcommand(1);

    auto *scan = app.add_subcommand("scan-static", "First-peak fidelity of static chains across one coupling");
    flags.common(scan);
    flags.scenario(scan);
    flags.peak(scan);
    flags.coupling(scan);
    flags.range(scan);

    auto *evolve = app.add_subcommand("evolve", "Fidelity time series (static, driven and/or effective chain)");
    flags.common(evolve);
    flags.scenario(evolve);
    flags.peak(evolve);
    flags.drive(evolve);
    evolve->add_flag("--static", cfg.evolve_static, "Static chain from --alpha/--beta (default)");
    evolve->add_flag("--driven", cfg.evolve_driven, "Alternate value1/value2 at --omega, --eta");
    evolve->add_flag("--effective", cfg.evolve_effective, "Static chain with the time-averaged couplings");

    auto *sweep_cmd = app.add_subcommand("sweep", "Exhaustive (omega, eta) search for the driven protocol");
    flags.common(sweep_cmd);
    flags.scenario(sweep_cmd);
    flags.peak(sweep_cmd);
    flags.drive(sweep_cmd);
    flags.grid(sweep_cmd);

    auto *table = app.add_subcommand("table", "Regenerate one of the built-in optimisation tables (1, 2 or 3)");
    flags.common(table);
    flags.peak(table);
    flags.grid(table);
    table->add_option("--id", cfg.table_id, "Table number");
    table->add_flag("--sweep,!--no-sweep", cfg.table_sweep, "Run the (omega, eta) sweep per row");
    table->add_option("--reference", cfg.reference_file, "Reference values JSON ('none' to omit)");

    auto *disorder = app.add_subcommand("disorder", "Robustness of the driven protocol to boundary deviations");
    flags.common(disorder);
    flags.scenario(disorder);
    flags.peak(disorder);
    flags.drive(disorder);
    flags.range(disorder);
    disorder->add_option("--deviation", cfg.deviation, "delta_alpha | delta_beta");
    disorder->add_option("--pairs", pairs_text, "Time series for 'da:db,...' deviation pairs");
    disorder->add_flag("--scan,!--no-scan", cfg.disorder_scan, "Run the deviation scan");

    auto *peak = app.add_subcommand("peak", "First-arrival peak of a chain or of a (tau,fidelity) CSV");
    flags.common(peak);
    flags.scenario(peak);
    flags.peak(peak);
    flags.drive(peak);
    peak->add_option("--series", cfg.series_file, "Read the series from this CSV instead of evolving");
    peak->add_flag("--driven", cfg.evolve_driven, "Evolve the driven protocol instead of the static chain");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        flags.merge_grid();
        if (!pairs_text.empty()) {
            cfg.deviation_pairs = parse_pairs(pairs_text);
        }
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        cfg.validate();
        if (flags.dump) {
            out << json(cfg).dump(2) << '\n';
            return kExitOk;
        }
        const Output io(cfg, out);
        CLI::App *cmd = app.get_subcommands().front();
        if (cmd == scan) {
            return cmd_scan_static(cfg, io, out);
        }
        if (cmd == evolve) {
            return cmd_evolve(cfg, io, out);
        }
        if (cmd == sweep_cmd) {
            return cmd_sweep(cfg, io, out);
        }
        if (cmd == table) {
            return cmd_table(cfg, io, out);
        }
        if (cmd == disorder) {
            return cmd_disorder(cfg, io, out);
        }
        return cmd_peak(cfg, io, out);
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "computation failed: " << e.what() << '\n';
        return kExitComputation;
    }
}

}  // namespace qst::cli
