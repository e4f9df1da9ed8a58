#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bfim/circuit.hpp"
#include "bfim/criticality.hpp"
#include "bfim/dense_ed.hpp"
#include "bfim/errors.hpp"
#include "bfim/free_fermion.hpp"
#include "bfim/model.hpp"
#include "bfim/output.hpp"
#include "bfim/vqe.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bfim;

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct RunOutcome {
    int exit_code = 0;
    std::string status = "ok";   // ok | partial
    std::vector<std::string> failures;

    void mark_partial(std::string why) {
        status = "partial";
        exit_code = std::max(exit_code, 2);
        failures.push_back(std::move(why));
    }
};

// ---------------------------------------------------------------------------
// shared plumbing

json load_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file: " + path.string());
    json j;
    in >> j;
    return j;
}

void check_known_keys(const json& j, const std::vector<std::string>& known) {
    if (!j.is_object())
        throw std::invalid_argument("experiment config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::invalid_argument("unknown config key: " + key);
    }
}

void check_experiment_tag(const json& j, const std::string& expected) {
    if (j.contains("experiment") && j.at("experiment").get<std::string>() != expected)
        throw std::invalid_argument("config is for experiment '" +
                                    j.at("experiment").get<std::string>() + "', expected '" +
                                    expected + "'");
}

std::vector<double> grid_values(double start, double stop, int points) {
    if (points < 1)
        throw std::invalid_argument("points must be >= 1");
    if (points == 1)
        return {start};
    if (start == stop)
        throw std::invalid_argument("h grid must be non-degenerate");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g[static_cast<std::size_t>(i)] =
            start + (stop - start) * static_cast<double>(i) / (points - 1);
    return g;
}

void write_manifest(const fs::path& dir, const std::string& experiment, const json& config,
                    const std::string& hash, double wall_seconds, const RunOutcome& outcome,
                    const json& summary) {
    json m;
    m["experiment"] = experiment;
    m["config"] = config;
    m["config_hash"] = hash;
    m["tool_version"] = kToolVersion;
    m["wall_time_seconds"] = wall_seconds;
    m["seed"] = config.contains("seed") ? config.at("seed") : json();
    m["status"] = outcome.status;
    m["failures"] = outcome.failures;
    m["summary"] = summary;
    write_text_file(dir / "manifest.json", m.dump(2) + "\n");
}

// Runs `body(dir, hash, outcome, summary)` inside <outdir>/<experiment>/<hash>
// and writes the manifest afterwards.
template <typename Body>
RunOutcome run_experiment(const std::string& experiment, const json& config,
                          const fs::path& outdir, Body body) {
    const std::string hash = config_hash_hex(config);
    const fs::path dir = outdir / experiment / hash;
    fs::create_directories(dir);
    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome outcome;
    json summary = json::object();
    body(dir, hash, outcome, summary);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(dir, experiment, config, hash, wall, outcome, summary);
    std::printf("%s %s %s -> %s\n", experiment.c_str(), hash.c_str(), outcome.status.c_str(),
                dir.string().c_str());
    return outcome;
}

// ---------------------------------------------------------------------------
// CSV reading (for rms-report)

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::vector<double> column(const std::string& name) const {
        const auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end())
            throw std::invalid_argument("csv has no column named '" + name + "'");
        const auto idx = static_cast<std::size_t>(it - columns.begin());
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& row : rows)
            out.push_back(row[idx]);
        return out;
    }
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, const fs::path& path) {
    if (cell.empty())
        return std::numeric_limits<double>::quiet_NaN();
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str())
        throw std::invalid_argument("non-numeric cell '" + cell + "' in " + path.string());
    return v;
}

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open csv file: " + path.string());
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        auto cells = split_csv_line(line);
        if (!have_header) {
            t.columns = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != t.columns.size())
            throw std::invalid_argument("ragged csv row in " + path.string());
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells)
            row.push_back(parse_cell(c, path));
        t.rows.push_back(std::move(row));
    }
    if (!have_header)
        throw std::invalid_argument("csv has no header row: " + path.string());
    return t;
}

// ---------------------------------------------------------------------------
// sweep-exact

struct SweepExactConfig {
    int L = 20;
    double J = 1.0;
    double hx = 0.5;
    double h_start = 0.4;
    double h_stop = 1.0;
    int points = 61;
    bool tie_boundary = true;
    double h_r = 0.0;   // fixed right field when the boundary is not tied
};

json to_json(const SweepExactConfig& c) {
    return json{{"experiment", "sweep-exact"}, {"L", c.L},           {"J", c.J},
                {"hx", c.hx},                  {"h_start", c.h_start}, {"h_stop", c.h_stop},
                {"points", c.points},          {"tie_boundary", c.tie_boundary},
                {"h_r", c.h_r}};
}

void apply_json(SweepExactConfig& c, const json& j) {
    check_known_keys(j, {"experiment", "L", "J", "hx", "h_start", "h_stop", "points",
                         "tie_boundary", "h_r"});
    check_experiment_tag(j, "sweep-exact");
    if (j.contains("L")) j.at("L").get_to(c.L);
    if (j.contains("J")) j.at("J").get_to(c.J);
    if (j.contains("hx")) j.at("hx").get_to(c.hx);
    if (j.contains("h_start")) j.at("h_start").get_to(c.h_start);
    if (j.contains("h_stop")) j.at("h_stop").get_to(c.h_stop);
    if (j.contains("points")) j.at("points").get_to(c.points);
    if (j.contains("tie_boundary")) j.at("tie_boundary").get_to(c.tie_boundary);
    if (j.contains("h_r")) j.at("h_r").get_to(c.h_r);
}

RunOutcome run_sweep_exact(const SweepExactConfig& c, const fs::path& outdir) {
    if (c.points < 4)
        throw std::invalid_argument("sweep-exact needs at least 4 points for the spline work");
    const auto grid = grid_values(c.h_start, c.h_stop, c.points);
    for (double h : grid) {
        const double hr = c.tie_boundary ? -h : c.h_r;
        if (!(h * hr < 0.0))
            throw std::invalid_argument(
                "grid point h_l = " + std::to_string(h) + ", h_r = " + std::to_string(hr) +
                " is not anti-parallel; the exact solver covers h_l * h_r < 0 only");
    }

    return run_experiment("sweep-exact", to_json(c), outdir,
                          [&](const fs::path& dir, const std::string& hash, RunOutcome& outcome,
                              json& summary) {
        CsvWriter data(hash, {"h_l", "h_r", "L", "energy", "gap"});
        std::vector<std::pair<double, double>> valid;   // (h, energy) for analysis
        for (double h : grid) {
            const double hr = c.tie_boundary ? -h : c.h_r;
            const IsingChainSpec spec{c.L, c.J, c.hx, h, hr};
            try {
                const double energy = sector_ground_energy(spec);
                const double gap = sector_gap(spec);
                data.add_row({h, hr, static_cast<double>(c.L), energy, gap});
                valid.emplace_back(h, energy);
            } catch (const numerical_integrity_error& e) {
                outcome.mark_partial("point h_l = " + std::to_string(h) + ": " + e.what());
            }
        }
        data.write(dir / "data.csv");

        if (valid.size() < 4) {
            outcome.mark_partial("too few valid points for derivative analysis");
            return;
        }
        std::sort(valid.begin(), valid.end());
        EnergyCurve curve;
        curve.L = c.L;
        curve.h_x = c.hx;
        curve.J = c.J;
        curve.source = "free-fermion";
        for (const auto& [h, e] : valid) {
            curve.h.push_back(h);
            curve.energy.push_back(e);
        }
        const auto d1 = spline_derivative(curve, 1);
        const auto d2 = spline_derivative(curve, 2);
        CsvWriter deriv(hash, {"h", "dE_dh", "d2E_dh2"});
        for (std::size_t i = 0; i < d1.h.size(); ++i)
            deriv.add_row({d1.h[i], d1.value[i], d2.value[i]});
        deriv.write(dir / "derivative.csv");

        const auto argmin = find_second_derivative_minimum(curve);
        double max_abs_d1 = 0.0;
        for (double v : d1.value)
            max_abs_d1 = std::max(max_abs_d1, std::abs(v));
        summary["argmin_h"] = argmin.h_star;
        summary["second_derivative_at_argmin"] = argmin.second_derivative;
        summary["boundary_minimum"] = argmin.boundary_minimum;
        summary["max_abs_first_derivative"] = max_abs_d1;
        if (c.tie_boundary)
            summary["h_c_reference"] = std::sqrt(1.0 - c.hx);
    });
}

// ---------------------------------------------------------------------------
// sweep-vqe

struct SweepVqeConfig {
    int L = 4;
    double J = 1.0;
    double hx = 0.5;
    double h_start = 1.0;   // decreasing by default
    double h_stop = 0.4;
    int points = 10;
    int layers = 6;
    bool untied_ansatz = false;
    bool tie_boundary = true;
    double h_r = 0.0;
    std::uint64_t seed = 7;
    int max_iters_first = 7000;
    int max_iters_subsequent = 1000;
    bool shot_mode = false;
    std::int64_t shots = 22304;
};

json to_json(const SweepVqeConfig& c) {
    return json{{"experiment", "sweep-vqe"},
                {"L", c.L},
                {"J", c.J},
                {"hx", c.hx},
                {"h_start", c.h_start},
                {"h_stop", c.h_stop},
                {"points", c.points},
                {"layers", c.layers},
                {"untied_ansatz", c.untied_ansatz},
                {"tie_boundary", c.tie_boundary},
                {"h_r", c.h_r},
                {"seed", c.seed},
                {"max_iters_first", c.max_iters_first},
                {"max_iters_subsequent", c.max_iters_subsequent},
                {"shot_mode", c.shot_mode},
                {"shots", c.shots}};
}

void apply_json(SweepVqeConfig& c, const json& j) {
    check_known_keys(j, {"experiment", "L", "J", "hx", "h_start", "h_stop", "points", "layers",
                         "untied_ansatz", "tie_boundary", "h_r", "seed", "max_iters_first",
                         "max_iters_subsequent", "shot_mode", "shots"});
    check_experiment_tag(j, "sweep-vqe");
    if (j.contains("L")) j.at("L").get_to(c.L);
    if (j.contains("J")) j.at("J").get_to(c.J);
    if (j.contains("hx")) j.at("hx").get_to(c.hx);
    if (j.contains("h_start")) j.at("h_start").get_to(c.h_start);
    if (j.contains("h_stop")) j.at("h_stop").get_to(c.h_stop);
    if (j.contains("points")) j.at("points").get_to(c.points);
    if (j.contains("layers")) j.at("layers").get_to(c.layers);
    if (j.contains("untied_ansatz")) j.at("untied_ansatz").get_to(c.untied_ansatz);
    if (j.contains("tie_boundary")) j.at("tie_boundary").get_to(c.tie_boundary);
    if (j.contains("h_r")) j.at("h_r").get_to(c.h_r);
    if (j.contains("seed")) j.at("seed").get_to(c.seed);
    if (j.contains("max_iters_first")) j.at("max_iters_first").get_to(c.max_iters_first);
    if (j.contains("max_iters_subsequent"))
        j.at("max_iters_subsequent").get_to(c.max_iters_subsequent);
    if (j.contains("shot_mode")) j.at("shot_mode").get_to(c.shot_mode);
    if (j.contains("shots")) j.at("shots").get_to(c.shots);
}

double exact_reference_energy(const IsingChainSpec& spec) {
    if (spec.h_l * spec.h_r < 0.0)
        return sector_ground_energy(spec);
    if (spec.L <= 14)
        return dense_ground_energy(spec);
    return std::numeric_limits<double>::quiet_NaN();
}

double relative_error_or_nan(double estimate, double reference) {
    if (!std::isfinite(reference) || reference == 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return std::abs((reference - estimate) / reference);
}

RunOutcome run_sweep_vqe(const SweepVqeConfig& c, const fs::path& outdir) {
    if (c.layers < 1)
        throw std::invalid_argument("sweep-vqe needs at least one ansatz layer");
    if (c.shot_mode && c.shots < 1)
        throw std::invalid_argument("shot mode needs a positive shot count");
    const auto grid = grid_values(c.h_start, c.h_stop, c.points);

    const IsingChainSpec spec_template{c.L, c.J, c.hx, 0.0, c.tie_boundary ? 0.0 : c.h_r};
    const HvaConfig ansatz{c.layers, c.untied_ansatz ? HvaConfig::BoundaryMode::untied
                                                     : HvaConfig::BoundaryMode::tied};
    VqeConfig vqe_config;
    vqe_config.seed = c.seed;
    vqe_config.max_iters_first = c.max_iters_first;
    vqe_config.max_iters_subsequent = c.max_iters_subsequent;

    return run_experiment("sweep-vqe", to_json(c), outdir,
                          [&](const fs::path& dir, const std::string& hash, RunOutcome& outcome,
                              json& summary) {
        const auto swept = sweep(spec_template, grid, ansatz, vqe_config, c.tie_boundary);

        std::vector<std::string> obs_columns{"h_l", "h_r", "kink"};
        for (int i = 1; i <= c.L; ++i)
            obs_columns.push_back("m" + std::to_string(i));

        CsvWriter data(hash, {"h_l", "h_r", "energy", "energy_per_site",
                              "relative_error_vs_exact", "iterations", "converged"});
        CsvWriter observables(hash, obs_columns);
        CsvWriter trace(hash, {"point_index", "iteration", "energy_error"});
        const Observable kink_op = build_kink_operator(c.L);
        const auto param_names = build_hva_circuit(ansatz, c.L).param_names;
        json points_json = json::array();
        double max_rel = 0.0;
        bool any_rel = false;
        int n_converged = 0;

        for (std::size_t i = 0; i < swept.points.size(); ++i) {
            const auto& point = swept.points[i];
            const IsingChainSpec spec{c.L, c.J, c.hx, point.h_l, point.h_r};
            const double reference = exact_reference_energy(spec);
            const Statevector state = run_ansatz(ansatz, c.L, point.result.optimal_params);
            const std::uint64_t shot_seed = c.seed * 1000003ull + i * 131ull;

            double energy = point.result.energy;
            double kink = expectation(state, kink_op);
            std::vector<double> obs_row{point.h_l, point.h_r};
            if (c.shot_mode) {
                energy = sample_expectation(state, build_hamiltonian(spec), c.shots, shot_seed);
                kink = sample_expectation(state, kink_op, c.shots, shot_seed + 1);
            }
            obs_row.push_back(kink);
            for (int site = 1; site <= c.L; ++site) {
                const Observable m = build_local_magnetization(site, c.L);
                obs_row.push_back(c.shot_mode
                                      ? sample_expectation(state, m, c.shots,
                                                           shot_seed + 1 + static_cast<std::uint64_t>(site))
                                      : expectation(state, m));
            }
            observables.add_row(obs_row);

            const double rel = relative_error_or_nan(energy, reference);
            if (std::isfinite(rel)) {
                max_rel = std::max(max_rel, rel);
                any_rel = true;
            }
            data.add_row({point.h_l, point.h_r, energy, energy / c.L, rel,
                          static_cast<double>(point.result.iterations),
                          point.result.converged ? 1.0 : 0.0});

            for (const auto& [iteration, e] : point.result.iteration_trace)
                trace.add_row({static_cast<double>(i), static_cast<double>(iteration),
                               relative_error_or_nan(e, reference)});

            json pj;
            pj["h_l"] = point.h_l;
            pj["h_r"] = point.h_r;
            pj["energy"] = point.result.energy;
            pj["iterations"] = point.result.iterations;
            pj["converged"] = point.result.converged;
            json params = json::object();
            for (std::size_t s = 0; s < param_names.size(); ++s)
                params[param_names[s]] = point.result.optimal_params[s];
            pj["params"] = params;
            points_json.push_back(pj);

            if (point.result.converged)
                ++n_converged;
            else
                outcome.mark_partial("point " + std::to_string(i) +
                                     " (h_l = " + std::to_string(point.h_l) +
                                     ") did not converge");
        }

        data.write(dir / "data.csv");
        observables.write(dir / "observables.csv");
        trace.write(dir / "trace.csv");
        json params_file;
        params_file["config_hash"] = hash;
        params_file["parameter_names"] = param_names;
        params_file["points"] = points_json;
        write_text_file(dir / "params.json", params_file.dump(2) + "\n");

        summary["n_points"] = swept.points.size();
        summary["n_converged"] = n_converged;
        if (any_rel)
            summary["max_relative_error"] = max_rel;
        summary["shot_mode"] = c.shot_mode;
    });
}

// ---------------------------------------------------------------------------
// scaling

struct ScalingConfig {
    std::vector<int> sizes{4, 8, 12, 20, 40, 100, 200, 500};
    double J = 1.0;
    double hx = 0.5;
    double h_start = 0.4;
    double h_stop = 1.0;
    int points = 121;
    int fit_min_L = 40;
};

json to_json(const ScalingConfig& c) {
    return json{{"experiment", "scaling"}, {"sizes", c.sizes},     {"J", c.J},
                {"hx", c.hx},              {"h_start", c.h_start}, {"h_stop", c.h_stop},
                {"points", c.points},      {"fit_min_L", c.fit_min_L}};
}

void apply_json(ScalingConfig& c, const json& j) {
    check_known_keys(j, {"experiment", "sizes", "J", "hx", "h_start", "h_stop", "points",
                         "fit_min_L"});
    check_experiment_tag(j, "scaling");
    if (j.contains("sizes")) j.at("sizes").get_to(c.sizes);
    if (j.contains("J")) j.at("J").get_to(c.J);
    if (j.contains("hx")) j.at("hx").get_to(c.hx);
    if (j.contains("h_start")) j.at("h_start").get_to(c.h_start);
    if (j.contains("h_stop")) j.at("h_stop").get_to(c.h_stop);
    if (j.contains("points")) j.at("points").get_to(c.points);
    if (j.contains("fit_min_L")) j.at("fit_min_L").get_to(c.fit_min_L);
}

RunOutcome run_scaling(const ScalingConfig& c, const fs::path& outdir) {
    if (c.points < 4)
        throw std::invalid_argument("scaling needs at least 4 grid points per size");
    if (c.sizes.size() < 3)
        throw std::invalid_argument("scaling needs at least 3 sizes");
    auto grid = grid_values(c.h_start, c.h_stop, c.points);
    std::sort(grid.begin(), grid.end());
    for (double h : grid)
        if (!(h > 0.0))
            throw std::invalid_argument("scaling sweeps h_r = -h_l and needs h > 0 grid points");

    return run_experiment("scaling", to_json(c), outdir,
                          [&](const fs::path& dir, const std::string& hash, RunOutcome& outcome,
                              json& summary) {
        ScalingSeries series;
        series.h_c_reference = std::sqrt(1.0 - c.hx);
        json boundary_hits = json::array();
        for (int L : c.sizes) {
            EnergyCurve curve;
            curve.L = L;
            curve.h_x = c.hx;
            curve.J = c.J;
            curve.source = "free-fermion";
            curve.h = grid;
            for (double h : grid)
                curve.energy.push_back(sector_ground_energy({L, c.J, c.hx, h, -h}));
            const auto argmin = find_second_derivative_minimum(curve);
            series.L.push_back(L);
            series.argmin_h.push_back(argmin.h_star);
            if (argmin.boundary_minimum) {
                boundary_hits.push_back(L);
                outcome.mark_partial("argmin for L = " + std::to_string(L) +
                                     " landed on the scan edge");
            }
        }
        const auto report = finite_size_scaling(series, c.fit_min_L);

        CsvWriter data(hash, {"L", "inv_L", "argmin_h"});
        for (std::size_t i = 0; i < report.L.size(); ++i)
            data.add_row({static_cast<double>(report.L[i]), report.inv_L[i],
                          report.argmin_h[i]});
        data.write(dir / "data.csv");

        summary["h_c_reference"] = report.h_c_reference;
        summary["fit_slope"] = report.fit_slope;
        summary["fit_intercept"] = report.fit_intercept;
        summary["deviation"] = report.deviation;
        summary["fit_min_L"] = report.fit_min_L;
        summary["non_monotone_small_L"] = report.non_monotone_small_L;
        summary["boundary_minimum_sizes"] = boundary_hits;
    });
}

// ---------------------------------------------------------------------------
// gap-scan

struct GapScanConfig {
    std::vector<int> sizes{8, 12, 16, 20, 30, 40, 60};
    double J = 1.0;
    double hx = 0.5;
    double hl = 0.4;   // h_r = -hl
};

json to_json(const GapScanConfig& c) {
    return json{{"experiment", "gap-scan"},
                {"sizes", c.sizes},
                {"J", c.J},
                {"hx", c.hx},
                {"hl", c.hl}};
}

void apply_json(GapScanConfig& c, const json& j) {
    check_known_keys(j, {"experiment", "sizes", "J", "hx", "hl"});
    check_experiment_tag(j, "gap-scan");
    if (j.contains("sizes")) j.at("sizes").get_to(c.sizes);
    if (j.contains("J")) j.at("J").get_to(c.J);
    if (j.contains("hx")) j.at("hx").get_to(c.hx);
    if (j.contains("hl")) j.at("hl").get_to(c.hl);
}

RunOutcome run_gap_scan(const GapScanConfig& c, const fs::path& outdir) {
    if (c.sizes.size() < 4)
        throw std::invalid_argument("gap-scan needs at least 4 sizes to classify the decay");
    if (c.hl == 0.0)
        throw std::invalid_argument("gap-scan needs a nonzero boundary field");

    return run_experiment("gap-scan", to_json(c), outdir,
                          [&](const fs::path& dir, const std::string& hash, RunOutcome& outcome,
                              json& summary) {
        (void)outcome;
        std::vector<std::pair<int, double>> gaps;
        CsvWriter data(hash, {"L", "gap"});
        for (int L : c.sizes) {
            const double gap = sector_gap({L, c.J, c.hx, c.hl, -c.hl});
            gaps.emplace_back(L, gap);
            data.add_row({static_cast<double>(L), gap});
        }
        data.write(dir / "data.csv");

        const auto fit = classify_gap_decay(gaps);
        summary["preferred"] =
            fit.preferred == GapFitResult::Model::exponential ? "exponential" : "polynomial";
        summary["exp_c"] = fit.exp_c;
        summary["exp_prefactor"] = fit.exp_prefactor;
        summary["exp_residual"] = fit.exp_residual;
        summary["poly_p"] = fit.poly_p;
        summary["poly_prefactor"] = fit.poly_prefactor;
        summary["poly_residual"] = fit.poly_residual;
        const SectorLabel sector = antiparallel_sector();
        summary["sector"] = json::array({sector.s_first, sector.s_last});
    });
}

// ---------------------------------------------------------------------------
// rms-report

struct RmsReportConfig {
    std::string reference;
    std::string estimate;
    std::string column = "energy";
};

json to_json(const RmsReportConfig& c) {
    return json{{"experiment", "rms-report"},
                {"reference", c.reference},
                {"estimate", c.estimate},
                {"column", c.column}};
}

void apply_json(RmsReportConfig& c, const json& j) {
    check_known_keys(j, {"experiment", "reference", "estimate", "column"});
    check_experiment_tag(j, "rms-report");
    if (j.contains("reference")) j.at("reference").get_to(c.reference);
    if (j.contains("estimate")) j.at("estimate").get_to(c.estimate);
    if (j.contains("column")) j.at("column").get_to(c.column);
}

RunOutcome run_rms_report(const RmsReportConfig& c, const fs::path& outdir) {
    if (c.reference.empty() || c.estimate.empty())
        throw std::invalid_argument("rms-report needs --reference and --estimate csv paths");

    return run_experiment("rms-report", to_json(c), outdir,
                          [&](const fs::path& dir, const std::string& hash, RunOutcome& outcome,
                              json& summary) {
        (void)outcome;
        const auto ref = read_csv(c.reference).column(c.column);
        const auto est = read_csv(c.estimate).column(c.column);
        const auto report = rms(est, ref);
        const auto errors = relative_error_series(est, ref);
        double max_rel = 0.0;
        std::size_t nan_refs = 0;
        for (double e : errors) {
            if (std::isnan(e))
                ++nan_refs;
            else
                max_rel = std::max(max_rel, e);
        }

        json out;
        out["config_hash"] = hash;
        out["column"] = c.column;
        out["n"] = report.n;
        out["rms"] = report.rms;
        out["max_relative_error"] = max_rel;
        out["nan_references"] = nan_refs;
        out["reference_file"] = c.reference;
        out["estimate_file"] = c.estimate;
        write_text_file(dir / "report.json", out.dump(2) + "\n");
        std::printf("rms = %s over n = %zu\n", format_double(report.rms).c_str(), report.n);

        summary["rms"] = report.rms;
        summary["n"] = report.n;
        summary["max_relative_error"] = max_rel;
        summary["nan_references"] = nan_refs;
    });
}

// ---------------------------------------------------------------------------
// textual dumps (stdout only)

struct DumpCircuitConfig {
    int L = 4;
    int layers = 1;
    bool untied_ansatz = false;
};

int run_dump_circuit(const DumpCircuitConfig& c) {
    const HvaConfig ansatz{c.layers, c.untied_ansatz ? HvaConfig::BoundaryMode::untied
                                                     : HvaConfig::BoundaryMode::tied};
    const Circuit circuit = build_hva_circuit(ansatz, c.L);
    std::printf("circuit L=%d layers=%d mode=%s parameters=%zu gates=%zu\n", c.L, c.layers,
                c.untied_ansatz ? "untied" : "tied", circuit.parameter_count(),
                circuit.gates.size());
    std::fputs(render_circuit(circuit).c_str(), stdout);
    return 0;
}

struct DumpMatricesConfig {
    int L = 4;
    double J = 1.0;
    double hx = 0.5;
    double hl = 0.3;
    double hr = -0.3;
};

int run_dump_matrices(const DumpMatricesConfig& c) {
    const EffectiveChainSpec chain = effective_chain({c.L, c.J, c.hx, c.hl, c.hr});
    const FermionMatrices m = build_AB(chain);
    const auto print_matrix = [&](const char* name, const std::vector<double>& values) {
        std::printf("%s %dx%d\n", name, m.n, m.n);
        for (int i = 0; i < m.n; ++i) {
            for (int j = 0; j < m.n; ++j)
                std::printf("%s%s", j ? " " : "",
                            format_double(values[static_cast<std::size_t>(i) * m.n + j]).c_str());
            std::printf("\n");
        }
    };
    print_matrix("A", m.A);
    print_matrix("B", m.B);
    const auto spectrum = single_particle_spectrum(m);
    std::printf("epsilons");
    for (double e : spectrum.epsilons)
        std::printf(" %s", format_double(e).c_str());
    std::printf("\nE_gs %s\n", format_double(spectrum.E_gs).c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// batch

int exit_code_for_exception(const std::exception& e) {
    if (dynamic_cast<const numerical_integrity_error*>(&e))
        return 3;
    return 1;
}

struct BatchEntryResult {
    std::string experiment;
    std::string hash;
    std::string status = "failed";
    int exit_code = 1;
    std::string error;
};

json canonical_entry_config(const std::string& experiment, const json& raw) {
    if (experiment == "sweep-exact") {
        SweepExactConfig c;
        apply_json(c, raw);
        return to_json(c);
    }
    if (experiment == "sweep-vqe") {
        SweepVqeConfig c;
        apply_json(c, raw);
        return to_json(c);
    }
    if (experiment == "scaling") {
        ScalingConfig c;
        apply_json(c, raw);
        return to_json(c);
    }
    if (experiment == "gap-scan") {
        GapScanConfig c;
        apply_json(c, raw);
        return to_json(c);
    }
    if (experiment == "rms-report") {
        RmsReportConfig c;
        apply_json(c, raw);
        return to_json(c);
    }
    throw std::invalid_argument("unknown batch experiment: " + experiment);
}

RunOutcome dispatch_experiment(const std::string& experiment, const json& raw,
                               const fs::path& outdir) {
    if (experiment == "sweep-exact") {
        SweepExactConfig c;
        apply_json(c, raw);
        return run_sweep_exact(c, outdir);
    }
    if (experiment == "sweep-vqe") {
        SweepVqeConfig c;
        apply_json(c, raw);
        return run_sweep_vqe(c, outdir);
    }
    if (experiment == "scaling") {
        ScalingConfig c;
        apply_json(c, raw);
        return run_scaling(c, outdir);
    }
    if (experiment == "gap-scan") {
        GapScanConfig c;
        apply_json(c, raw);
        return run_gap_scan(c, outdir);
    }
    if (experiment == "rms-report") {
        RmsReportConfig c;
        apply_json(c, raw);
        return run_rms_report(c, outdir);
    }
    throw std::invalid_argument("unknown batch experiment: " + experiment);
}

int run_batch(const std::string& file, int workers, const fs::path& outdir) {
    if (workers < 1 || workers > 64)
        throw std::invalid_argument("workers must be in [1, 64]");
    const json batch = load_json_file(file);
    if (!batch.is_array() || batch.empty())
        throw std::invalid_argument("batch file must be a non-empty JSON array of entries");

    struct Job {
        std::string experiment;
        json config;
        std::string hash;
    };
    std::vector<Job> jobs;
    std::vector<std::string> seen;
    json entries_canonical = json::array();
    for (const auto& entry : batch) {
        if (!entry.is_object() || !entry.contains("experiment"))
            throw std::invalid_argument("every batch entry needs an 'experiment' field");
        const auto experiment = entry.at("experiment").get<std::string>();
        const json raw = entry.value("config", json::object());
        const json canonical = canonical_entry_config(experiment, raw);
        const std::string hash = config_hash_hex(canonical);
        const std::string key = experiment + "/" + hash;
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            throw std::invalid_argument("duplicate batch entry: " + key);
        seen.push_back(key);
        entries_canonical.push_back(canonical);
        jobs.push_back({experiment, canonical, hash});
    }

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<BatchEntryResult> results(jobs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
            BatchEntryResult r;
            r.experiment = jobs[i].experiment;
            r.hash = jobs[i].hash;
            try {
                const RunOutcome outcome = dispatch_experiment(jobs[i].experiment,
                                                               jobs[i].config, outdir);
                r.status = outcome.status;
                r.exit_code = outcome.exit_code;
            } catch (const std::exception& e) {
                r.status = "failed";
                r.exit_code = exit_code_for_exception(e);
                r.error = e.what();
            }
            results[i] = std::move(r);
        }
    };
    std::vector<std::future<void>> pool;
    const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(workers), jobs.size());
    for (std::size_t w = 0; w + 1 < n_workers; ++w)
        pool.push_back(std::async(std::launch::async, worker));
    worker();
    for (auto& f : pool)
        f.get();
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    int exit_code = 0;
    json entry_reports = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        std::printf("entry %zu: %s %s %s%s%s\n", i, r.experiment.c_str(), r.hash.c_str(),
                    r.status.c_str(), r.error.empty() ? "" : " - ", r.error.c_str());
        json er;
        er["experiment"] = r.experiment;
        er["config_hash"] = r.hash;
        er["status"] = r.status;
        er["exit_code"] = r.exit_code;
        if (!r.error.empty())
            er["error"] = r.error;
        entry_reports.push_back(er);
        if (r.exit_code == 3)
            exit_code = 3;
        else if (r.exit_code != 0 && exit_code != 3)
            exit_code = 2;
    }

    const json batch_config{{"experiment", "batch"}, {"entries", entries_canonical}};
    const std::string batch_hash = config_hash_hex(batch_config);
    const fs::path dir = outdir / "batch" / batch_hash;
    fs::create_directories(dir);
    json manifest;
    manifest["experiment"] = "batch";
    manifest["config_hash"] = batch_hash;
    manifest["tool_version"] = kToolVersion;
    manifest["wall_time_seconds"] = wall;
    manifest["workers"] = workers;
    manifest["entries"] = entry_reports;
    manifest["status"] = exit_code == 0 ? "ok" : "partial";
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
    std::printf("batch %s %s -> %s\n", batch_hash.c_str(), exit_code == 0 ? "ok" : "partial",
                dir.string().c_str());
    return exit_code;
}

// ---------------------------------------------------------------------------
// flag plumbing

template <typename Cfg>
Cfg merge_config(const Cfg& flag_values, const std::map<std::string, CLI::Option*>& opts,
                 const std::string& config_path) {
    Cfg merged;
    if (!config_path.empty())
        apply_json(merged, load_json_file(config_path));
    const json from_flags = to_json(flag_values);
    json overlay = json::object();
    for (const auto& [key, opt] : opts)
        if (opt->count() > 0)
            overlay[key] = from_flags.at(key);
    apply_json(merged, overlay);
    return merged;
}

struct CommonArgs {
    std::string config_path;
    std::string outdir = "out";

    void attach(CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file; explicit flags override it");
        sub->add_option("--outdir", outdir, "output root directory");
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"boundary-field Ising chain toolkit: exact and variational sweeps, "
                 "finite-size scaling, gap decay classification"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    int rc = 0;

    // sweep-exact
    auto se_cfg = std::make_shared<SweepExactConfig>();
    auto se_opts = std::make_shared<std::map<std::string, CLI::Option*>>();
    auto se_common = std::make_shared<CommonArgs>();
    {
        auto* sub = app.add_subcommand("sweep-exact",
                                       "free-fermion energy and gap sweep over the boundary field");
        (*se_opts)["L"] = sub->add_option("--L", se_cfg->L, "chain length");
        (*se_opts)["J"] = sub->add_option("--J", se_cfg->J, "exchange coupling");
        (*se_opts)["hx"] = sub->add_option("--hx", se_cfg->hx, "transverse field");
        (*se_opts)["h_start"] = sub->add_option("--h-start", se_cfg->h_start, "first h_l value");
        (*se_opts)["h_stop"] = sub->add_option("--h-stop", se_cfg->h_stop, "last h_l value");
        (*se_opts)["points"] = sub->add_option("--points", se_cfg->points, "grid point count");
        (*se_opts)["tie_boundary"] = sub->add_flag("--tie-boundary,!--no-tie-boundary",
                                                   se_cfg->tie_boundary, "sweep with h_r = -h_l");
        (*se_opts)["h_r"] = sub->add_option("--h-r", se_cfg->h_r,
                                            "fixed right boundary field (with --no-tie-boundary)");
        se_common->attach(sub);
        sub->callback([se_cfg, se_opts, se_common, &rc] {
            rc = run_sweep_exact(merge_config(*se_cfg, *se_opts, se_common->config_path),
                                 se_common->outdir)
                     .exit_code;
        });
    }

    // sweep-vqe
    auto sv_cfg = std::make_shared<SweepVqeConfig>();
    auto sv_opts = std::make_shared<std::map<std::string, CLI::Option*>>();
    auto sv_common = std::make_shared<CommonArgs>();
    {
        auto* sub = app.add_subcommand("sweep-vqe",
                                       "warm-started variational sweep over the boundary field");
        (*sv_opts)["L"] = sub->add_option("--L", sv_cfg->L, "chain length");
        (*sv_opts)["J"] = sub->add_option("--J", sv_cfg->J, "exchange coupling");
        (*sv_opts)["hx"] = sub->add_option("--hx", sv_cfg->hx, "transverse field");
        (*sv_opts)["h_start"] = sub->add_option("--h-start", sv_cfg->h_start, "first h_l value");
        (*sv_opts)["h_stop"] = sub->add_option("--h-stop", sv_cfg->h_stop, "last h_l value");
        (*sv_opts)["points"] = sub->add_option("--points", sv_cfg->points, "grid point count");
        (*sv_opts)["layers"] = sub->add_option("--layers", sv_cfg->layers, "ansatz layers");
        (*sv_opts)["untied_ansatz"] = sub->add_flag("--untied-ansatz", sv_cfg->untied_ansatz,
                                                    "independent left/right boundary parameters");
        (*sv_opts)["tie_boundary"] = sub->add_flag("--tie-boundary,!--no-tie-boundary",
                                                   sv_cfg->tie_boundary, "sweep with h_r = -h_l");
        (*sv_opts)["h_r"] = sub->add_option("--h-r", sv_cfg->h_r,
                                            "fixed right boundary field (with --no-tie-boundary)");
        (*sv_opts)["seed"] = sub->add_option("--seed", sv_cfg->seed, "initial-parameter seed");
        (*sv_opts)["max_iters_first"] = sub->add_option("--max-iters-first",
                                                        sv_cfg->max_iters_first,
                                                        "iteration cap at the first sweep point");
        (*sv_opts)["max_iters_subsequent"] =
            sub->add_option("--max-iters-subsequent", sv_cfg->max_iters_subsequent,
                            "iteration cap at warm-started points");
        (*sv_opts)["shot_mode"] = sub->add_flag("--shot-mode", sv_cfg->shot_mode,
                                                "report sampled estimates instead of exact "
                                                "expectations");
        (*sv_opts)["shots"] = sub->add_option("--shots", sv_cfg->shots,
                                              "shots per measurement group in shot mode");
        sv_common->attach(sub);
        sub->callback([sv_cfg, sv_opts, sv_common, &rc] {
            rc = run_sweep_vqe(merge_config(*sv_cfg, *sv_opts, sv_common->config_path),
                               sv_common->outdir)
                     .exit_code;
        });
    }

    // scaling
    auto sc_cfg = std::make_shared<ScalingConfig>();
    auto sc_opts = std::make_shared<std::map<std::string, CLI::Option*>>();
    auto sc_common = std::make_shared<CommonArgs>();
    {
        auto* sub = app.add_subcommand("scaling",
                                       "second-derivative argmin vs chain length, extrapolated "
                                       "in 1/L");
        (*sc_opts)["sizes"] = sub->add_option("--sizes", sc_cfg->sizes, "chain lengths")
                                  ->delimiter(',');
        (*sc_opts)["J"] = sub->add_option("--J", sc_cfg->J, "exchange coupling");
        (*sc_opts)["hx"] = sub->add_option("--hx", sc_cfg->hx, "transverse field");
        (*sc_opts)["h_start"] = sub->add_option("--h-start", sc_cfg->h_start, "grid start");
        (*sc_opts)["h_stop"] = sub->add_option("--h-stop", sc_cfg->h_stop, "grid stop");
        (*sc_opts)["points"] = sub->add_option("--points", sc_cfg->points, "grid point count");
        (*sc_opts)["fit_min_L"] = sub->add_option("--fit-min-L", sc_cfg->fit_min_L,
                                                  "smallest size entering the linear fit");
        sc_common->attach(sub);
        sub->callback([sc_cfg, sc_opts, sc_common, &rc] {
            rc = run_scaling(merge_config(*sc_cfg, *sc_opts, sc_common->config_path),
                             sc_common->outdir)
                     .exit_code;
        });
    }

    // gap-scan
    auto gs_cfg = std::make_shared<GapScanConfig>();
    auto gs_opts = std::make_shared<std::map<std::string, CLI::Option*>>();
    auto gs_common = std::make_shared<CommonArgs>();
    {
        auto* sub = app.add_subcommand("gap-scan",
                                       "sector gap vs chain length with decay classification");
        (*gs_opts)["sizes"] = sub->add_option("--sizes", gs_cfg->sizes, "chain lengths")
                                  ->delimiter(',');
        (*gs_opts)["J"] = sub->add_option("--J", gs_cfg->J, "exchange coupling");
        (*gs_opts)["hx"] = sub->add_option("--hx", gs_cfg->hx, "transverse field");
        (*gs_opts)["hl"] = sub->add_option("--hl", gs_cfg->hl,
                                           "left boundary field; the right is -hl");
        gs_common->attach(sub);
        sub->callback([gs_cfg, gs_opts, gs_common, &rc] {
            rc = run_gap_scan(merge_config(*gs_cfg, *gs_opts, gs_common->config_path),
                              gs_common->outdir)
                     .exit_code;
        });
    }

    // rms-report
    auto rr_cfg = std::make_shared<RmsReportConfig>();
    auto rr_opts = std::make_shared<std::map<std::string, CLI::Option*>>();
    auto rr_common = std::make_shared<CommonArgs>();
    {
        auto* sub = app.add_subcommand("rms-report",
                                       "RMS deviation between a column of two CSV files");
        (*rr_opts)["reference"] = sub->add_option("--reference", rr_cfg->reference,
                                                  "reference csv path");
        (*rr_opts)["estimate"] = sub->add_option("--estimate", rr_cfg->estimate,
                                                 "estimate csv path");
        (*rr_opts)["column"] = sub->add_option("--column", rr_cfg->column, "column to compare");
        rr_common->attach(sub);
        sub->callback([rr_cfg, rr_opts, rr_common, &rc] {
            rc = run_rms_report(merge_config(*rr_cfg, *rr_opts, rr_common->config_path),
                                rr_common->outdir)
                     .exit_code;
        });
    }

    // dump-circuit
    auto dc_cfg = std::make_shared<DumpCircuitConfig>();
    {
        auto* sub = app.add_subcommand("dump-circuit", "print the layered ansatz gate list");
        sub->add_option("--L", dc_cfg->L, "chain length");
        sub->add_option("--layers", dc_cfg->layers, "ansatz layers");
        sub->add_flag("--untied-ansatz", dc_cfg->untied_ansatz,
                      "independent left/right boundary parameters");
        sub->callback([dc_cfg, &rc] { rc = run_dump_circuit(*dc_cfg); });
    }

    // dump-matrices
    auto dm_cfg = std::make_shared<DumpMatricesConfig>();
    {
        auto* sub = app.add_subcommand("dump-matrices",
                                       "print the quadratic-form matrices A and B plus epsilons");
        sub->add_option("--L", dm_cfg->L, "chain length");
        sub->add_option("--J", dm_cfg->J, "exchange coupling");
        sub->add_option("--hx", dm_cfg->hx, "transverse field");
        sub->add_option("--hl", dm_cfg->hl, "left boundary field");
        sub->add_option("--hr", dm_cfg->hr, "right boundary field");
        sub->callback([dm_cfg, &rc] { rc = run_dump_matrices(*dm_cfg); });
    }

    // batch
    auto batch_file = std::make_shared<std::string>();
    auto batch_workers = std::make_shared<int>(1);
    auto batch_outdir = std::make_shared<std::string>("out");
    {
        auto* sub = app.add_subcommand("batch", "run a JSON array of experiment configs");
        sub->add_option("--file", *batch_file, "batch JSON file")->required();
        sub->add_option("--workers", *batch_workers, "concurrent experiment count");
        sub->add_option("--outdir", *batch_outdir, "output root directory");
        sub->callback([batch_file, batch_workers, batch_outdir, &rc] {
            rc = run_batch(*batch_file, *batch_workers, *batch_outdir);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const numerical_integrity_error& e) {
        std::fprintf(stderr, "numerical integrity failure: %s\n", e.what());
        return 3;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return rc;
}
