#include "levcool/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "json.hpp"
#include "levcool/brightdark.hpp"
#include "levcool/constants.hpp"
#include "levcool/equilibrium.hpp"
#include "levcool/errors.hpp"
#include "levcool/format.hpp"

namespace levcool {

namespace {

constexpr double kToHz = 1.0 / (2.0 * constants::pi);

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) body(i);
    };
    if (threads == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

void check_axis(const ScanAxis& a) {
    if (!is_numeric_field(a.name)) throw ConfigError("unknown scan parameter '" + a.name + "'");
    if (a.points < 2) throw ConfigError("scan axis '" + a.name + "' needs at least 2 points");
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) throw ConfigError("scan axis '" + a.name + "' has non-finite bounds");
}

}  // namespace

double ScanAxis::value(int i) const {
    if (i == points - 1) return max;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(points - 1);
}

ScanAxis parse_axis(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(':', start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (parts.size() != 4) throw ConfigError("axis must be name:min:max:points, got '" + text + "'");
    ScanAxis a;
    a.name = parts[0];
    try {
        std::size_t used = 0;
        a.min = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("min");
        a.max = std::stod(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("max");
        a.points = std::stoi(parts[3], &used);
        if (used != parts[3].size()) throw std::invalid_argument("points");
    } catch (const std::logic_error&) {
        throw ConfigError("malformed axis '" + text + "'");
    }
    check_axis(a);
    return a;
}

ScanCell scan_cell(const ScanSpec& spec, double v1, double v2) {
    ScanCell cell;
    cell.v1 = v1;
    cell.v2 = v2;
    cell.status = "ok";
    try {
        ExperimentConfig cfg = spec.base;
        set_field(cfg, spec.axis1.name, v1);
        set_field(cfg, spec.axis2.name, v2);
        if (!spec.fixed_detuning) cfg.detuning = mean_detuning(cfg);
        validate(cfg);
        const DerivedParams d = derive_params(cfg);
        cell.omega_x = d.omega_x;
        cell.omega_y = d.omega_y;
        cell.g_x = d.g_x;
        cell.g_y = d.g_y;
        cell.detuning = d.detuning;
        cell.gamma_heat = d.Gamma_heat;
        const auto gb = goldilocks_bounds(d.kappa, d.Gamma_heat, d.omega_y - d.omega_x);
        cell.g_min = gb.g_min;
        cell.g_max = gb.g_max;
        const auto rates = cooling_rate_xy(d, d.detuning);
        cell.gamma_opt_x = rates.gamma_opt_x;
        cell.gamma_opt_y = rates.gamma_opt_y;

        ModelOptions mo;
        mo.mode = spec.mode;
        const LinearModel m = build_model(d, coupling_table(d, d.xi), mo);
        if (max_real_eigenvalue(m) >= 0.0) {
            cell.status = "unstable";
            return cell;
        }
        cell.stable = true;
        const auto res = compute_spectra(m, spec.grid, d.lo_offset);
        cell.has_occupancy = true;
        cell.converged = res.report.converged;
        cell.n_x = res.report.n_x;
        cell.n_y = res.report.n_y;
        cell.n_2d = res.report.n_2d;
        if (!cell.converged) cell.status = "not_converged";
    } catch (const InstabilityError&) {
        cell.status = "unstable";
        cell.stable = false;
        cell.has_occupancy = false;
    } catch (const ConvergenceError&) {
        cell.status = "convergence_error";
        cell.has_occupancy = false;
    } catch (const EquilibriumError&) {
        cell.status = "no_equilibrium";
        cell.has_occupancy = false;
    } catch (const ConfigError&) {
        cell.status = "config_error";
        cell.has_occupancy = false;
    } catch (const std::runtime_error&) {
        cell.status = "numerical_error";
        cell.has_occupancy = false;
    }
    return cell;
}

ScanResult run_scan(const ScanSpec& spec) {
    check_axis(spec.axis1);
    check_axis(spec.axis2);
    validate(spec.base);
    ScanResult r;
    r.spec = spec;
    r.code_version = kCodeVersion;
    const std::size_t n2 = spec.axis2.points;
    const std::size_t n = static_cast<std::size_t>(spec.axis1.points) * n2;
    r.cells.resize(n);
    parallel_for(n, spec.threads, [&](std::size_t i) {
        r.cells[i] = scan_cell(spec, spec.axis1.value(static_cast<int>(i / n2)), spec.axis2.value(static_cast<int>(i % n2)));
    });

    nlohmann::ordered_json key;
    key["config"] = nlohmann::json::parse(config_to_json(spec.base));
    for (const ScanAxis* a : {&spec.axis1, &spec.axis2})
        key["axes"].push_back({a->name, fmt(a->min), fmt(a->max), a->points});
    key["mode"] = spec.mode == ModelMode::two_d ? "2d" : "3d";
    key["fixed_detuning"] = spec.fixed_detuning;
    key["grid"] = {fmt(spec.grid.span_factor), fmt(spec.grid.ds), fmt(spec.grid.rel_tol), spec.grid.max_refinements};
    r.config_hash = fnv1a_hex(key.dump());
    return r;
}

ScanResult scan_frequencies(const ExperimentConfig& base, const ScanAxis& wx, const ScanAxis& wy, unsigned threads) {
    ScanSpec s;
    s.base = base;
    s.base.theta_tw = constants::pi / 4.0;
    s.axis1 = wx;
    s.axis1.name = "waist_x";
    s.axis2 = wy;
    s.axis2.name = "waist_y";
    s.threads = threads;
    return run_scan(s);
}

ScanResult scan_power_radius(const ExperimentConfig& base, const ScanAxis& radius, const ScanAxis& power,
                             unsigned threads) {
    ScanSpec s;
    s.base = base;
    s.base.theta_tw = constants::pi / 4.0;
    s.axis1 = radius;
    s.axis1.name = "radius";
    s.axis2 = power;
    s.axis2.name = "tweezer_power";
    s.threads = threads;
    return run_scan(s);
}

std::string scan_csv(const ScanResult& r) {
    CsvWriter w({r.spec.axis1.name, r.spec.axis2.name, "omega_x_hz", "omega_y_hz", "delta_omega_hz", "g_x_hz",
                 "g_y_hz", "g_mean_hz", "detuning_hz", "stable", "converged", "status", "n_x", "n_y", "n_2d",
                 "gamma_opt_x_hz", "gamma_opt_y_hz", "g_min_hz", "g_max_hz", "gamma_heat_hz"});
    for (const auto& c : r.cells) {
        w.cell(c.v1).cell(c.v2);
        const bool derived = c.omega_x > 0.0;
        if (derived) {
            w.cell(c.omega_x * kToHz).cell(c.omega_y * kToHz).cell(std::abs(c.omega_x - c.omega_y) * kToHz);
            w.cell(c.g_x * kToHz).cell(c.g_y * kToHz).cell(0.5 * (c.g_x + c.g_y) * kToHz).cell(c.detuning * kToHz);
        } else {
            for (int k = 0; k < 7; ++k) w.empty();
        }
        w.cell(static_cast<long long>(c.stable)).cell(static_cast<long long>(c.converged)).cell(c.status);
        if (c.has_occupancy)
            w.cell(c.n_x).cell(c.n_y).cell(c.n_2d);
        else
            w.empty().empty().empty();
        if (derived) {
            w.cell(c.gamma_opt_x * kToHz).cell(c.gamma_opt_y * kToHz);
            w.cell(c.g_min * kToHz).cell(c.g_max * kToHz).cell(c.gamma_heat * kToHz);
        } else {
            for (int k = 0; k < 5; ++k) w.empty();
        }
        w.end_row();
    }
    return w.str();
}

std::string scan_provenance_json(const ScanResult& r) {
    nlohmann::ordered_json j;
    j["config_hash"] = r.config_hash;
    j["code_version"] = r.code_version;
    j["seed"] = r.spec.seed;
    j["base_config"] = nlohmann::json::parse(config_to_json(r.spec.base));
    for (const ScanAxis* a : {&r.spec.axis1, &r.spec.axis2})
        j["axes"].push_back({{"name", a->name}, {"min", a->min}, {"max", a->max}, {"points", a->points}});
    j["order"] = "row-major, first axis outer";
    j["mode"] = r.spec.mode == ModelMode::two_d ? "2d" : "3d";
    j["detuning_rule"] = r.spec.fixed_detuning ? "fixed" : "mean_frequency";
    std::size_t ok = 0, unstable = 0, failed = 0;
    for (const auto& c : r.cells) {
        if (c.status == "ok")
            ++ok;
        else if (c.status == "unstable")
            ++unstable;
        else
            ++failed;
    }
    j["cells"] = {{"total", r.cells.size()}, {"ok", ok}, {"unstable", unstable}, {"flagged", failed}};
    return j.dump(2);
}

DerivedParams crossing_map_params(const DerivedParams& d) {
    DerivedParams out = d;
    const double mean = 0.5 * (d.omega_x + d.omega_y);
    const double half = 0.125 * (d.omega_x - d.omega_y);
    out.kappa = d.kappa / 10.0;
    out.omega_x = mean + half;
    out.omega_y = mean - half;
    return out;
}

DetuningSpectra scan_detuning_spectra(const DerivedParams& base, const std::vector<double>& detunings,
                                      const std::vector<double>& omega, bool with_occupancy, unsigned threads) {
    DetuningSpectra out;
    const std::size_t n = detunings.size();
    out.detuning = detunings;
    out.omega = omega;
    out.s_het.assign(n, {});
    out.branches.assign(n, {0.0, 0.0, 0.0});
    out.central_amplitude.assign(n, std::numeric_limits<double>::quiet_NaN());
    out.n_2d.assign(n, std::numeric_limits<double>::quiet_NaN());
    out.status.assign(n, "ok");
    parallel_for(n, threads, [&](std::size_t i) {
        DerivedParams d = base;
        d.detuning = detunings[i];
        const CouplingTable t = coupling_table(d, d.xi);
        ModelOptions undamped;
        undamped.dissipation = false;
        const auto ev = eigenvalues(build_model(d, t, undamped));
        std::vector<double> f;
        for (int k = 0; k < ev.size(); ++k)
            if (ev(k).imag() > 0.0) f.push_back(ev(k).imag());
        std::sort(f.begin(), f.end());
        for (std::size_t k = 0; k < 3 && k < f.size(); ++k) out.branches[i][k] = f[k];
        try {
            const LinearModel m = build_model(d, t);
            const double g = 0.5 * (m.g_x + m.g_y);
            out.s_het[i] = heterodyne_psd(m, omega, d.lo_offset, g).values.at("S_het");
            if (f.size() == 3)
                out.central_amplitude[i] = heterodyne_psd(m, {f[1]}, d.lo_offset, g).values.at("S_het")[0] - 0.5;
            if (with_occupancy) out.n_2d[i] = compute_spectra(m, {}, d.lo_offset, g).report.n_2d;
        } catch (const InstabilityError&) {
            out.status[i] = "unstable";
            out.s_het[i].assign(omega.size(), std::numeric_limits<double>::quiet_NaN());
        } catch (const ConvergenceError&) {
            out.status[i] = "convergence_error";
        }
    });
    return out;
}

std::string detuning_spectra_csv(const DetuningSpectra& s) {
    CsvWriter w({"detuning_hz", "omega_hz", "s_het", "branch_1_hz", "branch_2_hz", "branch_3_hz"});
    for (std::size_t i = 0; i < s.detuning.size(); ++i) {
        for (std::size_t k = 0; k < s.omega.size(); ++k) {
            w.cell(s.detuning[i] * kToHz).cell(s.omega[k] * kToHz);
            if (k < s.s_het[i].size())
                w.cell(s.s_het[i][k]);
            else
                w.empty();
            for (double b : s.branches[i]) w.cell(b * kToHz);
            w.end_row();
        }
    }
    return w.str();
}

}  // namespace levcool
