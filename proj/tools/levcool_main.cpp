#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "levcool/brightdark.hpp"
#include "levcool/constants.hpp"
#include "levcool/equilibrium.hpp"
#include "levcool/errors.hpp"
#include "levcool/linear_model.hpp"
#include "levcool/params.hpp"
#include "levcool/scan.hpp"
#include "levcool/spectra.hpp"

namespace fs = std::filesystem;
using namespace levcool;

namespace {

struct Common {
    std::string config_path;
    std::string out_dir = ".";
    std::string mode = "2d";
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

void write_file(const Common& c, const std::string& name, const std::string& text) {
    fs::create_directories(c.out_dir);
    const fs::path p = fs::path(c.out_dir) / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    out << text;
    std::cerr << "wrote " << p.string() << "\n";
}

ModelMode parse_mode(const std::string& m) {
    if (m == "2d") return ModelMode::two_d;
    if (m == "3d") return ModelMode::three_d;
    throw ConfigError("mode must be 2d or 3d");
}

std::vector<double> linspace(const ScanAxis& a) {
    std::vector<double> v(a.points);
    for (int i = 0; i < a.points; ++i) v[i] = a.value(i);
    return v;
}

// "min:max:n" without a name
ScanAxis parse_range(const std::string& text) { return parse_axis("detuning:" + text); }

LinearModel model_for(const DerivedParams& d, const Common& c) {
    ModelOptions mo;
    mo.mode = parse_mode(c.mode);
    return build_model(d, coupling_table(d, d.xi), mo);
}

int cmd_derive(const Common& c) {
    const DerivedParams d = derive_params(load_config(c.config_path));
    const std::string j = derived_to_json(d);
    write_file(c, "derive.json", j + "\n");
    std::cout << j << "\n";
    return 0;
}

int cmd_eigenmodes(const Common& c, const std::string& sweep) {
    const DerivedParams d = derive_params(load_config(c.config_path));
    const LinearModel m = model_for(d, c);
    nlohmann::ordered_json j;
    const auto ev = eigenvalues(m);
    for (int k = 0; k < ev.size(); ++k) j["eigenvalues"].push_back({ev(k).real(), ev(k).imag()});
    j["max_real"] = max_real_eigenvalue(m);
    j["stable"] = max_real_eigenvalue(m) < 0.0;
    const double wbar = 0.5 * (d.omega_x + d.omega_y);
    std::vector<double> grid;
    if (sweep.empty()) {
        ScanAxis a{"detuning", -20.0 * wbar, -0.5 * wbar, 200};
        grid = linspace(a);
    } else {
        grid = linspace(parse_range(sweep));
    }
    const auto tr = bloch_trajectories(d, coupling_table(d, d.xi), grid);
    j["tracking_min_overlap"] = tr.min_overlap;
    write_file(c, "eigenmodes.csv", trajectory_csv(tr));
    write_file(c, "eigenmodes.json", j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_spectrum(const Common& c, bool write_csv) {
    const DerivedParams d = derive_params(load_config(c.config_path));
    const LinearModel m = model_for(d, c);
    const auto res = compute_spectra(m, {}, d.lo_offset);
    for (const auto& w : res.grid.meta.warnings) std::cerr << "warning: " << w << "\n";
    const std::string j = occupancy_json(res.report);
    if (write_csv) write_file(c, "spectrum.csv", spectrum_csv(res.grid));
    write_file(c, "occupancy.json", j + "\n");
    std::cout << j << "\n";
    if (!res.report.converged) throw ConvergenceError("spectral grid refinement did not converge");
    return 0;
}

int cmd_brightdark(const Common& c) {
    const DerivedParams d = derive_params(load_config(c.config_path));
    const auto geo = geometric_transform(d, d.theta_tw);
    const auto ng = nongeometric_transform(d.g_x, d.g_y, d.omega_x, d.omega_y);
    auto rates = cooling_rate_bd(geo, d, d.detuning);
    const auto xy = cooling_rate_xy(d, d.detuning);
    rates.gamma_opt_x = xy.gamma_opt_x;
    rates.gamma_opt_y = xy.gamma_opt_y;
    rates.has_xy = true;
    const auto gb = goldilocks_bounds(d.kappa, d.Gamma_heat, d.omega_y - d.omega_x);
    nlohmann::ordered_json j;
    j["geometric"] = nlohmann::json::parse(brightdark_json(geo, rates, gb));
    j["nongeometric"] = nlohmann::json::parse(brightdark_json(ng, cooling_rate_bd(ng, d, d.detuning), gb));
    const double nb = crude_occupancy(d.Gamma_heat, rates.has_approx ? rates.approx_b : rates.gamma_opt_b);
    const double nd = crude_occupancy(d.Gamma_heat, rates.gamma_opt_d);
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
    j["crude_occupancy"] = {{"n_b", num(nb)}, {"n_d", num(nd)}};
    write_file(c, "brightdark.json", j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_goldilocks(const Common& c) {
    const DerivedParams d = derive_params(load_config(c.config_path));
    const auto gb = goldilocks_bounds(d.kappa, d.Gamma_heat, d.omega_y - d.omega_x);
    const double hz = 1.0 / (2.0 * constants::pi);
    nlohmann::ordered_json j;
    j["kappa_hz"] = d.kappa * hz;
    j["Gamma_heat_hz"] = d.Gamma_heat * hz;
    j["delta_omega_hz"] = std::abs(d.omega_y - d.omega_x) * hz;
    j["g_min_hz"] = gb.g_min * hz;
    j["g_max_hz"] = std::isfinite(gb.g_max) ? nlohmann::json(gb.g_max * hz) : nlohmann::json();
    j["empty"] = gb.empty;
    j["g_mean_hz"] = 0.5 * (d.g_x + d.g_y) * hz;
    j["inside"] = !gb.empty && 0.5 * (d.g_x + d.g_y) >= gb.g_min && 0.5 * (d.g_x + d.g_y) <= gb.g_max;
    write_file(c, "goldilocks.json", j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_scan(const Common& c, const std::string& a1, const std::string& a2, bool fixed_detuning,
             const std::string& spectra, bool crossing) {
    const ExperimentConfig base = load_config(c.config_path);
    if (!spectra.empty()) {
        DerivedParams d = derive_params(base);
        if (crossing) d = crossing_map_params(d);
        const auto det = linspace(parse_range(spectra));
        const double wmax = 2.0 * std::max(d.omega_x, d.omega_y);
        const auto omega = linspace(ScanAxis{"omega", 0.0, wmax, 400});
        const auto s = scan_detuning_spectra(d, det, omega, false, c.threads);
        write_file(c, crossing ? "crossing_map.csv" : "detuning_spectra.csv", detuning_spectra_csv(s));
        return 0;
    }
    if (a1.empty() || a2.empty()) throw ConfigError("scan needs --axis1 and --axis2 (or --spectra)");
    ScanSpec spec;
    spec.base = base;
    spec.axis1 = parse_axis(a1);
    spec.axis2 = parse_axis(a2);
    spec.mode = parse_mode(c.mode);
    spec.fixed_detuning = fixed_detuning;
    spec.seed = c.seed;
    spec.threads = c.threads;
    const auto r = run_scan(spec);
    write_file(c, "scan.csv", scan_csv(r));
    write_file(c, "scan.provenance.json", scan_provenance_json(r) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"levcool: 2D coherent-scattering cavity cooling of a levitated particle"};
    app.require_subcommand(1);
    Common c;
    auto add_common = [&](CLI::App* s) {
        s->add_option("--config", c.config_path, "experiment config (JSON)")->required();
        s->add_option("--out", c.out_dir, "output directory");
        s->add_option("--mode", c.mode, "model dimension")->check(CLI::IsMember({"2d", "3d"}));
        s->add_option("--seed", c.seed, "seed recorded in provenance");
        s->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    };
    auto* derive = app.add_subcommand("derive", "derived physical parameters");
    auto* eig = app.add_subcommand("eigenmodes", "drift eigenvalues and Bloch-sphere mode trajectories");
    auto* spec = app.add_subcommand("spectrum", "displacement and heterodyne spectra");
    auto* occ = app.add_subcommand("occupancy", "phonon occupancies from integrated spectra");
    auto* bd = app.add_subcommand("brightdark", "bright/dark transforms and cooling rates");
    auto* scan = app.add_subcommand("scan", "parameter grid scan");
    auto* gold = app.add_subcommand("goldilocks", "analytic coupling bounds");
    for (auto* s : {derive, eig, spec, occ, bd, scan, gold}) add_common(s);

    std::string sweep;
    eig->add_option("--sweep", sweep, "detuning sweep min:max:n in rad/s (default -20..-0.5 mean frequency)");
    std::string a1, a2, spectra;
    bool fixed = false, crossing = false;
    scan->add_option("--axis1", a1, "outer axis name:min:max:n");
    scan->add_option("--axis2", a2, "inner axis name:min:max:n");
    scan->add_flag("--fixed-detuning", fixed, "keep the config detuning instead of -(w_x+w_y)/2 per cell");
    scan->add_option("--spectra", spectra, "heterodyne spectra over detuning min:max:n (rad/s)");
    scan->add_flag("--crossing-map", crossing, "with --spectra: kappa/10 and split/4 about the mean");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*derive) return cmd_derive(c);
        if (*eig) return cmd_eigenmodes(c, sweep);
        if (*spec) return cmd_spectrum(c, true);
        if (*occ) return cmd_spectrum(c, false);
        if (*bd) return cmd_brightdark(c);
        if (*scan) return cmd_scan(c, a1, a2, fixed, spectra, crossing);
        if (*gold) return cmd_goldilocks(c);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const EquilibriumError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 2;
    } catch (const InstabilityError& e) {
        std::cerr << "instability: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
