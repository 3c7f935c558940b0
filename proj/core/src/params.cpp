#include "levcool/params.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "levcool/constants.hpp"
#include "levcool/equilibrium.hpp"
#include "levcool/errors.hpp"

namespace levcool {

using namespace constants;
using nlohmann::json;

namespace {

struct FieldRef {
    const char* name;
    double ExperimentConfig::*ptr;
};

constexpr std::array<FieldRef, 16> kFields{{
    {"pressure", &ExperimentConfig::pressure},
    {"gas_temperature", &ExperimentConfig::gas_temperature},
    {"kappa", &ExperimentConfig::kappa},
    {"cavity_length", &ExperimentConfig::cavity_length},
    {"cavity_waist", &ExperimentConfig::cavity_waist},
    {"wavelength", &ExperimentConfig::wavelength},
    {"density", &ExperimentConfig::density},
    {"radius", &ExperimentConfig::radius},
    {"tweezer_power", &ExperimentConfig::tweezer_power},
    {"waist_x", &ExperimentConfig::waist_x},
    {"waist_y", &ExperimentConfig::waist_y},
    {"theta_tw", &ExperimentConfig::theta_tw},
    {"phi_tw", &ExperimentConfig::phi_tw},
    {"detuning", &ExperimentConfig::detuning},
    {"lo_offset", &ExperimentConfig::lo_offset},
    {"relative_permittivity", &ExperimentConfig::relative_permittivity},
}};

// fields a config document may omit
bool optional_field(const std::string& name) {
    return name == "lo_offset" || name == "relative_permittivity" || name == "phi_tw" ||
           name == "recoil_override";
}

const FieldRef* find_field(const std::string& name) {
    for (const auto& f : kFields)
        if (name == f.name) return &f;
    return nullptr;
}

}  // namespace

ExperimentConfig reference_config() { return ExperimentConfig{}; }

void validate(const ExperimentConfig& c) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError(std::string("field '") + name + "' must be strictly positive");
    };
    positive(c.pressure, "pressure");
    positive(c.gas_temperature, "gas_temperature");
    positive(c.kappa, "kappa");
    positive(c.cavity_length, "cavity_length");
    positive(c.cavity_waist, "cavity_waist");
    positive(c.wavelength, "wavelength");
    positive(c.density, "density");
    positive(c.radius, "radius");
    positive(c.tweezer_power, "tweezer_power");
    positive(c.waist_x, "waist_x");
    positive(c.waist_y, "waist_y");
    if (!std::isfinite(c.detuning)) throw ConfigError("field 'detuning' must be finite");
    if (!(c.lo_offset >= 0.0) || !std::isfinite(c.lo_offset))
        throw ConfigError("field 'lo_offset' must be >= 0 (0 selects the default)");
    if (!(c.theta_tw >= 0.0 && c.theta_tw <= pi))
        throw ConfigError("field 'theta_tw' must lie in [0, pi]");
    if (!(c.phi_tw >= 0.0 && c.phi_tw <= pi))
        throw ConfigError("field 'phi_tw' must lie in [0, pi]");
    if (!(c.relative_permittivity > 1.0))
        throw ConfigError("field 'relative_permittivity' must exceed 1");
    if (c.recoil_override) {
        const auto& r = *c.recoil_override;
        if (!(r.x >= 0 && r.y >= 0 && r.z >= 0))
            throw ConfigError("field 'recoil_override' entries must be >= 0");
    }
    if (c.radius > c.wavelength / 4.0)
        throw NonRayleighError("field 'radius' exceeds wavelength/4: particle is outside the Rayleigh regime");
}

ExperimentConfig config_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    ExperimentConfig cfg;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        if (key == "recoil_override") {
            if (it->is_null()) continue;
            if (!it->is_object()) throw ConfigError("key 'recoil_override' must be an object {x,y,z}");
            RecoilOverride r;
            for (auto jt = it->begin(); jt != it->end(); ++jt) {
                if (!jt->is_number())
                    throw ConfigError("key 'recoil_override." + jt.key() + "' must be a number");
                if (jt.key() == "x") r.x = jt->get<double>();
                else if (jt.key() == "y") r.y = jt->get<double>();
                else if (jt.key() == "z") r.z = jt->get<double>();
                else throw ConfigError("unknown key 'recoil_override." + jt.key() + "'");
            }
            cfg.recoil_override = r;
            continue;
        }
        const FieldRef* f = find_field(key);
        if (!f) throw ConfigError("unknown key '" + key + "'");
        if (!it->is_number()) throw ConfigError("key '" + key + "' must be a number");
        cfg.*(f->ptr) = it->get<double>();
    }
    for (const auto& f : kFields)
        if (!optional_field(f.name) && !doc.contains(f.name))
            throw ConfigError(std::string("missing key '") + f.name + "'");
    validate(cfg);
    return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json doc = json::object();
    for (const auto& f : kFields) doc[f.name] = cfg.*(f.ptr);
    if (cfg.recoil_override) {
        const auto& r = *cfg.recoil_override;
        doc["recoil_override"] = {{"x", r.x}, {"y", r.y}, {"z", r.z}};
    }
    return doc.dump(2);
}

bool is_numeric_field(const std::string& name) { return find_field(name) != nullptr; }

void set_field(ExperimentConfig& cfg, const std::string& name, double value) {
    const FieldRef* f = find_field(name);
    if (!f) throw ConfigError("unknown parameter '" + name + "'");
    cfg.*(f->ptr) = value;
}

double get_field(const ExperimentConfig& cfg, const std::string& name) {
    const FieldRef* f = find_field(name);
    if (!f) throw ConfigError("unknown parameter '" + name + "'");
    return cfg.*(f->ptr);
}

double bose_occupancy(double omega, double temperature) {
    return 1.0 / std::expm1(hbar * omega / (k_B * temperature));
}

DerivedParams derive_params(const ExperimentConfig& cfg) {
    validate(cfg);
    DerivedParams d;
    d.kappa = cfg.kappa;
    d.detuning = cfg.detuning;
    d.theta_tw = cfg.theta_tw;
    d.phi_tw = cfg.phi_tw;
    d.radius = cfg.radius;
    d.wavelength = cfg.wavelength;
    d.gas_temperature = cfg.gas_temperature;

    const double R = cfg.radius;
    d.volume = 4.0 / 3.0 * pi * R * R * R;
    d.mass = cfg.density * d.volume;
    d.clausius = (cfg.relative_permittivity - 1.0) / (cfg.relative_permittivity + 2.0);
    d.alpha = 3.0 * eps0 * d.volume * d.clausius;
    d.k = 2.0 * pi / cfg.wavelength;
    d.omega_cav = d.k * c;
    d.mode_volume = pi * cfg.cavity_waist * cfg.cavity_waist * cfg.cavity_length / 4.0;
    d.eps_c = std::sqrt(hbar * d.omega_cav / (2.0 * eps0 * d.mode_volume));
    d.eps_tw = std::sqrt(4.0 * cfg.tweezer_power / (cfg.waist_x * cfg.waist_y * pi * eps0 * c));
    d.E_d = d.alpha * d.eps_c * d.eps_tw * std::sin(cfg.theta_tw) / (2.0 * hbar);
    d.zR = pi * cfg.waist_x * cfg.waist_y / cfg.wavelength;

    // intensity curvature of the Gaussian focus
    const double stiff = d.alpha * d.eps_tw * d.eps_tw / d.mass;
    d.omega_x = std::sqrt(stiff / (cfg.waist_x * cfg.waist_x));
    d.omega_y = std::sqrt(stiff / (cfg.waist_y * cfg.waist_y));
    d.omega_z = std::sqrt(stiff / (2.0 * d.zR * d.zR));

    d.xzpf = std::sqrt(hbar / (2.0 * d.mass * d.omega_x));
    d.yzpf = std::sqrt(hbar / (2.0 * d.mass * d.omega_y));
    d.zzpf = std::sqrt(hbar / (2.0 * d.mass * d.omega_z));

    std::tie(d.g_x, d.g_y) = coupling_rates(d, cfg.theta_tw);

    // Epstein drag, diffuse reflection
    const double v_term = std::sqrt(8.0 * gas_molecule_mass / (pi * k_B * cfg.gas_temperature));
    d.gamma_gas = (4.0 * pi / 3.0) * (1.0 + pi / 8.0) * R * R * cfg.pressure * v_term / d.mass;
    d.n_bath_x = bose_occupancy(d.omega_x, cfg.gas_temperature);
    d.n_bath_y = bose_occupancy(d.omega_y, cfg.gas_temperature);
    d.n_bath_z = bose_occupancy(d.omega_z, cfg.gas_temperature);
    d.n_B = bose_occupancy(0.5 * (d.omega_x + d.omega_y), cfg.gas_temperature);

    // Rayleigh scattering, dipole along y
    const double k4 = std::pow(d.k, 4);
    const double sigma = 8.0 * pi / 3.0 * k4 * std::pow(R, 6) * d.clausius * d.clausius;
    const double I0 = 2.0 * cfg.tweezer_power / (pi * cfg.waist_x * cfg.waist_y);
    d.scatter_rate = sigma * I0 / (hbar * d.omega_cav);
    if (cfg.recoil_override) {
        d.recoil_x = cfg.recoil_override->x;
        d.recoil_y = cfg.recoil_override->y;
        d.recoil_z = cfg.recoil_override->z;
    } else {
        auto lamb = [&](double zpf) { return std::pow(d.k * zpf, 2); };
        d.recoil_x = 0.4 * d.scatter_rate * lamb(d.xzpf);
        d.recoil_y = 0.2 * d.scatter_rate * lamb(d.yzpf);
        d.recoil_z = 1.4 * d.scatter_rate * lamb(d.zzpf);
    }
    d.Gamma_heat = d.gamma_gas * d.n_B + 0.5 * (d.recoil_x + d.recoil_y);

    const auto eq = axial_equilibrium(d, cfg.tweezer_power, cfg.waist_x, cfg.waist_y);
    d.z0 = eq.z0;
    d.xi = eq.xi;

    d.lo_offset = cfg.lo_offset > 0.0 ? cfg.lo_offset : 10.0 * std::max(d.omega_x, d.omega_y);
    return d;
}

std::pair<double, double> coupling_rates(const DerivedParams& d, double theta_tw) {
    return {d.E_d * d.k * std::sin(theta_tw) * d.xzpf, d.E_d * d.k * std::cos(theta_tw) * d.yzpf};
}

double mean_detuning(const ExperimentConfig& cfg) {
    // frequencies do not depend on the detuning or on the axial equilibrium
    const double R = cfg.radius;
    const double vol = 4.0 / 3.0 * pi * R * R * R;
    const double m = cfg.density * vol;
    const double beta = (cfg.relative_permittivity - 1.0) / (cfg.relative_permittivity + 2.0);
    const double alpha = 3.0 * eps0 * vol * beta;
    const double etw2 = 4.0 * cfg.tweezer_power / (cfg.waist_x * cfg.waist_y * pi * eps0 * c);
    const double wx = std::sqrt(alpha * etw2 / (m * cfg.waist_x * cfg.waist_x));
    const double wy = std::sqrt(alpha * etw2 / (m * cfg.waist_y * cfg.waist_y));
    return -0.5 * (wx + wy);
}

}  // namespace levcool

namespace levcool {

std::string derived_to_json(const DerivedParams& d) {
    const double hz = 1.0 / (2.0 * constants::pi);
    nlohmann::ordered_json j;
    j["mass"] = d.mass;
    j["volume"] = d.volume;
    j["clausius"] = d.clausius;
    j["alpha"] = d.alpha;
    j["k"] = d.k;
    j["omega_cav"] = d.omega_cav;
    j["mode_volume"] = d.mode_volume;
    j["eps_c"] = d.eps_c;
    j["eps_tw"] = d.eps_tw;
    j["E_d"] = d.E_d;
    j["zR"] = d.zR;
    j["omega_x"] = d.omega_x;
    j["omega_y"] = d.omega_y;
    j["omega_z"] = d.omega_z;
    j["xzpf"] = d.xzpf;
    j["yzpf"] = d.yzpf;
    j["zzpf"] = d.zzpf;
    j["g_x"] = d.g_x;
    j["g_y"] = d.g_y;
    j["gamma_gas"] = d.gamma_gas;
    j["n_B"] = d.n_B;
    j["n_bath_x"] = d.n_bath_x;
    j["n_bath_y"] = d.n_bath_y;
    j["n_bath_z"] = d.n_bath_z;
    j["scatter_rate"] = d.scatter_rate;
    j["recoil_x"] = d.recoil_x;
    j["recoil_y"] = d.recoil_y;
    j["recoil_z"] = d.recoil_z;
    j["Gamma_heat"] = d.Gamma_heat;
    j["z0"] = d.z0;
    j["xi"] = d.xi;
    j["kappa"] = d.kappa;
    j["detuning"] = d.detuning;
    j["lo_offset"] = d.lo_offset;
    j["hz"] = {{"omega_x_hz", d.omega_x * hz},
               {"omega_y_hz", d.omega_y * hz},
               {"omega_z_hz", d.omega_z * hz},
               {"relative_split", std::abs(d.omega_x - d.omega_y) / (0.5 * (d.omega_x + d.omega_y))},
               {"g_x_hz", d.g_x * hz},
               {"g_y_hz", d.g_y * hz},
               {"gamma_gas_hz", d.gamma_gas * hz},
               {"gamma_n_B_hz", d.gamma_gas * d.n_B * hz},
               {"Gamma_heat_hz", d.Gamma_heat * hz},
               {"kappa_hz", d.kappa * hz},
               {"detuning_hz", d.detuning * hz}};
    return j.dump(2);
}

}  // namespace levcool
