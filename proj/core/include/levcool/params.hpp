#pragma once

#include <optional>
#include <string>
#include <utility>

namespace levcool {

struct RecoilOverride {
    double x = 0.0;  // rad/s, phonon heating rate per axis
    double y = 0.0;
    double z = 0.0;
};

struct ExperimentConfig {
    double pressure = 1e-4;                       // Pa
    double gas_temperature = 300.0;               // K
    double kappa = 2.0 * 3.141592653589793 * 193e3;  // rad/s
    double cavity_length = 1.07e-2;               // m
    double cavity_waist = 41.1e-6;                // m
    double wavelength = 1064e-9;                  // m
    double density = 2000.0;                      // kg/m^3
    double radius = 71.5e-9;                      // m
    double tweezer_power = 0.4;                   // W
    double waist_x = 0.600e-6;                    // m
    double waist_y = 0.705e-6;                    // m
    double theta_tw = 3.141592653589793 / 4.0;    // rad
    double phi_tw = 3.141592653589793 / 2.0;      // rad, node
    double detuning = -2.0 * 3.141592653589793 * 312e3;  // rad/s
    double lo_offset = 0.0;                       // rad/s, 0 -> 10x largest mechanical frequency
    double relative_permittivity = 2.1;
    std::optional<RecoilOverride> recoil_override;
};

// Reference experimental values with theta_tw = pi/4 at the node.
ExperimentConfig reference_config();

// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& cfg);

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);

// Numeric field access by name, used by scans. Throws ConfigError on unknown names.
void set_field(ExperimentConfig& cfg, const std::string& name, double value);
double get_field(const ExperimentConfig& cfg, const std::string& name);
bool is_numeric_field(const std::string& name);

struct DerivedParams {
    // inputs carried along so models can be built from this struct alone
    double kappa = 0, detuning = 0, lo_offset = 0, theta_tw = 0, phi_tw = 0;
    double radius = 0, wavelength = 0, gas_temperature = 0;

    double mass = 0;          // kg
    double volume = 0;        // m^3
    double clausius = 0;      // (eps-1)/(eps+2)
    double alpha = 0;         // C m^2 / V
    double k = 0;             // 1/m
    double omega_cav = 0;     // rad/s
    double mode_volume = 0;   // m^3
    double eps_c = 0;         // V/m
    double eps_tw = 0;        // V/m
    double E_d = 0;           // rad/s
    double zR = 0;            // m
    double omega_x = 0, omega_y = 0, omega_z = 0;  // rad/s
    double xzpf = 0, yzpf = 0, zzpf = 0;           // m
    double g_x = 0, g_y = 0;                       // rad/s
    double gamma_gas = 0;                          // rad/s
    double n_B = 0;                                // at (omega_x+omega_y)/2
    double n_bath_x = 0, n_bath_y = 0, n_bath_z = 0;
    double scatter_rate = 0;                       // photons/s
    double recoil_x = 0, recoil_y = 0, recoil_z = 0;  // rad/s phonon heating
    double Gamma_heat = 0;                         // rad/s
    double z0 = 0;                                 // m
    double xi = 0;                                 // rad
};

DerivedParams derive_params(const ExperimentConfig& cfg);

// all fields, SI units, plus *_hz conversions for the rates
std::string derived_to_json(const DerivedParams& d);

std::pair<double, double> coupling_rates(const DerivedParams& d, double theta_tw);

double bose_occupancy(double omega, double temperature);

// -(omega_x+omega_y)/2 for this config (the default scan detuning rule).
double mean_detuning(const ExperimentConfig& cfg);

}  // namespace levcool
