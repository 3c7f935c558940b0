#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levcool/linear_model.hpp"
#include "levcool/params.hpp"
#include "levcool/spectra.hpp"

namespace levcool {

inline constexpr const char* kCodeVersion = "0.1.0";

struct ScanAxis {
    std::string name;
    double min = 0, max = 0;
    int points = 2;
    double value(int i) const;
};

// "name:min:max:points". Errors: ConfigError.
ScanAxis parse_axis(const std::string& text);

struct ScanSpec {
    ScanAxis axis1, axis2;              // axis1 is the outer (row-major) index
    ExperimentConfig base;
    ModelMode mode = ModelMode::two_d;
    bool fixed_detuning = false;        // false: -Delta = (w_x+w_y)/2 per cell
    GridOptions grid;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct ScanCell {
    double v1 = 0, v2 = 0;
    double omega_x = 0, omega_y = 0, g_x = 0, g_y = 0, detuning = 0;
    bool stable = false, converged = false;
    std::string status;                 // ok, not_converged, unstable, convergence_error, ...
    bool has_occupancy = false;
    double n_x = 0, n_y = 0, n_2d = 0;
    double gamma_opt_x = 0, gamma_opt_y = 0;
    double g_min = 0, g_max = 0, gamma_heat = 0;
};

struct ScanResult {
    ScanSpec spec;
    std::vector<ScanCell> cells;        // row-major, axis1 outer
    std::string config_hash;
    std::string code_version;

    const ScanCell& at(int i1, int i2) const { return cells[static_cast<std::size_t>(i1) * spec.axis2.points + i2]; }
};

// Errors: ConfigError for bad axes (unknown field, fewer than 2 points).
ScanResult run_scan(const ScanSpec& spec);

// one cell of a scan, exposed for benchmarks and spot checks
ScanCell scan_cell(const ScanSpec& spec, double v1, double v2);

ScanResult scan_frequencies(const ExperimentConfig& base, const ScanAxis& waist_x, const ScanAxis& waist_y,
                            unsigned threads = 1);
ScanResult scan_power_radius(const ExperimentConfig& base, const ScanAxis& radius, const ScanAxis& power,
                             unsigned threads = 1);

std::string scan_csv(const ScanResult& r);
std::string scan_provenance_json(const ScanResult& r);

struct DetuningSpectra {
    std::vector<double> detuning;                // rad/s
    std::vector<double> omega;                   // common offset axis, rad/s
    std::vector<std::vector<double>> s_het;      // [detuning][omega]
    std::vector<std::array<double, 3>> branches; // undamped normal-mode frequencies, ascending
    std::vector<double> central_amplitude;       // S_het - 1/2 at the middle branch
    std::vector<double> n_2d;                    // NaN where not computed or failed
    std::vector<std::string> status;
};

// Heterodyne spectra on a fixed axis for each detuning, with classical mode overlay.
DetuningSpectra scan_detuning_spectra(const DerivedParams& d, const std::vector<double>& detunings,
                                      const std::vector<double>& omega, bool with_occupancy = false,
                                      unsigned threads = 1);

// Crossing-map parameters: kappa/10, |w_x - w_y|/4 about the mean, couplings unchanged.
DerivedParams crossing_map_params(const DerivedParams& d);

std::string detuning_spectra_csv(const DetuningSpectra& s);

}  // namespace levcool
