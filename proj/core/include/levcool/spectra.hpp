#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levcool/linear_model.hpp"

namespace levcool {

struct SpectrumMeta {
    double omega_max = 0;
    double ds = 0;                     // sinh-map step; points per half-linewidth = 1/ds
    double points_per_halfwidth = 0;
    int refinements = 0;
    double achieved_tol = 0;           // relative change of n+1/2 on the last doubling
    double tail_fraction = 0;          // largest tail correction / integral
    double kappa = 0, detuning = 0;
    double lo_offset = 0;
    double g_rescale = 0;              // g used in the rescaled heterodyne spectrum
    double band_lo = 0, band_hi = 0;   // |omega| band for heterodyne thermometry
    std::vector<std::string> warnings;
};

struct SpectrumGrid {
    std::vector<double> omega;  // rad/s, strictly increasing
    std::map<std::string, std::vector<double>> values;
    SpectrumMeta meta;
};

struct OccupancyReport {
    double n_x = 0, n_y = 0, n_z = 0, n_2d = 0;
    double n_het = 0;
    double n_b = 0, n_d = 0;          // from bright/dark displacement PSDs
    bool has_z = false, has_het = false, has_bright = false;
    double achieved_tol = 0;
    double tail_fraction = 0;
    double g_asymmetry = 0;           // |g_x-g_y|/mean, reported with n_het
    bool converged = true;
};

struct GridOptions {
    double span_factor = 8.0;   // omega_max = span * max(w_j, |Delta|, kappa)
    double ds = 0.05;
    double rel_tol = 2e-3;
    int max_refinements = 5;
};

// Resonance-resolving grid: for each eigenvalue -a + ib a sinh-mapped point set centred on -b
// with spacing a*ds at the centre, merged with the others and clipped to [-omega_max, omega_max].
std::vector<double> resonance_grid(const Eigen::VectorXcd& eigs, double omega_max, double ds);

// Symmetrized displacement PSDs (x/sqrt2 normalization): S_xx, S_yy, [S_zz], and S_xbxb/S_xdxd
// when the model carries bright/dark rows.
SpectrumGrid transfer_psd(const LinearModel& m, const std::vector<double>& omega);

// Adds S_het (offset axis, vacuum floor 1/2) and S_het_rescaled = (S_het-1/2)/(kappa g^2 |eta|^2).
SpectrumGrid heterodyne_psd(const LinearModel& m, const std::vector<double>& omega, double lo_offset,
                            double g_rescale);

// (1/2pi) int S domega with power-law tail correction. Throws ConvergenceError if the tail exceeds
// 1% of the integral.
double integrate_psd(const std::vector<double>& omega, const std::vector<double>& s,
                     double* tail_fraction = nullptr);

// (1/2pi) int over lo <= |omega| <= hi, linear interpolation at the band edges.
double integrate_band(const std::vector<double>& omega, const std::vector<double>& f, double lo,
                      double hi);

OccupancyReport occupancy(const SpectrumGrid& spectrum);

struct SpectrumResult {
    SpectrumGrid grid;
    OccupancyReport report;
};

// Full pipeline: stability check, adaptive grid doubling, displacement and heterodyne spectra.
// lo_offset <= 0 selects 10x the largest mechanical frequency; g_rescale <= 0 selects (g_x+g_y)/2.
SpectrumResult compute_spectra(const LinearModel& m, const GridOptions& opt = {},
                               double lo_offset = 0.0, double g_rescale = 0.0);

struct BrightThermometry {
    double n_b = 0;
    double n_d_inferred = 0;
    bool inference_valid = false;
    double rate_ratio = 0;  // max/min of the two optical cooling rates
};

// n_b from the heterodyne spectrum rescaled with g_b; n_d = n_b when the bright and dark cooling
// rates are within a factor 3 (flag only otherwise).
BrightThermometry bright_mode_thermometry(const SpectrumGrid& spectrum, double g_b,
                                          double gamma_opt_b, double gamma_opt_d);

std::string spectrum_csv(const SpectrumGrid& s);
std::string occupancy_json(const OccupancyReport& r);

}  // namespace levcool
