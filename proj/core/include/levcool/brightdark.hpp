#pragma once

#include <string>

#include "levcool/params.hpp"

namespace levcool {

enum class BdVariant { geometric, nongeometric };

struct BrightDarkParams {
    double omega_b = 0, omega_d = 0;  // rad/s
    double g_b = 0, g_bd = 0;         // rad/s
    BdVariant variant = BdVariant::geometric;
    double theta_used = 0;            // theta_tw or theta_ng
    double g_x = 0, g_y = 0;          // couplings the transform was built from
    double omega_x = 0, omega_y = 0;

    // non-geometric only: the printed frequency/coupling expressions, kept next to the
    // re-derived ones above (NaN for the geometric variant)
    double omega_b_printed = 0, omega_d_printed = 0, g_bd_printed = 0;
};

struct CoolingRates {
    double gamma_opt_x = 0, gamma_opt_y = 0;
    double gamma_opt_b = 0, gamma_opt_d = 0;
    double approx_b = 0, approx_d = 0;  // theta = pi/4 closed forms
    bool has_xy = false, has_bd = false, has_approx = false;
};

struct GoldilocksBounds {
    double g_min = 0, g_max = 0;
    bool empty = false;
};

BrightDarkParams geometric_transform(double omega_x, double omega_y, double g_x, double g_y,
                                     double theta_tw);
// couplings re-evaluated at theta_tw from the derived drive strength
BrightDarkParams geometric_transform(const DerivedParams& d, double theta_tw);

// x_d - Z_L coupling left over after the geometric rotation; zero when g_x, g_y come from the
// same drive at theta_tw.
double dark_residual_coupling(const BrightDarkParams& bd);

BrightDarkParams nongeometric_transform(double g_x, double g_y, double omega_x, double omega_y);

// Im[2i g_j^2 eta(w_j) / (1 - 2i g_k^2 chi_k(w_j) eta(w_j))] for (j,k) = (x,y), (y,x)
CoolingRates cooling_rate_xy(double omega_x, double omega_y, double g_x, double g_y, double gamma,
                             double kappa, double detuning);
CoolingRates cooling_rate_xy(const DerivedParams& d, double detuning);

// bright/dark self-energy rates; pi/4 closed forms filled when theta_used == pi/4
CoolingRates cooling_rate_bd(const BrightDarkParams& bd, double gamma, double kappa, double detuning);
CoolingRates cooling_rate_bd(const BrightDarkParams& bd, const DerivedParams& d, double detuning);

// Errors: ConfigError for negative inputs.
GoldilocksBounds goldilocks_bounds(double kappa, double Gamma_heat, double delta_omega);

// n ~ Gamma / Gamma_opt
double crude_occupancy(double Gamma_heat, double gamma_opt);

std::string brightdark_json(const BrightDarkParams& bd, const CoolingRates& r, const GoldilocksBounds& gb);

}  // namespace levcool
