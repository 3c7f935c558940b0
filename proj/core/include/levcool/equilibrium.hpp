#pragma once

#include <utility>

namespace levcool {

struct DerivedParams;

enum class EquilibriumMethod { closed_form, root_find };

struct EquilibriumSolution {
    double z0 = 0;               // m
    double xi = 0;               // rad
    EquilibriumMethod method = EquilibriumMethod::root_find;
    double residual_force = 0;   // N
    double closed_form_z0 = 0;   // m, always evaluated
    bool closed_form_valid = false;  // z0/zR < 0.1
};

struct AxialInputs {
    double radius, clausius, k, zR, tweezer_power, waist_x, waist_y;
};

// Forces on the tweezer axis (N).
double gradient_force(const AxialInputs& in, double z);
double scattering_force(const AxialInputs& in, double z);

EquilibriumSolution axial_equilibrium(const AxialInputs& in);
EquilibriumSolution axial_equilibrium(const DerivedParams& d, double tweezer_power, double waist_x,
                                      double waist_y);

double closed_form_z0(const AxialInputs& in);

// Mean optical quadratures in the frame rotated by xi.
std::pair<double, double> rotated_mean_quadratures(double E_d, double phi, double detuning,
                                                   double kappa, double xi);
std::pair<double, double> rotated_mean_quadratures(const DerivedParams& d, double xi);

struct CouplingTable {
    double xi = 0;
    // unrotated magnitudes
    double g_xZ = 0, g_yZ = 0, g_zP = 0;
    double g_xZ_xi = 0, g_xP_xi = 0, g_yZ_xi = 0, g_yP_xi = 0;
    double g_zZ_xi = 0, g_zP_xi = 0;
    double g_xy_xi = 0, g_xz_xi = 0, g_yz_xi = 0;
    double Z0_xi = 0, P0_xi = 0;
};

CouplingTable coupling_table(const DerivedParams& d, double xi);

}  // namespace levcool
