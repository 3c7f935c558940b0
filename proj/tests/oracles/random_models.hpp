#pragma once

#include <random>

#include "levcool/linear_model.hpp"

namespace oracle {

// Dimensionless 2D models (frequencies of order 1), optionally with lab-frame P couplings and a
// direct x-y term. Not guaranteed stable; callers filter.
inline levcool::ModelInputs random_inputs(std::mt19937_64& rng, bool general = true) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto in_range = [&](double a, double b) { return a + (b - a) * u(rng); };
    levcool::ModelInputs in;
    in.omega_x = in_range(0.5, 1.5);
    in.omega_y = in_range(0.5, 1.5);
    in.gamma = std::pow(10.0, in_range(-3.0, -1.0));
    in.kappa = in_range(0.2, 2.0);
    in.detuning = -in_range(0.4, 1.6);
    in.g_xZ = in_range(0.0, 0.25);
    in.g_yZ = in_range(0.0, 0.25);
    if (general) {
        in.g_xP = in_range(-0.1, 0.1);
        in.g_yP = in_range(-0.1, 0.1);
        in.g_xy = in_range(-0.05, 0.05);
    }
    in.n_x = in_range(0.0, 50.0);
    in.n_y = in_range(0.0, 50.0);
    in.recoil_x = in_range(0.0, 0.01);
    in.recoil_y = in_range(0.0, 0.01);
    return in;
}

}  // namespace oracle
