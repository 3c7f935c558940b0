#pragma once

#include <numbers>

namespace levcool::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double k_B = 1.380649e-23;
inline constexpr double c = 299792458.0;
inline constexpr double eps0 = 8.8541878128e-12;
inline constexpr double amu = 1.66053906660e-27;
// residual gas taken as N2
inline constexpr double gas_molecule_mass = 28.0134 * amu;

}  // namespace levcool::constants
