#pragma once

#include <complex>

namespace levcool {

// chi_j = w_j / (-w^2 + w_j^2 - i w_j gamma)
std::complex<double> chi_mech(double omega, double omega_j, double gamma);

// Response of x to a force in the drift model, where both quadratures carry -gamma/2:
// w_j / ((gamma/2 - i w)^2 + w_j^2). Agrees with chi_mech to O(gamma/w_j) near resonance.
std::complex<double> chi_mech_model(double omega, double omega_j, double gamma);

// eta = 1/(-i(w+Delta)+kappa/2) - 1/(i(-w+Delta)+kappa/2)
std::complex<double> eta_opt(double omega, double detuning, double kappa);

}  // namespace levcool
