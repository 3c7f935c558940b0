#include "levcool/susceptibility.hpp"

namespace levcool {

using cd = std::complex<double>;

cd chi_mech(double w, double wj, double gamma) {
    return wj / cd(-w * w + wj * wj, -wj * gamma);
}

cd chi_mech_model(double w, double wj, double gamma) {
    const cd u(0.5 * gamma, -w);
    return wj / (u * u + wj * wj);
}

cd eta_opt(double w, double detuning, double kappa) {
    return 1.0 / cd(0.5 * kappa, -(w + detuning)) - 1.0 / cd(0.5 * kappa, -w + detuning);
}

}  // namespace levcool
