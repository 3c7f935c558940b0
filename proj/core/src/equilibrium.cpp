#include "levcool/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levcool/constants.hpp"
#include "levcool/errors.hpp"
#include "levcool/params.hpp"

namespace levcool {

using namespace constants;

namespace {

double peak_intensity(const AxialInputs& in) {
    return 2.0 * in.tweezer_power / (pi * in.waist_x * in.waist_y);
}

double intensity(const AxialInputs& in, double z) {
    const double u = z / in.zR;
    return peak_intensity(in) / (1.0 + u * u);
}

double intensity_slope(const AxialInputs& in, double z) {
    const double u = z / in.zR;
    const double den = 1.0 + u * u;
    return -peak_intensity(in) * 2.0 * z / (in.zR * in.zR * den * den);
}

}  // namespace

// restoring sign: pulls the particle back to the focus
double gradient_force(const AxialInputs& in, double z) {
    const double R3 = in.radius * in.radius * in.radius;
    return 2.0 * pi * R3 / c * in.clausius * intensity_slope(in, z);
}

double scattering_force(const AxialInputs& in, double z) {
    const double R6 = std::pow(in.radius, 6);
    return 8.0 * pi * std::pow(in.k, 4) * R6 / (3.0 * c) * in.clausius * in.clausius *
           intensity(in, z);
}

double closed_form_z0(const AxialInputs& in) {
    return in.clausius * 2.0 * std::pow(in.k, 4) * in.zR * in.zR / 3.0 * std::pow(in.radius, 3);
}

EquilibriumSolution axial_equilibrium(const AxialInputs& in) {
    EquilibriumSolution sol;
    sol.closed_form_z0 = closed_form_z0(in);

    // balance reduces to z/(1+z^2/zR^2) = closed form value
    const double target = sol.closed_form_z0;
    auto h = [&](double z) { return z / (1.0 + (z / in.zR) * (z / in.zR)) - target; };

    double a = 0.0, b = 0.99 * in.zR;
    double ha = h(a), hb = h(b);
    if (ha * hb > 0.0)
        throw EquilibriumError("no axial equilibrium: scattering force exceeds the maximal restoring force");

    double z = 0.5 * (a + b);
    for (int it = 0; it < 400; ++it) {
        // secant proposal, bisection fallback
        double s = b - hb * (b - a) / (hb - ha);
        if (!(s > a && s < b) || it % 3 == 2) s = 0.5 * (a + b);
        const double hs = h(s);
        z = s;
        if (hs == 0.0) break;
        if ((hs < 0.0) == (ha < 0.0)) {
            a = s;
            ha = hs;
        } else {
            b = s;
            hb = hs;
        }
        if (b - a <= std::max(1e-15 * 1e-3, 4.0 * std::numeric_limits<double>::epsilon() * b)) {
            z = std::abs(ha) < std::abs(hb) ? a : b;
            break;
        }
    }
    sol.z0 = z;
    sol.method = EquilibriumMethod::root_find;
    sol.residual_force = gradient_force(in, z) + scattering_force(in, z);
    sol.closed_form_valid = z / in.zR < 0.1;
    sol.xi = in.k * z - std::atan(z / in.zR);
    return sol;
}

EquilibriumSolution axial_equilibrium(const DerivedParams& d, double tweezer_power, double waist_x,
                                      double waist_y) {
    AxialInputs in{d.radius, d.clausius, d.k, d.zR, tweezer_power, waist_x, waist_y};
    return axial_equilibrium(in);
}

std::pair<double, double> rotated_mean_quadratures(double E_d, double phi, double detuning,
                                                   double kappa, double xi) {
    const double pre = -E_d * std::cos(phi) / (detuning * detuning + 0.25 * kappa * kappa);
    const double Z = pre * (2.0 * detuning * std::cos(xi) - kappa * std::sin(xi));
    const double P = pre * (2.0 * detuning * std::sin(xi) + kappa * std::cos(xi));
    return {Z, P};
}

std::pair<double, double> rotated_mean_quadratures(const DerivedParams& d, double xi) {
    return rotated_mean_quadratures(d.E_d, d.phi_tw, d.detuning, d.kappa, xi);
}

CouplingTable coupling_table(const DerivedParams& d, double xi) {
    CouplingTable t;
    t.xi = xi;
    const double sth = std::sin(d.theta_tw), cth = std::cos(d.theta_tw);
    const double sph = std::sin(d.phi_tw), cph = std::cos(d.phi_tw);
    const double cx = std::cos(xi), sx = std::sin(xi);

    t.g_xZ = d.E_d * d.k * sth * sph * d.xzpf;
    t.g_yZ = d.E_d * d.k * cth * sph * d.yzpf;
    t.g_zP = -d.E_d * d.k * cph * d.zzpf;

    t.g_xZ_xi = t.g_xZ * cx;
    t.g_xP_xi = t.g_xZ * sx;
    t.g_yZ_xi = t.g_yZ * cx;
    t.g_yP_xi = t.g_yZ * sx;
    t.g_zZ_xi = -t.g_zP * sx;
    t.g_zP_xi = t.g_zP * cx;

    std::tie(t.Z0_xi, t.P0_xi) = rotated_mean_quadratures(d, xi);
    // g_xy/Z0 and g_xz/P0 prefactors, applied to the lab means at xi
    const double k2 = d.k * d.k;
    t.g_xy_xi = d.E_d * k2 * sth * cth * cph * d.xzpf * d.yzpf * (t.Z0_xi * cx + t.P0_xi * sx);
    t.g_xz_xi = d.E_d * k2 * sth * sph * d.xzpf * d.zzpf * (t.P0_xi * cx - t.Z0_xi * sx);
    t.g_yz_xi = d.E_d * k2 * cth * sph * d.yzpf * d.zzpf * (t.P0_xi * cx - t.Z0_xi * sx);
    return t;
}

}  // namespace levcool
