#include "levcool/brightdark.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "json.hpp"
#include "levcool/constants.hpp"
#include "levcool/errors.hpp"
#include "levcool/susceptibility.hpp"

namespace levcool {

using cd = std::complex<double>;
constexpr cd I(0.0, 1.0);

BrightDarkParams geometric_transform(double wx, double wy, double gx, double gy, double theta) {
    if (!(wx > 0.0 && wy > 0.0)) throw ConfigError("bright/dark transform needs positive frequencies");
    const double s = std::sin(theta), c = std::cos(theta);
    BrightDarkParams bd;
    bd.variant = BdVariant::geometric;
    bd.theta_used = theta;
    bd.g_x = gx;
    bd.g_y = gy;
    bd.omega_x = wx;
    bd.omega_y = wy;
    bd.omega_b = std::sqrt(wx * wx * s * s + wy * wy * c * c);
    bd.omega_d = std::sqrt(wx * wx * c * c + wy * wy * s * s);
    bd.g_bd = s * c * (wy * wy - wx * wx) / (2.0 * std::sqrt(bd.omega_b * bd.omega_d));
    bd.g_b = gx * std::sqrt(wx / bd.omega_b) * s + gy * std::sqrt(wy / bd.omega_b) * c;
    bd.omega_b_printed = bd.omega_d_printed = bd.g_bd_printed = std::numeric_limits<double>::quiet_NaN();
    return bd;
}

BrightDarkParams geometric_transform(const DerivedParams& d, double theta) {
    const auto [gx, gy] = coupling_rates(d, theta);
    return geometric_transform(d.omega_x, d.omega_y, gx, gy, theta);
}

double dark_residual_coupling(const BrightDarkParams& bd) {
    const double s = std::sin(bd.theta_used), c = std::cos(bd.theta_used);
    if (bd.variant == BdVariant::nongeometric) return bd.g_x * c - bd.g_y * s;
    return -bd.g_x * std::sqrt(bd.omega_x / bd.omega_d) * c + bd.g_y * std::sqrt(bd.omega_y / bd.omega_d) * s;
}

BrightDarkParams nongeometric_transform(double gx, double gy, double wx, double wy) {
    const double g2 = gx * gx + gy * gy;
    if (!(g2 > 0.0)) throw ConfigError("non-geometric transform needs a non-zero coupling");
    BrightDarkParams bd;
    bd.variant = BdVariant::nongeometric;
    bd.theta_used = std::atan2(gx, gy);
    bd.g_x = gx;
    bd.g_y = gy;
    bd.omega_x = wx;
    bd.omega_y = wy;
    bd.g_b = std::sqrt(g2);
    const double s2 = gx * gx / g2, c2 = gy * gy / g2;
    bd.omega_b = wx * s2 + wy * c2;
    bd.omega_d = wx * c2 + wy * s2;
    bd.g_bd = (wy - wx) * gx * gy / (2.0 * g2);
    // as printed
    bd.omega_b_printed = std::sqrt((gx * gx * wx + gy * gy * wy) / g2);
    bd.omega_d_printed = std::sqrt((gx * gx * wy + gy * gy * wx) / g2);
    bd.g_bd_printed = (wy - wx) * gx * gy / (2.0 * std::sqrt(g2));
    return bd;
}

CoolingRates cooling_rate_xy(double wx, double wy, double gx, double gy, double gamma, double kappa,
                             double detuning) {
    auto rate = [&](double wj, double gj, double wk, double gk) {
        const cd eta = eta_opt(wj, detuning, kappa);
        const cd chi_k = chi_mech(wj, wk, gamma);
        return (2.0 * I * gj * gj * eta / (1.0 - 2.0 * I * gk * gk * chi_k * eta)).imag();
    };
    CoolingRates r;
    r.gamma_opt_x = rate(wx, gx, wy, gy);
    r.gamma_opt_y = rate(wy, gy, wx, gx);
    r.has_xy = true;
    return r;
}

CoolingRates cooling_rate_xy(const DerivedParams& d, double detuning) {
    return cooling_rate_xy(d.omega_x, d.omega_y, d.g_x, d.g_y, d.gamma_gas, d.kappa, detuning);
}

CoolingRates cooling_rate_bd(const BrightDarkParams& bd, double gamma, double kappa, double detuning) {
    auto chi_b = [&](double w) { return chi_mech(w, bd.omega_b, gamma); };
    auto chi_d = [&](double w) { return chi_mech(w, bd.omega_d, gamma); };
    auto J_bd = [&](double w) { return -2.0 * bd.g_bd * chi_b(w); };
    auto J_db = [&](double w) { return -2.0 * bd.g_bd * chi_d(w); };
    auto J_bY = [&](double w) { return -2.0 * bd.g_b * chi_b(w); };
    auto J_Yb = [&](double w) { return -I * bd.g_b * eta_opt(w, detuning, kappa); };

    CoolingRates r;
    const double wb = bd.omega_b, wd = bd.omega_d;
    r.gamma_opt_b = ((J_bd(wb) * J_db(wb) + J_bY(wb) * J_Yb(wb)) / chi_b(wb)).imag();
    r.gamma_opt_d = ((J_db(wd) * J_bd(wd) / (1.0 - J_bY(wd) * J_Yb(wd))) / chi_d(wd)).imag();
    r.has_bd = true;
    if (std::abs(bd.theta_used - constants::pi / 4.0) < 1e-12) {
        r.has_approx = true;
        r.approx_b = 4.0 * bd.g_b * bd.g_b / kappa;
        r.approx_d = bd.g_bd * bd.g_bd * kappa / (bd.g_b * bd.g_b);
    }
    return r;
}

CoolingRates cooling_rate_bd(const BrightDarkParams& bd, const DerivedParams& d, double detuning) {
    return cooling_rate_bd(bd, d.gamma_gas, d.kappa, detuning);
}

GoldilocksBounds goldilocks_bounds(double kappa, double Gamma, double delta_omega) {
    if (kappa < 0.0 || Gamma < 0.0) throw ConfigError("goldilocks bounds need non-negative kappa and heating rate");
    GoldilocksBounds b;
    b.g_min = std::sqrt(kappa * Gamma / 4.0);
    b.g_max = Gamma > 0.0 ? std::sqrt(kappa / (16.0 * Gamma)) * std::abs(delta_omega)
                          : std::numeric_limits<double>::infinity();
    b.empty = b.g_min > b.g_max;
    return b;
}

double crude_occupancy(double Gamma, double gamma_opt) {
    return gamma_opt > 0.0 ? Gamma / gamma_opt : std::numeric_limits<double>::infinity();
}

std::string brightdark_json(const BrightDarkParams& bd, const CoolingRates& r, const GoldilocksBounds& gb) {
    const double to_hz = 1.0 / (2.0 * constants::pi);
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(); };
    nlohmann::ordered_json j;
    j["variant"] = bd.variant == BdVariant::geometric ? "geometric" : "nongeometric";
    j["theta_used"] = bd.theta_used;
    j["omega_b_hz"] = bd.omega_b * to_hz;
    j["omega_d_hz"] = bd.omega_d * to_hz;
    j["g_b_hz"] = bd.g_b * to_hz;
    j["g_bd_hz"] = bd.g_bd * to_hz;
    j["dark_residual_hz"] = dark_residual_coupling(bd) * to_hz;
    if (bd.variant == BdVariant::nongeometric) {
        j["printed"] = {{"omega_b", num(bd.omega_b_printed)},
                        {"omega_d", num(bd.omega_d_printed)},
                        {"g_bd", num(bd.g_bd_printed)}};
    }
    if (r.has_xy) {
        j["gamma_opt_x_hz"] = r.gamma_opt_x * to_hz;
        j["gamma_opt_y_hz"] = r.gamma_opt_y * to_hz;
    }
    if (r.has_bd) {
        j["gamma_opt_b_hz"] = r.gamma_opt_b * to_hz;
        j["gamma_opt_d_hz"] = r.gamma_opt_d * to_hz;
    }
    if (r.has_approx) {
        j["approx_b_hz"] = r.approx_b * to_hz;
        j["approx_d_hz"] = r.approx_d * to_hz;
    }
    j["goldilocks"] = {{"g_min_hz", num(gb.g_min * to_hz)}, {"g_max_hz", num(gb.g_max * to_hz)}, {"empty", gb.empty}};
    return j.dump(2);
}

}  // namespace levcool
