#include <cmath>
#include <random>

#include "doctest.h"
#include "levcool/constants.hpp"
#include "levcool/equilibrium.hpp"
#include "levcool/errors.hpp"
#include "levcool/linear_model.hpp"
#include "levcool/params.hpp"

using namespace levcool;
using constants::pi;

namespace {

DerivedParams with_radius(double r) {
    ExperimentConfig c = reference_config();
    c.radius = r;
    return derive_params(c);
}

AxialInputs axial(const DerivedParams& d, const ExperimentConfig& c) {
    return {d.radius, d.clausius, d.k, d.zR, c.tweezer_power, c.waist_x, c.waist_y};
}

std::vector<double> sorted_spectrum(const LinearModel& m) {
    const auto ev = eigenvalues(m);
    std::vector<double> v;
    for (int i = 0; i < ev.size(); ++i) v.push_back(ev(i).imag());
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_SUITE("scattering_equilibrium") {
    TEST_CASE("small-particle cubic law") {
        const auto d = with_radius(5e-9);
        const double coeff = d.clausius * 2 * std::pow(d.k, 4) * d.zR * d.zR / 3;
        CHECK(d.z0 / std::pow(5e-9, 3) == doctest::Approx(coeff).epsilon(0.005));
        const auto d2 = with_radius(10e-9);
        CHECK(d2.z0 / std::pow(10e-9, 3) == doctest::Approx(coeff).epsilon(0.005));
    }

    TEST_CASE("closed form is the small-shift limit of the root") {
        // the exact root exceeds the closed form by (z0/zR)^2 to leading order
        const ExperimentConfig c = reference_config();
        const auto d = derive_params(c);
        const auto sol = axial_equilibrium(axial(d, c));
        const double q = sol.closed_form_z0 / d.zR;
        const double gap = sol.z0 / sol.closed_form_z0 - 1.0;
        CHECK(gap == doctest::Approx(q * q).epsilon(0.05));
        // agreement to 1e-4 once the shift is small
        const auto s = with_radius(20e-9);
        ExperimentConfig cs = c;
        cs.radius = 20e-9;
        const auto small = axial_equilibrium(axial(s, cs));
        CHECK(small.z0 == doctest::Approx(small.closed_form_z0).epsilon(1e-4));
        CHECK(small.closed_form_valid);
    }

    TEST_CASE("larger particle is pushed further") {
        const double z71 = with_radius(71.5e-9).z0, z100 = with_radius(100e-9).z0;
        CHECK(z100 >= std::pow(100 / 71.5, 3) * 0.95 * z71);
    }

    TEST_CASE("root satisfies force balance") {
        const ExperimentConfig c = reference_config();
        const auto d = derive_params(c);
        const auto in = axial(d, c);
        const auto sol = axial_equilibrium(in);
        const double scale = std::max(std::abs(gradient_force(in, 0.0)), std::abs(scattering_force(in, 0.0)));
        CHECK(std::abs(sol.residual_force) <= 1e-9 * scale);
        CHECK(std::abs(gradient_force(in, sol.z0) + scattering_force(in, sol.z0)) <= 1e-9 * scale);
        CHECK(sol.xi == doctest::Approx(d.k * sol.z0 - std::atan(sol.z0 / d.zR)).epsilon(1e-12));
        CHECK(sol.closed_form_valid == (sol.z0 / d.zR < 0.1));
    }

    TEST_CASE("too-large particle is not trapped axially") {
        ExperimentConfig c = reference_config();
        c.radius = 130e-9;
        CHECK_THROWS_AS(derive_params(c), EquilibriumError);
    }

    TEST_CASE("mean quadratures") {
        const auto d = derive_params(reference_config());
        // cos(pi/2) is only zero to rounding
        const double scale = d.E_d / std::hypot(d.detuning, d.kappa / 2);
        const auto [Z, P] = rotated_mean_quadratures(d, 0.3);
        CHECK(std::abs(Z) <= 1e-15 * scale);
        CHECK(std::abs(P) <= 1e-15 * scale);

        const double Ed = 1e5, phi = 0.4, det = -2e6, kap = 1.2e6;
        const auto [Z0, P0] = rotated_mean_quadratures(Ed, phi, det, kap, 0.0);
        CHECK(Z0 == doctest::Approx(-Ed * std::cos(phi) * 2 * det / (det * det + kap * kap / 4)).epsilon(1e-14));

        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0;
        for (int i = 0; i < 1000; ++i) {
            const double dd = 3e6 * u(rng), kk = 1e5 + 2e6 * std::abs(u(rng)), xi = pi * u(rng);
            const auto [z0, p0] = rotated_mean_quadratures(Ed, phi, dd, kk, 0.0);
            const auto [zx, px] = rotated_mean_quadratures(Ed, phi, dd, kk, xi);
            const double scale = std::hypot(z0, p0);
            worst = std::max(worst, std::abs(std::cos(xi) * z0 - std::sin(xi) * p0 - zx) / scale);
            worst = std::max(worst, std::abs(std::sin(xi) * z0 + std::cos(xi) * p0 - px) / scale);
        }
        CHECK(worst <= 1e-12);
    }

    TEST_CASE("coupling table identities") {
        const auto d = derive_params(reference_config());
        const auto t0 = coupling_table(d, 0.0);
        CHECK(std::abs(t0.g_xy_xi) <= 1e-15 * t0.g_xZ);  // node
        CHECK(t0.g_xP_xi == 0.0);
        CHECK(t0.g_yP_xi == 0.0);
        CHECK(t0.g_xZ_xi == t0.g_xZ);
        CHECK(t0.g_xZ == doctest::Approx(d.g_x).epsilon(1e-14));
        CHECK(t0.g_yZ == doctest::Approx(d.g_y).epsilon(1e-14));
        for (double xi : {0.1, 1.0, 2.5, -0.7}) {
            const auto t = coupling_table(d, xi);
            CHECK(std::hypot(t.g_xZ_xi, t.g_xP_xi) == doctest::Approx(std::abs(t.g_xZ)).epsilon(1e-12));
            CHECK(std::hypot(t.g_yZ_xi, t.g_yP_xi) == doctest::Approx(std::abs(t.g_yZ)).epsilon(1e-12));
            CHECK(std::hypot(t.g_zZ_xi, t.g_zP_xi) == doctest::Approx(std::abs(t.g_zP)).epsilon(1e-12));
        }
    }

    TEST_CASE("spectrum does not depend on the quadrature rotation") {
        ExperimentConfig c = reference_config();
        c.phi_tw = pi / 3;  // off the node so every coupling is active
        const auto d = derive_params(c);
        ModelOptions lab;
        lab.mode = ModelMode::three_d;
        lab.frame = Frame::lab;
        lab.dissipation = false;
        const auto ref = sorted_spectrum(build_model(d, coupling_table(d, 0.0), lab));
        for (double xi : {d.xi, 0.4, 1.3, -2.0}) {
            const auto s = sorted_spectrum(build_model(d, coupling_table(d, xi), lab));
            for (std::size_t k = 0; k < s.size(); ++k)
                CHECK(s[k] == doctest::Approx(ref[k]).epsilon(1e-9));
            ModelOptions rot = lab;
            rot.frame = Frame::rotated;
            const auto r = sorted_spectrum(build_model(d, coupling_table(d, xi), rot));
            for (std::size_t k = 0; k < r.size(); ++k)
                CHECK(r[k] == doctest::Approx(ref[k]).epsilon(1e-9));
        }
    }
}
