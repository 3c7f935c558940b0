// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "levcool/brightdark.hpp"
#include "levcool/constants.hpp"
#include "levcool/equilibrium.hpp"
#include "levcool/linear_model.hpp"
#include "levcool/params.hpp"
#include "levcool/scan.hpp"
#include "levcool/spectra.hpp"
#include "oracles.hpp"
#include "random_models.hpp"

using namespace levcool;
using constants::pi;

namespace tol {
constexpr double split_reference_config = 0.16, split_reference_config_tol = 0.01;
constexpr double split_circular = 0.036, split_circular_tol = 0.005;
constexpr double heating_lo_khz = 7.5, heating_hi_khz = 30.0;
constexpr double lyapunov_rel = 5e-3;
constexpr int lyapunov_models = 100;
constexpr double em_rel = 0.05;
constexpr int em_trajectories = 200;
constexpr double limit_1d_rel = 0.05, limit_2d_rel = 0.10;
constexpr double bd_abs = 1e-9, equivalence_rel = 1e-9;
constexpr int equivalence_draws = 100;
constexpr int goldilocks_points = 40;
constexpr double thermometry_rel = 0.30, circular_degraded_rel = 0.50;
constexpr double contour_factor = 2.0;
constexpr double g_min_khz = 27.0, g_min_rel = 0.02;
}  // namespace tol

namespace {

constexpr double kHz = 2.0 * pi * 1e3;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string f(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

double rel_split(const DerivedParams& d) {
    return std::abs(d.omega_x - d.omega_y) / (0.5 * (d.omega_x + d.omega_y));
}

Outcome crit1() {
    const DerivedParams a = derive_params(reference_config());
    ExperimentConfig c = reference_config();
    c.waist_x = 0.68e-6;
    const DerivedParams b = derive_params(c);
    const double sa = rel_split(a), sb = rel_split(b);
    const bool ok = std::abs(sa - tol::split_reference_config) <= tol::split_reference_config_tol &&
                    std::abs(sb - tol::split_circular) <= tol::split_circular_tol;
    return {ok, "split(reference) = " + f(sa) + ", split(w_x = 0.68 um) = " + f(sb)};
}

Outcome crit2() {
    const DerivedParams d = derive_params(reference_config());
    const double khz = d.gamma_gas * d.n_B / kHz;
    return {khz >= tol::heating_lo_khz && khz <= tol::heating_hi_khz, "gamma n_B / 2pi = " + f(khz) + " kHz"};
}

Outcome crit3() {
    std::mt19937_64 rng(20240611);
    int done = 0, worst_i = -1;
    double worst = 0.0;
    while (done < tol::lyapunov_models) {
        const LinearModel m = assemble_model(oracle::random_inputs(rng));
        if (max_real_eigenvalue(m) > -1e-6) continue;
        const auto r = compute_spectra(m).report;
        const Eigen::MatrixXd V = oracle::lyapunov(m.drift, m.diffusion());
        const double ex = std::abs((r.n_x + 0.5) / (0.5 * V(m.ix, m.ix)) - 1.0);
        const double ey = std::abs((r.n_y + 0.5) / (0.5 * V(m.iy, m.iy)) - 1.0);
        if (std::max(ex, ey) > worst) {
            worst = std::max(ex, ey);
            worst_i = done;
        }
        ++done;
    }
    return {worst <= tol::lyapunov_rel,
            std::to_string(done) + " random stable models, worst relative covariance error " + f(worst, 3) +
                " (model " + std::to_string(worst_i) + ")"};
}

LinearModel em_model(double g) {
    ModelInputs in;
    in.omega_x = 1.0;
    in.omega_y = 0.85;
    in.gamma = 0.2;
    in.kappa = 1.0;
    in.detuning = -0.925;
    in.g_xZ = in.g_yZ = g;
    in.n_x = in.n_y = 1000.0;
    return assemble_model(in);
}

Outcome crit4() {
    std::string detail;
    bool ok = true;
    for (double g : {0.0, 0.15}) {
        const LinearModel m = em_model(g);
        const double qlt = compute_spectra(m).report.n_x;
        const auto em = oracle::euler_maruyama<6, 8>(m, 1e-3, 50.0, 500.0, tol::em_trajectories, 7 + (g > 0));
        const double err = std::abs(em.n_x / qlt - 1.0);
        ok = ok && err <= tol::em_rel;
        detail += "g=" + f(g) + ": QLT n_x " + f(qlt, 5) + ", EM " + f(em.n_x, 5) + " +- " + f(em.stderr_x, 2) +
                  " (rel " + f(err, 2) + "); ";
    }
    return {ok, detail + std::to_string(tol::em_trajectories) + " trajectories each"};
}

Outcome crit5() {
    // 1D limit: g_y = 0, -Delta = w_x, kappa << w_x
    const double w = 1.0, kappa = 0.02, g = 0.002, gamma = 1e-6;
    const auto r1 = cooling_rate_xy(w, 1.1, g, 0.0, gamma, kappa, -w);
    const double e1 = std::abs(r1.gamma_opt_x / (4 * g * g / kappa) - 1.0);
    // degenerate 2D limit, strong cooperativity
    const double g2 = 0.02, gamma2 = 1e-4, kappa2 = 0.1;
    const auto r2 = cooling_rate_xy(w, w, g2, g2, gamma2, kappa2, -w);
    const double e2 = std::abs(r2.gamma_opt_x / gamma2 - 1.0);
    // dark rate at w_x = w_y
    const DerivedParams d = derive_params([] {
        ExperimentConfig c = reference_config();
        c.waist_x = c.waist_y;
        return c;
    }());
    const auto bd = geometric_transform(d, d.theta_tw);
    const auto rb = cooling_rate_bd(bd, d, -d.omega_x);
    const bool ok = e1 <= tol::limit_1d_rel && e2 <= tol::limit_2d_rel && rb.gamma_opt_d == 0.0;
    return {ok, "1D limit rel err " + f(e1, 3) + ", degenerate limit rel err " + f(e2, 3) +
                    ", Gamma_opt,d(w_x = w_y) = " + f(rb.gamma_opt_d)};
}

Outcome crit6() {
    const double w = 1.0, g = 0.05;
    const Eigen::Matrix3d F = rwa_frequency_matrix(three_mode_matrix(w, w, -w, g, g));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(F);
    const Eigen::Vector3d off = es.eigenvalues().array() - w;
    const double e_off = std::max({std::abs(off(0) + std::sqrt(2.0) * g), std::abs(off(1)),
                                   std::abs(off(2) - std::sqrt(2.0) * g)});
    // v = (x, Z_L, y); dark = (x - y)/sqrt2
    const Eigen::Vector3d dark(1 / std::sqrt(2.0), 0.0, -1 / std::sqrt(2.0));
    const double e_vec = 1.0 - std::abs(es.eigenvectors().col(1).dot(dark));

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int draws = 0;
    while (draws < tol::equivalence_draws) {
        const double wx = 0.5 + u(rng), wy = 0.5 + u(rng), th = 0.05 + 1.45 * u(rng);
        const double G = 0.01 + 0.1 * u(rng), det = -(0.5 + u(rng));
        const double gx = G * std::sin(th) / std::sqrt(wx), gy = G * std::cos(th) / std::sqrt(wy);
        const auto bd = geometric_transform(wx, wy, gx, gy, th);
        ModelInputs a;
        a.omega_x = wx;
        a.omega_y = wy;
        a.detuning = det;
        a.g_xZ = gx;
        a.g_yZ = gy;
        a.dissipation = false;
        ModelInputs b = a;
        b.omega_x = bd.omega_b;
        b.omega_y = bd.omega_d;
        b.g_xZ = bd.g_b;
        b.g_yZ = dark_residual_coupling(bd);
        b.g_xy = bd.g_bd;
        auto freqs = [](const ModelInputs& in) {
            const auto ev = eigenvalues(assemble_model(in));
            std::vector<double> v;
            for (int k = 0; k < ev.size(); ++k) v.push_back(ev(k).imag());
            std::sort(v.begin(), v.end());
            return v;
        };
        const auto fa = freqs(a), fb = freqs(b);
        if (std::abs(eigenvalues(assemble_model(a)).real().maxCoeff()) > 1e-9) continue;  // unstable draw
        for (std::size_t k = 0; k < fa.size(); ++k)
            worst = std::max(worst, std::abs(fa[k] - fb[k]) / std::abs(fa[k]));
        ++draws;
    }
    const bool ok = e_off <= tol::bd_abs && e_vec <= tol::bd_abs && worst <= tol::equivalence_rel;
    return {ok, "offset err " + f(e_off, 2) + ", dark vector err " + f(e_vec, 2) + ", representation equivalence worst " +
                    f(worst, 2) + " over " + std::to_string(draws) + " draws"};
}

ExperimentConfig goldilocks_base() {
    ExperimentConfig c = reference_config();
    c.recoil_override = RecoilOverride{0.0, 0.0, 0.0};
    return c;
}

ScanAxis radius_axis() { return {"radius", 50e-9, 120e-9, tol::goldilocks_points}; }
ScanAxis power_axis() { return {"tweezer_power", 0.1, 1.0, tol::goldilocks_points}; }

int nearest(const ScanAxis& a, double v) {
    int best = 0;
    for (int i = 1; i < a.points; ++i)
        if (std::abs(a.value(i) - v) < std::abs(a.value(best) - v)) best = i;
    return best;
}

struct Scans {
    std::optional<ScanResult> power_radius;
    unsigned threads = 1;
    const ScanResult& pr() {
        if (!power_radius) power_radius = scan_power_radius(goldilocks_base(), radius_axis(), power_axis(), threads);
        return *power_radius;
    }
};

Outcome crit7(Scans& s) {
    const ScanResult& r = s.pr();
    const auto& ra = r.spec.axis1;
    const auto& pa = r.spec.axis2;
    const ScanCell& ref = r.at(nearest(ra, 80e-9), nearest(pa, 0.7));
    const bool ref_ok = ref.has_occupancy && ref.n_2d < 1.0;
    const double g_ref = 0.5 * (ref.g_x + ref.g_y);
    int small_bad = 0, small_n = 0, large_bad = 0, large_n = 0, missing = 0;
    for (const auto& c : r.cells) {
        if (!c.has_occupancy) {
            ++missing;
            continue;
        }
        if (c.v1 <= 60e-9 + 1e-15) {
            ++small_n;
            if (c.n_2d <= 1.0) ++small_bad;
        }
        if (c.v1 >= 100e-9 - 1e-15 && 0.5 * (c.g_x + c.g_y) <= g_ref) {
            ++large_n;
            if (c.n_2d <= 1.0) ++large_bad;
        }
    }
    // with recoil heating on, for information
    ExperimentConfig rc = reference_config();
    rc.radius = ref.v1;
    rc.tweezer_power = ref.v2;
    rc.detuning = mean_detuning(rc);
    const DerivedParams d = derive_params(rc);
    const double n_recoil = compute_spectra(build_model(d, coupling_table(d, d.xi))).report.n_2d;

    const bool ok = ref_ok && small_bad == 0 && large_bad == 0 && small_n > 0 && large_n > 0;
    return {ok, std::to_string(ra.points) + "x" + std::to_string(pa.points) + " grid; n_2d(" + f(ref.v1 * 1e9, 3) +
                    " nm, " + f(ref.v2, 3) + " W) = " + f(ref.n_2d, 3) + "; R<=60 nm cells with n_2d<=1: " +
                    std::to_string(small_bad) + "/" + std::to_string(small_n) +
                    "; R>=100 nm matched-coupling cells with n_2d<=1: " + std::to_string(large_bad) + "/" +
                    std::to_string(large_n) + "; cells without occupancy: " + std::to_string(missing) +
                    "; info: same reference cell with recoil heating n_2d = " + f(n_recoil, 3)};
}

Outcome crit8(unsigned threads) {
    const ScanAxis ax{"waist_x", 0.5e-6, 0.8e-6, 40}, ay{"waist_y", 0.5e-6, 0.8e-6, 40};
    const ScanResult r = scan_frequencies(reference_config(), ax, ay, threads);
    const double kappa = reference_config().kappa;
    const ScanCell* best = nullptr;
    for (const auto& c : r.cells)
        if (c.has_occupancy && (!best || c.n_2d < best->n_2d)) best = &c;
    if (!best) return {false, "no converged cells"};
    const double dw = std::abs(best->omega_x - best->omega_y);
    int strip = 0, strip_hot = 0;
    for (const auto& c : r.cells)
        if (c.has_occupancy && std::abs(c.omega_x - c.omega_y) < kappa / 20) {
            ++strip;
            if (c.n_2d >= 5.0 * best->n_2d) ++strip_hot;
        }
    const bool ok = dw >= kappa / 4 && dw <= kappa;
    return {ok, "min n_2d = " + f(best->n_2d, 3) + " at |w_x-w_y| = " + f(dw / kappa, 3) +
                    " kappa (w_x = " + f(best->v1 * 1e6, 3) + " um, w_y = " + f(best->v2 * 1e6, 3) +
                    " um); info: near-degenerate cells with n_2d >= 5x min: " + std::to_string(strip_hot) + "/" +
                    std::to_string(strip)};
}

OccupancyReport thermometry_point(double waist_x) {
    ExperimentConfig c = reference_config();
    c.radius = 80e-9;
    c.tweezer_power = 0.8;
    c.waist_x = waist_x;
    c.detuning = -2 * pi * 400e3;
    const DerivedParams d = derive_params(c);
    return compute_spectra(build_model(d, coupling_table(d, d.xi)), {}, d.lo_offset).report;
}

Outcome crit9() {
    const auto g = thermometry_point(reference_config().waist_x);
    const auto n = thermometry_point(0.68e-6);
    const double eg = std::abs(g.n_het - g.n_2d) / g.n_2d;
    const double en = std::abs(n.n_het - n.n_2d) / n.n_2d;
    return {eg <= tol::thermometry_rel && en > tol::circular_degraded_rel,
            "elliptical: n_het " + f(g.n_het, 3) + " vs n_x+n_y " + f(g.n_2d, 3) + " (rel " + f(eg, 2) +
                "); near-circular: n_het " + f(n.n_het, 3) + " vs " + f(n.n_2d, 3) + " (rel " + f(en, 2) + ")"};
}

Outcome crit10(Scans& s) {
    const auto gb = goldilocks_bounds(2 * pi * 193e3, 2 * pi * 15e3, 0.0);
    const double gmin_khz = gb.g_min / kHz;
    const bool anchor = std::abs(gmin_khz / tol::g_min_khz - 1.0) <= tol::g_min_rel;

    const ScanResult& r = s.pr();
    const auto& ra = r.spec.axis1;
    const auto& pa = r.spec.axis2;
    const ScanCell& ref = r.at(nearest(ra, 80e-9), nearest(pa, 0.7));
    const double Gamma = ref.gamma_heat;
    int points = 0, outside = 0;
    double worst = 1.0;
    for (int j = 0; j < pa.points; ++j) {
        for (int i = 1; i < ra.points; ++i) {
            const ScanCell& a = r.at(i - 1, j);
            const ScanCell& b = r.at(i, j);
            if (!a.has_occupancy || !b.has_occupancy) continue;
            if ((a.n_2d - 1.0) * (b.n_2d - 1.0) > 0.0) continue;
            const double t = std::log(a.n_2d) / (std::log(a.n_2d) - std::log(b.n_2d));
            const double ga = 0.5 * (a.g_x + a.g_y), gbb = 0.5 * (b.g_x + b.g_y);
            const double g = ga + t * (gbb - ga);
            const double dw = std::abs(a.omega_x - a.omega_y);
            const auto bounds = goldilocks_bounds(r.spec.base.kappa, Gamma, dw);
            const double lmin = std::abs(std::log(g / bounds.g_min)), lmax = std::abs(std::log(g / bounds.g_max));
            const double ratio = std::exp(std::min(lmin, lmax));
            worst = std::max(worst, ratio);
            ++points;
            if (ratio > tol::contour_factor) ++outside;
        }
    }
    const bool ok = anchor && points > 0 && outside == 0;
    return {ok, "g_min(kappa=193 kHz, Gamma=15 kHz)/2pi = " + f(gmin_khz) + " kHz; " + std::to_string(points) +
                    " n_2d=1 contour points, worst factor to nearest bound " + f(worst, 3) + ", outside factor 2: " +
                    std::to_string(outside) + " (Gamma/2pi = " + f(Gamma / kHz, 3) + " kHz)"};
}

Outcome crit11() {
    ScanSpec spec;
    spec.base = reference_config();
    spec.axis1 = {"radius", 60e-9, 100e-9, 6};
    spec.axis2 = {"tweezer_power", 0.2, 1.0, 6};
    spec.seed = 42;
    spec.threads = 1;
    const ScanResult a = run_scan(spec);
    const ScanResult a2 = run_scan(spec);
    spec.threads = 4;
    const ScanResult b = run_scan(spec);
    const std::string ca = scan_csv(a) + scan_provenance_json(a);
    const bool ok = ca == scan_csv(a2) + scan_provenance_json(a2) && ca == scan_csv(b) + scan_provenance_json(b);
    return {ok, "36-cell scan, threads 1/1/4, outputs " + std::string(ok ? "byte-identical" : "differ") + " (hash " +
                    a.config_hash + ")"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> only;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--only", only, "run only these criteria");
    app.add_option("--threads", threads, "scan worker threads");
    CLI11_PARSE(app, argc, argv);

    Scans scans;
    scans.threads = threads;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"frequency-split anchors", crit1},
        {"heating-rate anchor", crit2},
        {"PSD vs Lyapunov oracle", crit3},
        {"Euler-Maruyama oracle", crit4},
        {"cooling-formula limits", crit5},
        {"bright/dark structure", crit6},
        {"Goldilocks reproduction", [&] { return crit7(scans); }},
        {"optimal frequency split", [&] { return crit8(threads); }},
        {"heterodyne thermometry", crit9},
        {"analytic bound check", [&] { return crit10(scans); }},
        {"determinism", crit11},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    o.detail.c_str(), sec);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
