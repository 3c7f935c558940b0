#include "levcool/spectra.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "json.hpp"
#include "levcool/constants.hpp"
#include "levcool/errors.hpp"
#include "levcool/format.hpp"
#include "levcool/susceptibility.hpp"

namespace levcool {

using cd = std::complex<double>;

std::vector<double> resonance_grid(const Eigen::VectorXcd& eigs, double omega_max, double ds) {
    std::vector<double> pts{-omega_max, 0.0, omega_max};
    for (int k = 0; k < eigs.size(); ++k) {
        const double centre = -eigs(k).imag();
        const double a = std::max(std::abs(eigs(k).real()), 1e-12 * omega_max);
        const double reach = std::asinh((omega_max + std::abs(centre)) / a);
        const int n = static_cast<int>(std::ceil(reach / ds));
        for (int i = -n; i <= n; ++i) {
            const double w = centre + a * std::sinh(i * ds);
            if (w > -omega_max && w < omega_max) pts.push_back(w);
        }
    }
    std::sort(pts.begin(), pts.end());
    const double eps = 1e-14 * omega_max;
    std::vector<double> out;
    out.reserve(pts.size());
    for (double w : pts)
        if (out.empty() || w - out.back() > eps) out.push_back(w);
    return out;
}

namespace {

void require_stable(const LinearModel& m) {
    if (max_real_eigenvalue(m) >= 0.0)
        throw InstabilityError("linear model is unstable (eigenvalue with non-negative real part)");
}

SpectrumGrid evaluate(const LinearModel& m, const std::vector<double>& omega, bool het,
                      double lo_offset, double g_rescale) {
    require_stable(m);
    for (std::size_t i = 1; i < omega.size(); ++i)
        if (!(omega[i] > omega[i - 1])) throw ConfigError("frequency grid must be strictly increasing");

    const int n = m.dim;
    const std::size_t N = omega.size();
    const bool has_z = m.iz >= 0;
    const bool has_bd = m.bright_row.size() == n;
    SpectrumGrid out;
    out.omega = omega;
    auto& sxx = out.values["S_xx"];
    auto& syy = out.values["S_yy"];
    sxx.resize(N);
    syy.resize(N);
    std::vector<double>* szz = nullptr;
    std::vector<double>*sbb = nullptr, *sdd = nullptr, *shet = nullptr, *sres = nullptr;
    if (has_z) (szz = &out.values["S_zz"])->resize(N);
    if (has_bd) {
        (sbb = &out.values["S_xbxb"])->resize(N);
        (sdd = &out.values["S_xdxd"])->resize(N);
    }
    if (het) {
        (shet = &out.values["S_het"])->resize(N);
        (sres = &out.values["S_het_rescaled"])->resize(N);
    }

    const Eigen::ArrayXd psd = m.noise_psd.array();
    const Eigen::MatrixXcd G = m.noise_gain.cast<cd>();
    const Eigen::MatrixXcd A = m.drift.cast<cd>();
    const double sk = std::sqrt(m.kappa);
    Eigen::MatrixXcd K(n, n);
    auto row_psd = [&](const Eigen::RowVectorXcd& r) {
        return (r.array().abs2().transpose() * psd).sum();
    };

    for (std::size_t i = 0; i < N; ++i) {
        const double w = omega[i];
        K = -A;
        K.diagonal().array() += cd(0.0, -w);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(K);
        const Eigen::MatrixXcd T = lu.solve(G);
        sxx[i] = 0.5 * row_psd(T.row(m.ix));
        syy[i] = 0.5 * row_psd(T.row(m.iy));
        if (szz) (*szz)[i] = 0.5 * row_psd(T.row(m.iz));
        if (has_bd) {
            (*sbb)[i] = 0.5 * row_psd(m.bright_row.cast<cd>().transpose() * T);
            (*sdd)[i] = 0.5 * row_psd(m.dark_row.cast<cd>().transpose() * T);
        }
        if (het) {
            // a_out = a_in - sqrt(kappa) a, a = (Z + iP)/2
            Eigen::RowVectorXcd r = -sk * (0.5 * T.row(m.iZ) + cd(0, 0.5) * T.row(m.iP));
            r(m.ch_Z) += 0.5;
            r(m.ch_P) += cd(0, 0.5);
            const double s = row_psd(r);
            (*shet)[i] = s;
            const double eta2 = std::norm(eta_opt(w, m.detuning, m.kappa));
            (*sres)[i] = (s - 0.5) / (m.kappa * g_rescale * g_rescale * eta2);
        }
        if (!(sxx[i] >= 0.0 && syy[i] >= 0.0) || !std::isfinite(sxx[i]))
            throw SingularMatrixError("non-finite or negative displacement PSD");
    }
    out.meta.kappa = m.kappa;
    out.meta.detuning = m.detuning;
    out.meta.lo_offset = lo_offset;
    out.meta.g_rescale = g_rescale;
    const double wlo = std::min(m.omega_x, m.omega_y), whi = std::max(m.omega_x, m.omega_y);
    out.meta.band_lo = 0.5 * wlo;
    out.meta.band_hi = 1.5 * whi;
    if (!omega.empty()) out.meta.omega_max = std::max(std::abs(omega.front()), std::abs(omega.back()));
    if (het && lo_offset < 4.0 * whi)
        out.meta.warnings.push_back("lo_offset below 4x the mechanical band: heterodyne sidebands overlap");
    return out;
}

}  // namespace

SpectrumGrid transfer_psd(const LinearModel& m, const std::vector<double>& omega) {
    return evaluate(m, omega, false, 0.0, 0.0);
}

SpectrumGrid heterodyne_psd(const LinearModel& m, const std::vector<double>& omega, double lo_offset,
                            double g_rescale) {
    if (!(m.kappa > 0.0)) throw ConfigError("heterodyne spectrum needs kappa > 0");
    if (!(g_rescale > 0.0)) g_rescale = 0.5 * (m.g_x + m.g_y);
    return evaluate(m, omega, true, lo_offset, g_rescale);
}

double integrate_psd(const std::vector<double>& w, const std::vector<double>& s, double* tail_fraction) {
    const std::size_t N = w.size();
    if (N < 4 || s.size() != N) throw ConfigError("integration needs at least four grid points");
    double area = 0.0;
    for (std::size_t i = 1; i < N; ++i) area += 0.5 * (s[i] + s[i - 1]) * (w[i] - w[i - 1]);

    // power-law tails beyond the grid ends
    auto tail = [&](double w1, double s1, double w2, double s2) {
        // w2 is the outermost point
        if (s2 <= 0.0) return 0.0;
        if (s1 <= 0.0) return std::numeric_limits<double>::infinity();
        const double p = std::log(s1 / s2) / std::log(std::abs(w2) / std::abs(w1));
        if (!(p > 1.05)) return std::numeric_limits<double>::infinity();
        return s2 * std::abs(w2) / (p - 1.0);
    };
    const double tl = tail(w[1], s[1], w[0], s[0]);
    const double tr = tail(w[N - 2], s[N - 2], w[N - 1], s[N - 1]);
    const double total = area + tl + tr;
    const double frac = (tl + tr) / std::abs(total);
    if (tail_fraction) *tail_fraction = frac;
    if (!(frac <= 0.01))
        throw ConvergenceError("PSD tail correction exceeds 1% of the integral; widen the grid");
    return total / (2.0 * constants::pi);
}

double integrate_band(const std::vector<double>& w, const std::vector<double>& f, double lo, double hi) {
    auto interp = [&](std::size_t i, double x) {
        const double t = (x - w[i - 1]) / (w[i] - w[i - 1]);
        return f[i - 1] + t * (f[i] - f[i - 1]);
    };
    auto segment = [&](double a, double b) {
        double sum = 0.0;
        for (std::size_t i = 1; i < w.size(); ++i) {
            const double x0 = std::max(w[i - 1], a), x1 = std::min(w[i], b);
            if (x1 <= x0) continue;
            sum += 0.5 * (interp(i, x0) + interp(i, x1)) * (x1 - x0);
        }
        return sum;
    };
    return (segment(lo, hi) + segment(-hi, -lo)) / (2.0 * constants::pi);
}

OccupancyReport occupancy(const SpectrumGrid& sg) {
    OccupancyReport r;
    double tf = 0.0, worst = 0.0;
    auto n_of = [&](const char* key) {
        const double v = integrate_psd(sg.omega, sg.values.at(key), &tf) - 0.5;
        worst = std::max(worst, tf);
        return v;
    };
    r.n_x = n_of("S_xx");
    r.n_y = n_of("S_yy");
    r.n_2d = r.n_x + r.n_y;
    if (sg.values.count("S_zz")) {
        r.has_z = true;
        r.n_z = n_of("S_zz");
    }
    if (sg.values.count("S_xbxb")) {
        r.has_bright = true;
        r.n_b = n_of("S_xbxb");
        r.n_d = n_of("S_xdxd");
    }
    if (sg.values.count("S_het_rescaled")) {
        r.has_het = true;
        r.n_het = integrate_band(sg.omega, sg.values.at("S_het_rescaled"), sg.meta.band_lo, sg.meta.band_hi);
    }
    r.tail_fraction = worst;
    r.achieved_tol = sg.meta.achieved_tol;
    return r;
}

SpectrumResult compute_spectra(const LinearModel& m, const GridOptions& opt, double lo_offset,
                               double g_rescale) {
    require_stable(m);
    const Eigen::VectorXcd eigs = eigenvalues(m);
    double scale = std::max({m.omega_x, m.omega_y, m.omega_z, std::abs(m.detuning), m.kappa});
    scale = std::max(scale, eigs.imag().cwiseAbs().maxCoeff());
    const double omega_max = opt.span_factor * scale;
    if (!(lo_offset > 0.0)) lo_offset = 10.0 * std::max(m.omega_x, m.omega_y);
    if (!(g_rescale > 0.0)) g_rescale = 0.5 * (m.g_x + m.g_y);
    const bool het = m.kappa > 0.0 && g_rescale > 0.0;

    auto run = [&](double ds) {
        const auto grid = resonance_grid(eigs, omega_max, ds);
        SpectrumResult res;
        res.grid = het ? heterodyne_psd(m, grid, lo_offset, g_rescale) : transfer_psd(m, grid);
        res.grid.meta.ds = ds;
        res.grid.meta.points_per_halfwidth = 1.0 / ds;
        res.grid.meta.omega_max = omega_max;
        res.report = occupancy(res.grid);
        return res;
    };
    auto change = [](const OccupancyReport& a, const OccupancyReport& b) {
        auto rel = [](double x, double y) { return std::abs(x - y) / (std::abs(y) + 0.5); };
        double c = std::max(rel(a.n_x, b.n_x), rel(a.n_y, b.n_y));
        if (b.has_z) c = std::max(c, rel(a.n_z, b.n_z));
        if (b.has_het) c = std::max(c, rel(a.n_het, b.n_het));
        if (b.has_bright) c = std::max({c, rel(a.n_b, b.n_b), rel(a.n_d, b.n_d)});
        return c;
    };

    double ds = opt.ds;
    SpectrumResult prev = run(ds);
    double tol = std::numeric_limits<double>::infinity();
    int k = 0;
    for (; k < opt.max_refinements; ++k) {
        ds *= 0.5;
        SpectrumResult cur = run(ds);
        tol = change(prev.report, cur.report);
        prev = std::move(cur);
        if (tol < opt.rel_tol) break;
    }
    prev.grid.meta.refinements = k + 1;
    prev.grid.meta.achieved_tol = tol;
    prev.grid.meta.tail_fraction = prev.report.tail_fraction;
    prev.report.achieved_tol = tol;
    prev.report.converged = tol < opt.rel_tol;
    prev.report.g_asymmetry = std::abs(m.g_x - m.g_y) / (0.5 * (m.g_x + m.g_y) + 1e-300);
    if (!prev.report.converged) prev.grid.meta.warnings.push_back("grid doubling did not reach the tolerance");
    return prev;
}

BrightThermometry bright_mode_thermometry(const SpectrumGrid& sg, double g_b, double gamma_opt_b,
                                          double gamma_opt_d) {
    if (!sg.values.count("S_het")) throw ConfigError("spectrum has no heterodyne PSD");
    const auto& shet = sg.values.at("S_het");
    std::vector<double> f(shet.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double eta2 = std::norm(eta_opt(sg.omega[i], sg.meta.detuning, sg.meta.kappa));
        f[i] = (shet[i] - 0.5) / (sg.meta.kappa * g_b * g_b * eta2);
    }
    BrightThermometry t;
    t.n_b = integrate_band(sg.omega, f, sg.meta.band_lo, sg.meta.band_hi);
    const double lo = std::min(std::abs(gamma_opt_b), std::abs(gamma_opt_d));
    const double hi = std::max(std::abs(gamma_opt_b), std::abs(gamma_opt_d));
    t.rate_ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    t.inference_valid = t.rate_ratio <= 3.0;
    t.n_d_inferred = t.inference_valid ? t.n_b : std::numeric_limits<double>::quiet_NaN();
    return t;
}

std::string spectrum_csv(const SpectrumGrid& s) {
    std::vector<std::string> keys{"S_xx", "S_yy"};
    if (s.values.count("S_zz")) keys.push_back("S_zz");
    if (s.values.count("S_het")) {
        keys.push_back("S_het");
        keys.push_back("S_het_rescaled");
    }
    std::vector<std::string> header{"omega_hz"};
    for (const auto& k : keys) {
        std::string h = k;
        std::transform(h.begin(), h.end(), h.begin(), [](unsigned char ch) { return std::tolower(ch); });
        header.push_back(h);
    }
    CsvWriter w(header);
    for (std::size_t i = 0; i < s.omega.size(); ++i) {
        w.cell(s.omega[i] / (2.0 * constants::pi));
        for (const auto& k : keys) w.cell(s.values.at(k)[i]);
        w.end_row();
    }
    return w.str();
}

std::string occupancy_json(const OccupancyReport& r) {
    nlohmann::ordered_json j;
    j["n_x"] = r.n_x;
    j["n_y"] = r.n_y;
    if (r.has_z) j["n_z"] = r.n_z;
    j["n_2d"] = r.n_2d;
    if (r.has_het) {
        j["n_het"] = r.n_het;
        j["g_asymmetry"] = r.g_asymmetry;
    }
    if (r.has_bright) {
        j["n_b"] = r.n_b;
        j["n_d"] = r.n_d;
    }
    j["method"] = {{"occupancy", "psd_integration"}, {"n_het", "rescaled_heterodyne_band"}};
    j["achieved_tol"] = r.achieved_tol;
    j["tail_fraction"] = r.tail_fraction;
    j["converged"] = r.converged;
    return j.dump(2);
}

}  // namespace levcool
