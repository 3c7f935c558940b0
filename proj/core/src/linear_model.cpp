#include "levcool/linear_model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>

#include "levcool/constants.hpp"
#include "levcool/errors.hpp"
#include "levcool/format.hpp"

namespace levcool {

using cd = std::complex<double>;

Eigen::MatrixXd LinearModel::diffusion() const {
    return noise_gain * noise_psd.asDiagonal() * noise_gain.transpose();
}

Eigen::MatrixXcd LinearModel::correlation() const {
    Eigen::MatrixXcd inner = noise_psd.cast<cd>().asDiagonal();
    inner += cd(0, 1) * channel_commutator.cast<cd>();
    return noise_gain.cast<cd>() * inner * noise_gain.transpose().cast<cd>();
}

LinearModel assemble_model(const ModelInputs& in) {
    const bool three = in.mode == ModelMode::three_d;
    LinearModel m;
    m.dim = three ? 8 : 6;
    m.ix = 0;
    m.ipx = 1;
    m.iy = 2;
    m.ipy = 3;
    if (three) {
        m.iz = 4;
        m.ipz = 5;
        m.iZ = 6;
        m.iP = 7;
        m.mode_labels = {"x", "p_x", "y", "p_y", "z", "p_z", "Z_L", "P_L"};
    } else {
        m.iZ = 4;
        m.iP = 5;
        m.mode_labels = {"x", "p_x", "y", "p_y", "Z_L", "P_L"};
    }
    m.kappa = in.kappa;
    m.detuning = in.detuning;
    m.omega_x = in.omega_x;
    m.omega_y = in.omega_y;
    m.omega_z = three ? in.omega_z : 0.0;
    m.g_x = in.g_xZ;
    m.g_y = in.g_yZ;

    const int n = m.dim;
    Eigen::MatrixXd& A = m.drift;
    A = Eigen::MatrixXd::Zero(n, n);

    struct Mech {
        int q, p;
        double w, nb, rec;
        const char* name;
    };
    std::vector<Mech> mech{{m.ix, m.ipx, in.omega_x, in.n_x, in.recoil_x, "x"},
                           {m.iy, m.ipy, in.omega_y, in.n_y, in.recoil_y, "y"}};
    if (three) mech.push_back({m.iz, m.ipz, in.omega_z, in.n_z, in.recoil_z, "z"});

    for (const auto& j : mech) {
        A(j.q, j.p) = j.w;
        A(j.p, j.q) = -j.w;
    }
    A(m.iZ, m.iP) = -in.detuning;
    A(m.iP, m.iZ) = in.detuning;

    // g q Z_L : pdot_q -= 2g Z, P_dot -= 2g q
    auto couple_Z = [&](int q, int p, double g) {
        A(p, m.iZ) -= 2.0 * g;
        A(m.iP, q) -= 2.0 * g;
    };
    // g q P_L : pdot_q -= 2g P, Z_dot += 2g q
    auto couple_P = [&](int q, int p, double g) {
        A(p, m.iP) -= 2.0 * g;
        A(m.iZ, q) += 2.0 * g;
    };
    auto couple_qq = [&](const Mech& a, const Mech& b, double g) {
        A(a.p, b.q) -= 2.0 * g;
        A(b.p, a.q) -= 2.0 * g;
    };
    couple_Z(m.ix, m.ipx, in.g_xZ);
    couple_P(m.ix, m.ipx, in.g_xP);
    couple_Z(m.iy, m.ipy, in.g_yZ);
    couple_P(m.iy, m.ipy, in.g_yP);
    couple_qq(mech[0], mech[1], in.g_xy);
    if (three) {
        couple_Z(m.iz, m.ipz, in.g_zZ);
        couple_P(m.iz, m.ipz, in.g_zP);
        couple_qq(mech[0], mech[2], in.g_xz);
        couple_qq(mech[1], mech[2], in.g_yz);
    }

    const int channels = 3 * static_cast<int>(mech.size()) + 2;
    m.noise_gain = Eigen::MatrixXd::Zero(n, channels);
    m.noise_psd = Eigen::VectorXd::Zero(channels);
    m.channel_commutator = Eigen::MatrixXd::Zero(channels, channels);
    const double sg = in.dissipation ? std::sqrt(in.gamma) : 0.0;
    const double sk = in.dissipation ? std::sqrt(in.kappa) : 0.0;
    int c = 0;
    for (const auto& j : mech) {
        if (in.dissipation) {
            A(j.q, j.q) -= 0.5 * in.gamma;
            A(j.p, j.p) -= 0.5 * in.gamma;
        }
        m.noise_gain(j.q, c) = sg;
        m.noise_gain(j.p, c + 1) = sg;
        m.noise_psd(c) = 2.0 * j.nb + 1.0;
        m.noise_psd(c + 1) = 2.0 * j.nb + 1.0;
        m.channel_commutator(c, c + 1) = 1.0;
        m.channel_commutator(c + 1, c) = -1.0;
        // recoil: classical momentum kicks, 4 Gamma_rec in b+b^dag units
        m.noise_gain(j.p, c + 2) = in.dissipation ? 1.0 : 0.0;
        m.noise_psd(c + 2) = 4.0 * j.rec;
        m.channel_labels.push_back(std::string("thermal_") + j.name);
        m.channel_labels.push_back(std::string("thermal_p") + j.name);
        m.channel_labels.push_back(std::string("recoil_") + j.name);
        c += 3;
    }
    if (in.dissipation) {
        A(m.iZ, m.iZ) -= 0.5 * in.kappa;
        A(m.iP, m.iP) -= 0.5 * in.kappa;
    }
    m.ch_Z = c;
    m.ch_P = c + 1;
    m.noise_gain(m.iZ, c) = sk;
    m.noise_gain(m.iP, c + 1) = sk;
    m.noise_psd(c) = 1.0;
    m.noise_psd(c + 1) = 1.0;
    m.channel_commutator(c, c + 1) = 1.0;
    m.channel_commutator(c + 1, c) = -1.0;
    m.channel_labels.push_back("vacuum_Z");
    m.channel_labels.push_back("vacuum_P");
    return m;
}

ModelInputs model_inputs(const DerivedParams& d, const CouplingTable& t, const ModelOptions& opt) {
    ModelInputs in;
    in.mode = opt.mode;
    in.omega_x = d.omega_x;
    in.omega_y = d.omega_y;
    in.omega_z = d.omega_z;
    in.gamma = d.gamma_gas;
    in.kappa = d.kappa;
    in.detuning = d.detuning;
    in.n_x = d.n_bath_x;
    in.n_y = d.n_bath_y;
    in.n_z = d.n_bath_z;
    if (opt.recoil) {
        in.recoil_x = d.recoil_x;
        in.recoil_y = d.recoil_y;
        in.recoil_z = d.recoil_z;
    }
    in.dissipation = opt.dissipation;
    if (opt.frame == Frame::rotated) {
        in.g_xZ = t.g_xZ;
        in.g_yZ = t.g_yZ;
        in.g_zP = t.g_zP;
    } else {
        in.g_xZ = t.g_xZ_xi;
        in.g_xP = t.g_xP_xi;
        in.g_yZ = t.g_yZ_xi;
        in.g_yP = t.g_yP_xi;
        in.g_zZ = t.g_zZ_xi;
        in.g_zP = t.g_zP_xi;
    }
    in.g_xy = t.g_xy_xi;
    if (opt.mode == ModelMode::three_d) {
        in.g_xz = t.g_xz_xi;
        in.g_yz = t.g_yz_xi;
    } else {
        in.g_zZ = in.g_zP = 0.0;
    }
    return in;
}

LinearModel build_model(const DerivedParams& d, const CouplingTable& t, const ModelOptions& opt) {
    if (opt.dissipation && !(d.kappa > 0.0)) throw ConfigError("kappa must be positive");
    return assemble_model(model_inputs(d, t, opt));
}

void attach_bright_dark(LinearModel& m, double theta, double omega_b, double omega_d) {
    m.bright_row = Eigen::VectorXd::Zero(m.dim);
    m.dark_row = Eigen::VectorXd::Zero(m.dim);
    const double s = std::sin(theta), c = std::cos(theta);
    m.bright_row(m.ix) = s * std::sqrt(omega_b / m.omega_x);
    m.bright_row(m.iy) = c * std::sqrt(omega_b / m.omega_y);
    m.dark_row(m.ix) = -c * std::sqrt(omega_d / m.omega_x);
    m.dark_row(m.iy) = s * std::sqrt(omega_d / m.omega_y);
}

Eigen::VectorXcd eigenvalues(const LinearModel& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.drift, false);
    return es.eigenvalues();
}

double max_real_eigenvalue(const LinearModel& m) { return eigenvalues(m).real().maxCoeff(); }

Eigen::Matrix3d three_mode_matrix(double omega_x, double omega_y, double detuning, double g_x,
                                  double g_y) {
    Eigen::Matrix3d M;
    M << omega_x, 2.0 * g_x, 0.0, 2.0 * g_x, -detuning, 2.0 * g_y, 0.0, 2.0 * g_y, omega_y;
    return M;
}

Eigen::Matrix3d rwa_frequency_matrix(const Eigen::Matrix3d& M) {
    Eigen::Matrix3d F = 0.5 * M;
    F.diagonal() = M.diagonal();
    return F;
}

Eigen::Vector3d normal_mode_frequencies(const Eigen::Matrix3d& M) {
    // qddot = -Omega M q with Omega = diag(M)
    const Eigen::Vector3d w = M.diagonal();
    if ((w.array() <= 0.0).any())
        throw ConfigError("normal_mode_frequencies needs positive mode frequencies (red detuning)");
    const Eigen::Vector3d r = w.cwiseSqrt();
    const Eigen::Matrix3d K = r.asDiagonal() * M * r.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(K);
    Eigen::Vector3d ev = es.eigenvalues();
    if ((ev.array() <= 0.0).any()) throw InstabilityError("undamped three-mode system is unstable");
    return ev.cwiseSqrt();
}

Eigen::Vector3d gauge_fixed_position(const Eigen::Vector3cd& u_in) {
    Eigen::Vector3cd u = u_in / u_in.norm();
    int ref = 0;
    if (std::abs(u(0)) < 1e-9) ref = std::abs(u(1)) < 1e-9 ? 2 : 1;
    const cd phase = std::abs(u(ref)) > 0 ? std::conj(u(ref)) / std::abs(u(ref)) : cd(1, 0);
    u *= phase;
    Eigen::Vector3d n = u.real();
    const double nn = n.norm();
    return nn > 0 ? Eigen::Vector3d(n / nn) : Eigen::Vector3d(1, 0, 0);
}

void bloch_angles(const Eigen::Vector3d& n, double& theta, double& phi) {
    theta = std::acos(std::clamp(n(2), -1.0, 1.0));
    phi = std::atan2(n(1), n(0));
    if (phi <= -constants::pi) phi += 2.0 * constants::pi;
}

namespace {

struct PointModes {
    std::vector<Eigen::Vector3d> vec;
    std::vector<double> freq;
};

PointModes modes_at(const DerivedParams& d0, const CouplingTable& t, double detuning, bool dissipation) {
    DerivedParams d = d0;
    d.detuning = detuning;
    ModelOptions opt;
    opt.dissipation = dissipation;
    const LinearModel m = assemble_model(model_inputs(d, t, opt));
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.drift, true);
    const auto vals = es.eigenvalues();
    const auto vecs = es.eigenvectors();
    std::vector<int> idx;
    for (int i = 0; i < vals.size(); ++i)
        if (vals(i).imag() > 0.0) idx.push_back(i);
    if (idx.size() != 3) throw TrackingError("expected three positive-frequency eigenmodes");
    PointModes pm;
    for (int i : idx) {
        Eigen::Vector3cd u(vecs(m.ix, i), vecs(m.iy, i), vecs(m.iZ, i));
        pm.vec.push_back(gauge_fixed_position(u));
        pm.freq.push_back(vals(i).imag());
    }
    return pm;
}

}  // namespace

ModeTrajectory bloch_trajectories(const DerivedParams& d, const CouplingTable& t,
                                  const std::vector<double>& grid, const BlochOptions& opt) {
    if (grid.size() < 2) throw ConfigError("detuning grid needs at least two points");
    const bool inc = grid[1] > grid[0];
    for (std::size_t i = 1; i < grid.size(); ++i)
        if ((grid[i] > grid[i - 1]) != inc || grid[i] == grid[i - 1])
            throw ConfigError("detuning grid must be strictly monotone");

    ModeTrajectory tr;
    tr.detuning_axis = grid;
    tr.modes.resize(3);

    PointModes first = modes_at(d, t, grid[0], opt.dissipation);
    std::vector<int> order(3);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return first.freq[a] < first.freq[b]; });

    std::vector<Eigen::Vector3d> prev(3);
    auto push = [&](int branch, const Eigen::Vector3d& v, double f) {
        double th, ph;
        bloch_angles(v, th, ph);
        auto& b = tr.modes[branch];
        b.theta.push_back(th);
        b.phi.push_back(ph);
        b.frequency.push_back(f);
        b.optical_weight.push_back(v(2) * v(2));
        b.vectors.push_back(v);
        prev[branch] = v;
    };
    for (int b = 0; b < 3; ++b) push(b, first.vec[order[b]], first.freq[order[b]]);

    for (std::size_t i = 1; i < grid.size(); ++i) {
        PointModes cur = modes_at(d, t, grid[i], opt.dissipation);
        Eigen::Matrix3d ov;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) ov(a, b) = std::abs(prev[a].dot(cur.vec[b]));
        std::array<bool, 3> used_a{}, used_b{};
        std::array<int, 3> assign{};
        for (int k = 0; k < 3; ++k) {
            double best = -1;
            int ba = -1, bb = -1;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    if (!used_a[a] && !used_b[b] && ov(a, b) > best) {
                        best = ov(a, b);
                        ba = a;
                        bb = b;
                    }
            used_a[ba] = used_b[bb] = true;
            assign[ba] = bb;
            tr.min_overlap = std::min(tr.min_overlap, best);
            if (best < 0.5) throw TrackingError("mode tracking failed: successive overlap below 0.5");
        }
        for (int a = 0; a < 3; ++a) push(a, cur.vec[assign[a]], cur.freq[assign[a]]);
    }
    return tr;
}

std::string trajectory_csv(const ModeTrajectory& tr) {
    CsvWriter w({"detuning_hz", "mode_index", "theta_rad", "phi_rad", "freq_hz", "optical_weight"});
    const double tp = 2.0 * constants::pi;
    for (std::size_t i = 0; i < tr.detuning_axis.size(); ++i)
        for (std::size_t b = 0; b < tr.modes.size(); ++b) {
            const auto& m = tr.modes[b];
            w.cell(tr.detuning_axis[i] / tp)
                .cell(static_cast<long long>(b))
                .cell(m.theta[i])
                .cell(m.phi[i])
                .cell(m.frequency[i] / tp)
                .cell(m.optical_weight[i]);
            w.end_row();
        }
    return w.str();
}

}  // namespace levcool
