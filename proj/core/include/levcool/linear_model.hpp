#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "levcool/equilibrium.hpp"
#include "levcool/params.hpp"

namespace levcool {

enum class ModelMode { two_d, three_d };
enum class Frame { rotated, lab };

struct ModelOptions {
    ModelMode mode = ModelMode::two_d;
    Frame frame = Frame::rotated;
    bool dissipation = true;
    bool recoil = true;
};

// Everything the drift and noise need, in rad/s. Couplings are the coefficients of the
// quadratic interaction V/hbar = sum g_ab a b over quadratures.
struct ModelInputs {
    ModelMode mode = ModelMode::two_d;
    double omega_x = 0, omega_y = 0, omega_z = 0;
    double gamma = 0, kappa = 0, detuning = 0;
    double n_x = 0, n_y = 0, n_z = 0;
    double recoil_x = 0, recoil_y = 0, recoil_z = 0;
    double g_xZ = 0, g_xP = 0, g_yZ = 0, g_yP = 0, g_zZ = 0, g_zP = 0;
    double g_xy = 0, g_xz = 0, g_yz = 0;
    bool dissipation = true;
};

struct LinearModel {
    int dim = 0;
    Eigen::MatrixXd drift;          // A
    Eigen::MatrixXd noise_gain;     // dim x channels
    Eigen::VectorXd noise_psd;      // symmetrized white PSD per channel
    Eigen::MatrixXd channel_commutator;  // antisymmetric, for normal-ordered correlations
    std::vector<std::string> mode_labels;
    std::vector<std::string> channel_labels;

    int ix = 0, ipx = 1, iy = 2, ipy = 3, iz = -1, ipz = -1, iZ = 4, iP = 5;
    int ch_Z = -1, ch_P = -1;       // optical input channels
    double kappa = 0, detuning = 0;
    double omega_x = 0, omega_y = 0, omega_z = 0;
    double g_x = 0, g_y = 0;        // amplitude-quadrature couplings

    // optional canonical bright/dark rows (empty when not set)
    Eigen::VectorXd bright_row, dark_row;

    // D = G diag(psd) G^T
    Eigen::MatrixXd diffusion() const;
    // non-symmetrized input correlation G (diag(psd) + i C) G^T
    Eigen::MatrixXcd correlation() const;
};

LinearModel assemble_model(const ModelInputs& in);

ModelInputs model_inputs(const DerivedParams& d, const CouplingTable& t, const ModelOptions& opt);

// Errors: ConfigError for non-positive kappa (with dissipation on).
LinearModel build_model(const DerivedParams& d, const CouplingTable& t, const ModelOptions& opt = {});

// Attach canonical bright/dark projections for the geometric rotation at theta.
void attach_bright_dark(LinearModel& m, double theta, double omega_b, double omega_d);

Eigen::VectorXcd eigenvalues(const LinearModel& m);
double max_real_eigenvalue(const LinearModel& m);

// Position-sector matrix M with V/hbar = 1/4 v^T M v, v = (x, Z_L, y).
Eigen::Matrix3d three_mode_matrix(double omega_x, double omega_y, double detuning, double g_x,
                                  double g_y);

// Beam-splitter frequency matrix implied by M: diagonal kept, couplings halved (the 1/4 form
// carries 2g off the diagonal). Eigenvalues are the first-order normal-mode frequencies.
Eigen::Matrix3d rwa_frequency_matrix(const Eigen::Matrix3d& M);

// Exact undamped normal-mode frequencies of H = 1/4 sum w_j p_j^2 + 1/4 v^T M v, ascending.
// Requires a positive diagonal (red detuning).
Eigen::Vector3d normal_mode_frequencies(const Eigen::Matrix3d& M);

struct ModeBranch {
    std::vector<double> theta, phi, frequency, optical_weight;
    std::vector<Eigen::Vector3d> vectors;  // unit (x, y, Z_L)
};

struct ModeTrajectory {
    std::vector<double> detuning_axis;
    std::vector<ModeBranch> modes;  // three branches, ordered by frequency at the first point
    double min_overlap = 1.0;
};

struct BlochOptions {
    bool dissipation = false;
};

// Unit vector (x, y, Z_L) of a complex eigenvector's position components, gauge fixed.
Eigen::Vector3d gauge_fixed_position(const Eigen::Vector3cd& u);
void bloch_angles(const Eigen::Vector3d& n, double& theta, double& phi);

ModeTrajectory bloch_trajectories(const DerivedParams& d, const CouplingTable& t,
                                  const std::vector<double>& detuning_grid,
                                  const BlochOptions& opt = {});

std::string trajectory_csv(const ModeTrajectory& tr);

}  // namespace levcool
