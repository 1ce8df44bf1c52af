#pragma once

// Bare-state and eigenstate descriptions of two dipole-coupled two-level systems.
//
// Units: hbar = k_B = 1, every frequency and temperature is expressed in units of
// a reference rate gamma.
//
// Basis orderings are fixed throughout the library:
//   bare  (eta_1..eta_4)    = |ee>, |eg>, |ge>, |gg>
//   eigen (lambda_1..lambda_4) by descending energy:
//     lambda_1 = |ee>, lambda_2 = c|eg> + s|ge>, lambda_3 = -s|eg> + c|ge>, lambda_4 = |gg>
//   with c = cos(theta/2), s = sin(theta/2) and tan(theta) = 2 xi / (omega1 - omega2).

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <utility>

namespace qtherm {

using Complex = std::complex<double>;

class SystemParams {
public:
    // Throws Validation for non-finite or non-positive frequencies / negative xi,
    // Positivity when omega_m <= sqrt(dw^2/4 + xi^2).
    static SystemParams create(double omega1, double omega2, double xi);

    // omega1,2 = omega_m +- dw/2 with dw = theta_to_detuning(theta, xi).
    static SystemParams from_mixing_angle(double omega_m, double xi, double theta);

    double omega1() const noexcept { return omega1_; }
    double omega2() const noexcept { return omega2_; }
    double xi() const noexcept { return xi_; }
    double omega_m() const noexcept { return 0.5 * (omega1_ + omega2_); }
    double detuning() const noexcept { return omega1_ - omega2_; }

private:
    SystemParams(double w1, double w2, double xi) : omega1_(w1), omega2_(w2), xi_(xi) {}

    double omega1_;
    double omega2_;
    double xi_;
};

// Mixing angle together with its half- and full-angle trigonometry. At exact
// resonance (theta == pi/2) the values are pinned so that c == s and cos(theta) == 0
// hold bit-exactly; destructive interference in the common-bath rates then
// cancels to exactly zero.
struct MixingAngle {
    double theta{};
    double cos_half{};
    double sin_half{};
    double cos_full{};
    double sin_full{};

    static MixingAngle of(double theta);
};

inline constexpr double kHalfPi = 1.57079632679489661923;

struct EigenBasis {
    MixingAngle angle;
    double eps1{};                    // E1 - E3 = E2 - E4
    double eps2{};                    // E1 - E2 = E3 - E4
    std::array<double, 4> energy{};   // E_lambda1 .. E_lambda4

    double theta() const noexcept { return angle.theta; }
};

// theta in (0, pi) for xi > 0. Delta omega == 0 maps to pi/2 by rule. With xi == 0
// the decoupled limit gives theta = 0 (dw > 0) or pi (dw < 0).
EigenBasis build_eigenbasis(const SystemParams& params);

// dw = 2 xi / tan(theta); exactly zero at theta == pi/2.
double theta_to_detuning(double theta, double xi);

// Angles with eps2 > 0 at fixed omega_m and xi: sin(theta) > xi / omega_m.
struct ThetaRange {
    double lo{};
    double hi{};
};
ThetaRange admissible_theta_range(double omega_m, double xi);

// Sweep range: [0.02, pi - 0.02], pulled in to 0.02 inside the admissible
// window when its edges are closer to 0 and pi than that.
ThetaRange sweep_theta_range(double omega_m, double xi);

// Pairs (i, j), zero-based, of the stored eigenbasis coherences <lambda_i|rho|lambda_j>.
inline constexpr std::array<std::pair<int, int>, 6> kCoherencePairs{
    {{1, 0}, {2, 0}, {3, 0}, {2, 1}, {3, 1}, {3, 2}}};

// Density matrix in the eigenbasis: four populations and the six lower-triangle
// coherences rho_ij = <lambda_i|rho|lambda_j>, ordered as kCoherencePairs
// (21, 31, 41, 32, 42, 43). Upper-triangle entries follow by Hermiticity.
struct EigenState {
    std::array<double, 4> pop{};
    std::array<Complex, 6> coh{};

    static EigenState basis_state(int index);  // |lambda_{index+1}>
    static EigenState from_matrix(const Eigen::Matrix4cd& rho);

    Eigen::Matrix4cd matrix() const;
    double trace() const noexcept { return pop[0] + pop[1] + pop[2] + pop[3]; }

    // Populations >= -1e-10, trace 1 within 1e-10, |rho_ij|^2 <= p_i p_j + 1e-9.
    bool satisfies_invariants() const;
};

class BareDensityMatrix {
public:
    // Hermitian, unit trace within 1e-12, eigenvalues >= -1e-10; Validation otherwise.
    static BareDensityMatrix create(const Eigen::Matrix4cd& rho);
    // No checks; used for intermediate states produced by trusted transforms.
    static BareDensityMatrix unchecked(const Eigen::Matrix4cd& rho) { return BareDensityMatrix(rho); }
    static BareDensityMatrix basis_state(int index);  // |eta_{index+1}>

    const Eigen::Matrix4cd& matrix() const noexcept { return rho_; }
    Complex operator()(int i, int j) const { return rho_(i, j); }

private:
    explicit BareDensityMatrix(const Eigen::Matrix4cd& rho) : rho_(rho) {}

    Eigen::Matrix4cd rho_;
};

BareDensityMatrix eigen_to_bare(const EigenState& state, double theta);
EigenState bare_to_eigen(const BareDensityMatrix& rho, double theta);

// Columns are the eigenvectors |lambda_k> in the bare basis.
Eigen::Matrix4d eigenvector_matrix(double theta);

struct SigmaZ {
    double tls1{};
    double tls2{};
};

SigmaZ sigma_z_expectations(const EigenState& state, double theta);

struct DispersiveShift {
    double omega1_bar{};
    double omega2_bar{};
    bool valid{};  // |xi / dw| < kDispersiveValidity
    std::optional<std::array<double, 2>> predicted_temperature;  // (omega_l / omega_bar_l) T_l
};

inline constexpr double kDispersiveValidity = 0.3;

// Frohlich-Nakajima shifted separations omega_1 + xi^2/dw, omega_2 - xi^2/dw.
// Throws DegenerateDetuning at dw == 0.
DispersiveShift dispersive_shift(const SystemParams& params);
DispersiveShift dispersive_shift(const SystemParams& params, double T1, double T2);

}  // namespace qtherm
