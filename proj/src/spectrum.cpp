#include "qtherm/spectrum.hpp"

#include "qtherm/error.hpp"

#include <cmath>
#include <sstream>

namespace qtherm {

namespace {

bool finite_all(std::initializer_list<double> xs) {
    for (double x : xs) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

double splitting(double detuning, double xi) {
    return std::sqrt(0.25 * detuning * detuning + xi * xi);
}

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Validation: return "ValidationError";
        case ErrorKind::Positivity: return "PositivityError";
        case ErrorKind::DegenerateDetuning: return "DegenerateDetuning";
        case ErrorKind::DegenerateRates: return "DegenerateRates";
        case ErrorKind::DarkSector: return "DarkSector";
        case ErrorKind::Range: return "RangeError";
        case ErrorKind::KernelDimension: return "KernelDimension";
        case ErrorKind::ToleranceFailure: return "ToleranceFailure";
        case ErrorKind::InvariantBreach: return "InvariantBreach";
        case ErrorKind::EigensolverFailure: return "EigensolverFailure";
        case ErrorKind::NoEntanglement: return "NoEntanglement";
        case ErrorKind::Io: return "IoError";
    }
    return "Error";
}

SystemParams SystemParams::create(double omega1, double omega2, double xi) {
    if (!finite_all({omega1, omega2, xi})) {
        fail(ErrorKind::Validation, "system parameters must be finite");
    }
    if (omega1 <= 0.0 || omega2 <= 0.0) {
        fail(ErrorKind::Validation, "omega1 and omega2 must be > 0");
    }
    if (xi < 0.0) {
        fail(ErrorKind::Validation, "xi must be >= 0");
    }
    const double wm = 0.5 * (omega1 + omega2);
    const double half_split = splitting(omega1 - omega2, xi);
    if (!(wm - half_split > 0.0)) {
        std::ostringstream os;
        os << "eps2 = omega_m - sqrt(dw^2/4 + xi^2) = " << (wm - half_split)
           << " must be > 0 (omega1=" << omega1 << ", omega2=" << omega2 << ", xi=" << xi << ")";
        fail(ErrorKind::Positivity, os.str());
    }
    return SystemParams(omega1, omega2, xi);
}

SystemParams SystemParams::from_mixing_angle(double omega_m, double xi, double theta) {
    if (!finite_all({omega_m, xi, theta})) {
        fail(ErrorKind::Validation, "omega_m, xi and theta must be finite");
    }
    if (!(theta > 0.0 && theta < 2.0 * kHalfPi)) {
        fail(ErrorKind::Validation, "mixing angle must lie in (0, pi)");
    }
    // Checked here because a large detuning would otherwise surface as omega2 <= 0.
    const double eps2 = omega_m - xi / std::sin(theta);
    if (xi > 0.0 && !(eps2 > 0.0)) {
        std::ostringstream os;
        os << "eps2 = omega_m - xi/sin(theta) = " << eps2 << " must be > 0 (omega_m=" << omega_m
           << ", xi=" << xi << ", theta=" << theta << ")";
        fail(ErrorKind::Positivity, os.str());
    }
    const double dw = theta_to_detuning(theta, xi);
    return create(omega_m + 0.5 * dw, omega_m - 0.5 * dw, xi);
}

MixingAngle MixingAngle::of(double theta) {
    MixingAngle a;
    a.theta = theta;
    if (theta == kHalfPi) {
        a.cos_half = a.sin_half = std::sqrt(0.5);
        a.cos_full = 0.0;
        a.sin_full = 1.0;
    } else {
        a.cos_half = std::cos(0.5 * theta);
        a.sin_half = std::sin(0.5 * theta);
        a.cos_full = std::cos(theta);
        a.sin_full = std::sin(theta);
    }
    return a;
}

double theta_to_detuning(double theta, double xi) {
    if (theta == kHalfPi) return 0.0;
    return 2.0 * xi / std::tan(theta);
}

ThetaRange admissible_theta_range(double omega_m, double xi) {
    if (!finite_all({omega_m, xi}) || omega_m <= 0.0 || xi < 0.0) {
        fail(ErrorKind::Validation, "omega_m must be > 0 and xi >= 0");
    }
    if (xi >= omega_m) fail(ErrorKind::Positivity, "no mixing angle gives eps2 > 0 when xi >= omega_m");
    const double edge = std::asin(xi / omega_m);
    return ThetaRange{edge, 2.0 * kHalfPi - edge};
}

ThetaRange sweep_theta_range(double omega_m, double xi) {
    constexpr double margin = 0.02;
    const ThetaRange a = admissible_theta_range(omega_m, xi);
    const double lo = a.lo < margin ? margin : a.lo + margin;
    if (!(lo < kHalfPi)) fail(ErrorKind::Positivity, "admissible mixing-angle window is too narrow to sweep");
    return ThetaRange{lo, 2.0 * kHalfPi - lo};
}

EigenBasis build_eigenbasis(const SystemParams& params) {
    const double dw = params.detuning();
    const double xi = params.xi();
    double theta = kHalfPi;
    if (dw > 0.0) {
        theta = std::atan(2.0 * xi / dw);
    } else if (dw < 0.0) {
        theta = 2.0 * kHalfPi + std::atan(2.0 * xi / dw);
    }

    EigenBasis basis;
    basis.angle = MixingAngle::of(theta);
    const double wm = params.omega_m();
    const double half_split = splitting(dw, xi);
    basis.eps1 = wm + half_split;
    basis.eps2 = wm - half_split;
    if (!(basis.eps2 > 0.0)) {
        fail(ErrorKind::Positivity, "transition energy eps2 must be > 0");
    }
    basis.energy = {wm, half_split, -half_split, -wm};
    return basis;
}

EigenState EigenState::basis_state(int index) {
    if (index < 0 || index > 3) fail(ErrorKind::Range, "eigenstate index must be 0..3");
    EigenState s;
    s.pop[static_cast<std::size_t>(index)] = 1.0;
    return s;
}

EigenState EigenState::from_matrix(const Eigen::Matrix4cd& rho) {
    EigenState s;
    for (int k = 0; k < 4; ++k) s.pop[static_cast<std::size_t>(k)] = rho(k, k).real();
    for (std::size_t k = 0; k < kCoherencePairs.size(); ++k) {
        const auto [i, j] = kCoherencePairs[k];
        s.coh[k] = rho(i, j);
    }
    return s;
}

Eigen::Matrix4cd EigenState::matrix() const {
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (int k = 0; k < 4; ++k) rho(k, k) = pop[static_cast<std::size_t>(k)];
    for (std::size_t k = 0; k < kCoherencePairs.size(); ++k) {
        const auto [i, j] = kCoherencePairs[k];
        rho(i, j) = coh[k];
        rho(j, i) = std::conj(coh[k]);
    }
    return rho;
}

bool EigenState::satisfies_invariants() const {
    for (double p : pop) {
        if (!std::isfinite(p) || p < -1e-10) return false;
    }
    if (std::abs(trace() - 1.0) > 1e-10) return false;
    for (std::size_t k = 0; k < kCoherencePairs.size(); ++k) {
        const auto [i, j] = kCoherencePairs[k];
        const double bound = std::max(pop[static_cast<std::size_t>(i)], 0.0) *
                             std::max(pop[static_cast<std::size_t>(j)], 0.0);
        if (std::norm(coh[k]) > bound + 1e-9) return false;
    }
    return true;
}

BareDensityMatrix BareDensityMatrix::create(const Eigen::Matrix4cd& rho) {
    if (!rho.allFinite()) fail(ErrorKind::Validation, "density matrix has non-finite entries");
    const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        fail(ErrorKind::Validation, "density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - Complex(1.0, 0.0)) > 1e-12) {
        fail(ErrorKind::Validation, "density matrix trace differs from 1 by more than 1e-12");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) {
        fail(ErrorKind::Validation, "density matrix has a negative eigenvalue");
    }
    return BareDensityMatrix(rho);
}

BareDensityMatrix BareDensityMatrix::basis_state(int index) {
    if (index < 0 || index > 3) fail(ErrorKind::Range, "bare-state index must be 0..3");
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    rho(index, index) = 1.0;
    return BareDensityMatrix(rho);
}

Eigen::Matrix4d eigenvector_matrix(double theta) {
    const auto a = MixingAngle::of(theta);
    Eigen::Matrix4d u = Eigen::Matrix4d::Zero();
    u(0, 0) = 1.0;
    u(1, 1) = a.cos_half;
    u(2, 1) = a.sin_half;
    u(1, 2) = -a.sin_half;
    u(2, 2) = a.cos_half;
    u(3, 3) = 1.0;
    return u;
}

// Element-wise representation change. With e_ij = <lambda_i|rho|lambda_j> and
// b_ij = <eta_i|rho|eta_j>, c = cos(theta/2), s = sin(theta/2):
//   b11 = e11, b44 = e44, b14 = e14
//   b22 = c^2 e22 + s^2 e33 - (sin(theta)/2)(e23 + e32)
//   b33 = s^2 e22 + c^2 e33 + (sin(theta)/2)(e23 + e32)
//   b32 = c^2 e32 - s^2 e23 + (sin(theta)/2)(e22 - e33)
//   b21 = c e21 - s e31,  b31 = s e21 + c e31
//   b42 = c e42 - s e43,  b43 = s e42 + c e43
BareDensityMatrix eigen_to_bare(const EigenState& state, double theta) {
    const auto a = MixingAngle::of(theta);
    const double c = a.cos_half;
    const double s = a.sin_half;
    const double c2 = c * c;
    const double s2 = s * s;
    const double half_sin = 0.5 * a.sin_full;

    const Eigen::Matrix4cd e = state.matrix();
    Eigen::Matrix4cd b = Eigen::Matrix4cd::Zero();

    b(0, 0) = e(0, 0);
    b(3, 3) = e(3, 3);
    b(1, 1) = c2 * e(1, 1) + s2 * e(2, 2) - half_sin * (e(1, 2) + e(2, 1));
    b(2, 2) = s2 * e(1, 1) + c2 * e(2, 2) + half_sin * (e(1, 2) + e(2, 1));

    b(2, 1) = c2 * e(2, 1) - s2 * e(1, 2) + half_sin * (e(1, 1) - e(2, 2));
    b(1, 0) = c * e(1, 0) - s * e(2, 0);
    b(2, 0) = s * e(1, 0) + c * e(2, 0);
    b(3, 0) = e(3, 0);
    b(3, 1) = c * e(3, 1) - s * e(3, 2);
    b(3, 2) = s * e(3, 1) + c * e(3, 2);

    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) b(i, j) = std::conj(b(j, i));
        b(i, i) = b(i, i).real();
    }
    return BareDensityMatrix::unchecked(b);
}

EigenState bare_to_eigen(const BareDensityMatrix& rho, double theta) {
    const Eigen::Matrix4d u = eigenvector_matrix(theta);
    const Eigen::Matrix4cd uc = u.cast<Complex>();
    return EigenState::from_matrix(uc.transpose() * rho.matrix() * uc);
}

SigmaZ sigma_z_expectations(const EigenState& state, double theta) {
    const auto a = MixingAngle::of(theta);
    const double outer = state.pop[0] - state.pop[3];
    const double inner = state.pop[1] - state.pop[2];
    // <tau_23> + <tau_32> = 2 Re rho_32
    const double cross = 2.0 * state.coh[3].real();
    SigmaZ sz;
    sz.tls1 = outer + a.cos_full * inner - a.sin_full * cross;
    sz.tls2 = outer - a.cos_full * inner + a.sin_full * cross;
    return sz;
}

DispersiveShift dispersive_shift(const SystemParams& params) {
    const double dw = params.detuning();
    if (dw == 0.0) {
        fail(ErrorKind::DegenerateDetuning, "dispersive shift undefined at zero detuning");
    }
    const double shift = params.xi() * params.xi() / dw;
    DispersiveShift out;
    out.omega1_bar = params.omega1() + shift;
    out.omega2_bar = params.omega2() - shift;
    out.valid = std::abs(params.xi() / dw) < kDispersiveValidity;
    return out;
}

DispersiveShift dispersive_shift(const SystemParams& params, double T1, double T2) {
    DispersiveShift out = dispersive_shift(params);
    out.predicted_temperature = std::array<double, 2>{params.omega1() / out.omega1_bar * T1,
                                                      params.omega2() / out.omega2_bar * T2};
    return out;
}

}  // namespace qtherm
