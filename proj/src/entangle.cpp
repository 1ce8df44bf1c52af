#include "qtherm/entangle.hpp"

#include "qtherm/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace qtherm {

XStateMatrix XStateMatrix::create(const std::array<double, 4>& diag, Complex rho14, Complex rho23) {
    double trace = 0.0;
    for (double d : diag) {
        if (!std::isfinite(d) || d < -1e-12) fail(ErrorKind::Validation, "X-state diagonal must be >= 0");
        trace += d;
    }
    if (std::abs(trace - 1.0) > 1e-12) fail(ErrorKind::Validation, "X-state trace differs from 1");
    if (!std::isfinite(std::abs(rho14)) || !std::isfinite(std::abs(rho23))) {
        fail(ErrorKind::Validation, "X-state coherences must be finite");
    }
    if (std::norm(rho23) > diag[1] * diag[2] + 1e-10) fail(ErrorKind::Validation, "|rho23|^2 exceeds rho22 rho33");
    if (std::norm(rho14) > diag[0] * diag[3] + 1e-10) fail(ErrorKind::Validation, "|rho14|^2 exceeds rho11 rho44");
    return XStateMatrix(diag, rho14, rho23);
}

Eigen::Matrix4cd XStateMatrix::matrix() const {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 4; ++i) m(i, i) = diag_[static_cast<std::size_t>(i)];
    m(0, 3) = rho14_;
    m(3, 0) = std::conj(rho14_);
    m(1, 2) = rho23_;
    m(2, 1) = std::conj(rho23_);
    return m;
}

XStateMatrix assemble_steady_xstate(const SteadyPopulations& s, double theta) {
    const auto a = MixingAngle::of(theta);
    const double c2 = a.cos_half * a.cos_half;
    const double s2 = a.sin_half * a.sin_half;
    const auto& t = s.pop;
    const std::array<double, 4> diag{t[0], c2 * t[1] + s2 * t[2], s2 * t[1] + c2 * t[2], t[3]};
    const double mu23 = 0.5 * a.sin_full * (t[1] - t[2]);
    return XStateMatrix::create(diag, 0.0, mu23);
}

double concurrence_x(const XStateMatrix& rho) {
    const auto& d = rho.diag();
    const double a = std::abs(rho.rho23()) - std::sqrt(std::max(d[0], 0.0) * std::max(d[3], 0.0));
    const double b = std::abs(rho.rho14()) - std::sqrt(std::max(d[1], 0.0) * std::max(d[2], 0.0));
    return 2.0 * std::max({0.0, a, b});
}

namespace {

Eigen::Matrix4cd spin_flip() {
    Eigen::Matrix4cd y = Eigen::Matrix4cd::Zero();
    // sigma_y (x) sigma_y in the (ee, eg, ge, gg) ordering
    y(0, 3) = -1.0;
    y(3, 0) = -1.0;
    y(1, 2) = 1.0;
    y(2, 1) = 1.0;
    return y;
}

}  // namespace

double concurrence_general(const BareDensityMatrix& rho) {
    const Eigen::Matrix4cd& m = rho.matrix();
    const Eigen::Matrix4cd y = spin_flip();

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
    if (es.info() != Eigen::Success) fail(ErrorKind::EigensolverFailure, "Hermitian eigensolver did not converge");
    const Eigen::Vector4d w = es.eigenvalues().cwiseMax(0.0);
    const Eigen::Matrix4cd sqrt_rho = es.eigenvectors() * w.cwiseSqrt().cast<Complex>().asDiagonal() *
                                      es.eigenvectors().adjoint();
    const Eigen::Matrix4cd a = sqrt_rho * y * sqrt_rho.conjugate();
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(a);
    const Eigen::Vector4d sv = svd.singularValues();  // sorted descending

    if (w.minCoeff() > 1e-10) {
        const Eigen::Matrix4cd r = m * y * m.conjugate() * y;
        Eigen::ComplexEigenSolver<Eigen::Matrix4cd> ces(r);
        if (ces.info() != Eigen::Success) fail(ErrorKind::EigensolverFailure, "eigensolver did not converge");
        const double residual =
            (r * ces.eigenvectors() - ces.eigenvectors() * ces.eigenvalues().asDiagonal()).cwiseAbs().maxCoeff();
        if (residual > 1e-8) {
            std::ostringstream os;
            os << "eigen-decomposition residual " << residual << " exceeds 1e-8";
            fail(ErrorKind::EigensolverFailure, os.str());
        }
        std::array<double, 4> roots{};
        for (int i = 0; i < 4; ++i) roots[static_cast<std::size_t>(i)] = std::sqrt(std::max(ces.eigenvalues()(i).real(), 0.0));
        std::sort(roots.rbegin(), roots.rend());
        for (int i = 0; i < 4; ++i) {
            if (std::abs(roots[static_cast<std::size_t>(i)] - sv(i)) > 1e-6) {
                fail(ErrorKind::EigensolverFailure, "direct and Hermitian concurrence routes disagree");
            }
        }
    }
    return std::clamp(sv(0) - sv(1) - sv(2) - sv(3), 0.0, 1.0);
}

double steady_entanglement_margin(const SteadyPopulations& s, double theta) {
    const auto a = MixingAngle::of(theta);
    const auto& t = s.pop;
    return std::abs(0.5 * a.sin_full * (t[1] - t[2])) - std::sqrt(std::max(t[0], 0.0) * std::max(t[3], 0.0));
}

double steady_concurrence(const SteadyPopulations& s, double theta) {
    return concurrence_x(assemble_steady_xstate(s, theta));
}

namespace {

constexpr std::size_t kThresholdGrid = 2001;

double find_threshold(const std::function<double(double)>& margin, double lo, double hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && lo < hi)) {
        fail(ErrorKind::Validation, "temperature bracket must satisfy 0 <= T_lo < T_hi");
    }
    std::vector<double> grid(kThresholdGrid);
    std::vector<double> values(kThresholdGrid);
    std::ptrdiff_t last = -1;
    for (std::size_t k = 0; k < kThresholdGrid; ++k) {
        grid[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(kThresholdGrid - 1);
        values[k] = margin(grid[k]);
        if (values[k] > 0.0) last = static_cast<std::ptrdiff_t>(k);
    }
    if (last < 0) fail(ErrorKind::NoEntanglement, "steady concurrence is zero throughout the bracket");
    if (static_cast<std::size_t>(last) + 1 == kThresholdGrid) {
        fail(ErrorKind::Range, "steady concurrence is still positive at the top of the bracket");
    }
    double a = grid[static_cast<std::size_t>(last)];
    double b = grid[static_cast<std::size_t>(last) + 1];
    while (b - a > 1e-8) {
        const double mid = 0.5 * (a + b);
        if (margin(mid) > 0.0) {
            a = mid;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double threshold_temperature(const SystemParams& params, const IhbBathConfig& bath_template, double T_lo,
                             double T_hi) {
    const EigenBasis basis = build_eigenbasis(params);
    auto margin = [&](double T) {
        IhbBathConfig b = bath_template;
        b.T1 = b.T2 = T;
        return steady_entanglement_margin(steady_ihb(ihb_rates(basis, b)), basis.theta());
    };
    return find_threshold(margin, T_lo, T_hi);
}

double threshold_temperature(const SystemParams& params, const ChbBathConfig& bath_template, double T_lo,
                             double T_hi) {
    const EigenBasis basis = build_eigenbasis(params);
    auto margin = [&](double T) {
        ChbBathConfig b = bath_template;
        b.T = T;
        const ChbRateSet rates = chb_rates(basis, b);
        if (rates.dark_sector) fail(ErrorKind::DarkSector, "threshold search needs a non-dark common bath");
        return steady_entanglement_margin(steady_chb(rates), basis.theta());
    };
    return find_threshold(margin, T_lo, T_hi);
}

}  // namespace qtherm
