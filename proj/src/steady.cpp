#include "qtherm/steady.hpp"

#include "qtherm/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace qtherm {

const char* to_string(Regime regime) noexcept {
    switch (regime) {
        case Regime::IHB: return "IHB";
        case Regime::CHB: return "CHB";
        case Regime::DARK: return "DARK";
    }
    return "?";
}

const char* to_string(Temperature::Tag tag) noexcept {
    switch (tag) {
        case Temperature::Tag::Finite: return "finite";
        case Temperature::Tag::Infinite: return "infinite";
        case Temperature::Tag::Negative: return "negative";
        case Temperature::Tag::Undefined: return "undefined";
    }
    return "?";
}

EigenState SteadyPopulations::state() const {
    EigenState s;
    s.pop = pop;
    return s;
}

SteadyPopulations steady_ihb(const IhbRateSet& rates) {
    const double G1 = rates.Gamma[0];
    const double G2 = rates.Gamma[1];
    const double G3 = rates.Gamma[2];
    const double G4 = rates.Gamma[3];
    if (!(G1 + G2 > 0.0) || !(G3 + G4 > 0.0)) {
        fail(ErrorKind::DegenerateRates, "Gamma1 + Gamma2 and Gamma3 + Gamma4 must both be > 0");
    }
    const double d = (G1 + G2) * (G3 + G4);
    SteadyPopulations out;
    out.regime = Regime::IHB;
    out.pop = {G2 * G4 / d, G2 * G3 / d, G1 * G4 / d, G1 * G3 / d};
    return out;
}

SteadyPopulations steady_chb(const ChbRateSet& rates) {
    if (rates.dark_sector) {
        fail(ErrorKind::DarkSector, "lambda_3 is decoupled from the common bath; use steady_dark");
    }
    auto G = [&rates](int i, int j) { return rates.G(i, j); };
    const double n11 = (G(2, 1) + G(2, 4)) * G(3, 1) * G(4, 3) + (G(3, 1) + G(3, 4)) * G(2, 1) * G(4, 2);
    const double n22 = (G(1, 2) + G(1, 3)) * G(3, 4) * G(4, 2) + (G(4, 2) + G(4, 3)) * G(1, 2) * G(3, 1);
    const double n33 = (G(1, 2) + G(1, 3)) * G(4, 3) * G(2, 4) + (G(4, 2) + G(4, 3)) * G(2, 1) * G(1, 3);
    const double n44 = (G(2, 1) + G(2, 4)) * G(1, 3) * G(3, 4) + (G(3, 1) + G(3, 4)) * G(1, 2) * G(2, 4);
    const double a = (G(1, 2) + G(1, 3)) * (G(3, 4) * G(4, 2) + G(4, 3) * G(2, 4)) +
                     (G(2, 1) + G(2, 4)) * (G(3, 1) * G(4, 3) + G(1, 3) * G(3, 4)) +
                     (G(3, 1) + G(3, 4)) * (G(2, 1) * G(4, 2) + G(1, 2) * G(2, 4)) +
                     (G(4, 2) + G(4, 3)) * (G(2, 1) * G(1, 3) + G(1, 2) * G(3, 1));
    if (!(a > 0.0)) fail(ErrorKind::DegenerateRates, "common-bath normaliser A vanishes");
    SteadyPopulations out;
    out.regime = Regime::CHB;
    out.pop = {n11 / a, n22 / a, n33 / a, n44 / a};
    return out;
}

SteadyPopulations steady_dark(const ChbRateSet& rates, double tau33_0) {
    if (!rates.dark_sector) {
        fail(ErrorKind::Validation, "steady_dark requires a decoupled lambda_3");
    }
    if (!(tau33_0 >= 0.0 && tau33_0 <= 1.0)) {
        fail(ErrorKind::Range, "tau33(0) must lie in [0, 1]");
    }
    auto G = [&rates](int i, int j) { return rates.G(i, j); };
    const double w1 = G(2, 1) * G(4, 2);
    const double w2 = G(1, 2) * G(4, 2);
    const double w4 = G(1, 2) * G(2, 4);
    const double d = w1 + w2 + w4;
    if (!(d > 0.0)) fail(ErrorKind::DegenerateRates, "dark-sector rate balance is degenerate");
    const double rest = 1.0 - tau33_0;
    SteadyPopulations out;
    out.regime = Regime::DARK;
    out.tau33_initial = tau33_0;
    out.pop = {rest * w1 / d, rest * w2 / d, tau33_0, rest * w4 / d};
    return out;
}

SteadyPopulations steady_nullspace(const Eigen::Matrix4d& m, std::optional<double> tau33_0) {
    if (!m.allFinite()) fail(ErrorKind::Validation, "generator has non-finite entries");
    const double scale = m.cwiseAbs().maxCoeff();
    if (scale == 0.0) fail(ErrorKind::KernelDimension, "generator is zero (kernel dimension 4)");
    if (m.colwise().sum().cwiseAbs().maxCoeff() > 1e-12 * scale) {
        fail(ErrorKind::Validation, "generator columns must sum to zero");
    }

    Eigen::JacobiSVD<Eigen::Matrix4d> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < 4; ++i) {
        if (sv(i) > 1e-10 * sv(0)) ++rank;
    }
    const int kernel = 4 - rank;
    SteadyPopulations out;
    out.regime = Regime::IHB;

    Eigen::Vector4d p;
    if (kernel == 1) {
        p = svd.matrixV().col(3);
        p /= p.sum();
    } else if (kernel == 2) {
        if (!tau33_0) {
            fail(ErrorKind::KernelDimension, "two-dimensional kernel: tau33(0) is needed to select the state");
        }
        if (!(*tau33_0 >= 0.0 && *tau33_0 <= 1.0)) fail(ErrorKind::Range, "tau33(0) must lie in [0, 1]");
        const Eigen::Matrix<double, 4, 2> k = svd.matrixV().rightCols<2>();
        Eigen::Matrix2d a;
        a.row(0) = k.colwise().sum();
        a.row(1) = k.row(2);
        const Eigen::Vector2d coef = a.fullPivLu().solve(Eigen::Vector2d(1.0, *tau33_0));
        p = k * coef;
        out.regime = Regime::DARK;
        out.tau33_initial = tau33_0;
    } else {
        std::ostringstream os;
        os << "kernel dimension " << kernel << " is not 1 or 2";
        fail(ErrorKind::KernelDimension, os.str());
    }
    for (int i = 0; i < 4; ++i) out.pop[static_cast<std::size_t>(i)] = p(i);
    return out;
}

// ---- temperatures ----

Temperature Temperature::from_populations(double gap, double p_lower, double p_upper) {
    if (!(p_lower > 0.0) && !(p_upper > 0.0)) return undefined();
    if (!(p_upper > 0.0)) return finite(0.0);
    if (!(p_lower > 0.0)) return negative(-0.0);
    const double ratio = p_lower / p_upper;
    if (std::abs(ratio - 1.0) <= 1e-13) return infinite();
    const double t = gap / (std::log(p_lower) - std::log(p_upper));
    return ratio < 1.0 ? negative(t) : finite(t);
}

namespace {

void require_populations(const SteadyPopulations& s) {
    for (double p : s.pop) {
        if (!std::isfinite(p) || p < 0.0) fail(ErrorKind::Validation, "populations must be finite and >= 0");
    }
}

}  // namespace

IhbEigenTemperatures eff_temps_eigen_ihb(const SteadyPopulations& s, const EigenBasis& basis) {
    require_populations(s);
    const auto& p = s.pop;
    const double lhs = p[0] * p[3];
    const double rhs = p[1] * p[2];
    if (std::abs(lhs - rhs) > 1e-9 * std::max(lhs, rhs)) {
        fail(ErrorKind::InvariantBreach, "tau11/tau22 differs from tau33/tau44");
    }
    return IhbEigenTemperatures{Temperature::from_populations(basis.eps1, p[2], p[0]),
                                Temperature::from_populations(basis.eps2, p[1], p[0])};
}

ChbEigenTemperatures eff_temps_eigen_chb(const SteadyPopulations& s, const EigenBasis& basis) {
    require_populations(s);
    if (s.regime == Regime::DARK) fail(ErrorKind::DarkSector, "three-temperature diagnostic needs a non-dark state");
    const auto& p = s.pop;
    const auto& e = basis.energy;
    return ChbEigenTemperatures{Temperature::from_populations(e[0] - e[1], p[1], p[0]),
                                Temperature::from_populations(e[0] - e[2], p[2], p[0]),
                                Temperature::from_populations(e[2] - e[3], p[3], p[2])};
}

Temperature bare_temperature(double omega, double sigma_z) {
    return Temperature::from_populations(omega, 0.5 * (1.0 - sigma_z), 0.5 * (1.0 + sigma_z));
}

SigmaZ sigma_z_ihb(const IhbRateSet& rates, const EigenBasis& basis) {
    const double G1 = rates.Gamma[0];
    const double G2 = rates.Gamma[1];
    const double G3 = rates.Gamma[2];
    const double G4 = rates.Gamma[3];
    const double d = (G1 + G2) * (G3 + G4);
    if (!(d > 0.0)) fail(ErrorKind::DegenerateRates, "(Gamma1 + Gamma2)(Gamma3 + Gamma4) vanishes");
    const double outer = G2 * G4 - G1 * G3;
    const double inner = basis.angle.cos_full * (G2 * G3 - G1 * G4);
    // -(-1)^l cos(theta): + for TLS 1, - for TLS 2
    return SigmaZ{(outer + inner) / d, (outer - inner) / d};
}

SigmaZ sigma_z_chb(const ChbRateSet& rates, const EigenBasis& basis) {
    if (rates.dark_sector) fail(ErrorKind::DarkSector, "closed-form <sigma^z> needs a non-dark rate set");
    auto G = [&rates](int i, int j) { return rates.G(i, j); };
    const double a = (G(1, 2) + G(1, 3)) * (G(3, 4) * G(4, 2) + G(4, 3) * G(2, 4)) +
                     (G(2, 1) + G(2, 4)) * (G(3, 1) * G(4, 3) + G(1, 3) * G(3, 4)) +
                     (G(3, 1) + G(3, 4)) * (G(2, 1) * G(4, 2) + G(1, 2) * G(2, 4)) +
                     (G(4, 2) + G(4, 3)) * (G(2, 1) * G(1, 3) + G(1, 2) * G(3, 1));
    const double outer = (G(2, 1) + G(2, 4)) * (G(3, 1) * G(4, 3) - G(1, 3) * G(3, 4)) +
                         (G(3, 1) + G(3, 4)) * (G(2, 1) * G(4, 2) - G(1, 2) * G(2, 4));
    const double inner = basis.angle.cos_full *
                         ((G(1, 2) + G(1, 3)) * (G(3, 4) * G(4, 2) - G(4, 3) * G(2, 4)) +
                          (G(4, 2) + G(4, 3)) * (G(1, 2) * G(3, 1) - G(2, 1) * G(1, 3)));
    // (-1)^(l-1) cos(theta): + for TLS 1, - for TLS 2
    return SigmaZ{(outer + inner) / a, (outer - inner) / a};
}

std::array<Temperature, 2> eff_temps_bare(const SystemParams& params, const SigmaZ& sz) {
    return {bare_temperature(params.omega1(), sz.tls1), bare_temperature(params.omega2(), sz.tls2)};
}

TemperatureReport ihb_report(const SystemParams& params, const IhbBathConfig& baths) {
    const EigenBasis basis = build_eigenbasis(params);
    const IhbRateSet rates = ihb_rates(basis, baths);
    TemperatureReport r;
    r.regime = Regime::IHB;
    r.steady = steady_ihb(rates);
    const auto t = eff_temps_eigen_ihb(r.steady, basis);
    r.eigen = {{"T_eps1", t.eps1}, {"T_eps2", t.eps2}};
    r.sigma_z = sigma_z_ihb(rates, basis);
    r.bare = eff_temps_bare(params, r.sigma_z);
    return r;
}

TemperatureReport chb_report(const SystemParams& params, const ChbBathConfig& bath, double tau33_0) {
    const EigenBasis basis = build_eigenbasis(params);
    const ChbRateSet rates = chb_rates(basis, bath);
    TemperatureReport r;
    if (rates.dark_sector) {
        r.regime = Regime::DARK;
        r.steady = steady_dark(rates, tau33_0);
        const auto& p = r.steady.pop;
        r.eigen = {{"T12", Temperature::from_populations(basis.energy[0] - basis.energy[1], p[1], p[0])},
                   {"T13", Temperature::undefined()},
                   {"T34", Temperature::undefined()}};
        r.sigma_z = sigma_z_expectations(r.steady.state(), basis.theta());
    } else {
        r.regime = Regime::CHB;
        r.steady = steady_chb(rates);
        const auto t = eff_temps_eigen_chb(r.steady, basis);
        r.eigen = {{"T12", t.t12}, {"T13", t.t13}, {"T34", t.t34}};
        r.sigma_z = sigma_z_chb(rates, basis);
    }
    r.bare = eff_temps_bare(params, r.sigma_z);
    return r;
}

// ---- scans ----

namespace {

// Inverse bare temperatures, finite even where the temperature itself is not.
std::array<double, 2> bare_betas(double omega_m, double xi, double theta, const IhbBathConfig& baths) {
    const SystemParams params = SystemParams::from_mixing_angle(omega_m, xi, theta);
    const EigenBasis basis = build_eigenbasis(params);
    const SigmaZ sz = sigma_z_ihb(ihb_rates(basis, baths), basis);
    auto beta = [](double omega, double s) { return std::log((1.0 - s) / (1.0 + s)) / omega; };
    return {beta(params.omega1(), sz.tls1), beta(params.omega2(), sz.tls2)};
}

std::vector<double> uniform_thetas(double omega_m, double xi, const std::optional<ThetaRange>& range,
                                   std::size_t points) {
    const ThetaRange r = range ? *range : sweep_theta_range(omega_m, xi);
    if (!(r.lo > 0.0 && r.hi < 2.0 * kHalfPi && r.lo < r.hi)) {
        fail(ErrorKind::Validation, "theta range must satisfy 0 < min < max < pi");
    }
    return linear_grid(r.lo, r.hi, points);
}

// Shrinks [lo, hi] around a change of `pred` until it spans at most tol.
double bisect_edge(const std::function<bool(double)>& pred, double lo, double hi, double tol) {
    const bool at_lo = pred(lo);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (pred(mid) == at_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

CounterintuitiveRegion counterintuitive_scan(double omega_m, double xi, const IhbBathConfig& baths,
                                             std::optional<ThetaRange> range, std::size_t points) {
    baths.validate();
    if (baths.T1 < baths.T2) fail(ErrorKind::Validation, "counterintuitive scan expects T1 >= T2");
    const bool equal = baths.T1 == baths.T2;
    constexpr double tol = 1e-9;

    auto contradicts = [&](double theta) {
        const auto b = bare_betas(omega_m, xi, theta, baths);
        const double rel = (b[0] - b[1]) / std::max({std::abs(b[0]), std::abs(b[1]), 1e-300});
        // beta1 > beta2 means T_eff(w1) < T_eff(w2)
        return equal ? std::abs(rel) > tol : rel > tol;
    };

    const auto grid = uniform_thetas(omega_m, xi, range, points);
    std::vector<char> flags(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) flags[k] = contradicts(grid[k]) ? 1 : 0;

    CounterintuitiveRegion region;
    bool is_open = flags[0] != 0;
    double open = grid[0];
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (flags[k] == flags[k - 1]) continue;
        const double edge = bisect_edge(contradicts, grid[k - 1], grid[k], 1e-10);
        if (flags[k]) {
            open = edge;
            is_open = true;
        } else {
            region.intervals.push_back({open, edge});
            is_open = false;
        }
    }
    if (is_open) region.intervals.push_back({open, grid.back()});
    for (const auto& iv : region.intervals) region.measure += iv.hi - iv.lo;
    return region;
}

DispersiveReport dispersive_prediction_check(double omega_m, double xi, const IhbBathConfig& baths,
                                             const std::vector<double>& thetas) {
    baths.validate();
    DispersiveReport report;
    for (double theta : thetas) {
        const SystemParams params = SystemParams::from_mixing_angle(omega_m, xi, theta);
        if (!(std::abs(xi / params.detuning()) < 0.1)) {
            std::ostringstream os;
            os << "theta = " << theta << " is outside the dispersive regime (|xi/dw| >= 0.1)";
            fail(ErrorKind::Validation, os.str());
        }
        const auto shift = dispersive_shift(params, baths.T1, baths.T2);
        const auto r = ihb_report(params, baths);
        DispersivePoint pt;
        pt.theta = theta;
        const std::array<double, 2> bath_t{baths.T1, baths.T2};
        for (std::size_t l = 0; l < 2; ++l) {
            if (!r.bare[l].is_finite()) fail(ErrorKind::InvariantBreach, "bare temperature is not finite");
            pt.simulated[l] = r.bare[l].value;
            pt.predicted[l] = (*shift.predicted_temperature)[l];
            pt.deviation[l] = std::abs(pt.simulated[l] - pt.predicted[l]) / bath_t[l];
            report.max_deviation = std::max(report.max_deviation, pt.deviation[l]);
        }
        report.points.push_back(pt);
    }
    return report;
}

std::vector<double> eigen_temperature_crossings(double omega_m, double xi, const IhbBathConfig& baths,
                                                std::optional<ThetaRange> range, std::size_t points) {
    baths.validate();
    auto diff = [&](double theta) {
        const SystemParams params = SystemParams::from_mixing_angle(omega_m, xi, theta);
        const auto r = ihb_report(params, baths);
        if (!r.eigen[0].second.is_finite() || !r.eigen[1].second.is_finite()) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        return r.eigen[0].second.value - r.eigen[1].second.value;
    };
    const auto grid = uniform_thetas(omega_m, xi, range, points);
    std::vector<double> values(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) values[k] = diff(grid[k]);

    std::vector<double> roots;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (values[k] == 0.0) {
            roots.push_back(grid[k]);
            continue;
        }
        if (k == 0 || !(values[k - 1] * values[k] < 0.0)) continue;
        auto positive = [&](double theta) { return diff(theta) > 0.0; };
        roots.push_back(bisect_edge(positive, grid[k - 1], grid[k], 0.0));
    }
    return roots;
}

}  // namespace qtherm
