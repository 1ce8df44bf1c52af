#pragma once

// Steady states of the population equations (independent baths, common bath,
// dark-sector common bath), a null-space solver used as an oracle, and the
// effective-temperature diagnostics built on them.

#include "qtherm/dynamics.hpp"
#include "qtherm/rates.hpp"
#include "qtherm/spectrum.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace qtherm {

enum class Regime { IHB, CHB, DARK };

const char* to_string(Regime regime) noexcept;

struct SteadyPopulations {
    std::array<double, 4> pop{};
    Regime regime = Regime::IHB;
    std::optional<double> tau33_initial;  // DARK only

    // Diagonal eigenbasis state; steady coherences vanish.
    EigenState state() const;
};

SteadyPopulations steady_ihb(const IhbRateSet& rates);
SteadyPopulations steady_chb(const ChbRateSet& rates);
SteadyPopulations steady_dark(const ChbRateSet& rates, double tau33_0);

// Kernel of a population generator. A one-dimensional kernel gives the unique
// normalised state; a two-dimensional kernel needs tau33_0 to pick a member.
SteadyPopulations steady_nullspace(const Eigen::Matrix4d& m, std::optional<double> tau33_0 = std::nullopt);

// ---- temperatures ----

struct Temperature {
    enum class Tag { Finite, Infinite, Negative, Undefined };
    Tag tag = Tag::Undefined;
    double value = 0.0;  // meaningful for Finite and Negative

    bool is_finite() const { return tag == Tag::Finite; }

    static Temperature finite(double t) { return {Tag::Finite, t}; }
    static Temperature infinite() { return {Tag::Infinite, 0.0}; }
    static Temperature negative(double t) { return {Tag::Negative, t}; }
    static Temperature undefined() { return {}; }

    // T = gap / ln(p_lower / p_upper). Equal populations (within 1e-13) give
    // Infinite, inversion gives Negative, an empty pair gives Undefined.
    static Temperature from_populations(double gap, double p_lower, double p_upper);
};

const char* to_string(Temperature::Tag tag) noexcept;

struct IhbEigenTemperatures {
    Temperature eps1;
    Temperature eps2;
};

struct ChbEigenTemperatures {
    Temperature t12;
    Temperature t13;
    Temperature t34;
};

// Checks tau11/tau22 == tau33/tau44 (1e-9 relative) before forming the ratios.
IhbEigenTemperatures eff_temps_eigen_ihb(const SteadyPopulations& pop, const EigenBasis& basis);
ChbEigenTemperatures eff_temps_eigen_chb(const SteadyPopulations& pop, const EigenBasis& basis);

// T_eff(omega) = omega / ln[(1 - sz) / (1 + sz)].
Temperature bare_temperature(double omega, double sigma_z);

// Closed forms of <sigma^z_l> in the steady state.
SigmaZ sigma_z_ihb(const IhbRateSet& rates, const EigenBasis& basis);
SigmaZ sigma_z_chb(const ChbRateSet& rates, const EigenBasis& basis);

struct TemperatureReport {
    Regime regime = Regime::IHB;
    SteadyPopulations steady;
    std::vector<std::pair<std::string, Temperature>> eigen;  // (eps1, eps2) or (T12, T13, T34)
    std::array<Temperature, 2> bare;
    SigmaZ sigma_z;
};

std::array<Temperature, 2> eff_temps_bare(const SystemParams& params, const SigmaZ& sz);

TemperatureReport ihb_report(const SystemParams& params, const IhbBathConfig& baths);
// Dark-sector rates use steady_dark with tau33_0 (default 0).
TemperatureReport chb_report(const SystemParams& params, const ChbBathConfig& bath, double tau33_0 = 0.0);

// ---- scans ----

struct ThetaInterval {
    double lo{};
    double hi{};
};

struct CounterintuitiveRegion {
    std::vector<ThetaInterval> intervals;
    double measure = 0.0;
};

inline constexpr std::size_t kScanPoints = 2001;

// Part of the theta range where sign(T_eff(w1) - T_eff(w2)) contradicts
// sign(T1 - T2); for T1 == T2 the region where the two differ beyond 1e-9
// relative. Edges are refined by bisection to 1e-10. The range defaults to
// sweep_theta_range(omega_m, xi).
CounterintuitiveRegion counterintuitive_scan(double omega_m, double xi, const IhbBathConfig& baths,
                                             std::optional<ThetaRange> range = std::nullopt,
                                             std::size_t points = kScanPoints);

struct DispersivePoint {
    double theta{};
    std::array<double, 2> simulated{};
    std::array<double, 2> predicted{};
    std::array<double, 2> deviation{};  // |simulated - predicted| / T_l
};

struct DispersiveReport {
    std::vector<DispersivePoint> points;
    double max_deviation = 0.0;
};

// Requires |xi / dw| < 0.1 at every theta (Validation otherwise).
DispersiveReport dispersive_prediction_check(double omega_m, double xi, const IhbBathConfig& baths,
                                             const std::vector<double>& thetas);

// Angles in the theta range where T_eff(eps1) == T_eff(eps2): brackets
// from a uniform grid, then bisection until the bracket cannot shrink.
std::vector<double> eigen_temperature_crossings(double omega_m, double xi, const IhbBathConfig& baths,
                                                std::optional<ThetaRange> range = std::nullopt,
                                                std::size_t points = kScanPoints);

}  // namespace qtherm
