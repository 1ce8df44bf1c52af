#pragma once

// Dissipative transition and cross-dephasing rates of the coupled pair in the
// eigenbasis, for two independent heat baths (IHB) or one common heat bath (CHB).

#include "qtherm/spectrum.hpp"

#include <array>

namespace qtherm {

// Bose occupation 1 / (exp(eps/T) - 1); exactly 0 at T == 0.
double thermal_occupation(double eps, double T);

struct IhbBathConfig {
    double T1{};      // bath of TLS 1
    double T2{};      // bath of TLS 2
    double gamma1{};  // gamma_a(eps1) = gamma_b(eps1)
    double gamma2{};  // gamma_a(eps2) = gamma_b(eps2)

    // Temperatures >= 0 (0 is the exact zero-temperature limit), rates > 0.
    void validate() const;
};

struct ChbBathConfig {
    double T{};
    double gamma1_e1{};  // gamma_1(eps1)
    double gamma2_e1{};  // gamma_2(eps1)
    double gamma1_e2{};  // gamma_1(eps2)
    double gamma2_e2{};  // gamma_2(eps2)

    // Equal coupling of both TLSs to the common bath: gamma_1(eps_i) = gamma_2(eps_i).
    static ChbBathConfig uniform(double T, double gamma_e1, double gamma_e2);

    void validate() const;
};

// Transition rates Gamma_ij from lambda_i to lambda_j (zero-based indices) plus the
// cross-dephasing rates Lambda_1..4. Only the eight dipole-allowed entries
// (12, 21, 13, 31, 24, 42, 34, 43) are ever non-zero.
struct TransitionRates {
    std::array<std::array<double, 4>, 4> gamma{};
    std::array<double, 4> lambda{};

    double operator()(int from, int to) const {
        return gamma[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)];
    }
    double total_out(int from) const;
    double sum() const;
};

struct IhbRateSet {
    std::array<double, 4> Gamma{};   // Gamma_1..Gamma_4
    std::array<double, 4> Lambda{};  // Lambda_1..Lambda_4

    // Gamma_13 = Gamma_24 = G1, Gamma_31 = Gamma_42 = G2,
    // Gamma_12 = Gamma_34 = G3, Gamma_21 = Gamma_43 = G4.
    TransitionRates transitions() const;
};

struct ChbRateSet {
    TransitionRates rates;
    // Gamma_13 + Gamma_31 + Gamma_34 + Gamma_43 < kDarkSectorThreshold * sum(Gamma_ij):
    // lambda_3 is decoupled from the bath.
    bool dark_sector{};

    double G(int from_one_based, int to_one_based) const {
        return rates(from_one_based - 1, to_one_based - 1);
    }
};

inline constexpr double kDarkSectorThreshold = 1e-12;

IhbRateSet ihb_rates(const EigenBasis& basis, const IhbBathConfig& baths);
ChbRateSet chb_rates(const EigenBasis& basis, const ChbBathConfig& bath);

}  // namespace qtherm
