#include "qtherm/rates.hpp"

#include "qtherm/error.hpp"

#include <cmath>

namespace qtherm {

namespace {

void require_temperature(double T, const char* name) {
    if (!std::isfinite(T) || T < 0.0) {
        fail(ErrorKind::Validation, std::string(name) + " must be a finite temperature >= 0");
    }
}

void require_rate(double g, const char* name) {
    if (!std::isfinite(g) || g <= 0.0) {
        fail(ErrorKind::Validation, std::string(name) + " must be a finite rate > 0");
    }
}

}  // namespace

double thermal_occupation(double eps, double T) {
    if (T == 0.0) return 0.0;
    // expm1 overflows to +inf for eps/T > ~709, giving exactly 0.
    return 1.0 / std::expm1(eps / T);
}

void IhbBathConfig::validate() const {
    require_temperature(T1, "T1");
    require_temperature(T2, "T2");
    require_rate(gamma1, "gamma1");
    require_rate(gamma2, "gamma2");
}

ChbBathConfig ChbBathConfig::uniform(double T, double gamma_e1, double gamma_e2) {
    return ChbBathConfig{T, gamma_e1, gamma_e1, gamma_e2, gamma_e2};
}

void ChbBathConfig::validate() const {
    require_temperature(T, "T");
    require_rate(gamma1_e1, "gamma1_e1");
    require_rate(gamma2_e1, "gamma2_e1");
    require_rate(gamma1_e2, "gamma1_e2");
    require_rate(gamma2_e2, "gamma2_e2");
}

double TransitionRates::total_out(int from) const {
    double total = 0.0;
    for (double g : gamma[static_cast<std::size_t>(from)]) total += g;
    return total;
}

double TransitionRates::sum() const {
    double total = 0.0;
    for (int i = 0; i < 4; ++i) total += total_out(i);
    return total;
}

TransitionRates IhbRateSet::transitions() const {
    TransitionRates t;
    auto set = [&t](int from, int to, double g) {
        t.gamma[static_cast<std::size_t>(from - 1)][static_cast<std::size_t>(to - 1)] = g;
    };
    set(1, 3, Gamma[0]);
    set(2, 4, Gamma[0]);
    set(3, 1, Gamma[1]);
    set(4, 2, Gamma[1]);
    set(1, 2, Gamma[2]);
    set(3, 4, Gamma[2]);
    set(2, 1, Gamma[3]);
    set(4, 3, Gamma[3]);
    t.lambda = Lambda;
    return t;
}

IhbRateSet ihb_rates(const EigenBasis& basis, const IhbBathConfig& baths) {
    baths.validate();
    const double c2 = basis.angle.cos_half * basis.angle.cos_half;
    const double s2 = basis.angle.sin_half * basis.angle.sin_half;

    // A: bath of TLS 1 at T1, B: bath of TLS 2 at T2; index 1 = emission, 2 = absorption.
    const double na1 = thermal_occupation(basis.eps1, baths.T1);
    const double na2 = thermal_occupation(basis.eps2, baths.T1);
    const double nb1 = thermal_occupation(basis.eps1, baths.T2);
    const double nb2 = thermal_occupation(basis.eps2, baths.T2);

    const double A1_e1 = baths.gamma1 * (na1 + 1.0);
    const double A2_e1 = baths.gamma1 * na1;
    const double B1_e1 = baths.gamma1 * (nb1 + 1.0);
    const double B2_e1 = baths.gamma1 * nb1;
    const double A1_e2 = baths.gamma2 * (na2 + 1.0);
    const double A2_e2 = baths.gamma2 * na2;
    const double B1_e2 = baths.gamma2 * (nb2 + 1.0);
    const double B2_e2 = baths.gamma2 * nb2;

    IhbRateSet r;
    r.Gamma[0] = c2 * A1_e1 + s2 * B1_e1;
    r.Gamma[1] = c2 * A2_e1 + s2 * B2_e1;
    r.Gamma[2] = s2 * A1_e2 + c2 * B1_e2;
    r.Gamma[3] = s2 * A2_e2 + c2 * B2_e2;
    r.Lambda[0] = c2 * A1_e1 - s2 * B1_e1;
    r.Lambda[1] = -s2 * A1_e2 + c2 * B1_e2;
    r.Lambda[2] = c2 * A2_e1 - s2 * B2_e1;
    r.Lambda[3] = -s2 * A2_e2 + c2 * B2_e2;
    return r;
}

ChbRateSet chb_rates(const EigenBasis& basis, const ChbBathConfig& bath) {
    bath.validate();
    const double c = basis.angle.cos_half;
    const double s = basis.angle.sin_half;
    const double n1 = thermal_occupation(basis.eps1, bath.T);
    const double n2 = thermal_occupation(basis.eps2, bath.T);

    const double r1e1 = std::sqrt(bath.gamma1_e1);
    const double r2e1 = std::sqrt(bath.gamma2_e1);
    const double r1e2 = std::sqrt(bath.gamma1_e2);
    const double r2e2 = std::sqrt(bath.gamma2_e2);

    const double amp12 = s * r1e2 + c * r2e2;
    const double amp13 = c * r1e1 - s * r2e1;
    const double amp24 = c * r1e1 + s * r2e1;
    const double amp34 = s * r1e2 - c * r2e2;

    ChbRateSet out;
    auto set = [&out](int from, int to, double g) {
        out.rates.gamma[static_cast<std::size_t>(from - 1)][static_cast<std::size_t>(to - 1)] = g;
    };
    set(1, 2, amp12 * amp12 * (n2 + 1.0));
    set(2, 1, amp12 * amp12 * n2);
    set(1, 3, amp13 * amp13 * (n1 + 1.0));
    set(3, 1, amp13 * amp13 * n1);
    set(2, 4, amp24 * amp24 * (n1 + 1.0));
    set(4, 2, amp24 * amp24 * n1);
    set(3, 4, amp34 * amp34 * (n2 + 1.0));
    set(4, 3, amp34 * amp34 * n2);

    const double c2 = c * c;
    const double s2 = s * s;
    out.rates.lambda[0] = (c2 * bath.gamma1_e1 - s2 * bath.gamma2_e1) * (n1 + 1.0);
    out.rates.lambda[1] = (-s2 * bath.gamma1_e2 + c2 * bath.gamma2_e2) * (n2 + 1.0);
    out.rates.lambda[2] = (c2 * bath.gamma1_e1 - s2 * bath.gamma2_e1) * n1;
    out.rates.lambda[3] = (-s2 * bath.gamma1_e2 + c2 * bath.gamma2_e2) * n2;

    const double lambda3_coupling = out.G(1, 3) + out.G(3, 1) + out.G(3, 4) + out.G(4, 3);
    out.dark_sector = lambda3_coupling < kDarkSectorThreshold * out.rates.sum();
    return out;
}

}  // namespace qtherm
