#include "qtherm/error.hpp"
#include "qtherm/rates.hpp"

#include "oracles/frozen.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

#include <random>

using namespace qtherm;

namespace {

double nb(double eps, double T) { return static_cast<double>(oracle::bose(eps, T)); }

EigenBasis basis_at(double theta, double xi = 10.0, double wm = 20.0) {
    return build_eigenbasis(SystemParams::from_mixing_angle(wm, xi, theta));
}

}  // namespace

TEST_CASE("thermal occupation") {
    CHECK(thermal_occupation(10, 0) == 0.0);
    CHECK_REL(thermal_occupation(10, 10), 0.5819767068693265, 1e-15);
    CHECK_REL(thermal_occupation(1, 1000), frozen::kBoseEps1T1000, 1e-14);
    CHECK_REL(thermal_occupation(1, 1000), 999.500083333331944, 1e-14);
    CHECK(thermal_occupation(30, 0.01) == doctest::Approx(0.0).epsilon(1e-300));
    double prev = 0.0;
    for (double T = 0.5; T < 100; T *= 1.3) {
        const double n = thermal_occupation(7.0, T);
        CHECK(n > prev);
        CHECK_REL(n, nb(7.0, T), 1e-13);
        prev = n;
    }
}

TEST_CASE("independent-bath rates at the frozen points") {
    const IhbBathConfig baths{5, 10, 1, 1};
    auto r = ihb_rates(basis_at(kHalfPi), baths);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK_REL(r.Gamma[k], frozen::kResonantIhbGamma[k], 1e-14);
        CHECK_ABS(r.Lambda[k], frozen::kResonantIhbLambda[k], 1e-14);
    }
    CHECK_REL(r.Gamma[0], 1.02744030407405, 1e-13);
    r = ihb_rates(basis_at(0.7), baths);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK_REL(r.Gamma[k], frozen::kTheta07IhbGamma[k], 1e-13);
        CHECK_ABS(r.Lambda[k], frozen::kTheta07IhbLambda[k], 1e-13);
    }
}

TEST_CASE("independent-bath limits and aliases") {
    auto r = ihb_rates(basis_at(kHalfPi), IhbBathConfig{10, 10, 1, 1});
    for (double l : r.Lambda) CHECK(l == 0.0);

    r = ihb_rates(basis_at(kHalfPi), IhbBathConfig{0, 0, 0.7, 1.3});
    CHECK(r.Gamma[1] == 0.0);
    CHECK(r.Gamma[3] == 0.0);
    CHECK_REL(r.Gamma[0], 0.7, 1e-15);
    CHECK_REL(r.Gamma[2], 1.3, 1e-15);

    const auto t = r.transitions();
    CHECK(t(0, 2) == r.Gamma[0]);
    CHECK(t(1, 3) == r.Gamma[0]);
    CHECK(t(2, 0) == r.Gamma[1]);
    CHECK(t(3, 1) == r.Gamma[1]);
    CHECK(t(0, 1) == r.Gamma[2]);
    CHECK(t(2, 3) == r.Gamma[2]);
    CHECK(t(1, 0) == r.Gamma[3]);
    CHECK(t(3, 2) == r.Gamma[3]);
    CHECK(t(0, 3) == 0.0);
    CHECK(t(1, 2) == 0.0);
}

TEST_CASE("independent-bath rate invariants") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const double theta = 0.6 + 1.9 * u(rng);
        const auto b = basis_at(theta);
        const double T1 = 1 + 30 * u(rng), T2 = 1 + 30 * u(rng);
        const auto r = ihb_rates(b, IhbBathConfig{T1, T2, 0.5 + u(rng), 0.5 + u(rng)});
        CHECK(r.Gamma[0] >= r.Gamma[1]);
        CHECK(r.Gamma[1] >= 0.0);
        CHECK(r.Gamma[2] >= r.Gamma[3]);
        CHECK(r.Gamma[3] >= 0.0);
        CHECK(std::abs(r.Lambda[0]) <= r.Gamma[0]);
        CHECK(std::abs(r.Lambda[2]) <= r.Gamma[1]);
        CHECK(std::abs(r.Lambda[1]) <= r.Gamma[2]);
        CHECK(std::abs(r.Lambda[3]) <= r.Gamma[3]);

        const auto eq = ihb_rates(b, IhbBathConfig{T1, T1, 1, 1});
        CHECK_REL(std::log(eq.Gamma[0] / eq.Gamma[1]), b.eps1 / T1, 1e-12);
        CHECK_REL(std::log(eq.Gamma[2] / eq.Gamma[3]), b.eps2 / T1, 1e-12);
    }
}

TEST_CASE("common-bath rates match their definitions") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const double theta = 0.6 + 1.9 * u(rng);
        const auto b = basis_at(theta);
        const ChbBathConfig bath{1 + 20 * u(rng), 0.2 + u(rng), 0.2 + u(rng), 0.2 + u(rng), 0.2 + u(rng)};
        const auto r = chb_rates(b, bath);
        const double c = std::cos(theta / 2), s = std::sin(theta / 2);
        const double n1 = nb(b.eps1, bath.T), n2 = nb(b.eps2, bath.T);
        const double a12 = std::pow(s * std::sqrt(bath.gamma1_e2) + c * std::sqrt(bath.gamma2_e2), 2);
        const double a13 = std::pow(c * std::sqrt(bath.gamma1_e1) - s * std::sqrt(bath.gamma2_e1), 2);
        const double a24 = std::pow(c * std::sqrt(bath.gamma1_e1) + s * std::sqrt(bath.gamma2_e1), 2);
        const double a34 = std::pow(s * std::sqrt(bath.gamma1_e2) - c * std::sqrt(bath.gamma2_e2), 2);
        const double tol = 1e-12;
        CHECK_ABS(r.G(1, 2), a12 * (n2 + 1), tol);
        CHECK_ABS(r.G(2, 1), a12 * n2, tol);
        CHECK_ABS(r.G(1, 3), a13 * (n1 + 1), tol);
        CHECK_ABS(r.G(3, 1), a13 * n1, tol);
        CHECK_ABS(r.G(2, 4), a24 * (n1 + 1), tol);
        CHECK_ABS(r.G(4, 2), a24 * n1, tol);
        CHECK_ABS(r.G(3, 4), a34 * (n2 + 1), tol);
        CHECK_ABS(r.G(4, 3), a34 * n2, tol);
        const double l1 = c * c * bath.gamma1_e1 - s * s * bath.gamma2_e1;
        const double l2 = -s * s * bath.gamma1_e2 + c * c * bath.gamma2_e2;
        CHECK_ABS(r.rates.lambda[0] / (n1 + 1), l1, tol);
        CHECK_ABS(r.rates.lambda[1] / (n2 + 1), l2, tol);
        CHECK_ABS(r.rates.lambda[2], l1 * n1, tol);
        CHECK_ABS(r.rates.lambda[3], l2 * n2, tol);
        CHECK_FALSE(r.dark_sector);

        // detailed balance, in log space
        CHECK_REL(std::log(r.G(1, 2) / r.G(2, 1)), b.eps2 / bath.T, 1e-12);
        CHECK_REL(std::log(r.G(2, 4) / r.G(4, 2)), b.eps1 / bath.T, 1e-12);
        CHECK(r.G(1, 3) <= 2 * std::max(bath.gamma1_e1, bath.gamma2_e1) * (n1 + 1) + tol);
    }
}

TEST_CASE("common-bath dark sector at resonance") {
    const auto b = basis_at(kHalfPi);
    const auto r = chb_rates(b, ChbBathConfig::uniform(10, 1, 1));
    CHECK(r.dark_sector);
    CHECK(r.G(1, 3) == 0.0);
    CHECK(r.G(3, 1) == 0.0);
    CHECK(r.G(3, 4) == 0.0);
    CHECK(r.G(4, 3) == 0.0);
    CHECK_REL(r.G(2, 4), 2 * (thermal_occupation(b.eps1, 10) + 1), 1e-14);

    const auto off = chb_rates(basis_at(kHalfPi - 1e-3), ChbBathConfig::uniform(10, 1, 1));
    CHECK_FALSE(off.dark_sector);
    const auto unequal = chb_rates(b, ChbBathConfig{10, 1, 1.2, 1, 1.2});
    CHECK_FALSE(unequal.dark_sector);
}

TEST_CASE("rates are continuous in theta") {
    const IhbBathConfig ib{5, 10, 1, 1};
    const auto cb = ChbBathConfig::uniform(10, 1, 1);
    // Largest jump between neighbouring angles; a jump discontinuity would not shrink with the step.
    auto worst_jump = [&](double h) {
        auto prev_i = ihb_rates(basis_at(0.6), ib);
        auto prev_c = chb_rates(basis_at(0.6), cb);
        double worst = 0.0;
        const int steps = static_cast<int>(1.9 / h);
        for (int k = 1; k <= steps; ++k) {
            const double theta = 0.6 + k * h;
            const auto ri = ihb_rates(basis_at(theta), ib);
            const auto rc = chb_rates(basis_at(theta), cb);
            for (std::size_t m = 0; m < 4; ++m) worst = std::max(worst, std::abs(ri.Gamma[m] - prev_i.Gamma[m]));
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j)
                    worst = std::max(worst, std::abs(rc.rates.gamma[i][j] - prev_c.rates.gamma[i][j]));
            prev_i = ri;
            prev_c = rc;
        }
        return worst;
    };
    const double coarse = worst_jump(1e-4), fine = worst_jump(1e-5);
    CHECK(coarse > 0.0);
    CHECK(fine < 0.15 * coarse);
}

TEST_CASE("bath validation") {
    CHECK_THROWS_AS(IhbBathConfig({-1, 1, 1, 1}).validate(), Error);
    CHECK_THROWS_AS(IhbBathConfig({1, 1, 0, 1}).validate(), Error);
    CHECK_THROWS_AS(ChbBathConfig::uniform(1, -1, 1).validate(), Error);
    CHECK_NOTHROW(IhbBathConfig({0, 0, 1, 1}).validate());
}
