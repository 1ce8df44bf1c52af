#include "qtherm/error.hpp"
#include "qtherm/spectrum.hpp"

#include "oracles/oracles.hpp"
#include "support.hpp"

#include <numbers>
#include <random>

using namespace qtherm;
using std::numbers::pi;

namespace {

EigenState random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Matrix4cd g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = Complex(n(rng), n(rng));
    Eigen::Matrix4cd rho = g * g.adjoint();
    rho /= rho.trace().real();
    return EigenState::from_matrix(rho);
}

}  // namespace

TEST_CASE("eigenbasis examples") {
    const auto a = build_eigenbasis(SystemParams::create(20, 20, 10));
    CHECK(a.theta() == kHalfPi);
    CHECK(a.eps1 == doctest::Approx(30));
    CHECK(a.eps2 == doctest::Approx(10));

    const auto b = build_eigenbasis(SystemParams::create(21, 19, 1));
    CHECK_REL(b.theta(), pi / 4, 1e-15);
    CHECK_REL(b.eps1, 20 + std::sqrt(2.0), 1e-15);
    CHECK_REL(b.eps2, 20 - std::sqrt(2.0), 1e-15);

    const auto c = build_eigenbasis(SystemParams::create(19, 21, 1));
    CHECK_REL(c.theta(), 3 * pi / 4, 1e-15);
}

TEST_CASE("eigenenergies match a numerical diagonalisation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double xi = 0.1 + 5 * u(rng), dw = -20 + 40 * u(rng), wm = 30 + 10 * u(rng);
        const auto p = SystemParams::create(wm + dw / 2, wm - dw / 2, xi);
        const auto basis = build_eigenbasis(p);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(oracle::hamiltonian(p.omega1(), p.omega2(), xi));
        for (int i = 0; i < 4; ++i) CHECK_ABS(basis.energy[static_cast<std::size_t>(i)], es.eigenvalues()(3 - i), 1e-12);
        CHECK_ABS(basis.eps1 + basis.eps2, 2 * wm, 1e-12);
        CHECK_ABS(basis.eps1 - basis.eps2, 2 * std::sqrt(dw * dw / 4 + xi * xi), 1e-12);
        CHECK(std::sin(basis.theta()) > 0);
        CHECK(std::signbit(std::cos(basis.theta())) == std::signbit(dw));

        // columns of the eigenvector matrix are eigenvectors with the stated energies
        const Eigen::Matrix4cd u4 = eigenvector_matrix(basis.theta()).cast<Complex>();
        const Eigen::Matrix4cd d = u4.adjoint() * oracle::hamiltonian(p.omega1(), p.omega2(), xi) * u4;
        for (int i = 0; i < 4; ++i) CHECK_ABS(d(i, i).real(), basis.energy[static_cast<std::size_t>(i)], 1e-12);
        CHECK((d - Eigen::Matrix4cd(d.diagonal().asDiagonal())).norm() < 1e-12);
    }
}

TEST_CASE("theta branch is continuous through resonance") {
    const double below = build_eigenbasis(SystemParams::create(20 + 1e-9, 20 - 1e-9, 1)).theta();
    const double above = build_eigenbasis(SystemParams::create(20 - 1e-9, 20 + 1e-9, 1)).theta();
    CHECK_ABS(below, pi / 2, 1e-8);
    CHECK_ABS(above, pi / 2, 1e-8);
    CHECK(below < pi / 2);
    CHECK(above > pi / 2);
}

TEST_CASE("invalid systems are rejected") {
    auto kind_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.kind();
        }
        FAIL("no error");
        return ErrorKind::Io;
    };
    CHECK(kind_of([] { SystemParams::create(-1, 20, 1); }) == ErrorKind::Validation);
    CHECK(kind_of([] { SystemParams::create(20, 20, -1); }) == ErrorKind::Validation);
    CHECK(kind_of([] { SystemParams::create(20, 20, std::nan("")); }) == ErrorKind::Validation);
    CHECK(kind_of([] { SystemParams::create(20, 20, 20); }) == ErrorKind::Positivity);
    CHECK(kind_of([] { SystemParams::from_mixing_angle(20, 10, 0.3); }) == ErrorKind::Positivity);
}

TEST_CASE("theta to detuning") {
    CHECK(theta_to_detuning(kHalfPi, 10) == 0.0);
    CHECK_REL(theta_to_detuning(pi / 4, 1), 2.0, 1e-15);
    CHECK_REL(theta_to_detuning(3 * pi / 4, 1), -2.0, 1e-15);
    const auto p = SystemParams::from_mixing_angle(20, 1, pi / 4);
    CHECK_REL(p.omega1(), 21.0, 1e-15);
    CHECK_REL(p.omega2(), 19.0, 1e-15);
    CHECK_REL(build_eigenbasis(p).theta(), pi / 4, 1e-14);
}

TEST_CASE("admissible and sweep theta ranges") {
    const auto r = admissible_theta_range(20, 10);
    CHECK_REL(r.lo, pi / 6, 1e-14);
    CHECK_REL(r.hi, 5 * pi / 6, 1e-14);
    const auto s = sweep_theta_range(20, 10);
    CHECK_REL(s.lo, pi / 6 + 0.02, 1e-14);
    CHECK_REL(s.hi, 5 * pi / 6 - 0.02, 1e-14);
    const auto w = sweep_theta_range(20, 0.1);
    CHECK(w.lo == 0.02);
    CHECK(w.hi == pi - 0.02);
    CHECK_NOTHROW(SystemParams::from_mixing_angle(20, 10, s.lo));
    CHECK_THROWS_AS(admissible_theta_range(20, 20), Error);
}

TEST_CASE("eigen to bare examples") {
    for (double theta : {0.3, kHalfPi, 2.5}) {
        const auto g = eigen_to_bare(EigenState::basis_state(3), theta);
        CHECK((g.matrix() - BareDensityMatrix::basis_state(3).matrix()).norm() < 1e-15);
    }
    const auto b = eigen_to_bare(EigenState::basis_state(1), kHalfPi);
    CHECK_ABS(b(1, 1).real(), 0.5, 1e-15);
    CHECK_ABS(b(2, 2).real(), 0.5, 1e-15);
    CHECK_ABS(b(1, 2).real(), 0.5, 1e-15);
    CHECK_ABS(b(2, 1).real(), 0.5, 1e-15);
}

TEST_CASE("eigen to bare agrees with the eigenvector rotation") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 100; ++k) {
        const EigenState s = random_state(rng);
        const double theta = 0.05 + 3.0 * (k / 100.0);
        const Eigen::Matrix4cd u = eigenvector_matrix(theta).cast<Complex>();
        const Eigen::Matrix4cd expected = u * s.matrix() * u.adjoint();
        const auto bare = eigen_to_bare(s, theta);
        CHECK((bare.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
        const EigenState back = bare_to_eigen(bare, theta);
        CHECK((back.matrix() - s.matrix()).cwiseAbs().maxCoeff() < 1e-12);

        const auto sz = sigma_z_expectations(s, theta);
        CHECK_ABS(sz.tls1, (bare.matrix() * oracle::sigma_z(1)).trace().real(), 1e-12);
        CHECK_ABS(sz.tls2, (bare.matrix() * oracle::sigma_z(2)).trace().real(), 1e-12);
    }
}

TEST_CASE("sigma z examples") {
    auto sz = sigma_z_expectations(EigenState::basis_state(3), 0.4);
    CHECK(sz.tls1 == -1.0);
    CHECK(sz.tls2 == -1.0);
    sz = sigma_z_expectations(EigenState::basis_state(0), 0.4);
    CHECK(sz.tls1 == 1.0);
    CHECK(sz.tls2 == 1.0);
    sz = sigma_z_expectations(EigenState::basis_state(1), kHalfPi);
    CHECK(sz.tls1 == 0.0);
    CHECK(sz.tls2 == 0.0);
}

TEST_CASE("bare density matrix validation") {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity() / 4.0;
    CHECK_NOTHROW(BareDensityMatrix::create(m));
    m(0, 0) += 0.1;
    CHECK_THROWS_AS(BareDensityMatrix::create(m), Error);
    m = Eigen::Matrix4cd::Identity() / 4.0;
    m(0, 1) = Complex(0, 0.1);
    CHECK_THROWS_AS(BareDensityMatrix::create(m), Error);  // not Hermitian
    m = Eigen::Matrix4cd::Zero();
    m(0, 0) = 1.2;
    m(1, 1) = -0.2;
    CHECK_THROWS_AS(BareDensityMatrix::create(m), Error);  // negative eigenvalue
}

TEST_CASE("dispersive shifts") {
    auto d = dispersive_shift(SystemParams::create(21, 19, 0.1));
    CHECK_REL(d.omega1_bar, 21.005, 1e-14);
    CHECK_REL(d.omega2_bar, 18.995, 1e-14);
    CHECK(d.valid);
    d = dispersive_shift(SystemParams::create(19, 21, 0.1));
    CHECK_REL(d.omega1_bar, 18.995, 1e-14);
    d = dispersive_shift(SystemParams::create(21, 19, 0.0));
    CHECK(d.omega1_bar == 21.0);
    CHECK(d.omega2_bar == 19.0);
    CHECK_FALSE(dispersive_shift(SystemParams::create(21, 19, 0.9)).valid);
    const auto t = dispersive_shift(SystemParams::create(21, 19, 0.1), 10, 5);
    REQUIRE(t.predicted_temperature);
    CHECK_REL((*t.predicted_temperature)[0], 21.0 / 21.005 * 10, 1e-14);
    CHECK_THROWS_AS(dispersive_shift(SystemParams::create(20, 20, 0.1)), Error);
}
