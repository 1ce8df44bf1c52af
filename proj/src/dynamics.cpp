#include "qtherm/dynamics.hpp"

#include "qtherm/error.hpp"

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace qtherm {

namespace odeint = boost::numeric::odeint;

Eigen::Matrix4d bloch_matrix_ihb(const IhbRateSet& rates) {
    const double G1 = rates.Gamma[0];
    const double G2 = rates.Gamma[1];
    const double G3 = rates.Gamma[2];
    const double G4 = rates.Gamma[3];
    Eigen::Matrix4d m;
    // clang-format off
    m << G1 + G3, -G4,      -G2,      0.0,
         -G3,     G1 + G4,  0.0,      -G2,
         -G1,     0.0,      G2 + G3,  -G4,
         0.0,     -G1,      -G3,      G2 + G4;
    // clang-format on
    return -2.0 * m;
}

Eigen::Matrix4d bloch_matrix_chb(const ChbRateSet& rates) {
    auto G = [&rates](int i, int j) { return rates.G(i, j); };
    Eigen::Matrix4d m;
    // clang-format off
    m << G(1,2) + G(1,3), -G(2,1),          -G(3,1),          0.0,
         -G(1,2),         G(2,1) + G(2,4),  0.0,              -G(4,2),
         -G(1,3),         0.0,              G(3,1) + G(3,4),  -G(4,3),
         0.0,             -G(2,4),          -G(3,4),          G(4,2) + G(4,3);
    // clang-format on
    return -2.0 * m;
}

namespace {

constexpr Complex kI{0.0, 1.0};

// Slots in the coherence vector.
enum Slot { k21 = 0, k31, k41, k32, k42, k43 };

}  // namespace

Matrix6cd coherence_generator(const IhbRateSet& rates, const EigenBasis& basis) {
    const double G1 = rates.Gamma[0];
    const double G2 = rates.Gamma[1];
    const double G3 = rates.Gamma[2];
    const double G4 = rates.Gamma[3];
    const auto& L = rates.Lambda;
    const double e1 = basis.eps1;
    const double e2 = basis.eps2;

    Matrix6cd g = Matrix6cd::Zero();
    g(k21, k21) = -(2.0 * G1 + G3 + G4 - kI * e2);
    g(k21, k43) = 2.0 * L[2];
    g(k31, k31) = -(G1 + G2 + 2.0 * G3 - kI * e1);
    g(k31, k42) = 2.0 * L[3];
    g(k41, k41) = -(G1 + G2 + G3 + G4 - kI * e1 - kI * e2);
    g(k32, k32) = -(G1 + G2 + G3 + G4 - kI * e1 + kI * e2);
    g(k42, k42) = -(G1 + G2 + 2.0 * G4 - kI * e1);
    g(k42, k31) = 2.0 * L[1];
    g(k43, k43) = -(2.0 * G2 + G3 + G4 - kI * e2);
    g(k43, k21) = 2.0 * L[0];
    return g;
}

Matrix6cd coherence_generator(const ChbRateSet& rates, const EigenBasis& basis) {
    auto G = [&rates](int i, int j) { return rates.G(i, j); };
    const auto& L = rates.rates.lambda;
    const double e1 = basis.eps1;
    const double e2 = basis.eps2;

    Matrix6cd g = Matrix6cd::Zero();
    g(k21, k21) = -(G(2, 1) + G(1, 2) + G(1, 3) + G(2, 4) - kI * e2);
    g(k21, k43) = 2.0 * L[2];
    g(k31, k31) = -(G(1, 2) + G(3, 1) + G(1, 3) + G(3, 4) - kI * e1);
    g(k31, k42) = 2.0 * L[3];
    g(k41, k41) = -(G(1, 2) + G(1, 3) + G(4, 2) + G(4, 3) - kI * e1 - kI * e2);
    g(k32, k32) = -(G(2, 1) + G(3, 1) + G(2, 4) + G(3, 4) - kI * e1 + kI * e2);
    g(k42, k42) = -(G(2, 1) + G(4, 2) + G(2, 4) + G(4, 3) - kI * e1);
    g(k42, k31) = 2.0 * L[1];
    g(k43, k43) = -(G(3, 1) + G(4, 2) + G(4, 3) + G(3, 4) - kI * e2);
    g(k43, k21) = 2.0 * L[0];
    return g;
}

Generators make_generators(const IhbRateSet& rates, const EigenBasis& basis) {
    return Generators{bloch_matrix_ihb(rates), coherence_generator(rates, basis)};
}

Generators make_generators(const ChbRateSet& rates, const EigenBasis& basis) {
    return Generators{bloch_matrix_chb(rates), coherence_generator(rates, basis)};
}

double default_horizon(const Generators& gen) {
    Eigen::EigenSolver<Eigen::Matrix4d> pop(gen.population, false);
    Eigen::ComplexEigenSolver<Matrix6cd> coh(gen.coherence, false);
    const double scale = std::max({gen.population.cwiseAbs().maxCoeff(),
                                   gen.coherence.diagonal().real().cwiseAbs().maxCoeff(), 1e-300});
    double slowest = std::numeric_limits<double>::infinity();
    auto consider = [&](double decay) {
        if (decay > 1e-12 * scale) slowest = std::min(slowest, decay);
    };
    for (int i = 0; i < 4; ++i) consider(-pop.eigenvalues()(i).real());
    for (int i = 0; i < 6; ++i) consider(-coh.eigenvalues()(i).real());
    if (!std::isfinite(slowest)) return 0.0;
    return 20.0 / slowest;
}

std::vector<double> linear_grid(double t0, double t1, std::size_t points) {
    if (points < 2) fail(ErrorKind::Validation, "a time grid needs at least two points");
    std::vector<double> grid(points);
    for (std::size_t k = 0; k < points; ++k) {
        grid[k] = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    grid.back() = t1;
    return grid;
}

namespace {

void check_grid(std::span<const double> grid) {
    if (grid.empty()) fail(ErrorKind::Validation, "time grid is empty");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!std::isfinite(grid[k])) fail(ErrorKind::Validation, "time grid has non-finite entries");
        if (k > 0 && !(grid[k] > grid[k - 1])) {
            fail(ErrorKind::Validation, "time grid must be strictly increasing");
        }
    }
}

template <typename Scalar, int N>
using Vec = Eigen::Matrix<Scalar, N, 1>;
template <typename Scalar, int N>
using Mat = Eigen::Matrix<Scalar, N, N>;

// Frequencies over decay rates, read from the generator diagonal.
template <typename Scalar, int N>
double stiffness(const Mat<Scalar, N>& a) {
    double max_freq = 0.0;
    double min_rate = std::numeric_limits<double>::infinity();
    for (int i = 0; i < N; ++i) {
        const Complex d(a(i, i));
        max_freq = std::max(max_freq, std::abs(d.imag()));
        if (d.real() < 0.0) min_rate = std::min(min_rate, -d.real());
    }
    if (!std::isfinite(min_rate)) return std::numeric_limits<double>::infinity();
    return max_freq / min_rate;
}

// Solves dx/dt = A x on the grid; `on_step` sees every accepted step (and every
// sample on the exponential path).
template <typename Scalar, int N>
std::vector<Vec<Scalar, N>> integrate_linear(const Mat<Scalar, N>& a, const Vec<Scalar, N>& x0,
                                             std::span<const double> grid, const EvolveOptions& opt,
                                             bool use_exponential,
                                             const std::function<void(const Vec<Scalar, N>&, double)>& on_step) {
    std::vector<Vec<Scalar, N>> out;
    out.reserve(grid.size());
    out.push_back(x0);
    if (grid.size() == 1) return out;

    if (use_exponential) {
        Vec<Scalar, N> x = x0;
        for (std::size_t k = 1; k < grid.size(); ++k) {
            const Mat<Scalar, N> step = (a * Scalar(grid[k] - grid[k - 1])).exp();
            x = step * x;
            if (!x.allFinite()) fail(ErrorKind::ToleranceFailure, "matrix exponential produced non-finite values");
            on_step(x, grid[k]);
            out.push_back(x);
        }
        return out;
    }

    using State = std::vector<Scalar>;
    auto system = [&a](const State& x, State& dxdt, double /*t*/) {
        Eigen::Map<Vec<Scalar, N>>(dxdt.data()) = a * Eigen::Map<const Vec<Scalar, N>>(x.data());
    };
    auto stepper = odeint::make_dense_output(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<State>());

    const double norm = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
    const double span = grid.back() - grid.front();
    const double dt0 = std::min(0.01 / norm, span);
    State x(x0.data(), x0.data() + N);
    stepper.initialize(x, grid.front(), dt0);

    State sample(N);
    std::size_t steps = 0;
    try {
        for (std::size_t k = 1; k < grid.size(); ++k) {
            while (stepper.current_time() < grid[k]) {
                const double before = stepper.current_time();
                stepper.do_step(system);
                if (++steps > opt.max_steps) {
                    fail(ErrorKind::ToleranceFailure, "step budget exhausted before reaching t = " +
                                                          std::to_string(grid[k]));
                }
                const double after = stepper.current_time();
                if (!(after > before) || after - before < 1e-15 * std::max(1.0, std::abs(after))) {
                    fail(ErrorKind::ToleranceFailure, "step size underflow");
                }
                const Eigen::Map<const Vec<Scalar, N>> cur(stepper.current_state().data());
                if (!cur.allFinite()) fail(ErrorKind::ToleranceFailure, "integration produced non-finite values");
                on_step(cur, after);
            }
            stepper.calc_state(grid[k], sample);
            out.push_back(Eigen::Map<const Vec<Scalar, N>>(sample.data()));
        }
    } catch (const odeint::step_adjustment_error& e) {
        fail(ErrorKind::ToleranceFailure, e.what());
    }
    return out;
}

}  // namespace

Trajectory evolve(const EigenState& state0, const Generators& gen, std::span<const double> t_grid,
                  const EvolveOptions& options) {
    if (!state0.satisfies_invariants()) fail(ErrorKind::Validation, "initial eigenstate is not a valid density matrix");
    check_grid(t_grid);

    bool exponential = options.method == Integrator::MatrixExponential;
    if (options.method == Integrator::Auto) {
        exponential = stiffness<Complex, 6>(gen.coherence) > options.stiffness_ratio;
    }

    const Eigen::Vector4d x0(state0.pop[0], state0.pop[1], state0.pop[2], state0.pop[3]);
    const double trace0 = x0.sum();
    auto trace_check = [&](const Eigen::Vector4d& x, double t) {
        if (std::abs(x.sum() - trace0) > options.trace_tolerance) {
            std::ostringstream os;
            os << "population trace drifted by " << (x.sum() - trace0) << " at t = " << t;
            fail(ErrorKind::InvariantBreach, os.str());
        }
    };
    const auto pops = integrate_linear<double, 4>(gen.population, x0, t_grid, options, exponential, trace_check);

    Vec<Complex, 6> c0;
    for (int k = 0; k < 6; ++k) c0(k) = state0.coh[static_cast<std::size_t>(k)];
    const auto cohs = integrate_linear<Complex, 6>(gen.coherence, c0, t_grid, options, exponential,
                                                   [](const Vec<Complex, 6>&, double) {});

    Trajectory traj;
    traj.times.assign(t_grid.begin(), t_grid.end());
    traj.states.resize(t_grid.size());
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        for (int i = 0; i < 4; ++i) traj.states[k].pop[static_cast<std::size_t>(i)] = pops[k](i);
        for (int i = 0; i < 6; ++i) traj.states[k].coh[static_cast<std::size_t>(i)] = cohs[k](i);
    }
    return traj;
}

// ---- phenomenological master equation ----

namespace {

using Op = Eigen::Matrix4cd;

Op kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Op out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return out;
}

// Single-TLS operators in the (|e>, |g>) ordering.
Eigen::Matrix2cd lowering() {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(1, 0) = 1.0;
    return m;
}

Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

// D[a] rho = 2 a rho a^+ - a^+ a rho - rho a^+ a
Op dissipator(const Op& a, const Op& rho) {
    const Op ad = a.adjoint();
    return 2.0 * a * rho * ad - ad * a * rho - rho * ad * a;
}

Eigen::Matrix<Complex, 16, 1> vectorize(const Op& rho) {
    Eigen::Matrix<Complex, 16, 1> v;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) v(4 * i + j) = rho(i, j);
    return v;
}

Op unvectorize(const Eigen::Matrix<Complex, 16, 1>& v) {
    Op rho;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rho(i, j) = v(4 * i + j);
    return rho;
}

}  // namespace

SigmaZ bare_sigma_z(const BareDensityMatrix& rho) {
    const auto& m = rho.matrix();
    const double p0 = m(0, 0).real();
    const double p1 = m(1, 1).real();
    const double p2 = m(2, 2).real();
    const double p3 = m(3, 3).real();
    return SigmaZ{p0 + p1 - p2 - p3, p0 - p1 + p2 - p3};
}

Matrix16cd phenomenological_liouvillian(const SystemParams& params, const IhbBathConfig& baths) {
    baths.validate();
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Op sm1 = kron2(lowering(), id);
    const Op sm2 = kron2(id, lowering());
    const Op h = 0.5 * params.omega1() * kron2(pauli_z(), id) + 0.5 * params.omega2() * kron2(id, pauli_z()) +
                 params.xi() * (sm1.adjoint() * sm2 + sm1 * sm2.adjoint());

    const double n1 = thermal_occupation(params.omega1(), baths.T1);
    const double n2 = thermal_occupation(params.omega2(), baths.T2);
    const double g1 = baths.gamma1;
    const double g2 = baths.gamma2;

    auto apply = [&](const Op& rho) -> Op {
        Op out = kI * (rho * h - h * rho);
        out += 0.5 * g1 * (n1 + 1.0) * dissipator(sm1, rho) + 0.5 * g1 * n1 * dissipator(sm1.adjoint(), rho);
        out += 0.5 * g2 * (n2 + 1.0) * dissipator(sm2, rho) + 0.5 * g2 * n2 * dissipator(sm2.adjoint(), rho);
        return out;
    };

    Matrix16cd l;
    for (int k = 0; k < 16; ++k) {
        Op unit = Op::Zero();
        unit(k / 4, k % 4) = 1.0;
        l.col(k) = vectorize(apply(unit));
    }
    return l;
}

BareDensityMatrix phenomenological_steady(const SystemParams& params, const IhbBathConfig& baths) {
    const Matrix16cd l = phenomenological_liouvillian(params, baths);
    Eigen::JacobiSVD<Matrix16cd> svd(l, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(14) < 1e-10 * sv(0)) {
        fail(ErrorKind::KernelDimension, "phenomenological generator has a degenerate steady state");
    }
    Op rho = unvectorize(svd.matrixV().col(15));
    rho /= rho.trace();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return BareDensityMatrix::unchecked(rho);
}

BareTrajectory phenomenological_evolve(const SystemParams& params, const IhbBathConfig& baths,
                                       const BareDensityMatrix& rho0, std::span<const double> t_grid,
                                       const EvolveOptions& options) {
    check_grid(t_grid);
    const Matrix16cd l = phenomenological_liouvillian(params, baths);
    bool exponential = options.method == Integrator::MatrixExponential;
    if (options.method == Integrator::Auto) exponential = stiffness<Complex, 16>(l) > options.stiffness_ratio;

    const auto x0 = vectorize(rho0.matrix());
    const Complex trace0 = rho0.matrix().trace();
    auto trace_check = [&](const Eigen::Matrix<Complex, 16, 1>& x, double t) {
        const Complex tr = x(0) + x(5) + x(10) + x(15);
        if (std::abs(tr - trace0) > options.trace_tolerance) {
            std::ostringstream os;
            os << "trace drifted by " << std::abs(tr - trace0) << " at t = " << t;
            fail(ErrorKind::InvariantBreach, os.str());
        }
    };
    const auto xs = integrate_linear<Complex, 16>(l, x0, t_grid, options, exponential, trace_check);

    BareTrajectory traj;
    traj.times.assign(t_grid.begin(), t_grid.end());
    for (const auto& x : xs) {
        auto rho = BareDensityMatrix::unchecked(unvectorize(x));
        traj.sigma_z.push_back(bare_sigma_z(rho));
        traj.states.push_back(rho);
    }
    traj.steady = phenomenological_steady(params, baths);
    traj.steady_sigma_z = bare_sigma_z(traj.steady);
    return traj;
}

BareDensityMatrix random_density_matrix(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Op g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = Complex(normal(rng), normal(rng));
    Op rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return BareDensityMatrix::create(rho);
}

EigenState random_eigen_state(std::mt19937_64& rng) {
    return EigenState::from_matrix(random_density_matrix(rng).matrix());
}

}  // namespace qtherm
