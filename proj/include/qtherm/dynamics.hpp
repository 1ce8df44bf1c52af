#pragma once

// Optical Bloch equations of the coupled pair in the eigenbasis. Populations and
// coherences obey decoupled linear systems:
//   d/dt (tau_11, tau_22, tau_33, tau_44)^T = M X
//   d/dt (rho_21, rho_31, rho_41, rho_32, rho_42, rho_43)^T = G c
// where rho_ij = <lambda_i|rho|lambda_j>. A bare-basis phenomenological master
// equation with local dissipators is provided for comparison.

#include "qtherm/rates.hpp"
#include "qtherm/spectrum.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace qtherm {

using Matrix6cd = Eigen::Matrix<Complex, 6, 6>;
using Matrix16cd = Eigen::Matrix<Complex, 16, 16>;

Eigen::Matrix4d bloch_matrix_ihb(const IhbRateSet& rates);
Eigen::Matrix4d bloch_matrix_chb(const ChbRateSet& rates);

Matrix6cd coherence_generator(const IhbRateSet& rates, const EigenBasis& basis);
Matrix6cd coherence_generator(const ChbRateSet& rates, const EigenBasis& basis);

struct Generators {
    Eigen::Matrix4d population;
    Matrix6cd coherence;
};

Generators make_generators(const IhbRateSet& rates, const EigenBasis& basis);
Generators make_generators(const ChbRateSet& rates, const EigenBasis& basis);

// 20 / (smallest non-zero decay rate among the diagonal generator entries).
double default_horizon(const Generators& gen);

enum class Integrator {
    Auto,               // matrix exponential once max|frequency| / min rate exceeds the stiffness ratio
    RungeKutta,         // adaptive Dormand-Prince 5(4)
    MatrixExponential,
};

struct EvolveOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double trace_tolerance = 1e-8;
    double stiffness_ratio = 1e4;
    std::size_t max_steps = 2'000'000;
    Integrator method = Integrator::Auto;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<EigenState> states;
};

// state0 is placed at t_grid.front(). Throws Validation for an invalid state or a
// grid that is not strictly increasing, ToleranceFailure when step control
// collapses, InvariantBreach when the trace drifts by more than trace_tolerance.
Trajectory evolve(const EigenState& state0, const Generators& gen, std::span<const double> t_grid,
                  const EvolveOptions& options = {});

// Uniform grid of `points` samples over [t0, t1].
std::vector<double> linear_grid(double t0, double t1, std::size_t points);

// ---- phenomenological bare-basis master equation ----

// Row-major vectorisation: element rho_ij sits at index 4 i + j.
Matrix16cd phenomenological_liouvillian(const SystemParams& params, const IhbBathConfig& baths);

struct BareTrajectory {
    std::vector<double> times;
    std::vector<BareDensityMatrix> states;
    std::vector<SigmaZ> sigma_z;
    BareDensityMatrix steady = BareDensityMatrix::basis_state(3);
    SigmaZ steady_sigma_z;
};

BareDensityMatrix phenomenological_steady(const SystemParams& params, const IhbBathConfig& baths);
BareTrajectory phenomenological_evolve(const SystemParams& params, const IhbBathConfig& baths,
                                       const BareDensityMatrix& rho0, std::span<const double> t_grid,
                                       const EvolveOptions& options = {});

SigmaZ bare_sigma_z(const BareDensityMatrix& rho);

// ---- initial-state library ----

// Ginibre-distributed full-rank density matrix.
BareDensityMatrix random_density_matrix(std::mt19937_64& rng);
EigenState random_eigen_state(std::mt19937_64& rng);

}  // namespace qtherm
