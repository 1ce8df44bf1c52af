#pragma once

// Concurrence of the two TLSs: closed form for X-shaped density matrices and the
// general Wootters construction, plus the steady-state sudden-death search.

#include "qtherm/rates.hpp"
#include "qtherm/spectrum.hpp"
#include "qtherm/steady.hpp"

#include <array>

namespace qtherm {

// Bare-basis matrix whose only non-zero off-diagonal entries are rho_14 and
// rho_23 (and their conjugates).
class XStateMatrix {
public:
    static XStateMatrix create(const std::array<double, 4>& diag, Complex rho14, Complex rho23);

    const std::array<double, 4>& diag() const { return diag_; }
    Complex rho14() const { return rho14_; }
    Complex rho23() const { return rho23_; }
    Eigen::Matrix4cd matrix() const;

private:
    XStateMatrix(const std::array<double, 4>& d, Complex r14, Complex r23) : diag_(d), rho14_(r14), rho23_(r23) {}

    std::array<double, 4> diag_;
    Complex rho14_;
    Complex rho23_;
};

XStateMatrix assemble_steady_xstate(const SteadyPopulations& pop, double theta);

// C = 2 max{0, |rho23| - sqrt(rho11 rho44), |rho14| - sqrt(rho22 rho33)}
double concurrence_x(const XStateMatrix& rho);

// Wootters concurrence. The square roots of the eigenvalues of rho rho~ are the
// singular values of sqrt(rho) Y sqrt(rho)^*, Y = sigma_y (x) sigma_y; for full-rank
// input a direct eigensolve of rho rho~ cross-checks them (EigensolverFailure when
// its residual exceeds 1e-8).
double concurrence_general(const BareDensityMatrix& rho);

// |<mu_32>| - sqrt(<mu_11><mu_44>) for a steady state: the quantity whose
// positive part (times 2) is the concurrence.
double steady_entanglement_margin(const SteadyPopulations& pop, double theta);
double steady_concurrence(const SteadyPopulations& pop, double theta);

// Largest temperature in [T_lo, T_hi] at which the steady concurrence dies,
// located on a uniform grid and refined by bisection to 1e-8. The IHB form sets
// T1 = T2 = T; the template's temperatures are ignored.
double threshold_temperature(const SystemParams& params, const IhbBathConfig& bath_template, double T_lo,
                             double T_hi);
double threshold_temperature(const SystemParams& params, const ChbBathConfig& bath_template, double T_lo,
                             double T_hi);

}  // namespace qtherm
