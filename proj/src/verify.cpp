#include "qtherm/verify.hpp"

#include "qtherm/dynamics.hpp"
#include "qtherm/entangle.hpp"
#include "qtherm/error.hpp"
#include "qtherm/steady.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace qtherm {

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string VerifyReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["suite"] = suite;
    doc["passed"] = passed();
    doc["checks"] = nlohmann::ordered_json::array();
    for (const Check& c : checks) {
        nlohmann::ordered_json j;
        j["name"] = c.name;
        j["tolerance"] = c.tolerance;
        j["observed"] = c.observed;
        j["passed"] = c.passed;
        if (!c.detail.empty()) j["detail"] = c.detail;
        doc["checks"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> s{"oracles", "invariants", "dynamics"};
    return s;
}

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct IhbDraw {
    SystemParams params;
    IhbBathConfig baths;
};

struct ChbDraw {
    SystemParams params;
    ChbBathConfig bath;
    double tau33_0{};
};

double draw_theta(Rng& rng, double omega_m, double xi) {
    const ThetaRange r = sweep_theta_range(omega_m, xi);
    return uniform(rng, r.lo, r.hi);
}

IhbDraw draw_ihb(Rng& rng) {
    const double wm = uniform(rng, 10.0, 30.0);
    const double xi = uniform(rng, 0.5, 10.0);
    const double theta = draw_theta(rng, wm, xi);
    return {SystemParams::from_mixing_angle(wm, xi, theta),
            IhbBathConfig{uniform(rng, 2.0, 30.0), uniform(rng, 2.0, 30.0), uniform(rng, 0.2, 2.0),
                          uniform(rng, 0.2, 2.0)}};
}

ChbDraw draw_chb(Rng& rng) {
    const double wm = uniform(rng, 10.0, 30.0);
    const double xi = uniform(rng, 0.5, 10.0);
    double theta = kHalfPi;
    while (std::abs(theta - kHalfPi) < 0.05) theta = draw_theta(rng, wm, xi);
    return {SystemParams::from_mixing_angle(wm, xi, theta),
            ChbBathConfig{uniform(rng, 2.0, 30.0), uniform(rng, 0.2, 2.0), uniform(rng, 0.2, 2.0),
                          uniform(rng, 0.2, 2.0), uniform(rng, 0.2, 2.0)},
            0.0};
}

ChbDraw draw_dark(Rng& rng) {
    const double wm = uniform(rng, 10.0, 30.0);
    const double xi = uniform(rng, 0.5, 10.0);
    return {SystemParams::from_mixing_angle(wm, xi, kHalfPi),
            ChbBathConfig::uniform(uniform(rng, 2.0, 30.0), uniform(rng, 0.2, 2.0), uniform(rng, 0.2, 2.0)),
            uniform(rng, 0.0, 1.0)};
}

XStateMatrix draw_xstate(Rng& rng) {
    std::array<double, 4> d{};
    double sum = 0.0;
    for (double& x : d) {
        x = uniform(rng, 0.0, 1.0);
        sum += x;
    }
    for (double& x : d) x /= sum;
    const double phi14 = uniform(rng, 0.0, 4.0 * kHalfPi);
    const double phi23 = uniform(rng, 0.0, 4.0 * kHalfPi);
    const Complex r14 = std::polar(uniform(rng, 0.0, 1.0) * std::sqrt(d[0] * d[3]), phi14);
    const Complex r23 = std::polar(uniform(rng, 0.0, 1.0) * std::sqrt(d[1] * d[2]), phi23);
    return XStateMatrix::create(d, r14, r23);
}

double max_abs_diff(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < 4; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// Worst observed deviation, or +inf when the body throws.
Check measure(const std::string& name, double tol, const std::function<double()>& body) {
    Check c;
    c.name = name;
    c.tolerance = tol;
    try {
        c.observed = body();
        c.passed = c.observed <= tol;
    } catch (const std::exception& e) {
        c.observed = std::numeric_limits<double>::infinity();
        c.passed = false;
        c.detail = e.what();
    }
    return c;
}

constexpr int kDraws = 100;

std::vector<Check> oracle_checks(std::uint64_t seed) {
    std::vector<Check> out;
    out.push_back(measure("ihb_closed_form_vs_nullspace", 1e-12, [&] {
        Rng rng(seed);
        double worst = 0.0;
        for (int k = 0; k < kDraws; ++k) {
            const auto d = draw_ihb(rng);
            const auto rates = ihb_rates(build_eigenbasis(d.params), d.baths);
            worst = std::max(worst, max_abs_diff(steady_ihb(rates).pop, steady_nullspace(bloch_matrix_ihb(rates)).pop));
        }
        return worst;
    }));
    out.push_back(measure("chb_closed_form_vs_nullspace", 1e-12, [&] {
        Rng rng(seed + 1);
        double worst = 0.0;
        for (int k = 0; k < kDraws; ++k) {
            const auto d = draw_chb(rng);
            const auto rates = chb_rates(build_eigenbasis(d.params), d.bath);
            worst = std::max(worst, max_abs_diff(steady_chb(rates).pop, steady_nullspace(bloch_matrix_chb(rates)).pop));
        }
        return worst;
    }));
    out.push_back(measure("dark_closed_form_vs_nullspace", 1e-12, [&] {
        Rng rng(seed + 2);
        double worst = 0.0;
        for (int k = 0; k < kDraws; ++k) {
            const auto d = draw_dark(rng);
            const auto rates = chb_rates(build_eigenbasis(d.params), d.bath);
            const auto closed = steady_dark(rates, d.tau33_0);
            const auto kernel = steady_nullspace(bloch_matrix_chb(rates), d.tau33_0);
            worst = std::max(worst, max_abs_diff(closed.pop, kernel.pop));
        }
        return worst;
    }));
    out.push_back(measure("concurrence_x_vs_general", 1e-10, [&] {
        Rng rng(seed + 3);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const auto x = draw_xstate(rng);
            worst = std::max(worst, std::abs(concurrence_x(x) - concurrence_general(BareDensityMatrix::create(x.matrix()))));
        }
        return worst;
    }));
    out.push_back(measure("steady_xstate_concurrence_vs_general", 1e-10, [&] {
        Rng rng(seed + 4);
        double worst = 0.0;
        for (int k = 0; k < kDraws; ++k) {
            const auto d = draw_ihb(rng);
            const auto basis = build_eigenbasis(d.params);
            const auto ss = steady_ihb(ihb_rates(basis, d.baths));
            const auto x = assemble_steady_xstate(ss, basis.theta());
            const auto bare = eigen_to_bare(ss.state(), basis.theta());
            worst = std::max(worst, (x.matrix() - bare.matrix()).cwiseAbs().maxCoeff());
            worst = std::max(worst, std::abs(concurrence_x(x) - concurrence_general(BareDensityMatrix::create(x.matrix()))));
        }
        return worst;
    }));
    out.push_back(measure("representation_change_roundtrip", 1e-12, [&] {
        Rng rng(seed + 5);
        double worst = 0.0;
        for (int k = 0; k < kDraws; ++k) {
            const double theta = uniform(rng, 0.01, 2.0 * kHalfPi - 0.01);
            const EigenState e = random_eigen_state(rng);
            const auto bare = eigen_to_bare(e, theta);
            const EigenState back = bare_to_eigen(bare, theta);
            worst = std::max(worst, (back.matrix() - e.matrix()).cwiseAbs().maxCoeff());
        }
        return worst;
    }));
    out.push_back(measure("sigma_z_closed_form_vs_populations", 1e-12, [&] {
        Rng rng(seed + 6);
        double worst = 0.0;
        for (int k = 0; k < kDraws; ++k) {
            const auto d = draw_ihb(rng);
            const auto basis = build_eigenbasis(d.params);
            const auto rates = ihb_rates(basis, d.baths);
            const auto a = sigma_z_ihb(rates, basis);
            const auto b = sigma_z_expectations(steady_ihb(rates).state(), basis.theta());
            worst = std::max({worst, std::abs(a.tls1 - b.tls1), std::abs(a.tls2 - b.tls2)});
            const auto c = draw_chb(rng);
            const auto cb = build_eigenbasis(c.params);
            const auto cr = chb_rates(cb, c.bath);
            const auto x = sigma_z_chb(cr, cb);
            const auto y = sigma_z_expectations(steady_chb(cr).state(), cb.theta());
            worst = std::max({worst, std::abs(x.tls1 - y.tls1), std::abs(x.tls2 - y.tls2)});
        }
        return worst;
    }));
    return out;
}

std::vector<Check> invariant_checks(std::uint64_t seed) {
    std::vector<Check> out;
    const auto fig2_range = sweep_theta_range(20.0, 10.0);
    const auto fig5_range = sweep_theta_range(20.0, 0.1);

    out.push_back(measure("ihb_equal_bath_temperatures", 1e-9, [&] {
        double worst = 0.0;
        for (double theta : linear_grid(fig2_range.lo, fig2_range.hi, 50)) {
            const auto r = ihb_report(SystemParams::from_mixing_angle(20.0, 10.0, theta), IhbBathConfig{10.0, 10.0, 1.0, 1.0});
            for (const auto& [name, t] : r.eigen) {
                if (!t.is_finite()) return std::numeric_limits<double>::infinity();
                worst = std::max(worst, rel_diff(t.value, 10.0));
            }
        }
        return worst;
    }));
    out.push_back(measure("chb_three_temperatures", 1e-9, [&] {
        double worst = 0.0;
        for (double theta : linear_grid(fig5_range.lo, fig5_range.hi, 50)) {
            if (std::abs(theta - kHalfPi) < 1e-6) continue;
            const auto r = chb_report(SystemParams::from_mixing_angle(20.0, 0.1, theta), ChbBathConfig::uniform(10.0, 1.0, 1.0));
            for (const auto& [name, t] : r.eigen) {
                if (!t.is_finite()) return std::numeric_limits<double>::infinity();
                worst = std::max(worst, rel_diff(t.value, 10.0));
            }
        }
        return worst;
    }));
    out.push_back(measure("boltzmann_affine_log_populations", 1e-9, [&] {
        Rng rng(seed + 10);
        double worst = 0.0;
        for (int k = 0; k < kDraws; ++k) {
            auto d = draw_ihb(rng);
            d.baths.T2 = d.baths.T1;
            const auto basis = build_eigenbasis(d.params);
            const auto ss = steady_ihb(ihb_rates(basis, d.baths));
            const auto c = draw_chb(rng);
            const auto cb = build_eigenbasis(c.params);
            const auto cs = steady_chb(chb_rates(cb, c.bath));
            for (int i = 0; i < 3; ++i) {
                const auto u = static_cast<std::size_t>(i);
                const double ihb = std::log(ss.pop[u] / ss.pop[3]) + (basis.energy[u] - basis.energy[3]) / d.baths.T1;
                const double chb = std::log(cs.pop[u] / cs.pop[3]) + (cb.energy[u] - cb.energy[3]) / c.bath.T;
                worst = std::max({worst, std::abs(ihb), std::abs(chb)});
            }
        }
        return worst;
    }));
    out.push_back(measure("chb_detailed_balance", 1e-9, [&] {
        Rng rng(seed + 11);
        double worst = 0.0;
        for (int k = 0; k < kDraws; ++k) {
            const auto c = draw_chb(rng);
            const auto cb = build_eigenbasis(c.params);
            const auto cs = steady_chb(chb_rates(cb, c.bath));
            worst = std::max(worst, rel_diff(cs.pop[0] / cs.pop[1], std::exp(-cb.eps2 / c.bath.T)));
        }
        return worst;
    }));
    out.push_back(measure("eigen_temperatures_within_bath_bounds", 1e-9, [&] {
        double worst = 0.0;
        for (double theta : linear_grid(fig2_range.lo, fig2_range.hi, 401)) {
            const auto r = ihb_report(SystemParams::from_mixing_angle(20.0, 10.0, theta), IhbBathConfig{5.0, 10.0, 1.0, 1.0});
            for (const auto& [name, t] : r.eigen) {
                if (!t.is_finite()) return std::numeric_limits<double>::infinity();
                worst = std::max({worst, 5.0 - t.value, t.value - 10.0});
            }
        }
        return std::max(worst, 0.0);
    }));
    out.push_back(measure("temperature_back_substitution", 1e-10, [&] {
        Rng rng(seed + 12);
        double worst = 0.0;
        auto back = [&worst](const Temperature& t, double gap, double lower, double upper) {
            if (t.tag != Temperature::Tag::Finite && t.tag != Temperature::Tag::Negative) return;
            worst = std::max(worst, rel_diff(std::exp(-gap / t.value), upper / lower));
        };
        for (int k = 0; k < kDraws; ++k) {
            const auto d = draw_ihb(rng);
            const auto basis = build_eigenbasis(d.params);
            const auto r = ihb_report(d.params, d.baths);
            const auto& p = r.steady.pop;
            back(r.eigen[0].second, basis.eps1, p[2], p[0]);
            back(r.eigen[1].second, basis.eps2, p[1], p[0]);
            back(r.bare[0], d.params.omega1(), 1.0 - r.sigma_z.tls1, 1.0 + r.sigma_z.tls1);
            back(r.bare[1], d.params.omega2(), 1.0 - r.sigma_z.tls2, 1.0 + r.sigma_z.tls2);
        }
        return worst;
    }));
    out.push_back(measure("steady_populations_are_states", 1e-12, [&] {
        Rng rng(seed + 13);
        double worst = 0.0;
        for (int k = 0; k < kDraws; ++k) {
            const auto d = draw_ihb(rng);
            const auto c = draw_chb(rng);
            const auto z = draw_dark(rng);
            for (const auto& s : {steady_ihb(ihb_rates(build_eigenbasis(d.params), d.baths)),
                                  steady_chb(chb_rates(build_eigenbasis(c.params), c.bath)),
                                  steady_dark(chb_rates(build_eigenbasis(z.params), z.bath), z.tau33_0)}) {
                double sum = 0.0;
                for (double x : s.pop) {
                    worst = std::max(worst, -x);
                    sum += x;
                }
                worst = std::max(worst, std::abs(sum - 1.0));
            }
        }
        return worst;
    }));
    return out;
}

// Three distinct starting states: ground eigenstate, top eigenstate, random mixed.
std::vector<EigenState> initial_states(Rng& rng) {
    return {EigenState::basis_state(3), EigenState::basis_state(0), random_eigen_state(rng)};
}

double long_time_error(const Generators& gen, const SteadyPopulations& target, Rng& rng) {
    const double horizon = default_horizon(gen);
    const std::vector<double> grid{0.0, horizon};
    double worst = 0.0;
    for (const auto& s0 : initial_states(rng)) {
        const auto traj = evolve(s0, gen, grid);
        worst = std::max(worst, max_abs_diff(traj.states.back().pop, target.pop));
        for (const auto& c : traj.states.back().coh) worst = std::max(worst, std::abs(c));
    }
    return worst;
}

std::vector<Check> dynamics_checks(std::uint64_t seed) {
    std::vector<Check> out;
    constexpr int draws = 10;
    out.push_back(measure("ihb_long_time_vs_closed_form", 1e-7, [&] {
        Rng rng(seed + 20);
        double worst = 0.0;
        for (int k = 0; k < draws; ++k) {
            const auto d = draw_ihb(rng);
            const auto basis = build_eigenbasis(d.params);
            const auto rates = ihb_rates(basis, d.baths);
            worst = std::max(worst, long_time_error(make_generators(rates, basis), steady_ihb(rates), rng));
        }
        return worst;
    }));
    out.push_back(measure("chb_long_time_vs_closed_form", 1e-7, [&] {
        Rng rng(seed + 21);
        double worst = 0.0;
        for (int k = 0; k < draws; ++k) {
            const auto d = draw_chb(rng);
            const auto basis = build_eigenbasis(d.params);
            const auto rates = chb_rates(basis, d.bath);
            worst = std::max(worst, long_time_error(make_generators(rates, basis), steady_chb(rates), rng));
        }
        return worst;
    }));
    out.push_back(measure("dark_state_is_conserved", 1e-10, [&] {
        Rng rng(seed + 22);
        double worst = 0.0;
        for (int k = 0; k < draws; ++k) {
            const auto d = draw_dark(rng);
            const auto basis = build_eigenbasis(d.params);
            const auto gen = make_generators(chb_rates(basis, d.bath), basis);
            const auto traj = evolve(EigenState::basis_state(2), gen, linear_grid(0.0, 100.0, 201));
            for (const auto& s : traj.states) worst = std::max(worst, std::abs(s.pop[2] - 1.0));
        }
        return worst;
    }));
    out.push_back(measure("dark_long_time_vs_closed_form", 1e-7, [&] {
        Rng rng(seed + 23);
        double worst = 0.0;
        for (int k = 0; k < draws; ++k) {
            const auto d = draw_dark(rng);
            const auto basis = build_eigenbasis(d.params);
            const auto rates = chb_rates(basis, d.bath);
            const auto gen = make_generators(rates, basis);
            const EigenState s0 = random_eigen_state(rng);
            const auto traj = evolve(s0, gen, std::vector<double>{0.0, default_horizon(gen)});
            worst = std::max(worst, max_abs_diff(traj.states.back().pop, steady_dark(rates, s0.pop[2]).pop));
        }
        return worst;
    }));
    out.push_back(measure("runge_kutta_vs_matrix_exponential", 1e-7, [&] {
        Rng rng(seed + 24);
        double worst = 0.0;
        for (int k = 0; k < draws; ++k) {
            const auto d = draw_ihb(rng);
            const auto basis = build_eigenbasis(d.params);
            const auto gen = make_generators(ihb_rates(basis, d.baths), basis);
            const EigenState s0 = random_eigen_state(rng);
            const auto grid = linear_grid(0.0, 2.0, 21);
            EvolveOptions rk;
            rk.method = Integrator::RungeKutta;
            EvolveOptions ex;
            ex.method = Integrator::MatrixExponential;
            const auto a = evolve(s0, gen, grid, rk);
            const auto b = evolve(s0, gen, grid, ex);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                worst = std::max(worst, (a.states[i].matrix() - b.states[i].matrix()).cwiseAbs().maxCoeff());
            }
        }
        return worst;
    }));
    out.push_back(measure("phenomenological_long_time_vs_kernel", 1e-7, [&] {
        Rng rng(seed + 25);
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            const auto d = draw_ihb(rng);
            const auto rho0 = random_density_matrix(rng);
            const double rate = std::min(d.baths.gamma1, d.baths.gamma2);
            const auto traj = phenomenological_evolve(d.params, d.baths, rho0, std::vector<double>{0.0, 40.0 / rate});
            worst = std::max(worst, (traj.states.back().matrix() - traj.steady.matrix()).cwiseAbs().maxCoeff());
        }
        return worst;
    }));
    return out;
}

}  // namespace

VerifyReport run_verify(const std::string& suite, std::uint64_t seed) {
    VerifyReport r;
    r.suite = suite;
    if (suite == "oracles") {
        r.checks = oracle_checks(seed);
    } else if (suite == "invariants") {
        r.checks = invariant_checks(seed);
    } else if (suite == "dynamics") {
        r.checks = dynamics_checks(seed);
    } else {
        fail(ErrorKind::Validation, "unknown verification suite \"" + suite + "\" (expected oracles, invariants or dynamics)");
    }
    return r;
}

}  // namespace qtherm
