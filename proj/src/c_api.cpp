#include "qtherm/qtherm.h"

#include "qtherm/dynamics.hpp"
#include "qtherm/entangle.hpp"
#include "qtherm/error.hpp"
#include "qtherm/scenario.hpp"
#include "qtherm/steady.hpp"
#include "qtherm/verify.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <thread>

using namespace qtherm;

struct qtherm_model {
    SystemParams params;
    EigenBasis basis;
    Generators generators;
    TemperatureReport report;
};

namespace {

thread_local std::string g_last_error;

qtherm_status status_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Validation: return QTHERM_ERR_VALIDATION;
        case ErrorKind::Io: return QTHERM_ERR_IO;
        default: return QTHERM_ERR_PHYSICS;
    }
}

template <typename Fn>
qtherm_status guarded(Fn&& fn) {
    g_last_error.clear();
    try {
        return fn();
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_for(e.kind());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return QTHERM_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return QTHERM_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return QTHERM_ERR_INTERNAL;
    }
}

qtherm_status argument_error(const char* what) {
    g_last_error = what;
    return QTHERM_ERR_ARGUMENT;
}

qtherm_temperature to_c(const Temperature& t) {
    qtherm_temperature out{};
    out.value = t.value;
    switch (t.tag) {
        case Temperature::Tag::Finite: out.tag = QTHERM_T_FINITE; break;
        case Temperature::Tag::Infinite: out.tag = QTHERM_T_INFINITE; break;
        case Temperature::Tag::Negative: out.tag = QTHERM_T_NEGATIVE; break;
        case Temperature::Tag::Undefined: out.tag = QTHERM_T_UNDEFINED; break;
    }
    return out;
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

unsigned resolve_threads(unsigned threads) {
    if (threads != 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace

extern "C" {

const char* qtherm_version(void) {
#ifdef QTHERM_VERSION
    return QTHERM_VERSION;
#else
    return "unknown";
#endif
}

const char* qtherm_last_error(void) { return g_last_error.c_str(); }

qtherm_status qtherm_system_from_angle(double omega_m, double xi, double theta, qtherm_system* out) {
    if (!out) return argument_error("out is null");
    return guarded([&] {
        const auto p = SystemParams::from_mixing_angle(omega_m, xi, theta);
        *out = qtherm_system{p.omega1(), p.omega2(), p.xi()};
        return QTHERM_OK;
    });
}

qtherm_status qtherm_model_create_ihb(const qtherm_system* system, const qtherm_ihb_baths* baths, qtherm_model** out) {
    if (!system || !baths || !out) return argument_error("null argument");
    *out = nullptr;
    return guarded([&] {
        const auto params = SystemParams::create(system->omega1, system->omega2, system->xi);
        const IhbBathConfig b{baths->T1, baths->T2, baths->gamma1, baths->gamma2};
        const auto basis = build_eigenbasis(params);
        const auto rates = ihb_rates(basis, b);
        *out = new qtherm_model{params, basis, make_generators(rates, basis), ihb_report(params, b)};
        return QTHERM_OK;
    });
}

qtherm_status qtherm_model_create_chb(const qtherm_system* system, const qtherm_chb_bath* bath, qtherm_model** out) {
    if (!system || !bath || !out) return argument_error("null argument");
    *out = nullptr;
    return guarded([&] {
        const auto params = SystemParams::create(system->omega1, system->omega2, system->xi);
        const ChbBathConfig b{bath->T, bath->gamma1_e1, bath->gamma2_e1, bath->gamma1_e2, bath->gamma2_e2};
        const auto basis = build_eigenbasis(params);
        const auto rates = chb_rates(basis, b);
        *out = new qtherm_model{params, basis, make_generators(rates, basis), chb_report(params, b, bath->tau33_0)};
        return QTHERM_OK;
    });
}

void qtherm_model_destroy(qtherm_model* model) { delete model; }

qtherm_status qtherm_model_mixing_angle(const qtherm_model* model, double* theta) {
    if (!model || !theta) return argument_error("null argument");
    *theta = model->basis.theta();
    return QTHERM_OK;
}

qtherm_status qtherm_model_regime(const qtherm_model* model, int* regime) {
    if (!model || !regime) return argument_error("null argument");
    switch (model->report.regime) {
        case Regime::IHB: *regime = QTHERM_REGIME_IHB; break;
        case Regime::CHB: *regime = QTHERM_REGIME_CHB; break;
        case Regime::DARK: *regime = QTHERM_REGIME_DARK; break;
    }
    return QTHERM_OK;
}

qtherm_status qtherm_model_steady_populations(const qtherm_model* model, double pop[4]) {
    if (!model || !pop) return argument_error("null argument");
    for (std::size_t i = 0; i < 4; ++i) pop[i] = model->report.steady.pop[i];
    return QTHERM_OK;
}

qtherm_status qtherm_model_sigma_z(const qtherm_model* model, double sz[2]) {
    if (!model || !sz) return argument_error("null argument");
    sz[0] = model->report.sigma_z.tls1;
    sz[1] = model->report.sigma_z.tls2;
    return QTHERM_OK;
}

qtherm_status qtherm_model_eigen_temperatures(const qtherm_model* model, qtherm_temperature* out, size_t capacity,
                                              size_t* count) {
    if (!model || !count) return argument_error("null argument");
    const auto& eigen = model->report.eigen;
    *count = eigen.size();
    if (!out || capacity < eigen.size()) return argument_error("output buffer too small");
    for (std::size_t i = 0; i < eigen.size(); ++i) out[i] = to_c(eigen[i].second);
    return QTHERM_OK;
}

qtherm_status qtherm_model_bare_temperatures(const qtherm_model* model, qtherm_temperature out[2]) {
    if (!model || !out) return argument_error("null argument");
    out[0] = to_c(model->report.bare[0]);
    out[1] = to_c(model->report.bare[1]);
    return QTHERM_OK;
}

qtherm_status qtherm_model_steady_concurrence(const qtherm_model* model, double* concurrence) {
    if (!model || !concurrence) return argument_error("null argument");
    return guarded([&] {
        *concurrence = steady_concurrence(model->report.steady, model->basis.theta());
        return QTHERM_OK;
    });
}

qtherm_status qtherm_model_evolve(const qtherm_model* model, const double pop0[4], const double* times, size_t n_times,
                                  double* pops_out) {
    if (!model || !pop0 || !times || !pops_out || n_times == 0) return argument_error("null argument or empty grid");
    return guarded([&] {
        EigenState s0;
        for (std::size_t i = 0; i < 4; ++i) s0.pop[i] = pop0[i];
        const auto traj = evolve(s0, model->generators, std::span<const double>(times, n_times));
        for (std::size_t k = 0; k < n_times; ++k) {
            for (std::size_t i = 0; i < 4; ++i) pops_out[4 * k + i] = traj.states[k].pop[i];
        }
        return QTHERM_OK;
    });
}

qtherm_status qtherm_run_figure(const char* figure_id, const char* out_path, const char* format) {
    if (!figure_id) return argument_error("figure id is null");
    return guarded([&] {
        const Scenario s = figure_scenario(figure_id);
        const OutputFormat f = format ? parse_format(format) : OutputFormat::Csv;
        const std::string path = out_path ? std::string(out_path)
                                          : default_output_dir() + "/" + figure_id + "." + to_string(f);
        const Table t = run_sweep(s, resolve_threads(0));
        write_file(path, render(t, f));
        return QTHERM_OK;
    });
}

qtherm_status qtherm_run_scenario(const char* scenario_path, const char* out_path, const char* format,
                                  unsigned threads) {
    if (!scenario_path) return argument_error("scenario path is null");
    return guarded([&] {
        const Scenario s = load_scenario(scenario_path);
        const OutputFormat f = format ? parse_format(format) : s.format;
        std::string path;
        if (out_path) {
            path = out_path;
        } else if (s.output_path) {
            path = *s.output_path;
        } else {
            path = default_output_dir() + "/" + s.name + "." + to_string(f);
        }
        const Table t = run_sweep(s, resolve_threads(threads));
        write_file(path, render(t, f));
        return QTHERM_OK;
    });
}

qtherm_status qtherm_run_verify(const char* suite, char** report_json) {
    if (!suite || !report_json) return argument_error("null argument");
    *report_json = nullptr;
    return guarded([&] {
        const VerifyReport r = run_verify(suite);
        *report_json = copy_string(r.to_json());
        if (!r.passed()) {
            g_last_error = "verification suite " + r.suite + " reported failures";
            return QTHERM_ERR_VERIFY;
        }
        return QTHERM_OK;
    });
}

void qtherm_free_string(char* s) { std::free(s); }

}  // extern "C"
