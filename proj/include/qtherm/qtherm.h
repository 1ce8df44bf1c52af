/* C interface to the qtherm library: thermalization and steady-state
 * entanglement of two dipole-coupled two-level systems.
 *
 * Every function returns a qtherm_status. On failure a description is available
 * from qtherm_last_error() on the calling thread until its next qtherm call. */
#ifndef QTHERM_H
#define QTHERM_H

#include <stddef.h>

#if defined(_WIN32)
#define QTHERM_API __declspec(dllexport)
#else
#define QTHERM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qtherm_status {
    QTHERM_OK = 0,
    QTHERM_ERR_VALIDATION = 1, /* malformed input or scenario */
    QTHERM_ERR_PHYSICS = 2,    /* parameters outside the model's domain, solver failures */
    QTHERM_ERR_VERIFY = 3,     /* a verification suite reported a failed check */
    QTHERM_ERR_IO = 4,
    QTHERM_ERR_ARGUMENT = 5,   /* null pointer or too-small buffer */
    QTHERM_ERR_INTERNAL = 6
} qtherm_status;

typedef enum qtherm_regime { QTHERM_REGIME_IHB = 0, QTHERM_REGIME_CHB = 1, QTHERM_REGIME_DARK = 2 } qtherm_regime;

typedef enum qtherm_temperature_tag {
    QTHERM_T_FINITE = 0,
    QTHERM_T_INFINITE = 1,
    QTHERM_T_NEGATIVE = 2,
    QTHERM_T_UNDEFINED = 3
} qtherm_temperature_tag;

typedef struct qtherm_temperature {
    double value; /* set for FINITE and NEGATIVE */
    int tag;      /* qtherm_temperature_tag */
} qtherm_temperature;

typedef struct qtherm_system {
    double omega1;
    double omega2;
    double xi;
} qtherm_system;

typedef struct qtherm_ihb_baths {
    double T1;
    double T2;
    double gamma1; /* decay rate at eps1 */
    double gamma2; /* decay rate at eps2 */
} qtherm_ihb_baths;

typedef struct qtherm_chb_bath {
    double T;
    double gamma1_e1; /* TLS 1 at eps1 */
    double gamma2_e1; /* TLS 2 at eps1 */
    double gamma1_e2;
    double gamma2_e2;
    double tau33_0;   /* initial lambda_3 population, used when lambda_3 is dark */
} qtherm_chb_bath;

typedef struct qtherm_model qtherm_model;

QTHERM_API const char* qtherm_version(void);
QTHERM_API const char* qtherm_last_error(void);

/* omega1,2 = omega_m +- xi / tan(theta). */
QTHERM_API qtherm_status qtherm_system_from_angle(double omega_m, double xi, double theta, qtherm_system* out);

QTHERM_API qtherm_status qtherm_model_create_ihb(const qtherm_system* system, const qtherm_ihb_baths* baths,
                                                 qtherm_model** out);
QTHERM_API qtherm_status qtherm_model_create_chb(const qtherm_system* system, const qtherm_chb_bath* bath,
                                                 qtherm_model** out);
QTHERM_API void qtherm_model_destroy(qtherm_model* model);

QTHERM_API qtherm_status qtherm_model_mixing_angle(const qtherm_model* model, double* theta);
QTHERM_API qtherm_status qtherm_model_regime(const qtherm_model* model, int* regime);
/* eigen-basis steady populations tau_11..tau_44 */
QTHERM_API qtherm_status qtherm_model_steady_populations(const qtherm_model* model, double pop[4]);
QTHERM_API qtherm_status qtherm_model_sigma_z(const qtherm_model* model, double sz[2]);
/* (T_eff(eps1), T_eff(eps2)) for independent baths, (T12, T13, T34) for a common bath. */
QTHERM_API qtherm_status qtherm_model_eigen_temperatures(const qtherm_model* model, qtherm_temperature* out,
                                                         size_t capacity, size_t* count);
QTHERM_API qtherm_status qtherm_model_bare_temperatures(const qtherm_model* model, qtherm_temperature out[2]);
QTHERM_API qtherm_status qtherm_model_steady_concurrence(const qtherm_model* model, double* concurrence);

/* Integrates the populations from a diagonal eigen-basis state pop0 at times[0].
 * pops_out receives n_times * 4 values. */
QTHERM_API qtherm_status qtherm_model_evolve(const qtherm_model* model, const double pop0[4], const double* times,
                                             size_t n_times, double* pops_out);

/* format: "csv" or "json"; NULL picks csv. out_path NULL writes <id>.<ext>
 * into $QTHERM_OUTPUT_DIR (default "."). */
QTHERM_API qtherm_status qtherm_run_figure(const char* figure_id, const char* out_path, const char* format);
/* out_path / format NULL fall back to the scenario's [output] section. threads 0 = hardware concurrency. */
QTHERM_API qtherm_status qtherm_run_scenario(const char* scenario_path, const char* out_path, const char* format,
                                             unsigned threads);
/* Writes a JSON report to *report_json (release with qtherm_free_string). Returns
 * QTHERM_ERR_VERIFY when any check fails; the report is still produced. */
QTHERM_API qtherm_status qtherm_run_verify(const char* suite, char** report_json);
QTHERM_API void qtherm_free_string(char* s);

#ifdef __cplusplus
}
#endif

#endif /* QTHERM_H */
