#ifndef CSLWALK_H
#define CSLWALK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum CslwalkStatus {
  CSLWALK_STATUS_OK = 0,
  CSLWALK_STATUS_NULL_POINTER = 1,
  CSLWALK_STATUS_DOMAIN = 2,
  CSLWALK_STATUS_NO_DIFFUSION = 3,
  CSLWALK_STATUS_INFINITE_TIME = 4,
  CSLWALK_STATUS_OVERFLOW = 5,
  CSLWALK_STATUS_INVALID_RANGE = 6,
  CSLWALK_STATUS_INVALID_ARGUMENT = 7,
  CSLWALK_STATUS_PANIC = 8,
} CslwalkStatus;

typedef enum CslwalkModelKind {
  CSLWALK_MODEL_KIND_GRW = 0,
  CSLWALK_MODEL_KIND_CSL = 1,
  CSLWALK_MODEL_KIND_ADLER = 2,
  CSLWALK_MODEL_KIND_KAROLYHAZY = 3,
  CSLWALK_MODEL_KIND_DIOSI_PENROSE = 4,
  CSLWALK_MODEL_KIND_CUSTOM = 5,
} CslwalkModelKind;

typedef enum CslwalkObject {
  CSLWALK_OBJECT_SPHERE = 0,
  CSLWALK_OBJECT_DISC = 1,
} CslwalkObject;

typedef enum CslwalkEtaLaw {
  CSLWALK_ETA_LAW_GRW = 0,
  CSLWALK_ETA_LAW_CSL = 1,
  CSLWALK_ETA_LAW_CSL_AS_PRINTED = 2,
} CslwalkEtaLaw;

/**
 * Opaque Monte-Carlo ensemble.
 */
typedef struct CslwalkEnsemble CslwalkEnsemble;

/**
 * Opaque collapse model.
 */
typedef struct CslwalkModel CslwalkModel;

/**
 * Opaque feasibility scenario.
 */
typedef struct CslwalkScenario CslwalkScenario;

/**
 * Solved feasibility scenario. Flags are 1 when the condition holds.
 */
typedef struct CslwalkFeasibility {
  /**
   * Required internal temperature (K).
   */
  double t_i;
  /**
   * Required pressure (pT).
   */
  double pressure_pt;
  /**
   * Time to reach the target (s).
   */
  double t_csl;
  /**
   * Collision time at the solved pressure (s).
   */
  double tau_c;
  /**
   * Time for quantum Brownian drift to reach the target (s).
   */
  double t_qbd;
  uint8_t emission_dominant;
  uint8_t impact_realm_ok;
  uint8_t qbd_subdominant;
} CslwalkFeasibility;

typedef struct CslwalkOscillatorReport {
  double eta;
  double delta_e;
  double zero_point;
  double t_required;
  double p_required_pt;
  double t_min;
  double x_classical;
} CslwalkOscillatorReport;

typedef struct CslwalkRms {
  double t;
  double rms;
  double standard_error;
} CslwalkRms;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *cslwalk_version(void);

/**
 * Message of the calling thread's last failure (empty if none).
 */
const char *cslwalk_last_error(void);

/**
 * Preset model for `kind`. `Custom` starts with lambda = 0.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum CslwalkStatus cslwalk_model_preset(enum CslwalkModelKind kind, struct CslwalkModel **out);

/**
 * Model with explicit rate (1/s) and length (cm).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum CslwalkStatus cslwalk_model_new(enum CslwalkModelKind kind,
                                     double lambda,
                                     double r_c,
                                     struct CslwalkModel **out);

/**
 * # Safety
 * `model` must be null or a handle from this library not yet freed.
 */
void cslwalk_model_free(struct CslwalkModel *model);

/**
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum CslwalkStatus cslwalk_model_lambda(const struct CslwalkModel *model, double *out);

/**
 * Collapse displacement after `t` seconds: cm for a sphere with R = r_c,
 * rad for the anchor disc.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum CslwalkStatus cslwalk_csl_displacement(const struct CslwalkModel *model,
                                            enum CslwalkObject object,
                                            double t,
                                            double *out);

/**
 * Time (s) for the collapse law to reach `target`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum CslwalkStatus cslwalk_csl_time_to_reach(const struct CslwalkModel *model,
                                             enum CslwalkObject object,
                                             double target,
                                             double *out);

/**
 * Default scenario (eps = chi = 0.1, T_e = 100 K; 1e-5 cm or 1e-3 rad
 * target) for `object` under a copy of `model`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum CslwalkStatus cslwalk_scenario_new(const struct CslwalkModel *model,
                                        enum CslwalkObject object,
                                        struct CslwalkScenario **out);

/**
 * # Safety
 * `scenario` must be null or a live handle.
 */
void cslwalk_scenario_free(struct CslwalkScenario *scenario);

/**
 * Sets the four scalar inputs at once; the scenario is unchanged on error.
 *
 * # Safety
 * `scenario` must be a live handle.
 */
enum CslwalkStatus cslwalk_scenario_set(struct CslwalkScenario *scenario,
                                        double epsilon,
                                        double chi,
                                        double target,
                                        double t_e);

/**
 * Solves the scenario for the required T_i and P.
 *
 * # Safety
 * `scenario` must be a live handle and `out` writable.
 */
enum CslwalkStatus cslwalk_scenario_solve(const struct CslwalkScenario *scenario,
                                          struct CslwalkFeasibility *out);

/**
 * Karolyhazy feasibility with cell length `a_c` (cm) and time `tau_g` (s).
 * Spheres use the native law; discs use the rounded effective rate.
 *
 * # Safety
 * `scenario` must be a live handle and `out` writable.
 */
enum CslwalkStatus cslwalk_scenario_solve_karolyhazy(const struct CslwalkScenario *scenario,
                                                     double a_c,
                                                     double tau_g,
                                                     struct CslwalkFeasibility *out);

/**
 * Oscillator analysis for a mass in amu, angular frequency (rad/s), plate
 * area (cm^2), quality factor, rate `lambda`, fractions and observation time.
 *
 * # Safety
 * `out` must be writable.
 */
enum CslwalkStatus cslwalk_oscillator_analyze(double mass_amu,
                                              double omega,
                                              double area,
                                              double q,
                                              enum CslwalkEtaLaw eta_law,
                                              double lambda,
                                              double epsilon,
                                              double chi,
                                              double t,
                                              struct CslwalkOscillatorReport *out);

/**
 * Runs an ensemble with momentum diffusion `diffusion` and inertia
 * `inertia`. `dt <= 0` selects `t_final / 1000`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CslwalkStatus cslwalk_simulate(double diffusion,
                                    double inertia,
                                    double t_final,
                                    double dt,
                                    size_t n_traj,
                                    uint64_t seed,
                                    struct CslwalkEnsemble **out);

/**
 * Ensemble for the collapse walk of the default sphere or disc.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum CslwalkStatus cslwalk_simulate_csl(const struct CslwalkModel *model,
                                        enum CslwalkObject object,
                                        double t_final,
                                        size_t n_traj,
                                        uint64_t seed,
                                        struct CslwalkEnsemble **out);

/**
 * # Safety
 * `ensemble` must be null or a live handle.
 */
void cslwalk_ensemble_free(struct CslwalkEnsemble *ensemble);

/**
 * Number of recorded time points.
 *
 * # Safety
 * `ensemble` must be a live handle and `out` writable.
 */
enum CslwalkStatus cslwalk_ensemble_len(const struct CslwalkEnsemble *ensemble, size_t *out);

/**
 * RMS and standard error at checkpoint `k`.
 *
 * # Safety
 * `ensemble` must be a live handle and `out` writable.
 */
enum CslwalkStatus cslwalk_ensemble_rms(const struct CslwalkEnsemble *ensemble,
                                        size_t k,
                                        struct CslwalkRms *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CSLWALK_H */
