/*
 * C interface to the fvporous finite volume solver.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return an fvp_status; on failure a message describing the error
 * is available from fvp_last_error() on the calling thread until the next
 * call into the library from that thread.
 */
#ifndef FVPOROUS_H
#define FVPOROUS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FVPOROUS_BUILDING)
#    define FVP_API __declspec(dllexport)
#  else
#    define FVP_API __declspec(dllimport)
#  endif
#else
#  define FVP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fvp_status {
    FVP_OK = 0,
    FVP_ERR_INVALID_ARGUMENT = 1, /* bad pointer, size or precondition */
    FVP_ERR_CONFIG = 2,           /* config text could not be turned into a run */
    FVP_ERR_NUMERICAL = 3,        /* integrator failure (Newton breakdown, step underflow) */
    FVP_ERR_IO = 4,               /* output files could not be written */
    FVP_ERR_CHECK_FAILED = 5,     /* command ran but its acceptance predicate failed */
    FVP_ERR_INTERNAL = 6
} fvp_status;

typedef enum fvp_method {
    FVP_METHOD_IMPLICIT_EULER = 0,
    FVP_METHOD_EXPLICIT_ADAPTIVE = 1
} fvp_method;

typedef enum fvp_inequality {
    FVP_GN_DISCRETE = 0,
    FVP_GN_CONTINUOUS = 1
} fvp_inequality;

typedef struct fvp_config fvp_config;
typedef struct fvp_trajectory fvp_trajectory;

FVP_API const char* fvp_version(void);
FVP_API const char* fvp_last_error(void);
FVP_API const char* fvp_status_string(fvp_status status);

/* ---- configuration ---------------------------------------------------- */

FVP_API fvp_status fvp_config_load(const char* path, fvp_config** out);
FVP_API fvp_status fvp_config_parse(const char* text, fvp_config** out);
FVP_API void fvp_config_destroy(fvp_config* config);

FVP_API fvp_status fvp_config_horizon(const fvp_config* config, double* T);
FVP_API fvp_status fvp_config_cells(const fvp_config* config, size_t* n);

/* ---- trajectories ----------------------------------------------------- */

/* Integrate the configured problem on n cells (0 = the config's disc.n). */
FVP_API fvp_status fvp_solve(const fvp_config* config, size_t n, fvp_trajectory** out);
FVP_API void fvp_trajectory_destroy(fvp_trajectory* traj);

FVP_API size_t fvp_trajectory_cells(const fvp_trajectory* traj);
FVP_API size_t fvp_trajectory_checkpoints(const fvp_trajectory* traj);
FVP_API fvp_status fvp_trajectory_time(const fvp_trajectory* traj, size_t k, double* t);
/* Copies the n cell values at checkpoint k into values[0..len). len must equal n. */
FVP_API fvp_status fvp_trajectory_state(const fvp_trajectory* traj, size_t k, double* values, size_t len);
/* dx * sum_i h(v_i) at checkpoint k. */
FVP_API fvp_status fvp_trajectory_mass(const fvp_trajectory* traj, size_t k, double* mass);

/* Six bound monitors M1..M6. */
FVP_API fvp_status fvp_trajectory_monitors(const fvp_trajectory* traj, double out[6]);
FVP_API fvp_status fvp_trajectory_weak_residual(const fvp_trajectory* traj, int mode, double* residual);

/* E_sup_sq, E_flux and S of coarse against a nested reference. */
FVP_API fvp_status fvp_error_pair(const fvp_trajectory* coarse, const fvp_trajectory* reference,
                                  double* e_sup_sq, double* e_flux, double* s);

/* ---- functional inequalities ------------------------------------------ */

/* w has n+1 nodal values, s has n cell values. */
FVP_API fvp_status fvp_check_gn_discrete(const double* w_nodes, const double* s_cells, size_t n,
                                         double* ratio);
FVP_API fvp_status fvp_check_gn_continuous(const double* u_nodes, size_t n, double* ratio);

/* ---- experiment commands ---------------------------------------------- */

typedef struct fvp_command_options {
    const size_t* ns;    /* resolutions; NULL or ns_len == 0 selects the command default */
    size_t ns_len;
    size_t ref_n;        /* 0 = default (1024) */
    int64_t samples;     /* < 0 = default (10000) */
    uint64_t seed;
    int has_seed;        /* nonzero: seed overrides the config's seed */
    const char* out_dir; /* NULL = the config's out */
} fvp_command_options;

FVP_API void fvp_command_options_init(fvp_command_options* options);

/* Each command writes its CSV and summary.json into the output directory.
 * Returns FVP_ERR_CHECK_FAILED when the command's acceptance predicate fails.
 * When summary_json is not NULL it receives the summary document, to be
 * released with fvp_string_free. */
FVP_API fvp_status fvp_cmd_solve(const fvp_config* config, const fvp_command_options* options,
                                 char** summary_json);
FVP_API fvp_status fvp_cmd_converge(const fvp_config* config, const fvp_command_options* options,
                                    char** summary_json);
FVP_API fvp_status fvp_cmd_inequalities(const fvp_config* config, const fvp_command_options* options,
                                        char** summary_json);
FVP_API fvp_status fvp_cmd_monitors(const fvp_config* config, const fvp_command_options* options,
                                    char** summary_json);

FVP_API void fvp_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* FVPOROUS_H */
