#ifndef QSIS_QSIS_H
#define QSIS_QSIS_H

#include <stddef.h>

#if defined(_WIN32)
#define QSIS_API __declspec(dllexport)
#else
#define QSIS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. They double as process exit codes for the CLI. */
typedef enum {
  QSIS_OK = 0,
  QSIS_VERDICT_FAIL = 1,
  QSIS_E_USAGE = 2,   /* bad arguments, unknown keys, out-of-range values, io */
  QSIS_E_NUMERIC = 3  /* accuracy, conditioning, solvability, degeneracy */
} qsis_status;

typedef struct qsis_kernel qsis_kernel;
typedef struct qsis_nodes qsis_nodes;

QSIS_API const char* qsis_version(void);

/* JSON error object of the last failing call on this thread:
   {"error": {"kind": "...", "message": "...", "value": x, "status": n}}.
   Empty string when the last call succeeded. */
QSIS_API const char* qsis_last_error(void);

/* Strings returned through char** out-parameters. */
QSIS_API void qsis_string_free(char* s);

/* Kernel expression such as "gaussian(2)", "poisson", "triangle-spectrum",
   or a JSON object. alpha > 0 overrides the expression's parameter; pass 0
   to keep it. */
QSIS_API qsis_status qsis_kernel_create(const char* spec, double alpha, qsis_kernel** out);
QSIS_API void qsis_kernel_destroy(qsis_kernel* k);
QSIS_API qsis_status qsis_kernel_eval_space(const qsis_kernel* k, const double* x, size_t n, double* out);
QSIS_API qsis_status qsis_kernel_eval_fourier(const qsis_kernel* k, const double* xi, size_t n, double* out);
/* Regularity report as JSON. K <= 0 picks the cell count automatically. */
QSIS_API qsis_status qsis_kernel_regularity(const qsis_kernel* k, int K, int M, char** json_out);
QSIS_API qsis_status qsis_kernel_describe(const qsis_kernel* k, char** json_out);

/* Node spec: "lattice", "kadec-alternating:0.2", "sqrt2-swap", "half-shift"
   or an explicit list "[x1, ...]". */
QSIS_API qsis_status qsis_nodes_create(const char* spec, int J, qsis_nodes** out);
QSIS_API void qsis_nodes_destroy(qsis_nodes* n);
QSIS_API size_t qsis_nodes_size(const qsis_nodes* n);
QSIS_API qsis_status qsis_nodes_values(const qsis_nodes* n, double* out);
QSIS_API qsis_status qsis_nodes_riesz(const qsis_nodes* n, char** json_out);

QSIS_API qsis_status qsis_bessel_k(double nu, double z, double* out);

/* Parses key = value text (or JSON) into a JSON object string. */
QSIS_API qsis_status qsis_config_parse(const char* text, char** json_out);

/* Command names as a JSON array; presets as a JSON object. */
QSIS_API qsis_status qsis_commands(char** json_out);
QSIS_API qsis_status qsis_presets(char** json_out);

/* Runs one command with a JSON config. Writes {command}-{hash}.json/.csv
   under out_dir unless out_dir is NULL or empty. report_out receives the
   report JSON (may be NULL). Returns QSIS_OK or QSIS_VERDICT_FAIL on
   completion, an error status otherwise. */
QSIS_API qsis_status qsis_run(const char* command, const char* config_json, const char* out_dir,
                              char** report_out);

#ifdef __cplusplus
}
#endif

#endif
