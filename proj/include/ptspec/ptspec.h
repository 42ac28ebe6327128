/* C interface to the ptspec library. All objects are opaque handles owned
 * by the caller and released with the matching *_free function. Functions
 * return a ptspec_status; on failure ptspec_last_error() describes it. */
#ifndef PTSPEC_H
#define PTSPEC_H

#include <stddef.h>
#include <stdint.h>

#if defined(PTSPEC_BUILDING_LIBRARY)
#define PTSPEC_API __attribute__((visibility("default")))
#else
#define PTSPEC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ptspec_status {
  PTSPEC_OK = 0,
  PTSPEC_ERR_INVALID_ARGUMENT = 1,
  PTSPEC_ERR_DIMENSION = 2,
  PTSPEC_ERR_ODDNESS = 3,
  PTSPEC_ERR_UNBOUNDED = 4,
  PTSPEC_ERR_NUMERICAL = 5,
  PTSPEC_ERR_TOLERANCE_AMBIGUITY = 6,
  PTSPEC_ERR_EMPTY_WINDOW = 7,
  PTSPEC_ERR_DEGENERATE_FRAME = 8,
  PTSPEC_ERR_INCONSISTENCY = 9,
  PTSPEC_ERR_NULL = 10,
  PTSPEC_ERR_BUFFER_TOO_SMALL = 11,
  PTSPEC_ERR_INTERNAL = 12,
  PTSPEC_HELP = 13
} ptspec_status;

typedef struct ptspec_basis ptspec_basis;
typedef struct ptspec_freqs ptspec_freqs;
typedef struct ptspec_potential ptspec_potential;
typedef struct ptspec_matrix ptspec_matrix;
typedef struct ptspec_config ptspec_config;

typedef struct ptspec_jordan_report {
  int m;
  int eigenvalue_q;
  int eigenvalue_h;
  int geometric_multiplicity;
  int nilpotency_index;
  double residual_nilpotent;
  double residual_block_leak;
} ptspec_jordan_report;

PTSPEC_API const char* ptspec_version(void);
/* Message of the last failure on this thread; empty if none. */
PTSPEC_API const char* ptspec_last_error(void);
PTSPEC_API const char* ptspec_status_name(ptspec_status status);
PTSPEC_API void ptspec_string_free(char* s);

/* Basis */
PTSPEC_API ptspec_status ptspec_basis_new(int d, int n_max, ptspec_basis** out);
PTSPEC_API void ptspec_basis_free(ptspec_basis* b);
PTSPEC_API size_t ptspec_basis_size(const ptspec_basis* b);
PTSPEC_API ptspec_status ptspec_basis_state(const ptspec_basis* b, size_t index, int* occupations,
                                            size_t capacity);
PTSPEC_API ptspec_status ptspec_basis_index_of(const ptspec_basis* b, const int* occupations,
                                               size_t d, size_t* index);

/* Frequencies: "p/q,p/q,..." times omega */
PTSPEC_API ptspec_status ptspec_freqs_parse(const char* text, double omega, ptspec_freqs** out);
PTSPEC_API void ptspec_freqs_free(ptspec_freqs* f);
PTSPEC_API int ptspec_freqs_dim(const ptspec_freqs* f);

/* Potentials: compact CLI syntax or JSON */
PTSPEC_API ptspec_status ptspec_potential_parse(const char* text, ptspec_potential** out);
PTSPEC_API void ptspec_potential_free(ptspec_potential* p);
PTSPEC_API ptspec_status ptspec_potential_to_json(const ptspec_potential* p, char** json);

/* Matrices */
PTSPEC_API ptspec_status ptspec_matrix_h0(const ptspec_freqs* f, const ptspec_basis* b,
                                          ptspec_matrix** out);
PTSPEC_API ptspec_status ptspec_matrix_potential(const ptspec_basis* b, const ptspec_potential* p,
                                                 const ptspec_freqs* f, int quad_order,
                                                 ptspec_matrix** out);
PTSPEC_API ptspec_status ptspec_matrix_ladder(const ptspec_basis* b, int mode, int raise,
                                              ptspec_matrix** out);
PTSPEC_API ptspec_status ptspec_matrix_assemble(double g, const ptspec_matrix* h0,
                                                const ptspec_matrix* w, ptspec_matrix** out);
PTSPEC_API ptspec_status ptspec_matrix_build_q(double g, const ptspec_basis* b,
                                               ptspec_matrix** out);
PTSPEC_API void ptspec_matrix_free(ptspec_matrix* m);
PTSPEC_API size_t ptspec_matrix_dim(const ptspec_matrix* m);
PTSPEC_API ptspec_status ptspec_matrix_get(const ptspec_matrix* m, size_t row, size_t col,
                                           double* re, double* im);
/* Eigenvalues sorted by real part; re/im must hold ptspec_matrix_dim entries. */
PTSPEC_API ptspec_status ptspec_matrix_spectrum(const ptspec_matrix* m, double* re, double* im,
                                                size_t capacity);

/* Analyses */
PTSPEC_API ptspec_status ptspec_jordan(int m, double g, double rank_tol,
                                       ptspec_jordan_report* out);
PTSPEC_API ptspec_status ptspec_condition_a(const ptspec_freqs* f, int* holds, int64_t* witness,
                                            size_t capacity, size_t* witness_len);
/* gap and delta as exact fractions in units of omega. */
PTSPEC_API ptspec_status ptspec_gap(const ptspec_freqs* f, int64_t* gap_num, int64_t* gap_den,
                                    int64_t* delta_num, int64_t* delta_den);
PTSPEC_API ptspec_status ptspec_rho(const ptspec_freqs* f, double sup_norm, double* rho);

/* CLI-level configuration and dispatch */
PTSPEC_API ptspec_status ptspec_config_from_args(int argc, const char* const* argv,
                                                 ptspec_config** out, char** help_text);
PTSPEC_API ptspec_status ptspec_config_from_json(const char* json, ptspec_config** out);
PTSPEC_API ptspec_status ptspec_config_to_json(const ptspec_config* c, char** json);
PTSPEC_API void ptspec_config_free(ptspec_config* c);
/* Runs the configured command; exit_code follows the CLI contract
 * (0 ok, 1 scientific failure, 2 usage, 3 numerical). */
PTSPEC_API ptspec_status ptspec_run(const ptspec_config* c, int* exit_code, char** output,
                                    char** diagnostics);

#ifdef __cplusplus
}
#endif

#endif
