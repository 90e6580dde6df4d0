/*
 * marklis C API.
 *
 * Binary Markov random words, longest weakly increasing subsequences and
 * their limiting laws, exposed as plain C over the C++ core. Every function
 * returns an mlis_status; on failure mlis_last_error() describes the cause
 * (thread-local, valid until the next failing call on the same thread).
 * Objects are opaque handles released with their *_destroy function.
 */
#ifndef MARKLIS_MARKLIS_H
#define MARKLIS_MARKLIS_H

#include <stddef.h>
#include <stdint.h>

#if defined(MARKLIS_BUILDING_LIBRARY)
#define MARKLIS_API __attribute__((visibility("default")))
#else
#define MARKLIS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define MLIS_SCHEMA_VERSION "1"

typedef enum mlis_status {
  MLIS_OK = 0,
  MLIS_ERR_INVALID_ARGUMENT = 1, /* precondition on an index, size or pointer */
  MLIS_ERR_DOMAIN = 2,           /* model parameter outside the operation's domain */
  MLIS_ERR_CONSISTENCY = 3,      /* internal invariant violated */
  MLIS_ERR_INTERNAL = 4          /* allocation failure or unexpected exception */
} mlis_status;

MARKLIS_API const char* mlis_status_string(mlis_status status);
MARKLIS_API const char* mlis_last_error(void);

/* ---- chain model ------------------------------------------------------ */

typedef struct mlis_chain_params {
  double a; /* P(next = 2 | current = 1) */
  double b; /* P(next = 1 | current = 2) */
} mlis_chain_params;

typedef struct mlis_derived_params {
  double pi1, pi2, lambda2, mu, sigma2, sigma_tilde2;
} mlis_derived_params;

MARKLIS_API mlis_status mlis_derive(mlis_chain_params params, mlis_derived_params* out);

/* Initial law of X_0 is given by p1 = P(X_0 = 1). mlis_stationary_p1 returns
 * the stationary value (1 at a = b = 0). */
MARKLIS_API mlis_status mlis_stationary_p1(mlis_chain_params params, double* out);

MARKLIS_API mlis_status mlis_evolve(mlis_chain_params params, double p1, size_t n,
                                    double out[2]);
MARKLIS_API mlis_status mlis_mean_s(mlis_chain_params params, double p1, size_t k,
                                    double* out);
/* Stationary-start moments. */
MARKLIS_API mlis_status mlis_cov_z(mlis_chain_params params, size_t k, size_t l, double* out);
MARKLIS_API mlis_status mlis_var_s(mlis_chain_params params, size_t k, double* out);
MARKLIS_API mlis_status mlis_cov_s(mlis_chain_params params, size_t k, size_t l, double* out);
/* out = P(X_k, X_l) for (1,1), (1,2), (2,1), (2,2). */
MARKLIS_API mlis_status mlis_pair_prob(mlis_chain_params params, double p1, size_t k, size_t l,
                                       double out[4]);

/* ---- words ------------------------------------------------------------ */

typedef struct mlis_word mlis_word;

MARKLIS_API mlis_status mlis_word_create(const uint32_t* letters, size_t n, uint32_t m,
                                         mlis_word** out);
MARKLIS_API mlis_status mlis_word_sample(mlis_chain_params params, double p1, size_t n,
                                         uint64_t seed, mlis_word** out);
MARKLIS_API void mlis_word_destroy(mlis_word* word);
MARKLIS_API size_t mlis_word_length(const mlis_word* word);
MARKLIS_API uint32_t mlis_word_alphabet_size(const mlis_word* word);
/* Borrowed pointer to the n letters, valid for the life of the handle. */
MARKLIS_API const uint32_t* mlis_word_letters(const mlis_word* word);

/* S^r_k for k = 0..n and r = 1..m-1, row-major: out[k*(m-1) + (r-1)].
 * `capacity` is the element count of `out`, which must be >= (n+1)*(m-1). */
MARKLIS_API mlis_status mlis_word_walk(const mlis_word* word, int64_t* out, size_t capacity);

MARKLIS_API mlis_status mlis_lis_bruteforce(const mlis_word* word, size_t* out);
MARKLIS_API mlis_status mlis_lis_patience(const mlis_word* word, size_t* out);
MARKLIS_API mlis_status mlis_lis_combinatorial(const mlis_word* word, size_t* out);

/* Writes up to `capacity` row lengths and the total row count to *rows_out. */
MARKLIS_API mlis_status mlis_rsk_shape(const mlis_word* word, size_t* rows, size_t capacity,
                                       size_t* rows_out);

/* ---- limit laws ------------------------------------------------------- */

typedef enum mlis_law_kind {
  MLIS_LAW_BROWNIAN_FUNCTIONAL = 0,
  MLIS_LAW_CENTERED_NORMAL = 1,
  MLIS_LAW_DEGENERATE = 2
} mlis_law_kind;

typedef struct mlis_limit_law {
  mlis_law_kind kind;
  double parameter;      /* scale (Brownian functional) or variance (normal); 0 otherwise */
  double centering_rate; /* LI_n is centered at centering_rate * n and divided by sqrt(n) */
} mlis_limit_law;

MARKLIS_API mlis_status mlis_limiting_law(mlis_chain_params params, mlis_limit_law* out);
MARKLIS_API const char* mlis_law_name(mlis_law_kind kind);
MARKLIS_API mlis_status mlis_law_cdf(const mlis_limit_law* law, double x, double* out);
/* NaN for the degenerate law. */
MARKLIS_API mlis_status mlis_law_density(const mlis_limit_law* law, double x, double* out);

MARKLIS_API double mlis_normal_cdf(double x);
MARKLIS_API mlis_status mlis_density_f(double y, double a, double* out);
MARKLIS_API mlis_status mlis_cdf_f(double y, double a, double* out);
MARKLIS_API mlis_status mlis_quantile_f(double q, double a, double* out);
MARKLIS_API double mlis_gue2_density(double x1, double x2);
MARKLIS_API mlis_status mlis_mc_tail_bound(double c, double z, double eps, double* out);

MARKLIS_API mlis_status mlis_sample_brownian_functional(size_t steps, uint64_t seed, double* out);
MARKLIS_API mlis_status mlis_sample_traceless_max_eig(uint64_t seed, double* out);
MARKLIS_API mlis_status mlis_sample_perturbed_max_eig(double rho, uint64_t seed, double* out);

/* ---- experiments ------------------------------------------------------ */

/* Column-major table of doubles with named columns. */
typedef struct mlis_table mlis_table;

MARKLIS_API void mlis_table_destroy(mlis_table* table);
MARKLIS_API size_t mlis_table_rows(const mlis_table* table);
MARKLIS_API size_t mlis_table_columns(const mlis_table* table);
MARKLIS_API const char* mlis_table_column_name(const mlis_table* table, size_t column);
/* Borrowed pointer to the column's `rows` values; NULL for a bad index. */
MARKLIS_API const double* mlis_table_column(const mlis_table* table, size_t column);

typedef struct mlis_experiment_config {
  mlis_chain_params params;
  size_t n;
  size_t trials;
  uint64_t seed;
  unsigned threads; /* 0 = hardware concurrency; results never depend on it */
} mlis_experiment_config;

/* Columns: index, value -- standardized LI_n, sorted ascending. */
MARKLIS_API mlis_status mlis_run_li_experiment(const mlis_experiment_config* cfg,
                                               mlis_table** out);
/* Columns: trial, r1, r2 -- standardized RSK row lengths in trial order. */
MARKLIS_API mlis_status mlis_run_shape_experiment(const mlis_experiment_config* cfg,
                                                  mlis_table** out);
/* Columns: k, mc_mean, exact_mean, mean_se, mc_var, exact_var, var_se. */
MARKLIS_API mlis_status mlis_run_moment_check(const mlis_experiment_config* cfg,
                                              const size_t* ks, size_t count,
                                              mlis_table** out);
/* Columns: n, c_n, exceed_prob, std_err, tail_bound. cfg->n is ignored. */
MARKLIS_API mlis_status mlis_run_drift_experiment(const mlis_experiment_config* cfg,
                                                  const size_t* n_list, size_t count,
                                                  double z, mlis_table** out);

/* One-sample KS distance of `samples` (any order) against the limit law. */
MARKLIS_API mlis_status mlis_ks_against_law(const double* samples, size_t count,
                                            const mlis_limit_law* law, double* out);

#ifdef __cplusplus
}
#endif

#endif /* MARKLIS_MARKLIS_H */
