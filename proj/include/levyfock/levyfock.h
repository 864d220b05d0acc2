/* levyfock C API: Levy characteristic exponents, positive-definiteness and
 * infinite-divisibility checks, cocycle kernels with finite-rank GNS
 * realizations, truncated Fock / coherent-state identities, and compound
 * Poisson sampling with empirical characteristic functions.
 *
 * Conventions:
 *   - Every function returns lf_status; LF_OK means success. On failure a
 *     human-readable message is retrievable with lf_last_error() (thread
 *     local, valid until the next failing call on the same thread).
 *   - Complex scalars pass as (re, im) pairs; complex matrices pass as
 *     row-major double arrays of length 2*n*m, entry (i,j) at
 *     [2*(i*m+j)] = re, [2*(i*m+j)+1] = im. Callers allocate.
 *   - Strings returned through char** are allocated by the library and must
 *     be released with lf_string_free.
 *   - Objects behind opaque handles are immutable after creation; sharing
 *     handles across threads is safe.
 */
#ifndef LEVYFOCK_H
#define LEVYFOCK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define LEVYFOCK_VERSION "0.1.0"

typedef enum lf_status {
  LF_OK = 0,
  LF_ERR_INVALID_ARGUMENT = 1,
  LF_ERR_PARSE = 2,
  LF_ERR_INTEGRABILITY = 3,
  LF_ERR_QUADRATURE = 4,
  LF_ERR_BRANCH = 5,
  LF_ERR_NOT_PSD = 6,
  LF_ERR_UNEVALUABLE = 7,
  LF_ERR_BUDGET = 8,
  LF_ERR_INTERNAL = 9
} lf_status;

typedef enum lf_convention {
  LF_CONVENTION_DEFINETTI = 0,
  LF_CONVENTION_KOLMOGOROV = 1,
  LF_CONVENTION_LEVY = 2
} lf_convention;

typedef enum lf_moment_kind {
  LF_MOMENT_TOTAL_MASS = 0,
  LF_MOMENT_MIN1P2 = 1,
  LF_MOMENT_P_OVER_1P2 = 2,
  LF_MOMENT_P3_OVER_1P2 = 3,
  LF_MOMENT_TRUNC_VAR = 4
} lf_moment_kind;

typedef struct lf_triplet lf_triplet;
typedef struct lf_realization lf_realization;

const char* lf_version(void);
const char* lf_status_name(lf_status s);
const char* lf_last_error(void);
void lf_string_free(char* s);

/* ---- triplets -------------------------------------------------------- */

/* Parses the documented triplet JSON schema (strict: unknown keys fail). */
lf_status lf_triplet_parse_json(const char* text, lf_triplet** out);
/* Builds an atoms-only triplet. atom_pw: n_atoms (p, w) pairs. */
lf_status lf_triplet_create(double b, double a, lf_convention convention,
                            const double* atom_pw, size_t n_atoms,
                            lf_triplet** out);
void lf_triplet_free(lf_triplet* t);
lf_status lf_triplet_to_json(const lf_triplet* t, char** out_json);
lf_status lf_triplet_convention(const lf_triplet* t, lf_convention* out);
lf_status lf_triplet_convert(const lf_triplet* t, lf_convention target,
                             lf_triplet** out);
lf_status lf_levy_measure_moment(const lf_triplet* t, lf_moment_kind kind,
                                 double delta, double* out);

/* Integrability diagnostics. `value` is +inf when the moment diverges. */
typedef struct lf_triplet_diagnostics {
  double min1p2;
  int min1p2_ok;
  double abs_p_tail;      /* int_{|p|>=1} |p| dnu */
  int abs_p_tail_ok;
  int abs_p_tail_required; /* required by the triplet's convention */
  double total_mass;
  int total_mass_ok;
  int total_mass_required;
  int overall_ok;
} lf_triplet_diagnostics;

lf_status lf_triplet_validate(const lf_triplet* t, lf_triplet_diagnostics* out);

lf_status lf_eval_exponent(const lf_triplet* t, double x, double* re, double* im);
lf_status lf_char_fn(const lf_triplet* t, double x, double* re, double* im);

/* ---- positivity machinery -------------------------------------------- */

typedef struct lf_psd_verdict {
  int is_psd;
  double min_eigenvalue;
  double scale;     /* largest |eigenvalue| */
  double tolerance; /* is_psd <=> min_eigenvalue >= -tol * max(1, scale) */
} lf_psd_verdict;

/* Gram matrix M_ij = F(t_j - t_i) over `points` with F = char_fn(t, .).
 * `out` holds 2*n*n doubles. */
lf_status lf_gram_from_triplet(const lf_triplet* t, const double* points,
                               size_t n, double* out);
/* Gram matrix from samples (re/im of F at each point); differences resolve
 * on the sample grid with Hermitian extension. */
lf_status lf_gram_from_grid(const double* points, const double* re,
                            const double* im, size_t n, double* out);
lf_status lf_psd_check(const double* matrix, size_t n, double tol,
                       lf_psd_verdict* out);
/* Continuous branch of log F with f(0) = 0 (grid must contain 0). */
lf_status lf_log_branch(const double* points, const double* re, const double* im,
                        size_t n, double branch_floor, double* out_re,
                        double* out_im);
lf_status lf_conditional_psd_check(const double* points, const double* re,
                                   const double* im, size_t n, double tol,
                                   lf_psd_verdict* out);

/* Per-n positive-semidefinite-root test for n = 1..n_max. Caller provides
 * n_max slots in out_verdicts. out_pi_steps counts phase steps resolved at
 * the +pi ambiguity. If no branch of log F exists (F vanishes on the grid),
 * *out_pass = 0, *out_n_evaluated = 0 and out_zero_crossing is set. */
lf_status lf_divisibility_check_grid(const double* points, const double* re,
                                     const double* im, size_t n, int n_max,
                                     double tol, lf_psd_verdict* out_verdicts,
                                     int* out_n_evaluated, int* out_pass,
                                     int* out_zero_crossing, int* out_pi_steps);
lf_status lf_divisibility_check_triplet(const lf_triplet* t, const double* points,
                                        size_t n, int n_max, double tol,
                                        lf_psd_verdict* out_verdicts,
                                        int* out_n_evaluated, int* out_pass,
                                        int* out_zero_crossing, int* out_pi_steps);

/* ---- cocycle kernel and GNS realization ------------------------------ */

/* K(s, t) = a s t + int (e^{-ips}-1)(e^{ipt}-1) dnu; drift-independent. */
lf_status lf_cocycle_kernel(const lf_triplet* t, double s, double x,
                            double* re, double* im);
lf_status lf_kernel_matrix(const lf_triplet* t, const double* grid, size_t n,
                           double* out);
lf_status lf_kernel_matrix_to_json(const double* grid, size_t n,
                                   const double* matrix, char** out_json);

/* Finite-rank factorization K = <psi, psi>; eigenvalues below
 * eigen_floor * lambda_max are dropped. */
lf_status lf_realize_cocycle(const double* grid, size_t n, const double* matrix,
                             double eigen_floor, lf_realization** out);
void lf_realization_free(lf_realization* r);
lf_status lf_realization_rank(const lf_realization* r, int* out);
/* out: 2 * rank * n doubles, column j = psi(grid[j]) (row-major rank x n). */
lf_status lf_realization_vectors(const lf_realization* r, double* out);
lf_status lf_realization_to_json(const lf_realization* r, char** out_json);

lf_status lf_shift_covariance_residual(const lf_triplet* t, const double* grid,
                                       size_t n, double h, double* out);
/* Least-squares coboundary fit psi(g) = (V(g) - I) psi0. out_psi0 may be
 * NULL; otherwise it holds 2 * rank doubles. */
lf_status lf_coboundary_residual(const lf_realization* r, const lf_triplet* t,
                                 double* out_residual, double* out_normalized,
                                 double* out_psi0);

/* ---- truncated Fock space -------------------------------------------- */

lf_status lf_fock_dimension(int r, int degree, uint64_t* out);
/* Truncated <EXP psi, EXP phi> plus the analytic tail bound. psi/phi are
 * r-dimensional complex vectors as (re, im) pairs. */
lf_status lf_coherent_inner(const double* psi, const double* phi, size_t r,
                            int degree, double* out_re, double* out_im,
                            double* out_bound);
/* Matrix of <EXP psi(t_j), W(h) EXP psi(t_k)>; out: 2*n*n doubles. */
lf_status lf_weyl_gram(const lf_triplet* t, const double* grid, size_t n,
                       double h, double* out);
lf_status lf_weyl_unitarity_residual(const lf_triplet* t, const double* grid,
                                     size_t n, double h, double* out);
lf_status lf_vacuum_expectation(const lf_triplet* t, double x, double* re,
                                double* im);
lf_status lf_representation_residual(const lf_triplet* t, const double* grid,
                                     size_t n, double h1, double h2, double* out);

/* ---- sampling --------------------------------------------------------- */

/* `count` i.i.d. increments over time dt (Philox4x64-10 stream (seed, k)). */
lf_status lf_sample_increments(const lf_triplet* t, double dt, size_t count,
                               uint64_t seed, double delta, double* out);
/* Empirical characteristic function of `samples` on `tgrid`; confidence
 * radius 4/sqrt(n). */
lf_status lf_ecf(const double* samples, size_t n, const double* tgrid, size_t m,
                 double* out_re, double* out_im, double* out_radius);
lf_status lf_product_charfn(const lf_triplet* t, const double* g_list, size_t n,
                            double* re, double* im);

#ifdef __cplusplus
}
#endif

#endif /* LEVYFOCK_H */
