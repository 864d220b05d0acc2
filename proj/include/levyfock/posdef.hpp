#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levyfock/grid.hpp"

namespace levyfock::posdef {

// Optional multiplier sigma(g, h), unit modulus. Must satisfy
// sigma(-t_j, t_i) = conj(sigma(-t_i, t_j)) on the points used, or the Gram
// matrix would not be Hermitian.
using SigmaFn = std::function<cplx(double, double)>;

// Gram matrix M_{ij} = sigma(-t_i, t_j) * F(t_j - t_i) over `points`, with F
// given as a callable (triplet-backed route).
Eigen::MatrixXcd gram(const std::function<cplx(double)>& F,
                      const std::vector<double>& points, const SigmaFn& sigma = {});

// Same with F given as samples; differences are resolved on the sample grid
// with Hermitian extension (F(-t) = conj F(t)) and throw UnevaluableError
// when a difference is missing. The Gram points default to all of F.points.
Eigen::MatrixXcd gram(const GridFunction& F, const SigmaFn& sigma = {},
                      const std::vector<double>* gram_points = nullptr);

struct PsdVerdict {
  bool is_psd = false;
  double min_eigenvalue = 0.0;
  double scale = 0.0;      // largest |eigenvalue|
  double tolerance = 0.0;  // is_psd <=> min_eigenvalue >= -tol * max(1, scale)
};

// Hermitian eigenvalue test. The matrix must be Hermitian to 1e-10
// (relative); otherwise InvalidInputError.
PsdVerdict psd_check(const Eigen::MatrixXcd& M, double tol = 1e-8);

struct BranchOptions {
  double branch_floor = 1e-8;  // zero-crossing threshold on |F|
  // With allow_pi_steps the phase-ambiguous step |darg| ~= pi is resolved to
  // the principal value +pi instead of raising AliasingError; used by the
  // divisibility check, which lets the eigenvalue test judge the result.
  bool allow_pi_steps = false;
};

// Continuous branch of log F with f(0) = 0: real part log|F|, imaginary part
// accumulated from 0 outward in both directions. Requires 0 in the grid.
// Raises ZeroCrossingError when |F| <= branch_floor and AliasingError when a
// phase step reaches pi (unless allowed).
GridFunction log_branch(const GridFunction& F, const BranchOptions& opt = {});

// Matrix C_{jk} = f(t_k - t_j) - f(-t_j) - f(t_k) over `points` (defaults to
// the largest one-sided half of f's grid through 0, which keeps all
// differences resolvable). Shared by conditional_psd_check and the cocycle
// kernel assembled from exponent samples.
Eigen::MatrixXcd conditional_kernel(const GridFunction& f,
                                    const std::vector<double>* points = nullptr);

// Which Gram points conditional_kernel uses by default.
std::vector<double> one_sided_points(const std::vector<double>& points);

PsdVerdict conditional_psd_check(const GridFunction& f, double tol = 1e-8);

struct DivisibilityEntry {
  int n = 0;
  PsdVerdict verdict;
};

struct DivisibilityReport {
  std::vector<DivisibilityEntry> per_n;
  bool pass = false;
  // empty when the branch succeeded; otherwise why no branch exists
  // ("zero_crossing") and the check fails outright
  std::string branch_failure;
  int pi_steps = 0;  // phase steps resolved at the +pi ambiguity
};

// Tests whether exp(f/n) has a positive-semidefinite branch for each
// n = 1..n_max. A vanishing |F| is reported as a divisibility failure, not
// thrown. Phase steps landing on the pi ambiguity are resolved to the
// principal branch and counted in pi_steps; the eigenvalue tests then judge
// that branch. Requires an arithmetic grid containing 0.
DivisibilityReport infinite_divisibility_check(const GridFunction& F, int n_max,
                                               double tol = 1e-8);

// The same per-n Gram tests with the exponent branch already known (e.g.
// computed from a triplet), so no branch extraction and no |F| floor.
DivisibilityReport divisibility_from_exponent(const GridFunction& f, int n_max,
                                              double tol = 1e-8);

}  // namespace levyfock::posdef
