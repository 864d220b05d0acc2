#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levyfock/exponent.hpp"
#include "levyfock/grid.hpp"

namespace levyfock::gns {

using exponent::LevyTriplet;

// K(s, t) = <psi(s), psi(t)> = f(t - s) - f(-s) - f(t), evaluated in closed
// form as  a*s*t + int (e^{-ips} - 1)(e^{ipt} - 1) dnu(p).  Independent of
// the drift b and of the centering convention.
cplx kernel(const LevyTriplet& trip, double s, double t);

struct KernelMatrix {
  std::vector<double> grid;
  Eigen::MatrixXcd K;
};

// Entry K_{jk} = kernel(grid[j], grid[k]) via the closed form.
KernelMatrix kernel_matrix(const LevyTriplet& trip, const std::vector<double>& grid);

// Same matrix from exponent samples alone: K_{jk} = f(t_k - t_j) - f(-t_j)
// - f(t_k) over the largest one-sided half of f's grid through 0 (see
// posdef::conditional_kernel, which produces the identical matrix).
KernelMatrix kernel_matrix(const GridFunction& f);

// Throws InvalidInputError if the KernelMatrix invariants fail: Hermitian to
// 1e-12, zero row/column at t = 0, real nonnegative diagonal.
void validate_kernel_matrix(const KernelMatrix& km);

struct CocycleRealization {
  std::vector<double> grid;
  int rank = 0;
  // rank x grid.size(); column j is psi(t_j)
  Eigen::MatrixXcd vectors;
  double eigen_floor = 0.0;
};

// Finite-rank factorization K_{jk} = <psi(t_j), psi(t_k)> by eigendecomposing
// K and keeping eigenpairs with lambda > eigen_floor * lambda_max. Raises
// NotPsdError when K has an eigenvalue below -1e-8 * max(1, lambda_max).
CocycleRealization realize_cocycle(const KernelMatrix& km, double eigen_floor = 1e-10);

// max_{j,k} | K(h+s, h+t) - K(h+s, h) - K(h, h+t) + K(h, h) - K(s, t) |
// over the grid; the invariance of the inner product under the shift action.
double shift_covariance_residual(const LevyTriplet& trip,
                                 const std::vector<double>& grid, double h);

// Grid-function route: all shifted arguments must resolve on f's grid
// (arithmetic grid with h a multiple of the step), else UnevaluableError.
double shift_covariance_residual(const GridFunction& f,
                                 const std::vector<double>& grid, double h);

struct CoboundaryFit {
  double residual = 0.0;    // root-mean-square of || psi(g) - (V(g)-I) psi0 ||
  double normalized = 0.0;  // residual / max_g ||psi(g)||   (0 when K = 0)
  Eigen::VectorXcd psi0;    // minimizer, in the realization's coordinates
};

// Least-squares fit of psi(g) = (V(g) - I) psi0 over psi0 in the span of
// {psi(h)}, using V(g) psi(h) = psi(g+h) - psi(g). All inner products are
// kernel evaluations on the triplet, so shifted points need no realization.
// Rank-deficient normal equations get the minimum-norm solution.
CoboundaryFit coboundary_residual(const CocycleRealization& real,
                                  const LevyTriplet& trip);

// JSON serializations (grid, complex entries as [re, im] pairs).
std::string kernel_matrix_to_json(const KernelMatrix& km);
std::string realization_to_json(const CocycleRealization& real);

}  // namespace levyfock::gns
