#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "levyfock/exponent.hpp"
#include "levyfock/grid.hpp"

namespace levyfock::fock {

using exponent::LevyTriplet;

// Graded basis of the symmetric Fock space over C^r, truncated at total
// degree N. Degree-n states are occupation vectors m (m_1, ..., m_r) with
// sum m_i = n, listed in colexicographic order; the coefficient of a
// coherent vector EXP psi on m is  prod psi_i^{m_i} / sqrt(prod m_i!),
// so that plain Hermitian dots of coefficient arrays realize the Fock inner
// product. Degree 0 is the vacuum with coefficient 1.
struct TruncatedFock {
  int one_particle_dim = 0;
  int degree = 0;
  // occupation vectors, all degrees 0..N in order
  std::vector<std::vector<int>> basis;

  static std::uint64_t dimension(int r, int degree);  // sum_n C(r+n-1, n)
};

// Enumerates the graded basis; throws BudgetError if the dimension exceeds
// `budget` coefficients (default 2e6).
TruncatedFock truncated_fock(int r, int degree, std::uint64_t budget = 2000000);

struct CoherentVector {
  Eigen::VectorXcd psi;
  int degree = 0;
  Eigen::VectorXcd coeffs;  // over the graded basis of truncated_fock
};

CoherentVector coherent_vector(const Eigen::VectorXcd& psi, int degree,
                               std::uint64_t budget = 2000000);

struct CoherentInner {
  cplx value{0.0, 0.0};
  double bound = 0.0;  // tail bound on |value - exp<psi, phi>|
};

// <EXP psi, EXP phi> truncated at degree N, computed both as the series
// sum_{n<=N} <psi,phi>^n / n! and by contracting materialized graded
// coefficients; the two must agree to 1e-12 (internal check). The returned
// bound is ||psi||^{N+1} ||phi||^{N+1} / (N+1)! * exp(||psi|| ||phi||).
CoherentInner coherent_inner(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& phi,
                             int degree, std::uint64_t budget = 2000000);

// Matrix of <EXP psi(t_j), W(h) EXP psi(t_k)> on the coherent span:
// entry = F(h + t_k) / F(t_k) * exp K(t_j, h + t_k), no Fock vectors
// materialized. Raises BranchError via vanishing F (|F| <= branch_floor).
Eigen::MatrixXcd weyl_gram(const LevyTriplet& trip, const std::vector<double>& grid,
                           double h, double branch_floor = 1e-8);

// max entrywise | conj(c_j) c_k exp K(h+t_j, h+t_k) - exp K(t_j, t_k) |
// with c_k = F(h+t_k)/F(t_k): Gram preservation under W(h).
double weyl_unitarity_residual(const LevyTriplet& trip, const std::vector<double>& grid,
                               double h, double branch_floor = 1e-8);

// <EXP psi(0), W(t) EXP psi(0)> computed through the weyl_gram plumbing;
// equals F(t).
cplx vacuum_expectation(const LevyTriplet& trip, double t);

// max coherent-matrix-element deviation between W(h1)W(h2) and W(h1+h2).
double representation_residual(const LevyTriplet& trip, const std::vector<double>& grid,
                               double h1, double h2, double branch_floor = 1e-8);

}  // namespace levyfock::fock
