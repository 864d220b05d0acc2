#include "levyfock/fock.hpp"

#include <cmath>

#include "levyfock/gns.hpp"

namespace levyfock::fock {

namespace {

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// occupation vectors of total degree n over the first `slots` coordinates,
// colexicographic (the last coordinate varies slowest, ascending).
void enumerate_degree(int slots, int n, std::vector<int>& work,
                      std::vector<std::vector<int>>& out) {
  if (slots == 1) {
    work[0] = n;
    out.push_back(work);
    return;
  }
  for (int last = 0; last <= n; ++last) {
    work[slots - 1] = last;
    enumerate_degree(slots - 1, n - last, work, out);
  }
}

struct WeylContext {
  std::vector<cplx> ratio;  // c_k = F(h + t_k) / F(t_k)
};

WeylContext weyl_ratios(const LevyTriplet& trip, const std::vector<double>& grid,
                        double h, double branch_floor) {
  WeylContext ctx;
  ctx.ratio.reserve(grid.size());
  for (double t : grid) {
    const cplx ft = exponent::char_fn(trip, t);
    if (std::abs(ft) <= branch_floor)
      throw ZeroCrossingError("weyl: F vanishes at a grid point");
    ctx.ratio.push_back(exponent::char_fn(trip, h + t) / ft);
  }
  return ctx;
}

}  // namespace

std::uint64_t TruncatedFock::dimension(int r, int degree) {
  if (r < 0 || degree < 0) throw InvalidInputError("fock: r, degree >= 0");
  if (r == 0) return 1;  // vacuum only
  std::uint64_t total = 0;
  for (int n = 0; n <= degree; ++n) total += binom(std::uint64_t(r + n - 1), std::uint64_t(n));
  return total;
}

TruncatedFock truncated_fock(int r, int degree, std::uint64_t budget) {
  const std::uint64_t dim = TruncatedFock::dimension(r, degree);
  if (dim > budget)
    throw BudgetError("fock: truncated dimension " + std::to_string(dim) +
                      " exceeds the budget " + std::to_string(budget));
  TruncatedFock fk;
  fk.one_particle_dim = r;
  fk.degree = degree;
  fk.basis.reserve(dim);
  if (r == 0) {
    fk.basis.push_back({});
    return fk;
  }
  std::vector<int> work(r, 0);
  for (int n = 0; n <= degree; ++n) enumerate_degree(r, n, work, fk.basis);
  return fk;
}

CoherentVector coherent_vector(const Eigen::VectorXcd& psi, int degree,
                               std::uint64_t budget) {
  const TruncatedFock fk = truncated_fock(int(psi.size()), degree, budget);
  CoherentVector cv;
  cv.psi = psi;
  cv.degree = degree;
  cv.coeffs.resize(Eigen::Index(fk.basis.size()));
  for (std::size_t b = 0; b < fk.basis.size(); ++b) {
    cplx c{1.0, 0.0};
    for (std::size_t i = 0; i < fk.basis[b].size(); ++i) {
      double fact = 1.0;
      for (int m = 1; m <= fk.basis[b][i]; ++m) {
        c *= psi(Eigen::Index(i));
        fact *= double(m);
      }
      c /= std::sqrt(fact);
    }
    cv.coeffs(Eigen::Index(b)) = c;
  }
  return cv;
}

CoherentInner coherent_inner(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& phi,
                             int degree, std::uint64_t budget) {
  if (psi.size() != phi.size())
    throw InvalidInputError("coherent_inner: dimension mismatch");
  if (degree < 0) throw InvalidInputError("coherent_inner: degree >= 0");

  const cplx ip = psi.dot(phi);  // <psi, phi>, antilinear in psi
  cplx series{0.0, 0.0};
  cplx term{1.0, 0.0};
  for (int n = 0;; ++n) {
    series += term;
    if (n == degree) break;
    term *= ip / double(n + 1);
  }

  // independent route: contract materialized graded coefficients
  const cplx contracted = coherent_vector(psi, degree, budget)
                              .coeffs.dot(coherent_vector(phi, degree, budget).coeffs);
  if (std::abs(series - contracted) > 1e-12 * std::max(1.0, std::abs(series)))
    throw Error("coherent_inner: series and graded contraction disagree");

  CoherentInner out;
  out.value = series;
  const double np = psi.norm(), nq = phi.norm();
  double tail = 1.0;
  for (int n = 1; n <= degree + 1; ++n) tail *= np * nq / double(n);
  out.bound = tail * std::exp(np * nq);
  return out;
}

Eigen::MatrixXcd weyl_gram(const LevyTriplet& trip, const std::vector<double>& grid,
                           double h, double branch_floor) {
  const WeylContext ctx = weyl_ratios(trip, grid, h, branch_floor);
  const Eigen::Index n = Eigen::Index(grid.size());
  Eigen::MatrixXcd G(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      G(j, k) = ctx.ratio[k] * std::exp(gns::kernel(trip, grid[j], h + grid[k]));
  return G;
}

double weyl_unitarity_residual(const LevyTriplet& trip, const std::vector<double>& grid,
                               double h, double branch_floor) {
  const WeylContext ctx = weyl_ratios(trip, grid, h, branch_floor);
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j)
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const cplx lhs = std::conj(ctx.ratio[j]) * ctx.ratio[k] *
                       std::exp(gns::kernel(trip, h + grid[j], h + grid[k]));
      const cplx rhs = std::exp(gns::kernel(trip, grid[j], grid[k]));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  return worst;
}

cplx vacuum_expectation(const LevyTriplet& trip, double t) {
  return weyl_gram(trip, {0.0}, t)(0, 0);
}

double representation_residual(const LevyTriplet& trip, const std::vector<double>& grid,
                               double h1, double h2, double branch_floor) {
  // W(h2) then W(h1): EXP psi(t) picks up c2(t) * c1(h2 + t) against
  // c12(t) for the direct action of W(h1 + h2).
  double worst = 0.0;
  for (double t : grid) {
    const cplx f_t = exponent::char_fn(trip, t);
    const cplx f_h2t = exponent::char_fn(trip, h2 + t);
    if (std::abs(f_t) <= branch_floor || std::abs(f_h2t) <= branch_floor)
      throw ZeroCrossingError("weyl: F vanishes at a grid point");
    const cplx composed = (f_h2t / f_t) * (exponent::char_fn(trip, h1 + h2 + t) / f_h2t);
    const cplx direct = exponent::char_fn(trip, h1 + h2 + t) / f_t;
    for (double s : grid) {
      const cplx elem = std::exp(gns::kernel(trip, s, h1 + h2 + t));
      worst = std::max(worst, std::abs((composed - direct) * elem));
    }
  }
  return worst;
}

}  // namespace levyfock::fock
