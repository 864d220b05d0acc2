#include "levyfock/posdef.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace levyfock::posdef {

namespace {

cplx sigma_or_one(const SigmaFn& sigma, double g, double h) {
  if (!sigma) return {1.0, 0.0};
  const cplx s = sigma(g, h);
  if (std::abs(std::abs(s) - 1.0) > 1e-12)
    throw InvalidInputError("sigma must take unit-modulus values");
  return s;
}

Eigen::MatrixXcd gram_impl(const std::function<cplx(double)>& F,
                           const std::vector<double>& pts, const SigmaFn& sigma) {
  const Eigen::Index n = Eigen::Index(pts.size());
  Eigen::MatrixXcd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const cplx v = sigma_or_one(sigma, -pts[i], pts[j]) * F(pts[j] - pts[i]);
      M(i, j) = v;
      if (j != i) {
        const cplx w = sigma_or_one(sigma, -pts[j], pts[i]) * F(pts[i] - pts[j]);
        if (std::abs(w - std::conj(v)) > 1e-12 * std::max(1.0, std::abs(v)))
          throw InvalidInputError(
              "gram: input function (or sigma) is not Hermitian-compatible");
        M(j, i) = w;
      }
    }
  }
  return M;
}

}  // namespace

Eigen::MatrixXcd gram(const std::function<cplx(double)>& F,
                      const std::vector<double>& points, const SigmaFn& sigma) {
  if (points.empty()) throw InvalidInputError("gram: empty point set");
  return gram_impl(F, points, sigma);
}

Eigen::MatrixXcd gram(const GridFunction& F, const SigmaFn& sigma,
                      const std::vector<double>* gram_points) {
  validate_grid_function(F, GridKind::CharFunction);
  GridEvaluator eval(F, GridKind::CharFunction);
  const std::vector<double>& pts = gram_points ? *gram_points : F.points;
  if (pts.empty()) throw InvalidInputError("gram: empty point set");
  return gram_impl([&eval](double t) { return eval(t); }, pts, sigma);
}

PsdVerdict psd_check(const Eigen::MatrixXcd& M, double tol) {
  if (M.rows() != M.cols() || M.rows() == 0)
    throw InvalidInputError("psd_check: matrix must be square and nonempty");
  const double herm_dev = (M - M.adjoint()).cwiseAbs().maxCoeff();
  const double m_scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if (herm_dev > 1e-10 * m_scale)
    throw InvalidInputError("psd_check: matrix is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      0.5 * (M + M.adjoint()), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  PsdVerdict v;
  v.min_eigenvalue = ev(0);
  v.scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  v.tolerance = tol;
  v.is_psd = v.min_eigenvalue >= -tol * std::max(1.0, v.scale);
  return v;
}

GridFunction log_branch(const GridFunction& F, const BranchOptions& opt) {
  validate_grid_function(F, GridKind::CharFunction);
  const auto& pts = F.points;
  auto zero_it = std::find(pts.begin(), pts.end(), 0.0);
  if (zero_it == pts.end())
    throw InvalidInputError("log_branch: grid must contain 0");
  const std::size_t z = std::size_t(zero_it - pts.begin());

  for (std::size_t j = 0; j < pts.size(); ++j)
    if (std::abs(F.values[j]) <= opt.branch_floor)
      throw ZeroCrossingError("log_branch: |F| <= branch floor at t = " +
                              std::to_string(pts[j]) +
                              " (F vanishes; no branch of log F exists there)");

  GridFunction f;
  f.points = pts;
  f.values.assign(pts.size(), cplx{0.0, 0.0});

  auto step = [&](std::size_t from, std::size_t to) {
    const double darg = std::arg(F.values[to] / F.values[from]);
    if (!opt.allow_pi_steps &&
        std::abs(darg) >= std::numbers::pi * (1.0 - 1e-9))
      throw AliasingError("log_branch: phase step reached pi between t = " +
                          std::to_string(pts[from]) + " and t = " +
                          std::to_string(pts[to]) + " (grid too coarse or F "
                          "vanishes between grid points)");
    f.values[to] = {std::log(std::abs(F.values[to])), f.values[from].imag() + darg};
  };
  // arg(F(0)) may be a tiny nonzero; pin f(0) = 0 exactly
  f.values[z] = {0.0, 0.0};
  for (std::size_t j = z; j + 1 < pts.size(); ++j) step(j, j + 1);
  for (std::size_t j = z; j > 0; --j) step(j, j - 1);
  return f;
}

std::vector<double> one_sided_points(const std::vector<double>& points) {
  std::vector<double> pos, neg;
  for (double t : points) {
    if (t >= 0.0) pos.push_back(t);
    if (t <= 0.0) neg.push_back(t);
  }
  return pos.size() >= neg.size() ? pos : neg;
}

Eigen::MatrixXcd conditional_kernel(const GridFunction& f,
                                    const std::vector<double>* points) {
  validate_grid_function(f, GridKind::CharExponent);
  GridEvaluator eval(f, GridKind::CharExponent);
  const std::vector<double> def = points ? std::vector<double>{} : one_sided_points(f.points);
  const std::vector<double>& pts = points ? *points : def;
  if (pts.empty()) throw InvalidInputError("conditional_kernel: empty point set");
  const Eigen::Index n = Eigen::Index(pts.size());
  Eigen::MatrixXcd C(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      C(j, k) = eval(pts[k] - pts[j]) - eval(-pts[j]) - eval(pts[k]);
  return C;
}

PsdVerdict conditional_psd_check(const GridFunction& f, double tol) {
  return psd_check(conditional_kernel(f), tol);
}

DivisibilityReport divisibility_from_exponent(const GridFunction& f, int n_max,
                                              double tol) {
  validate_grid_function(f, GridKind::CharExponent);
  if (n_max < 1) throw InvalidInputError("divisibility check: n_max >= 1");
  if (!arithmetic_step(f.points))
    throw InvalidInputError("divisibility check: grid must be arithmetic");
  if (std::find(f.points.begin(), f.points.end(), 0.0) == f.points.end())
    throw InvalidInputError("divisibility check: grid must contain 0");

  DivisibilityReport rep;
  const std::vector<double> pts = one_sided_points(f.points);
  GridEvaluator feval(f, GridKind::CharExponent);
  rep.pass = true;
  for (int n = 1; n <= n_max; ++n) {
    auto root = [&](double t) { return std::exp(feval(t) / double(n)); };
    const Eigen::MatrixXcd M = gram_impl(root, pts, SigmaFn{});
    DivisibilityEntry entry;
    entry.n = n;
    entry.verdict = psd_check(M, tol);
    rep.pass = rep.pass && entry.verdict.is_psd;
    rep.per_n.push_back(entry);
  }
  return rep;
}

DivisibilityReport infinite_divisibility_check(const GridFunction& F, int n_max,
                                               double tol) {
  validate_grid_function(F, GridKind::CharFunction);
  if (n_max < 1) throw InvalidInputError("divisibility check: n_max >= 1");
  if (!arithmetic_step(F.points))
    throw InvalidInputError("divisibility check: grid must be arithmetic");
  if (std::find(F.points.begin(), F.points.end(), 0.0) == F.points.end())
    throw InvalidInputError("divisibility check: grid must contain 0");

  GridFunction f;
  try {
    BranchOptions bopt;
    bopt.allow_pi_steps = true;
    f = log_branch(F, bopt);
  } catch (const ZeroCrossingError&) {
    DivisibilityReport rep;
    rep.branch_failure = "zero_crossing";
    rep.pass = false;
    return rep;
  }
  DivisibilityReport rep = divisibility_from_exponent(f, n_max, tol);
  // count the phase-ambiguity resolutions for the report
  for (std::size_t j = 0; j + 1 < F.points.size(); ++j) {
    const double darg = std::arg(F.values[j + 1] / F.values[j]);
    if (std::abs(darg) >= std::numbers::pi * (1.0 - 1e-9)) ++rep.pi_steps;
  }
  return rep;
}

}  // namespace levyfock::posdef
