#include "levyfock/gns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "levyfock/posdef.hpp"
#include "levyfock/quadrature.hpp"

namespace levyfock::gns {

namespace {

using exponent::Atom;
using exponent::Density;

// (e^{-ips} - 1)(e^{ipt} - 1), stable near p = 0.
cplx kernel_factor(double p, double s, double t) {
  const double ss = std::sin(0.5 * p * s);
  const double st = std::sin(0.5 * p * t);
  const cplx left{-2.0 * ss * ss, -std::sin(p * s)};
  const cplx right{-2.0 * st * st, std::sin(p * t)};
  return left * right;
}

quad::Options quad_options(const exponent::QuadratureSpec& spec) {
  quad::Options o;
  o.abs_tol = spec.tol;
  o.rel_tol = spec.tol;
  o.max_intervals = spec.max_intervals;
  return o;
}

}  // namespace

cplx kernel(const LevyTriplet& trip, double s, double t) {
  if (!(trip.a >= 0.0)) throw InvalidInputError("triplet needs a >= 0");
  if (s == 0.0 || t == 0.0) return {0.0, 0.0};
  cplx k{trip.a * s * t, 0.0};
  for (const Atom& at : trip.nu.atoms) k += at.w * kernel_factor(at.p, s, t);
  if (trip.nu.density) {
    const Density& d = *trip.nu.density;
    const quad::Options opt = quad_options(trip.nu.quadrature);
    auto integrand = [&](double p) { return kernel_factor(p, s, t) * d(p); };
    for (auto [lo, hi] : d.pieces()) {
      quad::Result r;
      if (hi == std::numeric_limits<double>::infinity() &&
          lo == -std::numeric_limits<double>::infinity()) {
        quad::Result neg = quad::integrate_semi_infinite_below(integrand, 0.0, opt);
        quad::Result pos = quad::integrate_semi_infinite_above(integrand, 0.0, opt);
        r.value = neg.value + pos.value;
        r.converged = neg.converged && pos.converged;
      } else if (hi == std::numeric_limits<double>::infinity()) {
        r = quad::integrate_semi_infinite_above(integrand, lo, opt);
      } else if (lo == -std::numeric_limits<double>::infinity()) {
        r = quad::integrate_semi_infinite_below(integrand, hi, opt);
      } else {
        std::vector<double> bp = {lo, hi};
        for (double c : {-1.0, 0.0, 1.0})
          if (c > lo && c < hi) bp.push_back(c);
        std::sort(bp.begin(), bp.end());
        r = quad::integrate(integrand, bp, opt);
      }
      if (!r.converged) throw QuadratureError("cocycle kernel integral did not converge");
      k += r.value;
    }
  }
  return k;
}

KernelMatrix kernel_matrix(const LevyTriplet& trip, const std::vector<double>& grid) {
  KernelMatrix km;
  km.grid = grid;
  const Eigen::Index n = Eigen::Index(grid.size());
  km.K.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j; k < n; ++k) {
      km.K(j, k) = kernel(trip, grid[j], grid[k]);
      km.K(k, j) = std::conj(km.K(j, k));
    }
  }
  return km;
}

KernelMatrix kernel_matrix(const GridFunction& f) {
  KernelMatrix km;
  km.grid = posdef::one_sided_points(f.points);
  km.K = posdef::conditional_kernel(f, &km.grid);
  return km;
}

void validate_kernel_matrix(const KernelMatrix& km) {
  const Eigen::Index n = km.K.rows();
  if (n != km.K.cols() || std::size_t(n) != km.grid.size())
    throw InvalidInputError("kernel matrix: shape mismatch");
  const double scale = std::max(1.0, km.K.cwiseAbs().maxCoeff());
  if ((km.K - km.K.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidInputError("kernel matrix: not Hermitian");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (km.K(j, j).real() < -1e-12 * scale ||
        std::abs(km.K(j, j).imag()) > 1e-12 * scale)
      throw InvalidInputError("kernel matrix: diagonal must be real nonnegative");
    if (km.grid[j] == 0.0 &&
        (km.K.row(j).cwiseAbs().maxCoeff() > 1e-12 * scale ||
         km.K.col(j).cwiseAbs().maxCoeff() > 1e-12 * scale))
      throw InvalidInputError("kernel matrix: row/column at t = 0 must vanish");
  }
}

CocycleRealization realize_cocycle(const KernelMatrix& km, double eigen_floor) {
  validate_kernel_matrix(km);
  const Eigen::Index n = km.K.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (km.K + km.K.adjoint()));
  const Eigen::VectorXd ev = solver.eigenvalues();
  const double lam_max = std::max(0.0, ev(n - 1));
  if (ev(0) < -1e-8 * std::max(1.0, lam_max))
    throw NotPsdError("realize_cocycle: kernel matrix is not PSD (min eigenvalue " +
                      std::to_string(ev(0)) + ")");

  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < n; ++i)
    if (ev(i) > eigen_floor * lam_max && ev(i) > 0.0) kept.push_back(i);

  CocycleRealization real;
  real.grid = km.grid;
  real.eigen_floor = eigen_floor;
  real.rank = int(kept.size());
  real.vectors.resize(real.rank, n);
  for (std::size_t r = 0; r < kept.size(); ++r) {
    const double root = std::sqrt(ev(kept[r]));
    for (Eigen::Index j = 0; j < n; ++j)
      real.vectors(Eigen::Index(r), j) = root * std::conj(solver.eigenvectors()(j, kept[r]));
  }
  return real;
}

double shift_covariance_residual(const LevyTriplet& trip,
                                 const std::vector<double>& grid, double h) {
  double worst = 0.0;
  const cplx khh = kernel(trip, h, h);
  for (double s : grid) {
    const cplx ksh = kernel(trip, h + s, h);
    for (double t : grid) {
      const cplx lhs = kernel(trip, h + s, h + t) - ksh - kernel(trip, h, h + t) + khh;
      worst = std::max(worst, std::abs(lhs - kernel(trip, s, t)));
    }
  }
  return worst;
}

double shift_covariance_residual(const GridFunction& f,
                                 const std::vector<double>& grid, double h) {
  validate_grid_function(f, GridKind::CharExponent);
  GridEvaluator eval(f, GridKind::CharExponent);
  auto K = [&eval](double s, double t) {
    return eval(t - s) - eval(-s) - eval(t);
  };
  double worst = 0.0;
  const cplx khh = K(h, h);
  for (double s : grid) {
    const cplx ksh = K(h + s, h);
    for (double t : grid) {
      const cplx lhs = K(h + s, h + t) - ksh - K(h, h + t) + khh;
      worst = std::max(worst, std::abs(lhs - K(s, t)));
    }
  }
  return worst;
}

CoboundaryFit coboundary_residual(const CocycleRealization& real,
                                  const LevyTriplet& trip) {
  const std::vector<double>& g = real.grid;
  const Eigen::Index m = Eigen::Index(g.size());

  // Cache kernel values on the union of {g_j}, {g_j + g_k}.
  auto K = [&trip](double s, double t) { return kernel(trip, s, t); };

  // D_h(x) = psi(x + h) - psi(x) - psi(h);  inner products expand in K.
  auto dot_DD = [&](double h1, double h2, double x) {
    return K(x + h1, x + h2) - K(x + h1, x) - K(x + h1, h2)
         - K(x, x + h2) + K(x, x) + K(x, h2)
         - K(h1, x + h2) + K(h1, x) + K(h1, h2);
  };
  auto dot_Dpsi = [&](double h1, double x) {
    return K(x + h1, x) - K(x, x) - K(h1, x);
  };

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(m, m);
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(m);
  double S = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j)
      for (double x : g) A(i, j) += dot_DD(g[i], g[j], x);
    for (double x : g) y(i) += dot_Dpsi(g[i], x);
    S += K(g[i], g[i]).real();
  }

  // Minimum-norm solution of A c = y via eigen-pseudoinverse.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (A + A.adjoint()));
  const Eigen::VectorXd ev = solver.eigenvalues();
  const double lam_max = ev.size() ? std::max(0.0, ev(ev.size() - 1)) : 0.0;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (ev(i) > 1e-12 * std::max(1.0, lam_max)) {
      const Eigen::VectorXcd u = solver.eigenvectors().col(i);
      c += u * (u.dot(y) / ev(i));
    }
  }

  CoboundaryFit fit;
  const double j_min = std::max(0.0, S - 2.0 * std::real(y.dot(c)) +
                                         std::real(c.dot(A * c)));
  fit.residual = std::sqrt(j_min / double(m));
  double max_norm2 = 0.0;
  for (Eigen::Index j = 0; j < m; ++j)
    max_norm2 = std::max(max_norm2, K(g[j], g[j]).real());
  fit.normalized = max_norm2 > 0.0 ? fit.residual / std::sqrt(max_norm2) : 0.0;
  fit.psi0 = real.vectors * c;
  return fit;
}

std::string kernel_matrix_to_json(const KernelMatrix& km) {
  nlohmann::json j;
  j["grid"] = km.grid;
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < km.K.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < km.K.cols(); ++c)
      row.push_back(nlohmann::json::array({km.K(r, c).real(), km.K(r, c).imag()}));
    rows.push_back(row);
  }
  j["entries"] = rows;
  return j.dump(2);
}

std::string realization_to_json(const CocycleRealization& real) {
  nlohmann::json j;
  j["grid"] = real.grid;
  j["rank"] = real.rank;
  j["eigen_floor"] = real.eigen_floor;
  nlohmann::json vecs = nlohmann::json::array();
  for (Eigen::Index c = 0; c < real.vectors.cols(); ++c) {
    nlohmann::json v = nlohmann::json::array();
    for (Eigen::Index r = 0; r < real.vectors.rows(); ++r)
      v.push_back(nlohmann::json::array(
          {real.vectors(r, c).real(), real.vectors(r, c).imag()}));
    vecs.push_back(v);
  }
  j["vectors"] = vecs;
  return j.dump(2);
}

}  // namespace levyfock::gns
