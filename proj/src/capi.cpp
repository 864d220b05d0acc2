#include "levyfock/levyfock.h"

#include <cstring>
#include <string>

#include "levyfock/exponent.hpp"
#include "levyfock/fock.hpp"
#include "levyfock/gns.hpp"
#include "levyfock/posdef.hpp"
#include "levyfock/sampler.hpp"
#include "levyfock/triplet_io.hpp"

using namespace levyfock;

struct lf_triplet {
  exponent::LevyTriplet trip;
};

struct lf_realization {
  gns::CocycleRealization real;
};

namespace {

thread_local std::string g_last_error;

lf_status fail(lf_status s, const char* what) {
  g_last_error = what;
  return s;
}

// Runs the body, mapping exceptions to status codes.
template <typename Fn>
lf_status guarded(Fn&& fn) {
  try {
    fn();
    return LF_OK;
  } catch (const ParseError& e) {
    return fail(LF_ERR_PARSE, e.what());
  } catch (const IntegrabilityError& e) {
    return fail(LF_ERR_INTEGRABILITY, e.what());
  } catch (const QuadratureError& e) {
    return fail(LF_ERR_QUADRATURE, e.what());
  } catch (const BranchError& e) {
    return fail(LF_ERR_BRANCH, e.what());
  } catch (const NotPsdError& e) {
    return fail(LF_ERR_NOT_PSD, e.what());
  } catch (const UnevaluableError& e) {
    return fail(LF_ERR_UNEVALUABLE, e.what());
  } catch (const BudgetError& e) {
    return fail(LF_ERR_BUDGET, e.what());
  } catch (const InvalidInputError& e) {
    return fail(LF_ERR_INVALID_ARGUMENT, e.what());
  } catch (const Error& e) {
    return fail(LF_ERR_INTERNAL, e.what());
  } catch (const std::exception& e) {
    return fail(LF_ERR_INTERNAL, e.what());
  }
}

lf_status require(bool ok, const char* what) {
  return ok ? LF_OK : fail(LF_ERR_INVALID_ARGUMENT, what);
}

exponent::Convention to_convention(lf_convention c) {
  switch (c) {
    case LF_CONVENTION_DEFINETTI:
      return exponent::Convention::DeFinetti;
    case LF_CONVENTION_KOLMOGOROV:
      return exponent::Convention::Kolmogorov;
    case LF_CONVENTION_LEVY:
      return exponent::Convention::Levy;
  }
  throw InvalidInputError("bad convention value");
}

lf_convention from_convention(exponent::Convention c) {
  switch (c) {
    case exponent::Convention::DeFinetti:
      return LF_CONVENTION_DEFINETTI;
    case exponent::Convention::Kolmogorov:
      return LF_CONVENTION_KOLMOGOROV;
    case exponent::Convention::Levy:
      return LF_CONVENTION_LEVY;
  }
  return LF_CONVENTION_LEVY;
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

GridFunction grid_from_arrays(const double* points, const double* re,
                              const double* im, size_t n) {
  GridFunction g;
  g.points.assign(points, points + n);
  g.values.reserve(n);
  for (size_t j = 0; j < n; ++j) g.values.push_back({re[j], im[j]});
  return g;
}

void write_matrix(const Eigen::MatrixXcd& M, double* out) {
  const Eigen::Index rows = M.rows(), cols = M.cols();
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      out[2 * (i * cols + j)] = M(i, j).real();
      out[2 * (i * cols + j) + 1] = M(i, j).imag();
    }
}

Eigen::MatrixXcd read_matrix(const double* in, size_t rows, size_t cols) {
  Eigen::MatrixXcd M(rows, cols);
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j)
      M(Eigen::Index(i), Eigen::Index(j)) = {in[2 * (i * cols + j)],
                                             in[2 * (i * cols + j) + 1]};
  return M;
}

void write_verdict(const posdef::PsdVerdict& v, lf_psd_verdict* out) {
  out->is_psd = v.is_psd ? 1 : 0;
  out->min_eigenvalue = v.min_eigenvalue;
  out->scale = v.scale;
  out->tolerance = v.tolerance;
}

lf_status divisibility_common(const GridFunction& F, int n_max, double tol,
                              lf_psd_verdict* out_verdicts, int* out_n_evaluated,
                              int* out_pass, int* out_zero_crossing,
                              int* out_pi_steps) {
  const posdef::DivisibilityReport rep =
      posdef::infinite_divisibility_check(F, n_max, tol);
  *out_n_evaluated = int(rep.per_n.size());
  *out_pass = rep.pass ? 1 : 0;
  *out_zero_crossing = rep.branch_failure == "zero_crossing" ? 1 : 0;
  *out_pi_steps = rep.pi_steps;
  for (size_t i = 0; i < rep.per_n.size(); ++i)
    write_verdict(rep.per_n[i].verdict, &out_verdicts[i]);
  return LF_OK;
}

}  // namespace

extern "C" {

const char* lf_version(void) { return LEVYFOCK_VERSION; }

const char* lf_status_name(lf_status s) {
  switch (s) {
    case LF_OK: return "ok";
    case LF_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case LF_ERR_PARSE: return "parse_error";
    case LF_ERR_INTEGRABILITY: return "integrability_error";
    case LF_ERR_QUADRATURE: return "quadrature_error";
    case LF_ERR_BRANCH: return "branch_error";
    case LF_ERR_NOT_PSD: return "not_psd";
    case LF_ERR_UNEVALUABLE: return "unevaluable";
    case LF_ERR_BUDGET: return "budget_exceeded";
    case LF_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* lf_last_error(void) { return g_last_error.c_str(); }

void lf_string_free(char* s) { delete[] s; }

lf_status lf_triplet_parse_json(const char* text, lf_triplet** out) {
  if (lf_status s = require(text && out, "null argument")) return s;
  return guarded([&] { *out = new lf_triplet{exponent::triplet_from_json(text)}; });
}

lf_status lf_triplet_create(double b, double a, lf_convention convention,
                            const double* atom_pw, size_t n_atoms, lf_triplet** out) {
  if (lf_status s = require(out && (n_atoms == 0 || atom_pw), "null argument")) return s;
  return guarded([&] {
    exponent::LevyTriplet trip;
    trip.b = b;
    trip.a = a;
    trip.convention = to_convention(convention);
    for (size_t k = 0; k < n_atoms; ++k)
      trip.nu.atoms.push_back({atom_pw[2 * k], atom_pw[2 * k + 1]});
    if (a < 0.0) throw InvalidInputError("a must be >= 0");
    exponent::validate_measure(trip.nu);
    *out = new lf_triplet{std::move(trip)};
  });
}

void lf_triplet_free(lf_triplet* t) { delete t; }

lf_status lf_triplet_to_json(const lf_triplet* t, char** out_json) {
  if (lf_status s = require(t && out_json, "null argument")) return s;
  return guarded([&] { *out_json = copy_string(exponent::triplet_to_json(t->trip)); });
}

lf_status lf_triplet_convention(const lf_triplet* t, lf_convention* out) {
  if (lf_status s = require(t && out, "null argument")) return s;
  *out = from_convention(t->trip.convention);
  return LF_OK;
}

lf_status lf_triplet_convert(const lf_triplet* t, lf_convention target,
                             lf_triplet** out) {
  if (lf_status s = require(t && out, "null argument")) return s;
  return guarded([&] {
    *out = new lf_triplet{exponent::convert(t->trip, to_convention(target))};
  });
}

lf_status lf_levy_measure_moment(const lf_triplet* t, lf_moment_kind kind,
                                 double delta, double* out) {
  if (lf_status s = require(t && out, "null argument")) return s;
  return guarded([&] {
    exponent::MomentKind mk;
    switch (kind) {
      case LF_MOMENT_TOTAL_MASS: mk = exponent::MomentKind::TotalMass; break;
      case LF_MOMENT_MIN1P2: mk = exponent::MomentKind::Min1P2; break;
      case LF_MOMENT_P_OVER_1P2: mk = exponent::MomentKind::POver1P2; break;
      case LF_MOMENT_P3_OVER_1P2: mk = exponent::MomentKind::P3Over1P2; break;
      case LF_MOMENT_TRUNC_VAR: mk = exponent::MomentKind::TruncVar; break;
      default: throw InvalidInputError("bad moment kind");
    }
    *out = exponent::levy_measure_moment(t->trip.nu, mk, delta);
  });
}

lf_status lf_triplet_validate(const lf_triplet* t, lf_triplet_diagnostics* out) {
  if (lf_status s = require(t && out, "null argument")) return s;
  return guarded([&] {
    const exponent::TripletDiagnostics diag = exponent::validate_triplet(t->trip);
    *out = {};
    for (const auto& chk : diag.checks) {
      if (chk.name == "min1p2") {
        out->min1p2 = chk.value;
        out->min1p2_ok = chk.pass;
      } else if (chk.name == "abs_p_tail") {
        out->abs_p_tail = chk.value;
        out->abs_p_tail_ok = chk.pass;
        out->abs_p_tail_required = chk.required;
      } else if (chk.name == "total_mass") {
        out->total_mass = chk.value;
        out->total_mass_ok = chk.pass;
        out->total_mass_required = chk.required;
      }
    }
    out->overall_ok = diag.ok;
  });
}

lf_status lf_eval_exponent(const lf_triplet* t, double x, double* re, double* im) {
  if (lf_status s = require(t && re && im, "null argument")) return s;
  return guarded([&] {
    const cplx f = exponent::eval_exponent(t->trip, x);
    *re = f.real();
    *im = f.imag();
  });
}

lf_status lf_char_fn(const lf_triplet* t, double x, double* re, double* im) {
  if (lf_status s = require(t && re && im, "null argument")) return s;
  return guarded([&] {
    const cplx F = exponent::char_fn(t->trip, x);
    *re = F.real();
    *im = F.imag();
  });
}

lf_status lf_gram_from_triplet(const lf_triplet* t, const double* points, size_t n,
                               double* out) {
  if (lf_status s = require(t && points && out && n > 0, "null or empty argument"))
    return s;
  return guarded([&] {
    std::vector<double> pts(points, points + n);
    const Eigen::MatrixXcd M = posdef::gram(
        [&](double x) { return exponent::char_fn(t->trip, x); }, pts);
    write_matrix(M, out);
  });
}

lf_status lf_gram_from_grid(const double* points, const double* re, const double* im,
                            size_t n, double* out) {
  if (lf_status s = require(points && re && im && out && n > 0, "null or empty argument"))
    return s;
  return guarded([&] {
    const GridFunction F = grid_from_arrays(points, re, im, n);
    write_matrix(posdef::gram(F), out);
  });
}

lf_status lf_psd_check(const double* matrix, size_t n, double tol,
                       lf_psd_verdict* out) {
  if (lf_status s = require(matrix && out && n > 0, "null or empty argument")) return s;
  return guarded([&] {
    write_verdict(posdef::psd_check(read_matrix(matrix, n, n), tol), out);
  });
}

lf_status lf_log_branch(const double* points, const double* re, const double* im,
                        size_t n, double branch_floor, double* out_re,
                        double* out_im) {
  if (lf_status s =
          require(points && re && im && out_re && out_im && n > 0, "null argument"))
    return s;
  return guarded([&] {
    posdef::BranchOptions opt;
    if (branch_floor > 0.0) opt.branch_floor = branch_floor;
    const GridFunction f = posdef::log_branch(grid_from_arrays(points, re, im, n), opt);
    for (size_t j = 0; j < n; ++j) {
      out_re[j] = f.values[j].real();
      out_im[j] = f.values[j].imag();
    }
  });
}

lf_status lf_conditional_psd_check(const double* points, const double* re,
                                   const double* im, size_t n, double tol,
                                   lf_psd_verdict* out) {
  if (lf_status s = require(points && re && im && out && n > 0, "null argument"))
    return s;
  return guarded([&] {
    const GridFunction f = grid_from_arrays(points, re, im, n);
    write_verdict(posdef::conditional_psd_check(f, tol), out);
  });
}

lf_status lf_divisibility_check_grid(const double* points, const double* re,
                                     const double* im, size_t n, int n_max,
                                     double tol, lf_psd_verdict* out_verdicts,
                                     int* out_n_evaluated, int* out_pass,
                                     int* out_zero_crossing, int* out_pi_steps) {
  if (lf_status s = require(points && re && im && out_verdicts && out_n_evaluated &&
                                out_pass && out_zero_crossing && out_pi_steps && n > 0,
                            "null argument"))
    return s;
  return guarded([&] {
    divisibility_common(grid_from_arrays(points, re, im, n), n_max, tol, out_verdicts,
                        out_n_evaluated, out_pass, out_zero_crossing, out_pi_steps);
  });
}

lf_status lf_divisibility_check_triplet(const lf_triplet* t, const double* points,
                                        size_t n, int n_max, double tol,
                                        lf_psd_verdict* out_verdicts,
                                        int* out_n_evaluated, int* out_pass,
                                        int* out_zero_crossing, int* out_pi_steps) {
  if (lf_status s = require(t && points && out_verdicts && out_n_evaluated && out_pass &&
                                out_zero_crossing && out_pi_steps && n > 0,
                            "null argument"))
    return s;
  return guarded([&] {
    // the exponent branch is known exactly here, so no |F| floor applies
    std::vector<double> pts(points, points + n);
    const GridFunction f = exponent::exponent_grid(t->trip, pts);
    const posdef::DivisibilityReport rep =
        posdef::divisibility_from_exponent(f, n_max, tol);
    *out_n_evaluated = int(rep.per_n.size());
    *out_pass = rep.pass ? 1 : 0;
    *out_zero_crossing = 0;
    *out_pi_steps = rep.pi_steps;
    for (size_t i = 0; i < rep.per_n.size(); ++i)
      write_verdict(rep.per_n[i].verdict, &out_verdicts[i]);
  });
}

lf_status lf_cocycle_kernel(const lf_triplet* t, double s, double x, double* re,
                            double* im) {
  if (lf_status st = require(t && re && im, "null argument")) return st;
  return guarded([&] {
    const cplx k = gns::kernel(t->trip, s, x);
    *re = k.real();
    *im = k.imag();
  });
}

lf_status lf_kernel_matrix(const lf_triplet* t, const double* grid, size_t n,
                           double* out) {
  if (lf_status s = require(t && grid && out && n > 0, "null argument")) return s;
  return guarded([&] {
    std::vector<double> g(grid, grid + n);
    write_matrix(gns::kernel_matrix(t->trip, g).K, out);
  });
}

lf_status lf_kernel_matrix_to_json(const double* grid, size_t n, const double* matrix,
                                   char** out_json) {
  if (lf_status s = require(grid && matrix && out_json && n > 0, "null argument"))
    return s;
  return guarded([&] {
    gns::KernelMatrix km;
    km.grid.assign(grid, grid + n);
    km.K = read_matrix(matrix, n, n);
    *out_json = copy_string(gns::kernel_matrix_to_json(km));
  });
}

lf_status lf_realize_cocycle(const double* grid, size_t n, const double* matrix,
                             double eigen_floor, lf_realization** out) {
  if (lf_status s = require(grid && matrix && out && n > 0, "null argument")) return s;
  return guarded([&] {
    gns::KernelMatrix km;
    km.grid.assign(grid, grid + n);
    km.K = read_matrix(matrix, n, n);
    *out = new lf_realization{gns::realize_cocycle(km, eigen_floor)};
  });
}

void lf_realization_free(lf_realization* r) { delete r; }

lf_status lf_realization_rank(const lf_realization* r, int* out) {
  if (lf_status s = require(r && out, "null argument")) return s;
  *out = r->real.rank;
  return LF_OK;
}

lf_status lf_realization_vectors(const lf_realization* r, double* out) {
  if (lf_status s = require(r && out, "null argument")) return s;
  write_matrix(r->real.vectors, out);
  return LF_OK;
}

lf_status lf_realization_to_json(const lf_realization* r, char** out_json) {
  if (lf_status s = require(r && out_json, "null argument")) return s;
  return guarded([&] { *out_json = copy_string(gns::realization_to_json(r->real)); });
}

lf_status lf_shift_covariance_residual(const lf_triplet* t, const double* grid,
                                       size_t n, double h, double* out) {
  if (lf_status s = require(t && grid && out && n > 0, "null argument")) return s;
  return guarded([&] {
    std::vector<double> g(grid, grid + n);
    *out = gns::shift_covariance_residual(t->trip, g, h);
  });
}

lf_status lf_coboundary_residual(const lf_realization* r, const lf_triplet* t,
                                 double* out_residual, double* out_normalized,
                                 double* out_psi0) {
  if (lf_status s = require(r && t && out_residual && out_normalized, "null argument"))
    return s;
  return guarded([&] {
    const gns::CoboundaryFit fit = gns::coboundary_residual(r->real, t->trip);
    *out_residual = fit.residual;
    *out_normalized = fit.normalized;
    if (out_psi0)
      for (Eigen::Index i = 0; i < fit.psi0.size(); ++i) {
        out_psi0[2 * i] = fit.psi0(i).real();
        out_psi0[2 * i + 1] = fit.psi0(i).imag();
      }
  });
}

lf_status lf_fock_dimension(int r, int degree, uint64_t* out) {
  if (lf_status s = require(out != nullptr, "null argument")) return s;
  return guarded([&] { *out = fock::TruncatedFock::dimension(r, degree); });
}

lf_status lf_coherent_inner(const double* psi, const double* phi, size_t r, int degree,
                            double* out_re, double* out_im, double* out_bound) {
  if (lf_status s = require(psi && phi && out_re && out_im && out_bound, "null argument"))
    return s;
  return guarded([&] {
    Eigen::VectorXcd vp(r), vq(r);
    for (size_t i = 0; i < r; ++i) {
      vp(Eigen::Index(i)) = {psi[2 * i], psi[2 * i + 1]};
      vq(Eigen::Index(i)) = {phi[2 * i], phi[2 * i + 1]};
    }
    const fock::CoherentInner ci = fock::coherent_inner(vp, vq, degree);
    *out_re = ci.value.real();
    *out_im = ci.value.imag();
    *out_bound = ci.bound;
  });
}

lf_status lf_weyl_gram(const lf_triplet* t, const double* grid, size_t n, double h,
                       double* out) {
  if (lf_status s = require(t && grid && out && n > 0, "null argument")) return s;
  return guarded([&] {
    std::vector<double> g(grid, grid + n);
    write_matrix(fock::weyl_gram(t->trip, g, h), out);
  });
}

lf_status lf_weyl_unitarity_residual(const lf_triplet* t, const double* grid, size_t n,
                                     double h, double* out) {
  if (lf_status s = require(t && grid && out && n > 0, "null argument")) return s;
  return guarded([&] {
    std::vector<double> g(grid, grid + n);
    *out = fock::weyl_unitarity_residual(t->trip, g, h);
  });
}

lf_status lf_vacuum_expectation(const lf_triplet* t, double x, double* re, double* im) {
  if (lf_status s = require(t && re && im, "null argument")) return s;
  return guarded([&] {
    const cplx v = fock::vacuum_expectation(t->trip, x);
    *re = v.real();
    *im = v.imag();
  });
}

lf_status lf_representation_residual(const lf_triplet* t, const double* grid, size_t n,
                                     double h1, double h2, double* out) {
  if (lf_status s = require(t && grid && out && n > 0, "null argument")) return s;
  return guarded([&] {
    std::vector<double> g(grid, grid + n);
    *out = fock::representation_residual(t->trip, g, h1, h2);
  });
}

lf_status lf_sample_increments(const lf_triplet* t, double dt, size_t count,
                               uint64_t seed, double delta, double* out) {
  if (lf_status s = require(t && (count == 0 || out), "null argument")) return s;
  return guarded([&] {
    const std::vector<double> inc =
        sampler::sample_increments(t->trip, dt, count, seed, delta);
    std::copy(inc.begin(), inc.end(), out);
  });
}

lf_status lf_ecf(const double* samples, size_t n, const double* tgrid, size_t m,
                 double* out_re, double* out_im, double* out_radius) {
  if (lf_status s = require(samples && tgrid && out_re && out_im && out_radius && n > 0,
                            "null or empty argument"))
    return s;
  return guarded([&] {
    std::vector<double> xs(samples, samples + n), ts(tgrid, tgrid + m);
    const sampler::EcfReport rep = sampler::ecf(xs, ts);
    for (size_t j = 0; j < m; ++j) {
      out_re[j] = rep.values[j].real();
      out_im[j] = rep.values[j].imag();
    }
    *out_radius = rep.radius;
  });
}

lf_status lf_product_charfn(const lf_triplet* t, const double* g_list, size_t n,
                            double* re, double* im) {
  if (lf_status s = require(t && (n == 0 || g_list) && re && im, "null argument"))
    return s;
  return guarded([&] {
    std::vector<double> g(g_list, g_list + n);
    const cplx v = sampler::product_charfn(t->trip, g);
    *re = v.real();
    *im = v.imag();
  });
}

}  // extern "C"
