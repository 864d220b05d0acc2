#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "levyfock/errors.hpp"

namespace levyfock::quad {

using cplx = std::complex<double>;

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_intervals = 4000;
};

struct Result {
  cplx value{0.0, 0.0};
  double error = 0.0;
  int intervals = 0;
  bool converged = true;
};

// Adaptive Gauss-Legendre over the union of [breakpoints[k], breakpoints[k+1]].
// Each interval is scored by |GL15 - GL7|; the worst interval is bisected
// until the summed estimate meets max(abs_tol, rel_tol * |value|) or the
// interval budget runs out (converged = false, value = best estimate).
// Breakpoints must be finite and strictly increasing.
Result integrate(const std::function<cplx(double)>& f,
                 const std::vector<double>& breakpoints, const Options& opt = {});

// Same, raising QuadratureError on non-convergence.
cplx integrate_or_throw(const std::function<cplx(double)>& f,
                        const std::vector<double>& breakpoints,
                        const Options& opt = {}, const char* what = "integral");

// Maps [a, inf) to (0,1) via p = a + u/(1-u) and integrates adaptively.
Result integrate_semi_infinite_above(const std::function<cplx(double)>& f,
                                     double a, const Options& opt = {});
// Maps (-inf, b] analogously.
Result integrate_semi_infinite_below(const std::function<cplx(double)>& f,
                                     double b, const Options& opt = {});

}  // namespace levyfock::quad
