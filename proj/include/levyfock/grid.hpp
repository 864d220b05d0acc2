#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "levyfock/errors.hpp"

namespace levyfock {

using cplx = std::complex<double>;

// A complex function sampled on a finite set of strictly increasing real
// points. Used both for characteristic functions F (value 1 at 0) and for
// characteristic exponents f (value 0 at 0).
struct GridFunction {
  std::vector<double> points;
  std::vector<cplx> values;

  std::size_t size() const { return points.size(); }
};

enum class GridKind { CharFunction, CharExponent };

// Throws InvalidInputError unless points are finite, strictly increasing,
// sizes match, and the value at 0 (if present) is 1 resp. 0 to 1e-9.
void validate_grid_function(const GridFunction& g, GridKind kind);

// Uniform-spacing test: points form an arithmetic progression to relative
// tolerance 1e-9. Returns the step.
std::optional<double> arithmetic_step(const std::vector<double>& points);

// Value lookup with Hermitian extension. Order of resolution at point t:
//   1. t on the grid -> stored value
//   2. -t on the grid -> conj(stored value)
//   3. t == 0 -> 1 (CharFunction) or 0 (CharExponent)
// Otherwise throws UnevaluableError. If both t and -t are on the grid the
// two routes must agree to `hermitian_tol`, else InvalidInputError.
class GridEvaluator {
public:
  GridEvaluator(const GridFunction& g, GridKind kind,
                double hermitian_tol = 1e-12);

  cplx operator()(double t) const;
  bool evaluable(double t) const;

private:
  const GridFunction& g_;
  GridKind kind_;
  double hermitian_tol_;
  double match_tol_;

  // index of grid point equal to t, or npos
  std::size_t find(double t) const;
};

// Points lo, lo+step, ..., up to hi (inclusive within rounding slack).
std::vector<double> make_grid(double lo, double hi, double step);

}  // namespace levyfock
