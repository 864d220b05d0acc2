#include "levyfock/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace levyfock::quad {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kNodes7[] = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
    0.0,
    0.4058451513773972, 0.7415311855993945, 0.9491079123427585};
constexpr double kWeights7[] = {
    0.12948496616887065, 0.2797053914892766, 0.3818300505051183,
    0.41795918367346896,
    0.3818300505051183, 0.2797053914892766, 0.12948496616887065};
constexpr double kNodes15[] = {
    -0.9879925180204854, -0.937273392400706,  -0.8482065834104272,
    -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
    -0.20119409399743451, 0.0,                 0.20119409399743451,
    0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.937273392400706,   0.9879925180204854};
constexpr double kWeights15[] = {
    0.030753241996118647, 0.07036604748810807, 0.10715922046717177,
    0.1395706779261539,   0.16626920581699378, 0.18616100001556188,
    0.19843148532711125,  0.2025782419255609,  0.19843148532711125,
    0.18616100001556188,  0.16626920581699378, 0.1395706779261539,
    0.10715922046717177,  0.07036604748810807, 0.030753241996118647};

struct Interval {
  double a, b;
  cplx value;
  double error;
};

bool worse(const Interval& x, const Interval& y) { return x.error < y.error; }

Interval evaluate(const std::function<cplx(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  cplx g7{0.0, 0.0}, g15{0.0, 0.0};
  for (int i = 0; i < 7; ++i) g7 += kWeights7[i] * f(mid + half * kNodes7[i]);
  for (int i = 0; i < 15; ++i) g15 += kWeights15[i] * f(mid + half * kNodes15[i]);
  g7 *= half;
  g15 *= half;
  double err = std::abs(g15 - g7);
  // overflowing/NaN integrands must keep this interval at the top of the
  // refinement heap rather than poisoning the accumulators
  if (!std::isfinite(std::abs(g15)) || !std::isfinite(err))
    err = std::numeric_limits<double>::infinity();
  return {a, b, g15, err};
}

}  // namespace

Result integrate(const std::function<cplx(double)>& f,
                 const std::vector<double>& breakpoints, const Options& opt) {
  if (breakpoints.size() < 2)
    throw InvalidInputError("quadrature: need at least two breakpoints");
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    if (!std::isfinite(breakpoints[k]))
      throw InvalidInputError("quadrature: breakpoints must be finite");
    if (k > 0 && !(breakpoints[k] > breakpoints[k - 1]))
      throw InvalidInputError("quadrature: breakpoints must be strictly increasing");
  }

  std::vector<Interval> heap;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k)
    heap.push_back(evaluate(f, breakpoints[k], breakpoints[k + 1]));
  std::make_heap(heap.begin(), heap.end(), worse);

  auto resum = [&heap](cplx& total, double& total_err) {
    total = {0.0, 0.0};
    total_err = 0.0;
    for (const Interval& iv : heap) {
      total += iv.value;
      total_err += iv.error;
    }
  };
  cplx total;
  double total_err;
  resum(total, total_err);

  Result res;
  res.intervals = int(heap.size());
  while (true) {
    const double scale = std::abs(total);
    if (std::isfinite(scale) && std::isfinite(total_err) &&
        total_err <= std::max(opt.abs_tol, opt.rel_tol * scale))
      break;
    if (res.intervals >= opt.max_intervals) {
      res.converged = false;
      break;
    }
    std::pop_heap(heap.begin(), heap.end(), worse);
    const Interval worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval at floating-point resolution; its error is irreducible
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), worse);
      res.converged = false;
      break;
    }
    const Interval left = evaluate(f, worst.a, mid);
    const Interval right = evaluate(f, mid, worst.b);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), worse);
    ++res.intervals;
    if (std::isfinite(worst.error) && std::isfinite(std::abs(worst.value)) &&
        std::isfinite(left.error) && std::isfinite(right.error)) {
      total += left.value + right.value - worst.value;
      total_err += left.error + right.error - worst.error;
    } else {
      resum(total, total_err);
    }
  }
  res.value = total;
  res.error = total_err;
  return res;
}

cplx integrate_or_throw(const std::function<cplx(double)>& f,
                        const std::vector<double>& breakpoints, const Options& opt,
                        const char* what) {
  Result r = integrate(f, breakpoints, opt);
  if (!r.converged)
    throw QuadratureError(std::string(what) +
                          ": quadrature did not converge within the interval "
                          "budget (divergent or too singular)");
  return r.value;
}

Result integrate_semi_infinite_above(const std::function<cplx(double)>& f,
                                     double a, const Options& opt) {
  auto g = [&f, a](double u) {
    const double om = 1.0 - u;
    return f(a + u / om) / (om * om);
  };
  return integrate(g, {0.0, 0.5, 1.0}, opt);
}

Result integrate_semi_infinite_below(const std::function<cplx(double)>& f,
                                     double b, const Options& opt) {
  auto g = [&f, b](double u) {
    const double om = 1.0 - u;
    return f(b - u / om) / (om * om);
  };
  return integrate(g, {0.0, 0.5, 1.0}, opt);
}

}  // namespace levyfock::quad
