#include "levyfock/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace levyfock {

namespace {
constexpr std::size_t npos = static_cast<std::size_t>(-1);
}

void validate_grid_function(const GridFunction& g, GridKind kind) {
  if (g.points.size() != g.values.size())
    throw InvalidInputError("grid function: points/values size mismatch");
  if (g.points.empty()) throw InvalidInputError("grid function: empty");
  for (std::size_t j = 0; j < g.points.size(); ++j) {
    if (!std::isfinite(g.points[j]))
      throw InvalidInputError("grid function: non-finite point");
    if (!std::isfinite(g.values[j].real()) || !std::isfinite(g.values[j].imag()))
      throw InvalidInputError("grid function: non-finite value");
    if (j > 0 && !(g.points[j] > g.points[j - 1]))
      throw InvalidInputError("grid function: points must be strictly increasing");
  }
  for (std::size_t j = 0; j < g.points.size(); ++j) {
    if (g.points[j] == 0.0) {
      const cplx want = kind == GridKind::CharFunction ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
      if (std::abs(g.values[j] - want) > 1e-9)
        throw InvalidInputError("grid function: value at 0 must be " +
                                std::string(kind == GridKind::CharFunction ? "1" : "0"));
    }
  }
}

std::optional<double> arithmetic_step(const std::vector<double>& points) {
  if (points.size() < 2) return std::nullopt;
  const double step = (points.back() - points.front()) / double(points.size() - 1);
  if (!(step > 0)) return std::nullopt;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double expect = points.front() + double(j) * step;
    if (std::abs(points[j] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
      return std::nullopt;
  }
  return step;
}

GridEvaluator::GridEvaluator(const GridFunction& g, GridKind kind, double hermitian_tol)
    : g_(g), kind_(kind), hermitian_tol_(hermitian_tol) {
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < g.points.size(); ++j)
    min_gap = std::min(min_gap, g.points[j] - g.points[j - 1]);
  match_tol_ = std::isfinite(min_gap) ? std::min(1e-6, 0.25 * min_gap) : 1e-9;
}

std::size_t GridEvaluator::find(double t) const {
  const auto& pts = g_.points;
  auto it = std::lower_bound(pts.begin(), pts.end(), t - match_tol_);
  if (it == pts.end()) return npos;
  if (std::abs(*it - t) <= match_tol_ + 1e-9 * std::abs(t))
    return std::size_t(it - pts.begin());
  return npos;
}

bool GridEvaluator::evaluable(double t) const {
  return find(t) != npos || find(-t) != npos || std::abs(t) <= match_tol_;
}

cplx GridEvaluator::operator()(double t) const {
  const std::size_t j = find(t);
  const std::size_t jn = find(-t);
  if (j != npos && jn != npos && j != jn) {
    const double dev = std::abs(g_.values[jn] - std::conj(g_.values[j]));
    const double scale = std::max(1.0, std::abs(g_.values[j]));
    if (dev > hermitian_tol_ * scale)
      throw InvalidInputError("grid function is not Hermitian: value at -t "
                              "disagrees with conj(value at t)");
  }
  if (j != npos) return g_.values[j];
  if (jn != npos) return std::conj(g_.values[jn]);
  if (std::abs(t) <= match_tol_)
    return kind_ == GridKind::CharFunction ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
  throw UnevaluableError("grid function not evaluable at t = " + std::to_string(t));
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo)
    throw InvalidInputError("grid: require finite lo <= hi and step > 0");
  std::vector<double> pts;
  const double n_est = (hi - lo) / step;
  if (n_est > 1e6) throw InvalidInputError("grid: too many points");
  const std::size_t n = std::size_t(std::floor(n_est + 1e-9)) + 1;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    double t = lo + double(k) * step;
    if (std::abs(t) < 1e-12 * std::max(1.0, step)) t = 0.0;
    pts.push_back(t);
  }
  return pts;
}

}  // namespace levyfock
