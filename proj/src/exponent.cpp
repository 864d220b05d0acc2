#include "levyfock/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace levyfock::exponent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sin(x) - x without cancellation for small |x|.
double sin_minus_x(double x) {
  if (std::abs(x) >= 0.1) return std::sin(x) - x;
  const double x2 = x * x;
  // x^3 terms of the sine series; next omitted term < 1e-16 * |x^3| here
  return x * x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 * (-1.0 / 5040.0 + x2 / 362880.0)));
}

// e^{ipt} - 1 as (-2 sin^2(pt/2), sin(pt)); stable near pt = 0.
cplx expm1_i(double x) {
  const double s = std::sin(0.5 * x);
  return {-2.0 * s * s, std::sin(x)};
}

// Jump integrand under a convention.
cplx jump_term(Convention c, double p, double t) {
  const cplx base = expm1_i(p * t);
  switch (c) {
    case Convention::DeFinetti:
      return base;
    case Convention::Kolmogorov:
      // imag = sin(pt) - pt, evaluated stably
      return {base.real(), sin_minus_x(p * t)};
    case Convention::Levy: {
      // sin(pt) - pt/(1+p^2) = (sin(pt) - pt) + pt * p^2/(1+p^2)
      const double pt = p * t;
      return {base.real(), sin_minus_x(pt) + pt * (p * p) / (1.0 + p * p)};
    }
  }
  return base;
}

double moment_integrand(MomentKind kind, double p, double delta) {
  switch (kind) {
    case MomentKind::TotalMass:
      return 1.0;
    case MomentKind::Min1P2:
      return std::min(1.0, p * p);
    case MomentKind::POver1P2:
      return p / (1.0 + p * p);
    case MomentKind::P3Over1P2:
      return p * p * p / (1.0 + p * p);
    case MomentKind::TruncVar:
      return std::abs(p) < delta ? p * p : 0.0;
  }
  throw InvalidInputError("unknown moment kind");
}

quad::Options quad_options(const QuadratureSpec& spec) {
  quad::Options o;
  o.abs_tol = spec.tol;
  o.rel_tol = spec.tol;
  o.max_intervals = spec.max_intervals;
  return o;
}

// Splits (lo, hi) at the canonical points 0, +-1 and any extra splits that
// fall strictly inside, producing the breakpoint list for one finite piece.
std::vector<double> piece_breakpoints(double lo, double hi,
                                      const std::vector<double>& extra) {
  std::vector<double> bp = {lo, hi};
  for (double s : {-1.0, 0.0, 1.0})
    if (s > lo && s < hi) bp.push_back(s);
  for (double s : extra)
    if (s > lo && s < hi) bp.push_back(s);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end(),
                       [](double x, double y) {
                         return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x));
                       }),
           bp.end());
  return bp;
}

// Integrates g(p) * rho(p) over the density support. Extra split points may
// be supplied (e.g. the sampler threshold +-delta).
quad::Result integrate_density(const Density& d, const QuadratureSpec& spec,
                               const std::function<cplx(double)>& g,
                               const std::vector<double>& extra = {}) {
  const quad::Options opt = quad_options(spec);
  auto integrand = [&](double p) { return g(p) * d(p); };
  quad::Result total;
  for (auto [lo, hi] : d.pieces()) {
    quad::Result r;
    if (lo == -kInf && hi == kInf) {
      // split at 0 so each transform sees a one-sided tail
      quad::Result neg = quad::integrate_semi_infinite_below(integrand, 0.0, opt);
      quad::Result pos = quad::integrate_semi_infinite_above(integrand, 0.0, opt);
      r.value = neg.value + pos.value;
      r.error = neg.error + pos.error;
      r.converged = neg.converged && pos.converged;
      r.intervals = neg.intervals + pos.intervals;
    } else if (hi == kInf) {
      r = quad::integrate_semi_infinite_above(integrand, lo, opt);
    } else if (lo == -kInf) {
      r = quad::integrate_semi_infinite_below(integrand, hi, opt);
    } else {
      r = quad::integrate(integrand, piece_breakpoints(lo, hi, extra), opt);
    }
    total.value += r.value;
    total.error += r.error;
    total.converged = total.converged && r.converged;
    total.intervals += r.intervals;
  }
  return total;
}

}  // namespace

const char* convention_name(Convention c) {
  switch (c) {
    case Convention::DeFinetti:
      return "definetti";
    case Convention::Kolmogorov:
      return "kolmogorov";
    case Convention::Levy:
      return "levy";
  }
  return "?";
}

Convention convention_from_name(const std::string& name) {
  if (name == "definetti") return Convention::DeFinetti;
  if (name == "kolmogorov") return Convention::Kolmogorov;
  if (name == "levy") return Convention::Levy;
  throw ParseError("unknown convention '" + name +
                   "' (expected definetti, kolmogorov or levy)");
}

double Density::operator()(double p) const {
  auto profile = [this](double q) {
    switch (family) {
      case DensityFamily::Uniform:
        return scale;
      case DensityFamily::Power:
        return scale * std::pow(std::abs(q), -exponent);
      case DensityFamily::GaussianL2: {
        const double u = q / scale;
        return std::exp(-u * u);
      }
    }
    return 0.0;
  };
  if (p >= lo && p <= hi) return profile(p);
  if (mirrored && -p >= lo && -p <= hi) return profile(-p);
  return 0.0;
}

std::vector<std::pair<double, double>> Density::pieces() const {
  std::vector<std::pair<double, double>> out;
  if (mirrored) out.emplace_back(-hi, -lo);
  out.emplace_back(lo, hi);
  return out;
}

void validate_measure(const LevyMeasure& nu) {
  for (const Atom& at : nu.atoms) {
    if (!std::isfinite(at.p) || at.p == 0.0)
      throw InvalidInputError("atom jump size must be finite and nonzero");
    if (!std::isfinite(at.w) || !(at.w > 0.0))
      throw InvalidInputError("atom weight must be positive");
  }
  for (std::size_t i = 0; i < nu.atoms.size(); ++i)
    for (std::size_t j = i + 1; j < nu.atoms.size(); ++j)
      if (nu.atoms[i].p == nu.atoms[j].p)
        throw InvalidInputError("atoms must have pairwise distinct jump sizes");
  if (nu.density) {
    const Density& d = *nu.density;
    if (!(d.scale > 0.0) || !std::isfinite(d.scale))
      throw InvalidInputError("density scale must be positive and finite");
    if (d.family == DensityFamily::Power) {
      if (!std::isfinite(d.exponent))
        throw InvalidInputError("power density needs a finite exponent");
      if (d.lo < 0.0 || !(d.hi > d.lo))
        throw InvalidInputError("power density support must satisfy 0 <= lo < hi");
    } else if (d.family == DensityFamily::Uniform) {
      if (!std::isfinite(d.lo) || !std::isfinite(d.hi) || !(d.hi > d.lo))
        throw InvalidInputError("uniform density support must be finite with lo < hi");
    }
    if (d.mirrored && d.lo < 0.0)
      throw InvalidInputError("mirrored density requires lo >= 0");
    if (!(nu.quadrature.tol > 0.0) || nu.quadrature.max_intervals < 4)
      throw InvalidInputError("bad quadrature spec");
  }
  // Levy invariant: int min(1, p^2) dnu < inf
  levy_measure_moment(nu, MomentKind::Min1P2);
}

double levy_measure_moment(const LevyMeasure& nu, MomentKind kind, double delta) {
  if (kind == MomentKind::TruncVar && !(delta >= 0.0))
    throw InvalidInputError("trunc_var needs delta >= 0");
  double total = 0.0;
  for (const Atom& at : nu.atoms) total += at.w * moment_integrand(kind, at.p, delta);
  if (nu.density) {
    auto g = [&](double p) { return cplx{moment_integrand(kind, p, delta), 0.0}; };
    std::vector<double> extra;
    if (kind == MomentKind::TruncVar && delta > 0.0) extra = {-delta, delta};
    quad::Result r = integrate_density(*nu.density, nu.quadrature, g, extra);
    if (!r.converged)
      throw IntegrabilityError("Levy measure moment does not converge (divergent "
                               "integral for this kind)");
    total += r.value.real();
  }
  return total;
}

cplx eval_exponent(const LevyTriplet& trip, double t) {
  if (!(trip.a >= 0.0) || !std::isfinite(trip.a) || !std::isfinite(trip.b))
    throw InvalidInputError("triplet needs finite b and a >= 0");
  if (!std::isfinite(t)) throw InvalidInputError("t must be finite");
  if (t == 0.0) return {0.0, 0.0};

  cplx f{-0.5 * trip.a * t * t, trip.b * t};
  for (const Atom& at : trip.nu.atoms)
    f += at.w * jump_term(trip.convention, at.p, t);
  if (trip.nu.density) {
    require_admissible(trip.nu, trip.convention);
    auto g = [&](double p) { return jump_term(trip.convention, p, t); };
    quad::Result r = integrate_density(*trip.nu.density, trip.nu.quadrature, g);
    if (!r.converged)
      throw QuadratureError("exponent integral did not converge");
    f += r.value;
  }
  return f;
}

cplx char_fn(const LevyTriplet& trip, double t) { return std::exp(eval_exponent(trip, t)); }

double density_moment(const Density& d, const QuadratureSpec& spec,
                      const std::function<double(double)>& g,
                      const std::vector<double>& extra_breaks) {
  auto gc = [&g](double p) { return cplx{g(p), 0.0}; };
  quad::Result r = integrate_density(d, spec, gc, extra_breaks);
  if (!r.converged)
    throw IntegrabilityError("density moment does not converge");
  return r.value.real();
}

double tail_abs_moment(const LevyMeasure& nu) {
  double total = 0.0;
  for (const Atom& at : nu.atoms)
    if (std::abs(at.p) >= 1.0) total += at.w * std::abs(at.p);
  if (nu.density) {
    auto g = [](double p) {
      return cplx{std::abs(p) >= 1.0 ? std::abs(p) : 0.0, 0.0};
    };
    quad::Result r = integrate_density(*nu.density, nu.quadrature, g);
    if (!r.converged)
      throw IntegrabilityError("int_{|p|>=1} |p| dnu does not converge");
    total += r.value.real();
  }
  return total;
}

void require_admissible(const LevyMeasure& nu, Convention c) {
  // The Levy invariant is assumed (validate_measure); the stronger
  // conventions add one moment each. Divergence surfaces as quadrature
  // non-convergence inside levy_measure_moment.
  try {
    if (c == Convention::DeFinetti) levy_measure_moment(nu, MomentKind::TotalMass);
    if (c == Convention::Kolmogorov) tail_abs_moment(nu);
  } catch (const IntegrabilityError&) {
    throw IntegrabilityError(std::string("Levy measure violates the ") +
                             convention_name(c) + " integrability precondition");
  }
}

LevyTriplet convert(const LevyTriplet& trip, Convention target) {
  require_admissible(trip.nu, trip.convention);
  require_admissible(trip.nu, target);
  auto correction_to_levy = [&](Convention from) {
    switch (from) {
      case Convention::DeFinetti:
        return levy_measure_moment(trip.nu, MomentKind::POver1P2);
      case Convention::Kolmogorov:
        return -levy_measure_moment(trip.nu, MomentKind::P3Over1P2);
      case Convention::Levy:
        return 0.0;
    }
    return 0.0;
  };
  LevyTriplet out = trip;
  out.convention = target;
  out.b = trip.b + correction_to_levy(trip.convention) - correction_to_levy(target);
  return out;
}

TripletDiagnostics validate_triplet(const LevyTriplet& trip) {
  TripletDiagnostics diag;
  auto probe = [&](const char* name, bool required, auto&& compute) {
    IntegrabilityCheck chk;
    chk.name = name;
    chk.required = required;
    try {
      chk.value = compute();
      chk.pass = std::isfinite(chk.value);
    } catch (const Error&) {
      chk.value = kInf;
      chk.pass = false;
    }
    diag.checks.push_back(chk);
  };
  const Convention c = trip.convention;
  probe("min1p2", true, [&] { return levy_measure_moment(trip.nu, MomentKind::Min1P2); });
  probe("abs_p_tail", c == Convention::Kolmogorov, [&] { return tail_abs_moment(trip.nu); });
  probe("total_mass", c == Convention::DeFinetti,
        [&] { return levy_measure_moment(trip.nu, MomentKind::TotalMass); });
  diag.ok = std::isfinite(trip.b) && trip.a >= 0.0;
  for (const auto& chk : diag.checks)
    if (chk.required && !chk.pass) diag.ok = false;
  return diag;
}

GridFunction exponent_grid(const LevyTriplet& trip, const std::vector<double>& points) {
  GridFunction g;
  g.points = points;
  g.values.reserve(points.size());
  for (double t : points) g.values.push_back(eval_exponent(trip, t));
  validate_grid_function(g, GridKind::CharExponent);
  return g;
}

GridFunction char_fn_grid(const LevyTriplet& trip, const std::vector<double>& points) {
  GridFunction g;
  g.points = points;
  g.values.reserve(points.size());
  for (double t : points) g.values.push_back(char_fn(trip, t));
  validate_grid_function(g, GridKind::CharFunction);
  return g;
}

}  // namespace levyfock::exponent
