#include "levyfock/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levyfock/rng.hpp"

namespace levyfock::sampler {

namespace {

using exponent::Convention;
using exponent::Density;
using exponent::DensityFamily;
using exponent::LevyMeasure;
using exponent::MomentKind;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRootPi = 1.7724538509055160273;

// Sign-aware antiderivative of the density profile on an interval of fixed
// sign; P(hi) - P(lo) is the measure of [lo, hi].
double primitive(const Density& d, double q) {
  switch (d.family) {
    case DensityFamily::Uniform:
      return d.scale * q;
    case DensityFamily::Power: {
      const double g = d.exponent;
      if (q == 0.0) {
        if (g >= 1.0) return -kInf;  // divergent mass at the origin
        return 0.0;
      }
      const double aq = std::abs(q);
      const double sign = q < 0 ? -1.0 : 1.0;
      if (q == kInf || q == -kInf) {
        if (g <= 1.0) return sign * kInf;
        return 0.0;  // |q|^{1-g}/(1-g) -> 0
      }
      if (g == 1.0) return d.scale * sign * std::log(aq);
      return d.scale * sign * std::pow(aq, 1.0 - g) / (1.0 - g);
    }
    case DensityFamily::GaussianL2: {
      if (q == kInf) return 0.5 * d.scale * kRootPi;
      if (q == -kInf) return -0.5 * d.scale * kRootPi;
      return 0.5 * d.scale * kRootPi * std::erf(q / d.scale);
    }
  }
  return 0.0;
}

// One sign-definite restricted support piece with |p| >= delta.
struct JumpPiece {
  const Density* d;
  bool mirrored_side;  // evaluate the profile at -p
  double lo, hi;       // oriented: lo < hi, same sign
  double p_lo, p_hi;   // primitive values at the ends
  double mass;

  double quantile(double u, const Density& dd) const {
    const double target = p_lo + u * (p_hi - p_lo);
    const bool positive_side = hi > 0.0;  // pieces are sign-definite
    double q;
    switch (dd.family) {
      case DensityFamily::Uniform:
        q = target / dd.scale;
        break;
      case DensityFamily::Power: {
        const double g = dd.exponent;
        if (g == 1.0) {
          q = positive_side ? std::exp(target / dd.scale)
                            : -std::exp(-target / dd.scale);
        } else {
          const double v = (1.0 - g) * target / dd.scale;  // |q|^{1-g}
          q = positive_side ? std::pow(v, 1.0 / (1.0 - g))
                            : -std::pow(-v, 1.0 / (1.0 - g));
        }
        break;
      }
      case DensityFamily::GaussianL2: {
        // bisection on the primitive; brackets cover the erf saturation
        double a = lo == -kInf ? std::min(hi, 0.0) - 9.0 * dd.scale : lo;
        double b = hi == kInf ? std::max(lo, 0.0) + 9.0 * dd.scale : hi;
        for (int it = 0; it < 120; ++it) {
          const double mid = 0.5 * (a + b);
          if (primitive(dd, mid) < target)
            a = mid;
          else
            b = mid;
        }
        q = 0.5 * (a + b);
        break;
      }
      default:
        q = lo;
    }
    if (std::isfinite(lo)) q = std::max(q, lo);
    if (std::isfinite(hi)) q = std::min(q, hi);
    return mirrored_side ? -q : q;
  }
};

struct JumpSampler {
  std::vector<JumpPiece> pieces;
  double total_mass = 0.0;

  double draw(double u, const Density& d) const {
    double v = u * total_mass;
    for (const JumpPiece& pc : pieces) {
      if (v <= pc.mass || &pc == &pieces.back())
        return pc.quantile(std::min(v / pc.mass, 1.0), d);
      v -= pc.mass;
    }
    return 0.0;
  }
};

// Restrict the density support to |p| >= delta and precompute piece masses.
// In the un-mirrored case pieces keep their native sign; mirrored pieces are
// represented on the positive axis and negated at draw time.
JumpSampler build_jump_sampler(const Density& d, double delta) {
  JumpSampler js;
  auto add = [&](double lo, double hi, bool mirrored_side) {
    if (!(hi > lo)) return;
    JumpPiece pc;
    pc.d = &d;
    pc.mirrored_side = mirrored_side;
    pc.lo = lo;
    pc.hi = hi;
    pc.p_lo = primitive(d, lo);
    pc.p_hi = primitive(d, hi);
    pc.mass = pc.p_hi - pc.p_lo;
    if (!std::isfinite(pc.mass))
      throw InvalidInputError(
          "sampler: density has infinite activity above the threshold (is "
          "delta = 0 with an infinite-activity density?)");
    if (pc.mass <= 0.0) return;
    js.pieces.push_back(pc);
    js.total_mass += pc.mass;
  };
  // native support intersected with {|p| >= delta}, split sign-definitely
  add(std::max(d.lo, delta), d.hi, false);
  if (d.lo < -delta) add(d.lo, std::min(d.hi, -delta), false);
  if (d.mirrored) add(std::max(d.lo, delta), d.hi, true);
  return js;
}

}  // namespace

std::vector<double> sample_increments(const LevyTriplet& trip, double dt,
                                      std::size_t count, std::uint64_t seed,
                                      double delta) {
  if (!(dt > 0.0)) throw InvalidInputError("sampler: dt must be > 0");
  if (!(delta >= 0.0)) throw InvalidInputError("sampler: delta must be >= 0");
  exponent::validate_measure(trip.nu);
  const LevyTriplet levy = exponent::convert(trip, Convention::Levy);

  // Drift bookkeeping (see header): raw jumps >= delta lose their Levy
  // compensator; small jumps are replaced by a Gaussian carrying their mean.
  double b_eff = levy.b;
  for (const auto& at : levy.nu.atoms) b_eff -= at.w * at.p / (1.0 + at.p * at.p);

  JumpSampler jumps;
  double sigma2_small = 0.0;
  const Density* density = levy.nu.density ? &*levy.nu.density : nullptr;
  if (density) {
    jumps = build_jump_sampler(*density, delta);
    const std::vector<double> breaks = {-delta, delta};
    b_eff -= exponent::density_moment(
        *density, levy.nu.quadrature,
        [delta](double p) { return std::abs(p) >= delta ? p / (1.0 + p * p) : 0.0; },
        breaks);
    if (delta > 0.0) {
      b_eff += exponent::density_moment(
          *density, levy.nu.quadrature,
          [delta](double p) {
            return std::abs(p) < delta ? p * p * p / (1.0 + p * p) : 0.0;
          },
          breaks);
      sigma2_small = exponent::density_moment(
          *density, levy.nu.quadrature,
          [delta](double p) { return std::abs(p) < delta ? p * p : 0.0; }, breaks);
    }
  }

  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    // independent stream per increment; draw order is fixed: diffusion,
    // atoms in order, density jump count then sizes, small-jump surrogate
    rng::Philox4x64 gen(seed, std::uint64_t(k));
    double x = b_eff * dt;
    if (levy.a > 0.0) x += std::sqrt(levy.a * dt) * gen.next_normal();
    for (const auto& at : levy.nu.atoms)
      x += double(gen.next_poisson(at.w * dt)) * at.p;
    if (density && jumps.total_mass > 0.0) {
      const std::uint64_t n = gen.next_poisson(jumps.total_mass * dt);
      for (std::uint64_t j = 0; j < n; ++j)
        x += jumps.draw(gen.next_double(), *density);
    }
    if (sigma2_small > 0.0) x += std::sqrt(sigma2_small * dt) * gen.next_normal();
    out[k] = x;
  }
  return out;
}

SamplePath sample_path(const LevyTriplet& trip, double dt, std::size_t steps,
                       std::uint64_t seed, double delta) {
  SamplePath path;
  path.seed = seed;
  path.delta = delta;
  path.times.resize(steps + 1);
  path.values.resize(steps + 1);
  path.times[0] = 0.0;
  path.values[0] = 0.0;
  const std::vector<double> inc = sample_increments(trip, dt, steps, seed, delta);
  for (std::size_t m = 0; m < steps; ++m) {
    path.times[m + 1] = double(m + 1) * dt;
    path.values[m + 1] = path.values[m] + inc[m];
  }
  return path;
}

EcfReport ecf(const std::vector<double>& samples, const std::vector<double>& tgrid) {
  if (samples.empty()) throw InvalidInputError("ecf: empty sample set");
  EcfReport rep;
  rep.t = tgrid;
  rep.n = samples.size();
  rep.radius = 4.0 / std::sqrt(double(rep.n));
  rep.values.reserve(tgrid.size());
  for (double t : tgrid) {
    cplx acc{0.0, 0.0};
    for (double x : samples) acc += cplx{std::cos(t * x), std::sin(t * x)};
    rep.values.push_back(acc / double(rep.n));
  }
  return rep;
}

cplx product_charfn(const LevyTriplet& trip, const std::vector<double>& g_list) {
  cplx prod{1.0, 0.0};
  cplx fsum{0.0, 0.0};
  for (double g : g_list) {
    prod *= exponent::char_fn(trip, g);
    fsum += exponent::eval_exponent(trip, g);
  }
  if (std::abs(prod - std::exp(fsum)) > 1e-10 * (1.0 + std::abs(prod)))
    throw Error("product_charfn: product and exponent-sum routes disagree");
  return prod;
}

}  // namespace levyfock::sampler
