#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "levyfock/errors.hpp"
#include "levyfock/grid.hpp"
#include "levyfock/quadrature.hpp"

namespace levyfock::exponent {

// Centering convention: which compensator is subtracted from e^{ipt} - 1 in
// the jump integrand.
//   DeFinetti:  none            (requires nu(R) < inf)
//   Kolmogorov: itp             (requires |p| integrable at infinity)
//   Levy:       itp / (1 + p^2) (requires only the Levy-measure invariant)
enum class Convention { DeFinetti, Kolmogorov, Levy };

const char* convention_name(Convention c);
Convention convention_from_name(const std::string& name);

struct Atom {
  double p = 0.0;  // jump size, != 0
  double w = 0.0;  // weight, > 0
};

enum class DensityFamily { Uniform, Power, GaussianL2 };

// Built-in absolutely continuous parts of a Levy measure, supported on
// [lo, hi] (endpoints may be infinite). With mirrored = true the same
// profile is repeated on [-hi, -lo]; this requires lo >= 0.
//   Uniform:    rho(p) = scale                        on [lo, hi]
//   Power:      rho(p) = scale * |p|^{-exponent}      on [lo, hi]
//   GaussianL2: rho(p) = exp(-(p/scale)^2)            on the full line
struct Density {
  DensityFamily family = DensityFamily::Uniform;
  double scale = 1.0;
  double exponent = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool mirrored = false;

  double operator()(double p) const;  // 0 outside the support
  // support intervals, mirrored side first
  std::vector<std::pair<double, double>> pieces() const;
};

struct QuadratureSpec {
  double tol = 1e-10;
  int max_intervals = 4000;
};

struct LevyMeasure {
  std::vector<Atom> atoms;
  std::optional<Density> density;
  QuadratureSpec quadrature;

  bool empty() const { return atoms.empty() && !density.has_value(); }
};

// Checks structural invariants (distinct nonzero atom sizes, positive
// weights, well-formed density parameters) and the Levy integrability
// invariant int min(1, p^2) dnu < inf. Throws InvalidInputError or
// IntegrabilityError.
void validate_measure(const LevyMeasure& nu);

// Levy triplet (b, a, nu) with exponent term  i b t - a t^2 / 2  plus the
// jump integral under `convention`. The scale factors that sometimes
// multiply such formulas are folded into the atom weights / density scale;
// `a` is the diffusion coefficient itself (term -a t^2 / 2), not its root.
struct LevyTriplet {
  double b = 0.0;
  double a = 0.0;  // >= 0
  LevyMeasure nu;
  Convention convention = Convention::Levy;
};

enum class MomentKind { TotalMass, Min1P2, POver1P2, P3Over1P2, TruncVar };

// int m(p) dnu(p) with m per MomentKind; TruncVar integrates p^2 over
// |p| < delta. Atom sum plus adaptive quadrature of the density part;
// absolute error <= ~1e-10 * (1 + |result|). Divergent integrals raise
// IntegrabilityError (detected by quadrature non-convergence).
double levy_measure_moment(const LevyMeasure& nu, MomentKind kind, double delta = 0.0);

// int_{|p| >= 1} |p| dnu -- the Kolmogorov at-infinity condition.
double tail_abs_moment(const LevyMeasure& nu);

// int g(p) rho(p) dp over the density support, with extra breakpoints (e.g.
// a sampling threshold +-delta) honored by the quadrature. Throws
// IntegrabilityError on non-convergence.
double density_moment(const Density& d, const QuadratureSpec& spec,
                      const std::function<double(double)>& g,
                      const std::vector<double>& extra_breaks = {});

// f(t) = i b t - a t^2 / 2 + int M_convention(p, t) dnu(p).
// f(0) = 0 exactly; with nu empty no quadrature runs and the Gaussian closed
// form is returned to machine precision.
cplx eval_exponent(const LevyTriplet& trip, double t);

// F(t) = exp f(t).
cplx char_fn(const LevyTriplet& trip, double t);

// Re-expresses the triplet under `target`, adjusting the drift so the
// exponent is unchanged:
//   DeFinetti  -> Levy: b' = b + int p/(1+p^2) dnu
//   Kolmogorov -> Levy: b' = b - int p^3/(1+p^2) dnu
// and inverses; a and nu are untouched. Raises IntegrabilityError when the
// target's precondition fails for nu.
LevyTriplet convert(const LevyTriplet& trip, Convention target);

struct IntegrabilityCheck {
  std::string name;
  bool required = false;   // required by the triplet's convention
  bool pass = false;
  double value = 0.0;      // +inf when divergent
};

struct TripletDiagnostics {
  std::vector<IntegrabilityCheck> checks;
  bool ok = false;  // conjunction of the required checks
};

// Reports the Levy invariant, the Kolmogorov tail moment int_{|p|>=1}|p| dnu
// and the total mass nu(R), each as pass/fail with the computed value.
// Never throws on divergence; that is the diagnosis.
TripletDiagnostics validate_triplet(const LevyTriplet& trip);

// Throws IntegrabilityError unless nu satisfies the preconditions of the
// given convention.
void require_admissible(const LevyMeasure& nu, Convention c);

// f sampled on a grid of points.
GridFunction exponent_grid(const LevyTriplet& trip, const std::vector<double>& points);
GridFunction char_fn_grid(const LevyTriplet& trip, const std::vector<double>& points);

}  // namespace levyfock::exponent
