#pragma once

#include <cstdint>
#include <vector>

#include "levyfock/exponent.hpp"

namespace levyfock::sampler {

using exponent::LevyTriplet;

// Draws `count` i.i.d. increments of the process over time dt, targeting the
// characteristic function exp(dt * f). Construction per increment:
//   b_eff * dt
//   + sqrt(a * dt) * N(0,1)
//   + atom jumps: Poisson(w_k * dt) copies of p_k
//   + density jumps with |p| >= delta: Poisson(nu_delta * dt) draws by
//     inverse-CDF
//   + sqrt(sigma_delta^2 * dt) * N(0,1), sigma_delta^2 = int_{|p|<delta} p^2
//     of the density part (the small jumps' variance; their sizes are
//     replaced by a matched Gaussian)
// In the Levy convention (the triplet is converted first) the uncompensated
// jumps >= delta carry drift -int_{|p|>=delta} p/(1+p^2) dnu relative to b,
// and the Gaussian small-jump surrogate carries +int_{|p|<delta} p^3/(1+p^2)
// (the small jumps' mean under the Levy centering), so
//   b_eff = b_levy - int_{|p|>=delta} p/(1+p^2) dnu
//                  + int_{|p|<delta} p^3/(1+p^2) dnu.
// Increment k draws from the Philox stream with key (seed, k); results do
// not depend on evaluation order.
std::vector<double> sample_increments(const LevyTriplet& trip, double dt,
                                      std::size_t count, std::uint64_t seed,
                                      double delta = 0.01);

struct SamplePath {
  std::vector<double> times;   // 0, dt, ..., steps * dt
  std::vector<double> values;  // X(0) = 0, cumulative increments
  std::uint64_t seed = 0;
  double delta = 0.0;
};

SamplePath sample_path(const LevyTriplet& trip, double dt, std::size_t steps,
                       std::uint64_t seed, double delta = 0.01);

struct EcfReport {
  std::vector<double> t;
  std::vector<cplx> values;
  std::size_t n = 0;
  double radius = 0.0;  // 4 / sqrt(n), per-point confidence radius
};

// Empirical characteristic function (1/n) sum e^{i t X_k}.
EcfReport ecf(const std::vector<double>& samples, const std::vector<double>& tgrid);

// prod_j F(g_j) = exp(sum_j f(g_j)) for the product representation on R^n.
cplx product_charfn(const LevyTriplet& trip, const std::vector<double>& g_list);

}  // namespace levyfock::sampler
