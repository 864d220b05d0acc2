#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "levyfock/exponent.hpp"
#include "levyfock/fock.hpp"
#include "levyfock/gns.hpp"
#include "oracles.hpp"

using namespace levyfock;
using namespace levyfock::fock;
using exponent::Convention;

namespace {

exponent::LevyTriplet gaussian(double a, double b = 0.0) {
  exponent::LevyTriplet t;
  t.a = a;
  t.b = b;
  return t;
}

Eigen::VectorXcd random_vector(std::mt19937& rng, int r, double max_norm) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXcd v(r);
  for (int i = 0; i < r; ++i) v(i) = cplx{unif(rng), unif(rng)};
  const double norm = v.norm();
  if (norm > 0.0) v *= (max_norm * std::abs(unif(rng))) / norm;
  return v;
}

}  // namespace

TEST_CASE("dimension formula matches direct multiset counting") {
  for (int r = 0; r <= 6; ++r)
    for (int n = 0; n <= 8; ++n)
      CHECK(TruncatedFock::dimension(r, n) == oracles::count_multisets(r, n));
}

TEST_CASE("graded basis is colexicographic and complete") {
  const TruncatedFock fk = truncated_fock(3, 2);
  REQUIRE(fk.basis.size() == TruncatedFock::dimension(3, 2));
  // degree-2 block in colex order
  const std::vector<std::vector<int>> want = {
      {0, 0, 0},
      {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
      {2, 0, 0}, {1, 1, 0}, {0, 2, 0}, {1, 0, 1}, {0, 1, 1}, {0, 0, 2}};
  CHECK(fk.basis == want);
}

TEST_CASE("dimension budget is enforced") {
  CHECK_THROWS_AS(truncated_fock(40, 12, 2000000), BudgetError);
}

TEST_CASE("coherent_inner: orthogonal vectors see only the vacuum") {
  Eigen::VectorXcd psi(2), phi(2);
  psi << 1.0, 0.0;
  phi << 0.0, 1.0;
  for (int N : {0, 3, 9}) {
    const CoherentInner ci = coherent_inner(psi, phi, N);
    CHECK(ci.value == cplx{1.0, 0.0});
  }
}

TEST_CASE("coherent_inner: unit overlap, N = 10 partial sum of e") {
  Eigen::VectorXcd psi(1), phi(1);
  psi << 1.0;
  phi << 1.0;
  const CoherentInner ci = coherent_inner(psi, phi, 10);
  CHECK(ci.value.real() == doctest::Approx(2.7182818011463845).epsilon(1e-14));
  CHECK(std::abs(ci.value - std::exp(cplx{1.0, 0.0})) <= 2.8e-8);
  CHECK(std::abs(ci.value - std::exp(cplx{1.0, 0.0})) <= ci.bound);
}

TEST_CASE("coherent_inner: zero vectors") {
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(3);
  const CoherentInner ci = coherent_inner(z, z, 5);
  CHECK(ci.value == cplx{1.0, 0.0});
  CHECK(ci.bound == 0.0);
}

TEST_CASE("coherent_inner: truncation error within the analytic bound") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int r = 1 + int(trial % 4);
    const Eigen::VectorXcd psi = random_vector(rng, r, 2.0);
    const Eigen::VectorXcd phi = random_vector(rng, r, 2.0);
    for (int N : {4, 8, 16}) {
      const CoherentInner ci = coherent_inner(psi, phi, N);
      const cplx exact = std::exp(psi.dot(phi));
      CHECK(std::abs(ci.value - exact) <= ci.bound + 1e-14);
    }
  }
}

TEST_CASE("weyl_gram: h = 0 reproduces the coherent gram") {
  exponent::LevyTriplet t = gaussian(0.7, 0.2);
  t.nu.atoms.push_back({1.0, 0.5});
  const std::vector<double> grid = make_grid(0.0, 2.0, 0.5);
  const Eigen::MatrixXcd G = weyl_gram(t, grid, 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j)
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const cplx want = std::exp(gns::kernel(t, grid[j], grid[k]));
      CHECK(std::abs(G(j, k) - want) < 1e-12 * (1.0 + std::abs(want)));
    }
}

TEST_CASE("weyl_gram: pure drift gives a constant phase") {
  exponent::LevyTriplet drift;
  drift.b = 1.3;
  const std::vector<double> grid = make_grid(0.0, 2.0, 1.0);
  const double h = 0.8;
  const Eigen::MatrixXcd G = weyl_gram(drift, grid, h);
  const cplx want = std::exp(cplx{0.0, drift.b * h});
  for (Eigen::Index j = 0; j < G.rows(); ++j)
    for (Eigen::Index k = 0; k < G.cols(); ++k)
      CHECK(std::abs(G(j, k) - want) < 1e-13);
}

TEST_CASE("weyl_gram: gaussian closed form at (0,0)") {
  const Eigen::MatrixXcd G = weyl_gram(gaussian(1.0), {0.0, 1.0}, 1.0);
  // F(1)/F(0) * exp K(0, 1) = e^{-1/2}
  CHECK(G(0, 0).real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(std::abs(G(0, 0).imag()) < 1e-13);
}

TEST_CASE("weyl unitarity residual") {
  exponent::LevyTriplet drift;
  drift.b = 2.2;
  CHECK(weyl_unitarity_residual(drift, make_grid(0.0, 2.0, 0.5), 0.7) < 1e-12);
  CHECK(weyl_unitarity_residual(gaussian(1.0), make_grid(0.0, 2.0, 0.5), 0.5) <= 1e-9);
  exponent::LevyTriplet t = gaussian(0.4, -0.3);
  t.nu.atoms.push_back({-0.8, 0.6});
  const double h0 = weyl_unitarity_residual(t, make_grid(0.0, 2.0, 0.5), 0.0);
  CHECK(h0 == 0.0);
}

TEST_CASE("vacuum expectation reproduces the characteristic function") {
  CHECK(vacuum_expectation(gaussian(1.0), 0.0) == cplx{1.0, 0.0});
  CHECK(vacuum_expectation(gaussian(1.0), 1.0).real() ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  exponent::LevyTriplet t;
  t.convention = Convention::DeFinetti;
  t.nu.atoms.push_back({1.0, 1.0});
  const cplx v = vacuum_expectation(t, std::numbers::pi);
  CHECK(v.real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(std::abs(v.imag()) < 1e-13);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  exponent::LevyTriplet mixed = gaussian(0.6, 0.4);
  mixed.nu.atoms = {{0.9, 0.3}, {-1.4, 0.2}};
  for (int trial = 0; trial < 20; ++trial) {
    const double x = unif(rng);
    const cplx via_fock = vacuum_expectation(mixed, x);
    const cplx direct = exponent::char_fn(mixed, x);
    CHECK(std::abs(via_fock - direct) <= 1e-9 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("representation residual") {
  CHECK(representation_residual(gaussian(1.0), make_grid(0.0, 2.0, 0.5), 0.0, 0.0) ==
        0.0);
  exponent::LevyTriplet drift;
  drift.b = 1.1;
  CHECK(representation_residual(drift, make_grid(0.0, 2.0, 0.5), 0.9, -0.9) < 1e-12);
  CHECK(representation_residual(gaussian(1.0), make_grid(0.0, 2.0, 0.5), 0.5, 1.0) <=
        1e-9);
}

TEST_CASE("weyl checks raise on vanishing F") {
  // deep gaussian decay pushes |F| under the floor at large t
  CHECK_THROWS_AS(weyl_gram(gaussian(50.0), {0.0, 2.0}, 0.0), ZeroCrossingError);
}
