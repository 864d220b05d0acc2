#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "levyfock/levyfock.h"

namespace {

struct TripletGuard {
  lf_triplet* t = nullptr;
  ~TripletGuard() { lf_triplet_free(t); }
};

lf_triplet* must_parse(const char* text) {
  lf_triplet* t = nullptr;
  REQUIRE(lf_triplet_parse_json(text, &t) == LF_OK);
  REQUIRE(t != nullptr);
  return t;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(lf_version()) == LEVYFOCK_VERSION);
  CHECK(std::string(lf_status_name(LF_OK)) == "ok");
  CHECK(std::string(lf_status_name(LF_ERR_PARSE)) == "parse_error");
}

TEST_CASE("null arguments are rejected with a message") {
  CHECK(lf_triplet_parse_json(nullptr, nullptr) == LF_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(lf_last_error()) > 0);
  double re, im;
  CHECK(lf_eval_exponent(nullptr, 1.0, &re, &im) == LF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("parse errors carry diagnostics") {
  lf_triplet* t = nullptr;
  CHECK(lf_triplet_parse_json("{", &t) == LF_ERR_PARSE);
  CHECK(t == nullptr);
  CHECK(lf_triplet_parse_json(R"({"convention": "levy", "zzz": 1})", &t) ==
        LF_ERR_PARSE);
  CHECK(std::string(lf_last_error()).find("zzz") != std::string::npos);
}

TEST_CASE("triplet lifecycle, evaluation and JSON round trip") {
  TripletGuard g;
  g.t = must_parse(R"({"convention": "levy", "a": 1.0})");
  double re, im;
  REQUIRE(lf_eval_exponent(g.t, 1.0, &re, &im) == LF_OK);
  CHECK(re == -0.5);
  CHECK(im == 0.0);
  REQUIRE(lf_char_fn(g.t, 1.0, &re, &im) == LF_OK);
  CHECK(re == doctest::Approx(std::exp(-0.5)));

  char* json_text = nullptr;
  REQUIRE(lf_triplet_to_json(g.t, &json_text) == LF_OK);
  lf_triplet* back = nullptr;
  REQUIRE(lf_triplet_parse_json(json_text, &back) == LF_OK);
  lf_string_free(json_text);
  double re2, im2;
  REQUIRE(lf_eval_exponent(back, 1.0, &re2, &im2) == LF_OK);
  CHECK(re2 == -0.5);  // same exponent as the original
  lf_triplet_free(back);

  lf_convention conv;
  REQUIRE(lf_triplet_convention(g.t, &conv) == LF_OK);
  CHECK(conv == LF_CONVENTION_LEVY);
}

TEST_CASE("create, convert and moments") {
  const double atoms[2] = {1.0, 1.0};
  lf_triplet* t = nullptr;
  REQUIRE(lf_triplet_create(0.0, 0.0, LF_CONVENTION_KOLMOGOROV, atoms, 1, &t) == LF_OK);
  double m;
  REQUIRE(lf_levy_measure_moment(t, LF_MOMENT_P3_OVER_1P2, 0.0, &m) == LF_OK);
  CHECK(m == doctest::Approx(0.5));
  lf_triplet* levy = nullptr;
  REQUIRE(lf_triplet_convert(t, LF_CONVENTION_LEVY, &levy) == LF_OK);
  char* js = nullptr;
  REQUIRE(lf_triplet_to_json(levy, &js) == LF_OK);
  CHECK(std::string(js).find("-0.5") != std::string::npos);
  lf_string_free(js);
  lf_triplet_free(levy);

  lf_triplet_diagnostics diag;
  REQUIRE(lf_triplet_validate(t, &diag) == LF_OK);
  CHECK(diag.overall_ok == 1);
  CHECK(diag.abs_p_tail_required == 1);
  lf_triplet_free(t);

  // invalid atom
  const double bad[2] = {0.0, 1.0};
  lf_triplet* nope = nullptr;
  CHECK(lf_triplet_create(0.0, 0.0, LF_CONVENTION_LEVY, bad, 1, &nope) ==
        LF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("gram, psd and divisibility through the C surface") {
  TripletGuard g;
  g.t = must_parse(R"({"convention": "levy", "a": 1.0})");
  const std::vector<double> pts = {-1.0, 0.0, 1.0};
  std::vector<double> M(2 * 9);
  REQUIRE(lf_gram_from_triplet(g.t, pts.data(), 3, M.data()) == LF_OK);
  CHECK(M[0] == doctest::Approx(1.0));  // diagonal F(0) = 1
  lf_psd_verdict v;
  REQUIRE(lf_psd_check(M.data(), 3, 1e-8, &v) == LF_OK);
  CHECK(v.is_psd == 1);

  std::vector<lf_psd_verdict> verdicts(8);
  int n_eval, pass, zero_crossing, pi_steps;
  REQUIRE(lf_divisibility_check_triplet(g.t, pts.data(), 3, 8, 1e-8, verdicts.data(),
                                        &n_eval, &pass, &zero_crossing,
                                        &pi_steps) == LF_OK);
  CHECK(n_eval == 8);
  CHECK(pass == 1);
  CHECK(zero_crossing == 0);

  // the uniform law through the grid route
  std::vector<double> ts, re, im;
  for (int k = 0; k <= 16; ++k) {
    const double t = 0.25 * k;
    ts.push_back(t);
    re.push_back(t == 0.0 ? 1.0 : std::sin(t) / t);
    im.push_back(0.0);
  }
  REQUIRE(lf_divisibility_check_grid(ts.data(), re.data(), im.data(), ts.size(), 8,
                                     1e-8, verdicts.data(), &n_eval, &pass,
                                     &zero_crossing, &pi_steps) == LF_OK);
  CHECK(pass == 0);
}

TEST_CASE("log branch through the C surface") {
  std::vector<double> ts, re, im;
  for (int k = -4; k <= 4; ++k) {
    const double t = 0.5 * k;
    ts.push_back(t);
    re.push_back(std::cos(1.3 * t));
    im.push_back(std::sin(1.3 * t));
  }
  std::vector<double> fre(ts.size()), fim(ts.size());
  REQUIRE(lf_log_branch(ts.data(), re.data(), im.data(), ts.size(), 0.0, fre.data(),
                        fim.data()) == LF_OK);
  for (std::size_t j = 0; j < ts.size(); ++j) {
    CHECK(fre[j] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fim[j] == doctest::Approx(1.3 * ts[j]).epsilon(1e-12));
  }
  lf_psd_verdict v;
  REQUIRE(lf_conditional_psd_check(ts.data(), fre.data(), fim.data(), ts.size(), 1e-8,
                                   &v) == LF_OK);
  CHECK(v.is_psd == 1);
}

TEST_CASE("kernel, realization and coboundary through the C surface") {
  TripletGuard g;
  g.t = must_parse(R"({"convention": "levy", "atoms": [[1.0, 1.0]]})");
  const std::vector<double> grid = {0.0, 0.5, 1.0, 1.5, 2.0};
  const std::size_t n = grid.size();

  double re, im;
  REQUIRE(lf_cocycle_kernel(g.t, 1.0, 1.0, &re, &im) == LF_OK);
  CHECK(re == doctest::Approx(2.0 - 2.0 * std::cos(1.0)));

  std::vector<double> K(2 * n * n);
  REQUIRE(lf_kernel_matrix(g.t, grid.data(), n, K.data()) == LF_OK);
  lf_realization* real = nullptr;
  REQUIRE(lf_realize_cocycle(grid.data(), n, K.data(), 1e-10, &real) == LF_OK);
  int rank;
  REQUIRE(lf_realization_rank(real, &rank) == LF_OK);
  CHECK(rank == 1);
  std::vector<double> vecs(2 * rank * n);
  REQUIRE(lf_realization_vectors(real, vecs.data()) == LF_OK);
  CHECK(std::abs(vecs[0]) < 1e-12);  // psi(0) = 0

  double resid, normalized;
  std::vector<double> psi0(2 * rank);
  REQUIRE(lf_coboundary_residual(real, g.t, &resid, &normalized, psi0.data()) == LF_OK);
  CHECK(normalized <= 1e-6);

  char* js = nullptr;
  REQUIRE(lf_realization_to_json(real, &js) == LF_OK);
  CHECK(std::string(js).find("\"rank\"") != std::string::npos);
  lf_string_free(js);
  lf_realization_free(real);

  double shift;
  REQUIRE(lf_shift_covariance_residual(g.t, grid.data(), n, 0.7, &shift) == LF_OK);
  CHECK(shift <= 1e-9);
}

TEST_CASE("fock surface") {
  uint64_t dim;
  REQUIRE(lf_fock_dimension(3, 2, &dim) == LF_OK);
  CHECK(dim == 10);

  const double psi[2] = {1.0, 0.0};
  const double phi[2] = {1.0, 0.0};
  double re, im, bound;
  REQUIRE(lf_coherent_inner(psi, phi, 1, 10, &re, &im, &bound) == LF_OK);
  CHECK(re == doctest::Approx(2.7182818011463845).epsilon(1e-14));
  CHECK(std::abs(re - std::exp(1.0)) <= bound);

  TripletGuard g;
  g.t = must_parse(R"({"convention": "levy", "a": 1.0})");
  REQUIRE(lf_vacuum_expectation(g.t, 1.0, &re, &im) == LF_OK);
  CHECK(re == doctest::Approx(std::exp(-0.5)));

  const std::vector<double> grid = {0.0, 0.5, 1.0};
  double resid;
  REQUIRE(lf_weyl_unitarity_residual(g.t, grid.data(), 3, 0.5, &resid) == LF_OK);
  CHECK(resid <= 1e-9);
  REQUIRE(lf_representation_residual(g.t, grid.data(), 3, 0.5, 1.0, &resid) == LF_OK);
  CHECK(resid <= 1e-9);
  std::vector<double> W(2 * 9);
  REQUIRE(lf_weyl_gram(g.t, grid.data(), 3, 0.0, W.data()) == LF_OK);
  CHECK(W[0] == doctest::Approx(1.0));  // exp K(0,0) = 1
}

TEST_CASE("sampling surface") {
  TripletGuard g;
  g.t = must_parse(R"({"convention": "levy", "b": 1.0})");
  std::vector<double> inc(16);
  REQUIRE(lf_sample_increments(g.t, 0.5, 16, 7, 0.01, inc.data()) == LF_OK);
  for (double x : inc) CHECK(x == 0.5);

  const std::vector<double> tg = {0.0, 1.0};
  std::vector<double> ere(2), eim(2);
  double radius;
  REQUIRE(lf_ecf(inc.data(), inc.size(), tg.data(), 2, ere.data(), eim.data(),
                 &radius) == LF_OK);
  CHECK(ere[0] == 1.0);
  CHECK(radius == doctest::Approx(1.0));

  double re, im;
  REQUIRE(lf_product_charfn(g.t, tg.data(), 2, &re, &im) == LF_OK);
  CHECK(re == doctest::Approx(std::cos(1.0)));
  CHECK(im == doctest::Approx(std::sin(1.0)));
}
