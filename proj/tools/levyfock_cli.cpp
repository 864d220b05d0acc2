// levyfock command-line front end. All mathematics goes through the C API in
// levyfock/levyfock.h; this file owns argument parsing, file I/O, report
// assembly and the run manifest.
//
// Exit codes: 0 all checks pass, 1 a mathematical verdict failed (reports
// are still written), 2 usage/input error (nothing is written).

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "levyfock/levyfock.h"

namespace fs = std::filesystem;
using nlohmann::json;
using cplx = std::complex<double>;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void fail_usage(const std::string& msg) { throw UsageError(msg); }

// Maps a failing C-API call onto the CLI error taxonomy: input-shaped
// failures become usage errors (exit 2, nothing written); mathematical ones
// become MathError (exit 1, an error report is written).
void check(lf_status s, const std::string& what) {
  if (s == LF_OK) return;
  const std::string msg = what + ": " + lf_last_error();
  switch (s) {
    case LF_ERR_PARSE:
    case LF_ERR_INVALID_ARGUMENT:
    case LF_ERR_UNEVALUABLE:
    case LF_ERR_BUDGET:
      fail_usage(msg);
    default:
      throw MathError(msg);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_usage("cannot read input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", (unsigned long long)h);
  return buf;
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> parse_grid_spec(const std::string& spec) {
  double lo = 0, hi = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream ss(spec);
  char tail = 0;
  if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || (ss >> tail))
    fail_usage("bad --grid '" + spec + "' (expected lo:hi:step)");
  if (!(step > 0.0) || hi < lo) fail_usage("bad --grid: need step > 0 and hi >= lo");
  if ((hi - lo) / step > 100000.0) fail_usage("bad --grid: too many points");
  std::vector<double> pts;
  const std::size_t n = std::size_t(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (std::size_t k = 0; k < n; ++k) {
    double t = lo + double(k) * step;
    if (std::abs(t) < 1e-12 * std::max(1.0, step)) t = 0.0;
    pts.push_back(t);
  }
  return pts;
}

struct GridData {
  std::vector<double> t, re, im;
};

GridData read_grid_csv(const std::string& text, const std::string& path) {
  GridData g;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
      line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.find_first_of("0123456789") == std::string::npos)
      continue;  // header row
    std::istringstream ls(line);
    std::string cell;
    double vals[3];
    for (int k = 0; k < 3; ++k) {
      if (!std::getline(ls, cell, ','))
        fail_usage(path + ": expected t,re,im rows");
      try {
        vals[k] = std::stod(cell);
      } catch (...) {
        fail_usage(path + " line " + std::to_string(lineno) + ": bad number '" +
                   cell + "'");
      }
    }
    g.t.push_back(vals[0]);
    g.re.push_back(vals[1]);
    g.im.push_back(vals[2]);
  }
  if (g.t.empty()) fail_usage(path + ": no data rows");
  return g;
}

using TripletPtr = std::unique_ptr<lf_triplet, decltype(&lf_triplet_free)>;
using RealizationPtr = std::unique_ptr<lf_realization, decltype(&lf_realization_free)>;

TripletPtr parse_triplet(const std::string& text) {
  lf_triplet* t = nullptr;
  check(lf_triplet_parse_json(text.c_str(), &t), "triplet");
  return {t, &lf_triplet_free};
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  lf_string_free(s);
  return out;
}

lf_convention convention_from_string(const std::string& s) {
  if (s == "definetti") return LF_CONVENTION_DEFINETTI;
  if (s == "kolmogorov") return LF_CONVENTION_KOLMOGOROV;
  if (s == "levy") return LF_CONVENTION_LEVY;
  fail_usage("unknown convention '" + s + "' (definetti|kolmogorov|levy)");
}

// ------------------------------------------------------------------ output

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Run {
  std::string command;
  std::vector<std::string> argv;
  fs::path out_dir;
  std::string format = "csv";
  json parameters = json::object();
  json inputs = json::object();
  std::vector<std::pair<std::string, std::string>> files;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void add_input(const std::string& path, const std::string& bytes) {
    inputs[path] = fnv1a64(bytes);
  }

  void add_table(const std::string& stem, const Table& tb) {
    if (format == "json") {
      json rows = json::array();
      for (const auto& r : tb.rows) {
        json row = json::object();
        for (std::size_t c = 0; c < tb.columns.size(); ++c) row[tb.columns[c]] = r[c];
        rows.push_back(row);
      }
      files.emplace_back(stem + ".json", rows.dump(2) + "\n");
    } else {
      std::ostringstream ss;
      for (std::size_t c = 0; c < tb.columns.size(); ++c)
        ss << (c ? "," : "") << tb.columns[c];
      ss << "\n";
      for (const auto& r : tb.rows) {
        for (std::size_t c = 0; c < r.size(); ++c) ss << (c ? "," : "") << fmt17(r[c]);
        ss << "\n";
      }
      files.emplace_back(stem + ".csv", ss.str());
    }
  }

  void add_json_text(const std::string& name, const std::string& text) {
    files.emplace_back(name, text.back() == '\n' ? text : text + "\n");
  }

  void add_json(const std::string& name, const json& j) {
    files.emplace_back(name, j.dump(2) + "\n");
  }

  // Writes every collected file plus the manifest; nothing touches the
  // filesystem before this point.
  void flush() {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) fail_usage("cannot create output directory '" + out_dir.string() + "'");
    json manifest;
    manifest["command"] = command;
    manifest["argv"] = argv;
    manifest["tool_version"] = lf_version();
    manifest["inputs"] = inputs;
    manifest["parameters"] = parameters;
    json outs = json::array();
    for (const auto& [name, contents] : files) outs.push_back(name);
    manifest["outputs"] = outs;
    manifest["wall_clock_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    files.emplace_back("manifest.json", manifest.dump(2) + "\n");
    for (const auto& [name, contents] : files) {
      std::ofstream out(out_dir / name, std::ios::binary);
      if (!out) fail_usage("cannot write '" + (out_dir / name).string() + "'");
      out << contents;
    }
  }
};

json verdict_json(const lf_psd_verdict& v) {
  return json{{"pass", v.is_psd != 0},
              {"min_eigenvalue", v.min_eigenvalue},
              {"scale", v.scale},
              {"tolerance", v.tolerance}};
}

// ---------------------------------------------------------------- options

struct Options {
  std::string command;
  std::string input;
  std::string grid_spec;  // empty -> per-command default
  std::string out = "out";
  std::string format = "csv";
  std::string target;
  int nmax = 16;
  double tol = 1e-8;
  std::uint64_t seed = 12345;
  double delta = 0.01;
  double h = 0.7;
  double h1 = 0.5;
  double h2 = 1.0;
  double dt = 0.01;
  std::uint64_t count = 200000;
  double horizon = 1.0;
  int degree = 12;
  double eigen_floor = 1e-10;
  double threshold = 1e-4;     // coboundary classification
  double radius_mult = 5.0;    // ECF deviation allowance, mult / sqrt(n)
};

std::vector<double> grid_or_default(const Options& opt, const char* dflt) {
  return parse_grid_spec(opt.grid_spec.empty() ? dflt : opt.grid_spec);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// --------------------------------------------------------------- sections

json diagnostics_json(const lf_triplet* trip) {
  lf_triplet_diagnostics d;
  check(lf_triplet_validate(trip, &d), "validate");
  json checks = json::array();
  checks.push_back({{"name", "min1p2"},
                    {"required", true},
                    {"pass", d.min1p2_ok != 0},
                    {"value", d.min1p2}});
  checks.push_back({{"name", "abs_p_tail"},
                    {"required", d.abs_p_tail_required != 0},
                    {"pass", d.abs_p_tail_ok != 0},
                    {"value", d.abs_p_tail}});
  checks.push_back({{"name", "total_mass"},
                    {"required", d.total_mass_required != 0},
                    {"pass", d.total_mass_ok != 0},
                    {"value", d.total_mass}});
  return json{{"pass", d.overall_ok != 0}, {"checks", checks}};
}

json divisibility_json(const std::vector<lf_psd_verdict>& verdicts, int n_eval,
                       bool pass, bool zero_crossing, int pi_steps) {
  json per_n = json::array();
  for (int i = 0; i < n_eval; ++i)
    per_n.push_back({{"n", i + 1},
                     {"min_eigenvalue", verdicts[i].min_eigenvalue},
                     {"pass", verdicts[i].is_psd != 0}});
  return json{{"pass", pass},
              {"per_n", per_n},
              {"zero_crossing", zero_crossing},
              {"pi_ambiguous_steps", pi_steps}};
}

json divisibility_section(const Options& opt, const lf_triplet* trip,
                          const GridData* grid_data,
                          const std::vector<double>& pts) {
  std::vector<lf_psd_verdict> verdicts(std::size_t(opt.nmax));
  int n_eval = 0, pass = 0, zero_crossing = 0, pi_steps = 0;
  if (trip) {
    check(lf_divisibility_check_triplet(trip, pts.data(), pts.size(), opt.nmax,
                                        opt.tol, verdicts.data(), &n_eval, &pass,
                                        &zero_crossing, &pi_steps),
          "check-id");
  } else {
    check(lf_divisibility_check_grid(grid_data->t.data(), grid_data->re.data(),
                                     grid_data->im.data(), grid_data->t.size(),
                                     opt.nmax, opt.tol, verdicts.data(), &n_eval,
                                     &pass, &zero_crossing, &pi_steps),
          "check-id");
  }
  return divisibility_json(verdicts, n_eval, pass != 0, zero_crossing != 0, pi_steps);
}

// f samples on pts through the C API
void exponent_samples(const lf_triplet* trip, const std::vector<double>& pts,
                      std::vector<double>& re, std::vector<double>& im) {
  re.resize(pts.size());
  im.resize(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j)
    check(lf_eval_exponent(trip, pts[j], &re[j], &im[j]), "eval_exponent");
}

json positivity_section(const Options& opt, const lf_triplet* trip,
                        const GridData* grid_data, const std::vector<double>& pts) {
  lf_psd_verdict gram{}, cond{};
  if (trip) {
    std::vector<double> M(2 * pts.size() * pts.size());
    check(lf_gram_from_triplet(trip, pts.data(), pts.size(), M.data()), "gram");
    check(lf_psd_check(M.data(), pts.size(), opt.tol, &gram), "psd_check");
    std::vector<double> fre, fim;
    exponent_samples(trip, pts, fre, fim);
    check(lf_conditional_psd_check(pts.data(), fre.data(), fim.data(), pts.size(),
                                   opt.tol, &cond),
          "conditional_psd_check");
  } else {
    const std::size_t n = grid_data->t.size();
    std::vector<double> M(2 * n * n);
    check(lf_gram_from_grid(grid_data->t.data(), grid_data->re.data(),
                            grid_data->im.data(), n, M.data()),
          "gram");
    check(lf_psd_check(M.data(), n, opt.tol, &gram), "psd_check");
    std::vector<double> fre(n), fim(n);
    check(lf_log_branch(grid_data->t.data(), grid_data->re.data(),
                        grid_data->im.data(), n, 0.0, fre.data(), fim.data()),
          "log_branch");
    check(lf_conditional_psd_check(grid_data->t.data(), fre.data(), fim.data(), n,
                                   opt.tol, &cond),
          "conditional_psd_check");
  }
  return json{{"pass", gram.is_psd != 0 && cond.is_psd != 0},
              {"gram", verdict_json(gram)},
              {"conditional", verdict_json(cond)}};
}

struct GnsResult {
  json section;
  std::string kernel_json;
  std::string realization_json;
  bool pass = false;
};

GnsResult gns_section(const Options& opt, const lf_triplet* trip,
                      const std::vector<double>& pts) {
  GnsResult res;
  const std::size_t n = pts.size();
  std::vector<double> K(2 * n * n);
  check(lf_kernel_matrix(trip, pts.data(), n, K.data()), "kernel_matrix");
  auto kat = [&K, n](std::size_t j, std::size_t k) {
    return cplx{K[2 * (j * n + k)], K[2 * (j * n + k) + 1]};
  };

  double k_max = 0.0, herm_dev = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      k_max = std::max(k_max, std::abs(kat(j, k)));
      herm_dev = std::max(herm_dev, std::abs(kat(j, k) - std::conj(kat(k, j))));
    }

  // closed form against the exponent route
  std::vector<double> fre, fim;
  std::vector<double> diffs;  // f needed at t_k - t_j, -t_j, t_k
  double route_dev = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      double re1, im1, re2, im2, re3, im3;
      check(lf_eval_exponent(trip, pts[k] - pts[j], &re1, &im1), "eval_exponent");
      check(lf_eval_exponent(trip, -pts[j], &re2, &im2), "eval_exponent");
      check(lf_eval_exponent(trip, pts[k], &re3, &im3), "eval_exponent");
      const cplx via_f = cplx{re1, im1} - cplx{re2, im2} - cplx{re3, im3};
      route_dev = std::max(route_dev, std::abs(via_f - kat(j, k)));
    }

  double shift_res = 0.0;
  check(lf_shift_covariance_residual(trip, pts.data(), n, opt.h, &shift_res),
        "shift_covariance_residual");

  lf_realization* raw = nullptr;
  check(lf_realize_cocycle(pts.data(), n, K.data(), opt.eigen_floor, &raw),
        "realize_cocycle");
  RealizationPtr real(raw, &lf_realization_free);
  int rank = 0;
  check(lf_realization_rank(real.get(), &rank), "realization_rank");

  double residual = 0.0, normalized = 0.0;
  std::vector<double> psi0(std::size_t(2 * std::max(rank, 1)), 0.0);
  check(lf_coboundary_residual(real.get(), trip, &residual, &normalized, psi0.data()),
        "coboundary_residual");

  char* kjson = nullptr;
  check(lf_kernel_matrix_to_json(pts.data(), n, K.data(), &kjson), "kernel json");
  res.kernel_json = take_string(kjson);
  char* rjson = nullptr;
  check(lf_realization_to_json(real.get(), &rjson), "realization json");
  res.realization_json = take_string(rjson);

  const bool herm_ok = herm_dev <= 1e-12 * std::max(1.0, k_max);
  const bool route_ok = route_dev <= 1e-9 * (1.0 + k_max);
  const bool shift_ok = shift_res <= 1e-8 * (1.0 + k_max);
  res.pass = herm_ok && route_ok && shift_ok;
  res.section = json{{"pass", res.pass},
                     {"kernel_max", k_max},
                     {"hermitian_deviation", herm_dev},
                     {"hermitian_pass", herm_ok},
                     {"closed_vs_exponent_deviation", route_dev},
                     {"closed_vs_exponent_pass", route_ok},
                     {"shift", opt.h},
                     {"shift_covariance_residual", shift_res},
                     {"shift_covariance_pass", shift_ok},
                     {"rank", rank},
                     {"coboundary",
                      json{{"residual", residual},
                           {"normalized_residual", normalized},
                           {"threshold", opt.threshold},
                           {"is_coboundary", normalized <= opt.threshold}}}};
  return res;
}

json embed_section(const Options& opt, const lf_triplet* trip,
                   const std::vector<double>& pts) {
  const std::size_t n = pts.size();

  // vacuum expectation vs the characteristic function
  double vac_dev = 0.0;
  for (double t : pts) {
    double vre, vim, fre, fim;
    check(lf_vacuum_expectation(trip, t, &vre, &vim), "vacuum_expectation");
    check(lf_char_fn(trip, t, &fre, &fim), "char_fn");
    const double dev = std::abs(cplx{vre - fre, vim - fim});
    vac_dev = std::max(vac_dev, dev / (1.0 + std::abs(cplx{fre, fim})));
  }

  // scale: largest coherent gram entry
  std::vector<double> G0(2 * n * n);
  check(lf_weyl_gram(trip, pts.data(), n, 0.0, G0.data()), "weyl_gram");
  double scale = 0.0;
  for (std::size_t i = 0; i < n * n; ++i)
    scale = std::max(scale, std::abs(cplx{G0[2 * i], G0[2 * i + 1]}));

  double unit_res = 0.0;
  check(lf_weyl_unitarity_residual(trip, pts.data(), n, opt.h1, &unit_res),
        "weyl_unitarity_residual");
  double rep_res = 0.0;
  check(lf_representation_residual(trip, pts.data(), n, opt.h1, opt.h2, &rep_res),
        "representation_residual");

  // coherent-state identity on materialized truncated vectors
  std::vector<double> K(2 * n * n);
  check(lf_kernel_matrix(trip, pts.data(), n, K.data()), "kernel_matrix");
  lf_realization* raw = nullptr;
  check(lf_realize_cocycle(pts.data(), n, K.data(), opt.eigen_floor, &raw),
        "realize_cocycle");
  RealizationPtr real(raw, &lf_realization_free);
  int rank = 0;
  check(lf_realization_rank(real.get(), &rank), "realization_rank");
  bool series_ok = true;
  double series_excess = 0.0;
  if (rank > 0) {
    std::vector<double> vecs(std::size_t(2 * rank) * n);
    check(lf_realization_vectors(real.get(), vecs.data()), "realization_vectors");
    auto column = [&](std::size_t j) {
      std::vector<double> v(std::size_t(2 * rank));
      for (int r = 0; r < rank; ++r) {
        v[2 * r] = vecs[2 * (std::size_t(r) * n + j)];
        v[2 * r + 1] = vecs[2 * (std::size_t(r) * n + j) + 1];
      }
      return v;
    };
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const std::vector<double> pj = column(j), pk = column(k);
        double ire, iim, bound;
        check(lf_coherent_inner(pj.data(), pk.data(), std::size_t(rank), opt.degree,
                                &ire, &iim, &bound),
              "coherent_inner");
        const cplx expk = std::exp(cplx{K[2 * (j * n + k)], K[2 * (j * n + k) + 1]});
        const double dev = std::abs(cplx{ire, iim} - expk);
        // the realization itself reproduces K only to ~1e-8 * scale
        const double allowed = bound + 1e-7 * (1.0 + scale);
        series_excess = std::max(series_excess, dev - allowed);
        if (dev > allowed) series_ok = false;
      }
  }

  const bool vac_ok = vac_dev <= 1e-9;
  const bool unit_ok = unit_res <= 1e-7 * (1.0 + scale);
  const bool rep_ok = rep_res <= 1e-8 * (1.0 + scale);
  return json{{"pass", vac_ok && unit_ok && rep_ok && series_ok},
              {"vacuum_max_relative_deviation", vac_dev},
              {"vacuum_pass", vac_ok},
              {"scale", scale},
              {"h1", opt.h1},
              {"h2", opt.h2},
              {"unitarity_residual", unit_res},
              {"unitarity_pass", unit_ok},
              {"representation_residual", rep_res},
              {"representation_pass", rep_ok},
              {"truncation_degree", opt.degree},
              {"coherent_series_pass", series_ok},
              {"coherent_series_excess", series_excess}};
}

struct EcfResult {
  json section;
  Table ecf_table;
  Table compare_table;
  bool pass = false;
};

EcfResult ecf_section(const Options& opt, const lf_triplet* trip,
                      const std::vector<double>& tgrid) {
  EcfResult res;
  const std::size_t n = opt.count;
  if (n == 0) fail_usage("--count must be positive");
  std::vector<double> inc(n);
  check(lf_sample_increments(trip, opt.horizon, n, opt.seed, opt.delta, inc.data()),
        "sample_increments");
  const std::size_t m = tgrid.size();
  std::vector<double> ere(m), eim(m);
  double radius = 0.0;
  check(lf_ecf(inc.data(), n, tgrid.data(), m, ere.data(), eim.data(), &radius),
        "ecf");

  res.ecf_table.columns = {"t", "re", "im", "ci"};
  res.compare_table.columns = {"t", "ecf_re", "ecf_im", "model_re", "model_im",
                               "abs_dev"};
  double max_dev = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double fre, fim;
    check(lf_eval_exponent(trip, tgrid[j], &fre, &fim), "eval_exponent");
    const cplx model = std::exp(opt.horizon * cplx{fre, fim});
    const double dev = std::abs(cplx{ere[j], eim[j]} - model);
    max_dev = std::max(max_dev, dev);
    res.ecf_table.rows.push_back({tgrid[j], ere[j], eim[j], radius});
    res.compare_table.rows.push_back(
        {tgrid[j], ere[j], eim[j], model.real(), model.imag(), dev});
  }
  const double allowed = opt.radius_mult / std::sqrt(double(n));
  res.pass = max_dev <= allowed;
  res.section = json{{"pass", res.pass},     {"n", n},
                     {"horizon", opt.horizon}, {"seed", opt.seed},
                     {"delta", opt.delta},   {"max_abs_deviation", max_dev},
                     {"allowed", allowed},   {"confidence_radius", radius}};
  return res;
}

// --------------------------------------------------------------- commands

int run_eval(const Options& opt, Run& run) {
  const std::string text = read_file(opt.input);
  run.add_input(opt.input, text);
  const TripletPtr trip = parse_triplet(text);
  const std::vector<double> pts = grid_or_default(opt, "-5:5:0.5");

  const json diag = diagnostics_json(trip.get());
  if (!diag.at("pass").get<bool>()) {
    run.add_json("report.json",
                 json{{"command", "eval"}, {"pass", false}, {"diagnostics", diag}});
    run.flush();
    return 1;
  }

  Table tb;
  tb.columns = {"t", "f_re", "f_im", "F_re", "F_im"};
  for (double t : pts) {
    double fre, fim, Fre, Fim;
    check(lf_eval_exponent(trip.get(), t, &fre, &fim), "eval_exponent");
    check(lf_char_fn(trip.get(), t, &Fre, &Fim), "char_fn");
    tb.rows.push_back({t, fre, fim, Fre, Fim});
  }
  run.add_table("exponent", tb);
  run.add_json("report.json", json{{"command", "eval"},
                                   {"pass", true},
                                   {"points", pts.size()},
                                   {"diagnostics", diag}});
  run.flush();
  return 0;
}

int run_convert(const Options& opt, Run& run) {
  if (opt.target.empty()) fail_usage("convert needs --target");
  const lf_convention target = convention_from_string(opt.target);
  const std::string text = read_file(opt.input);
  run.add_input(opt.input, text);
  const TripletPtr trip = parse_triplet(text);

  lf_triplet* raw = nullptr;
  check(lf_triplet_convert(trip.get(), target, &raw), "convert");
  const TripletPtr converted(raw, &lf_triplet_free);

  double max_rel_dev = 0.0;
  for (double t : grid_or_default(opt, "-5:5:0.5")) {
    double re0, im0, re1, im1;
    check(lf_eval_exponent(trip.get(), t, &re0, &im0), "eval_exponent");
    check(lf_eval_exponent(converted.get(), t, &re1, &im1), "eval_exponent");
    const double dev = std::abs(cplx{re1 - re0, im1 - im0});
    max_rel_dev = std::max(max_rel_dev, dev / (1.0 + std::abs(cplx{re0, im0})));
  }
  const bool pass = max_rel_dev <= 1e-9;

  char* cj = nullptr;
  check(lf_triplet_to_json(converted.get(), &cj), "triplet json");
  run.add_json_text("converted.json", take_string(cj));
  run.add_json("report.json", json{{"command", "convert"},
                                   {"pass", pass},
                                   {"target", opt.target},
                                   {"max_relative_deviation", max_rel_dev},
                                   {"tolerance", 1e-9}});
  run.flush();
  return pass ? 0 : 1;
}

int run_check_pd(const Options& opt, Run& run) {
  const std::string text = read_file(opt.input);
  run.add_input(opt.input, text);
  json section;
  if (ends_with(opt.input, ".csv")) {
    const GridData grid = read_grid_csv(text, opt.input);
    section = positivity_section(opt, nullptr, &grid, {});
  } else {
    const TripletPtr trip = parse_triplet(text);
    const std::vector<double> pts = grid_or_default(opt, "-4:4:0.5");
    section = positivity_section(opt, trip.get(), nullptr, pts);
  }
  section["command"] = "check-pd";
  run.add_json("report.json", section);
  run.flush();
  return section.at("pass").get<bool>() ? 0 : 1;
}

int run_check_id(const Options& opt, Run& run) {
  const std::string text = read_file(opt.input);
  run.add_input(opt.input, text);
  json section;
  if (ends_with(opt.input, ".csv")) {
    const GridData grid = read_grid_csv(text, opt.input);
    section = divisibility_section(opt, nullptr, &grid, {});
  } else {
    const TripletPtr trip = parse_triplet(text);
    const std::vector<double> pts = grid_or_default(opt, "-4:4:0.5");
    section = divisibility_section(opt, trip.get(), nullptr, pts);
  }
  section["command"] = "check-id";
  section["n_max"] = opt.nmax;
  run.add_json("report.json", section);
  run.flush();
  return section.at("pass").get<bool>() ? 0 : 1;
}

int run_gns(const Options& opt, Run& run) {
  const std::string text = read_file(opt.input);
  run.add_input(opt.input, text);
  const TripletPtr trip = parse_triplet(text);
  const std::vector<double> pts = grid_or_default(opt, "0:3:0.5");
  GnsResult res = gns_section(opt, trip.get(), pts);
  res.section["command"] = "gns";
  run.add_json_text("kernel.json", res.kernel_json);
  run.add_json_text("realization.json", res.realization_json);
  run.add_json("report.json", res.section);
  run.flush();
  return res.pass ? 0 : 1;
}

int run_embed_verify(const Options& opt, Run& run) {
  const std::string text = read_file(opt.input);
  run.add_input(opt.input, text);
  const TripletPtr trip = parse_triplet(text);
  const std::vector<double> pts = grid_or_default(opt, "0:2:0.5");
  json section = embed_section(opt, trip.get(), pts);
  section["command"] = "embed-verify";
  run.add_json("report.json", section);
  run.flush();
  return section.at("pass").get<bool>() ? 0 : 1;
}

int run_sample(const Options& opt, Run& run) {
  const std::string text = read_file(opt.input);
  run.add_input(opt.input, text);
  const TripletPtr trip = parse_triplet(text);
  if (opt.count == 0) fail_usage("--count must be positive");
  std::vector<double> inc(opt.count);
  check(lf_sample_increments(trip.get(), opt.dt, opt.count, opt.seed, opt.delta,
                             inc.data()),
        "sample_increments");
  Table tb;
  tb.columns = {"t", "value"};
  double acc = 0.0;
  tb.rows.push_back({0.0, 0.0});
  for (std::size_t k = 0; k < inc.size(); ++k) {
    acc += inc[k];
    tb.rows.push_back({double(k + 1) * opt.dt, acc});
  }
  run.add_table("path", tb);
  double mean = 0.0;
  for (double x : inc) mean += x;
  mean /= double(inc.size());
  double var = 0.0;
  for (double x : inc) var += (x - mean) * (x - mean);
  var = inc.size() > 1 ? var / double(inc.size() - 1) : 0.0;
  run.add_json("report.json", json{{"command", "sample"},
                                   {"pass", true},
                                   {"steps", opt.count},
                                   {"dt", opt.dt},
                                   {"seed", opt.seed},
                                   {"delta", opt.delta},
                                   {"increment_mean", mean},
                                   {"increment_variance", var}});
  run.flush();
  return 0;
}

int run_ecf_compare(const Options& opt, Run& run) {
  const std::string text = read_file(opt.input);
  run.add_input(opt.input, text);
  const TripletPtr trip = parse_triplet(text);
  const std::vector<double> tgrid = grid_or_default(opt, "-3:3:0.3");
  EcfResult res = ecf_section(opt, trip.get(), tgrid);
  res.section["command"] = "ecf-compare";
  run.add_table("ecf", res.ecf_table);
  run.add_table("compare", res.compare_table);
  run.add_json("report.json", res.section);
  run.flush();
  return res.pass ? 0 : 1;
}

int run_report(const Options& opt, Run& run) {
  const std::string text = read_file(opt.input);
  run.add_input(opt.input, text);
  const TripletPtr trip = parse_triplet(text);
  const std::vector<double> pts = grid_or_default(opt, "-3:3:0.5");
  std::vector<double> nonneg;
  for (double t : pts)
    if (t >= 0.0) nonneg.push_back(t);
  if (nonneg.empty() || nonneg.front() != 0.0)
    fail_usage("report needs a grid containing 0 and nonnegative points");

  json report;
  report["command"] = "report";
  report["diagnostics"] = diagnostics_json(trip.get());
  bool pass = report["diagnostics"].at("pass").get<bool>();

  Table tb;
  tb.columns = {"t", "f_re", "f_im", "F_re", "F_im"};
  for (double t : pts) {
    double fre, fim, Fre, Fim;
    check(lf_eval_exponent(trip.get(), t, &fre, &fim), "eval_exponent");
    check(lf_char_fn(trip.get(), t, &Fre, &Fim), "char_fn");
    tb.rows.push_back({t, fre, fim, Fre, Fim});
  }
  run.add_table("exponent", tb);

  report["positivity"] = positivity_section(opt, trip.get(), nullptr, pts);
  pass = pass && report["positivity"].at("pass").get<bool>();
  report["divisibility"] = divisibility_section(opt, trip.get(), nullptr, pts);
  pass = pass && report["divisibility"].at("pass").get<bool>();

  GnsResult gres = gns_section(opt, trip.get(), nonneg);
  run.add_json_text("kernel.json", gres.kernel_json);
  run.add_json_text("realization.json", gres.realization_json);
  report["gns"] = gres.section;
  pass = pass && gres.pass;

  report["embedding"] = embed_section(opt, trip.get(), nonneg);
  pass = pass && report["embedding"].at("pass").get<bool>();

  EcfResult eres = ecf_section(opt, trip.get(), pts);
  run.add_table("ecf", eres.ecf_table);
  run.add_table("compare", eres.compare_table);
  report["sampling"] = eres.section;
  pass = pass && eres.pass;

  report["pass"] = pass;
  run.add_json("report.json", report);
  run.flush();
  return pass ? 0 : 1;
}

int dispatch(const Options& opt, Run& run) {
  if (opt.command == "eval") return run_eval(opt, run);
  if (opt.command == "convert") return run_convert(opt, run);
  if (opt.command == "check-pd") return run_check_pd(opt, run);
  if (opt.command == "check-id") return run_check_id(opt, run);
  if (opt.command == "gns") return run_gns(opt, run);
  if (opt.command == "embed-verify") return run_embed_verify(opt, run);
  if (opt.command == "sample") return run_sample(opt, run);
  if (opt.command == "ecf-compare") return run_ecf_compare(opt, run);
  if (opt.command == "report") return run_report(opt, run);
  fail_usage("unknown command");
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Levy exponent, cocycle and Fock-embedding verification tool"};
  app.require_subcommand(1);

  auto add_common = [&opt](CLI::App* cmd, bool needs_input = true) {
    auto* in = cmd->add_option("--input", opt.input, "triplet JSON (or grid CSV)");
    if (needs_input) in->required();
    cmd->add_option("--grid", opt.grid_spec, "evaluation grid lo:hi:step");
    cmd->add_option("--out", opt.out, "output directory");
    cmd->add_option("--format", opt.format, "table format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--tol", opt.tol, "PSD tolerance");
    cmd->add_option("--seed", opt.seed, "RNG master seed");
    cmd->add_option("--delta", opt.delta, "small-jump threshold");
  };

  CLI::App* eval = app.add_subcommand("eval", "evaluate f and F on a grid");
  add_common(eval);
  CLI::App* convert = app.add_subcommand("convert", "re-center a triplet");
  add_common(convert);
  convert->add_option("--target", opt.target, "definetti|kolmogorov|levy")->required();
  CLI::App* checkpd = app.add_subcommand("check-pd", "Gram positivity tests");
  add_common(checkpd);
  CLI::App* checkid = app.add_subcommand("check-id", "infinite divisibility test");
  add_common(checkid);
  checkid->add_option("--nmax", opt.nmax, "largest root order tested");
  CLI::App* gns = app.add_subcommand("gns", "cocycle kernel and realization");
  add_common(gns);
  gns->add_option("--h", opt.h, "shift used in the covariance identity");
  gns->add_option("--eigen-floor", opt.eigen_floor, "relative rank cutoff");
  gns->add_option("--threshold", opt.threshold, "coboundary classification cut");
  CLI::App* embed = app.add_subcommand("embed-verify", "Fock embedding identities");
  add_common(embed);
  embed->add_option("--h1", opt.h1, "first shift");
  embed->add_option("--h2", opt.h2, "second shift");
  embed->add_option("--degree", opt.degree, "Fock truncation degree");
  embed->add_option("--eigen-floor", opt.eigen_floor, "relative rank cutoff");
  CLI::App* sample = app.add_subcommand("sample", "draw a discretized path");
  add_common(sample);
  sample->add_option("--dt", opt.dt, "time step");
  sample->add_option("--count", opt.count, "number of increments");
  CLI::App* ecfc = app.add_subcommand("ecf-compare",
                                      "empirical vs analytic characteristic function");
  add_common(ecfc);
  ecfc->add_option("--count", opt.count, "number of sampled paths");
  ecfc->add_option("--horizon", opt.horizon, "path horizon T");
  ecfc->add_option("--radius-mult", opt.radius_mult, "allowance = mult / sqrt(n)");
  CLI::App* report = app.add_subcommand("report", "full verification pipeline");
  add_common(report);
  report->add_option("--nmax", opt.nmax, "largest root order tested");
  report->add_option("--h", opt.h, "gns shift");
  report->add_option("--h1", opt.h1, "first embedding shift");
  report->add_option("--h2", opt.h2, "second embedding shift");
  report->add_option("--degree", opt.degree, "Fock truncation degree");
  report->add_option("--eigen-floor", opt.eigen_floor, "relative rank cutoff");
  report->add_option("--threshold", opt.threshold, "coboundary classification cut");
  report->add_option("--count", opt.count, "sampled paths for the ECF section");
  report->add_option("--horizon", opt.horizon, "path horizon T");
  report->add_option("--radius-mult", opt.radius_mult, "allowance = mult / sqrt(n)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }

  for (CLI::App* sub : app.get_subcommands()) opt.command = sub->get_name();

  Run run;
  run.command = opt.command;
  for (int i = 0; i < argc; ++i) run.argv.push_back(argv[i]);
  run.out_dir = opt.out;
  run.format = opt.format;
  run.parameters = json{{"grid", opt.grid_spec},
                        {"format", opt.format},
                        {"nmax", opt.nmax},
                        {"tol", opt.tol},
                        {"seed", opt.seed},
                        {"delta", opt.delta},
                        {"h", opt.h},
                        {"h1", opt.h1},
                        {"h2", opt.h2},
                        {"dt", opt.dt},
                        {"count", opt.count},
                        {"horizon", opt.horizon},
                        {"degree", opt.degree},
                        {"eigen_floor", opt.eigen_floor},
                        {"threshold", opt.threshold},
                        {"radius_mult", opt.radius_mult},
                        {"target", opt.target}};

  try {
    return dispatch(opt, run);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const MathError& e) {
    // a mathematical failure: keep the manifest/report contract
    try {
      run.files.clear();
      run.add_json("report.json", json{{"command", opt.command},
                                       {"pass", false},
                                       {"error", e.what()}});
      run.flush();
    } catch (const std::exception& inner) {
      std::cerr << "error: " << inner.what() << std::endl;
      return 2;
    }
    std::cerr << "check failed: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
}
