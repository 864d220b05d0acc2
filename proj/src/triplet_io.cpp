#include "levyfock/triplet_io.hpp"

#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

namespace levyfock::exponent {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ParseError("unknown key '" + it.key() + "' in " + where);
}

double require_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + " must be a number");
  return j.get<double>();
}

// support endpoint: number, "inf" or "-inf"
double parse_endpoint(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ParseError(where + " must be a number, \"inf\" or \"-inf\"");
}

Density parse_density(const json& j) {
  if (!j.is_object()) throw ParseError("density must be an object");
  if (!j.contains("family") || !j.at("family").is_string())
    throw ParseError("density needs a string 'family'");
  const std::string fam = j.at("family").get<std::string>();
  Density d;
  if (fam == "uniform") {
    reject_unknown_keys(j, {"family", "lo", "hi", "scale"}, "uniform density");
    if (!j.contains("lo") || !j.contains("hi"))
      throw ParseError("uniform density needs 'lo' and 'hi'");
    d.family = DensityFamily::Uniform;
    d.lo = require_number(j.at("lo"), "density.lo");
    d.hi = require_number(j.at("hi"), "density.hi");
    if (j.contains("scale")) d.scale = require_number(j.at("scale"), "density.scale");
  } else if (fam == "power") {
    reject_unknown_keys(j, {"family", "exponent", "cutoff", "support", "scale", "symmetric"},
                        "power density");
    if (!j.contains("exponent")) throw ParseError("power density needs 'exponent'");
    d.family = DensityFamily::Power;
    d.exponent = require_number(j.at("exponent"), "density.exponent");
    if (j.contains("support")) {
      if (j.contains("cutoff"))
        throw ParseError("power density takes 'cutoff' or 'support', not both");
      const json& s = j.at("support");
      if (!s.is_array() || s.size() != 2)
        throw ParseError("density.support must be [lo, hi]");
      d.lo = parse_endpoint(s[0], "density.support[0]");
      d.hi = parse_endpoint(s[1], "density.support[1]");
    } else {
      if (!j.contains("cutoff")) throw ParseError("power density needs 'cutoff' or 'support'");
      d.lo = 0.0;
      d.hi = require_number(j.at("cutoff"), "density.cutoff");
    }
    if (j.contains("scale")) d.scale = require_number(j.at("scale"), "density.scale");
    if (j.contains("symmetric")) {
      if (!j.at("symmetric").is_boolean()) throw ParseError("density.symmetric must be bool");
      d.mirrored = j.at("symmetric").get<bool>();
    }
  } else if (fam == "gaussian_l2") {
    reject_unknown_keys(j, {"family", "scale"}, "gaussian_l2 density");
    if (!j.contains("scale")) throw ParseError("gaussian_l2 density needs 'scale'");
    d.family = DensityFamily::GaussianL2;
    d.scale = require_number(j.at("scale"), "density.scale");
    d.lo = -kInf;
    d.hi = kInf;
  } else {
    throw ParseError("unknown density family '" + fam + "'");
  }
  return d;
}

json endpoint_to_json(double x) {
  if (x == kInf) return json("inf");
  if (x == -kInf) return json("-inf");
  return json(x);
}

}  // namespace

LevyTriplet triplet_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("triplet JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("triplet JSON must be an object");
  reject_unknown_keys(j, {"b", "a", "convention", "atoms", "density", "quadrature"},
                      "triplet");
  if (!j.contains("convention")) throw ParseError("triplet needs 'convention'");
  if (!j.at("convention").is_string()) throw ParseError("'convention' must be a string");

  LevyTriplet trip;
  trip.convention = convention_from_name(j.at("convention").get<std::string>());
  if (j.contains("b")) trip.b = require_number(j.at("b"), "b");
  if (j.contains("a")) trip.a = require_number(j.at("a"), "a");
  if (trip.a < 0.0) throw ParseError("'a' must be >= 0");
  if (j.contains("atoms")) {
    if (!j.at("atoms").is_array()) throw ParseError("'atoms' must be an array");
    for (const json& at : j.at("atoms")) {
      if (!at.is_array() || at.size() != 2)
        throw ParseError("each atom must be [p, w]");
      trip.nu.atoms.push_back(
          {require_number(at[0], "atom p"), require_number(at[1], "atom w")});
    }
  }
  if (j.contains("density")) trip.nu.density = parse_density(j.at("density"));
  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    if (!q.is_object()) throw ParseError("'quadrature' must be an object");
    reject_unknown_keys(q, {"tol", "max_intervals"}, "quadrature");
    if (q.contains("tol")) trip.nu.quadrature.tol = require_number(q.at("tol"), "quadrature.tol");
    if (q.contains("max_intervals")) {
      if (!q.at("max_intervals").is_number_integer())
        throw ParseError("quadrature.max_intervals must be an integer");
      trip.nu.quadrature.max_intervals = q.at("max_intervals").get<int>();
    }
  }
  validate_measure(trip.nu);
  return trip;
}

std::string triplet_to_json(const LevyTriplet& trip) {
  json j;
  j["convention"] = convention_name(trip.convention);
  j["b"] = trip.b;
  j["a"] = trip.a;
  json atoms = json::array();
  for (const Atom& at : trip.nu.atoms) atoms.push_back(json::array({at.p, at.w}));
  j["atoms"] = atoms;
  if (trip.nu.density) {
    const Density& d = *trip.nu.density;
    json dj;
    switch (d.family) {
      case DensityFamily::Uniform:
        dj["family"] = "uniform";
        dj["lo"] = d.lo;
        dj["hi"] = d.hi;
        dj["scale"] = d.scale;
        break;
      case DensityFamily::Power:
        dj["family"] = "power";
        dj["exponent"] = d.exponent;
        dj["support"] = json::array({endpoint_to_json(d.lo), endpoint_to_json(d.hi)});
        dj["scale"] = d.scale;
        if (d.mirrored) dj["symmetric"] = true;
        break;
      case DensityFamily::GaussianL2:
        dj["family"] = "gaussian_l2";
        dj["scale"] = d.scale;
        break;
    }
    j["density"] = dj;
  }
  j["quadrature"] = {{"tol", trip.nu.quadrature.tol},
                     {"max_intervals", trip.nu.quadrature.max_intervals}};
  return j.dump(2);
}

}  // namespace levyfock::exponent
