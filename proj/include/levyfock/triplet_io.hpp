#pragma once

#include <string>

#include "levyfock/exponent.hpp"

namespace levyfock::exponent {

// Parses the documented triplet JSON schema:
//   {
//     "convention": "definetti" | "kolmogorov" | "levy",   (required)
//     "b": number,                                          (default 0)
//     "a": number,                                          (default 0)
//     "atoms": [[p, w], ...],                               (default [])
//     "density": { "family": ... },                         (optional)
//     "quadrature": {"tol": number, "max_intervals": int}   (optional)
//   }
// Density families:
//   {"family": "uniform", "lo": x, "hi": y, "scale"?: s}
//   {"family": "power", "exponent": g, "cutoff": c, "scale"?: s,
//    "symmetric"?: bool}                  -- support (0, c]
//   {"family": "power", "exponent": g, "support": [lo, hi|"inf"],
//    "scale"?: s, "symmetric"?: bool}     -- explicit support, lo >= 0
//   {"family": "gaussian_l2", "scale": s} -- exp(-(p/s)^2) on the line
// Unknown keys anywhere are a hard error (ParseError). The parsed triplet is
// validated (validate_measure) before being returned.
LevyTriplet triplet_from_json(const std::string& text);

// Canonical serialization; parses back to an identical triplet.
std::string triplet_to_json(const LevyTriplet& trip);

}  // namespace levyfock::exponent
