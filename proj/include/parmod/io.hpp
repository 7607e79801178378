#pragma once

#include <map>
#include <string>
#include <vector>

#include "parmod/fatou.hpp"
#include "parmod/glutsyuk.hpp"
#include "parmod/prepare.hpp"
#include "parmod/riccati.hpp"

namespace parmod {

// Machine-readable serialization used by the command-line front end. Every
// emitter is deterministic: object keys are sorted, numbers are printed in
// shortest round-trip form, complex values are [re, im] pairs.

std::string horn_map_to_json(const HornMapPair& h);
HornMapPair horn_map_from_json(const std::string& text);

std::string moebius_to_json(const MoebiusModulus& m);
MoebiusModulus moebius_from_json(const std::string& text);

std::string riccati_system_to_json(const RiccatiSystem& sys);

// {"builtin": "model" | "quadratic", "a": [re, im]} or
// {"series": [[[re, im], ...], ...], "z_radius": r} with rows indexed by the
// z-degree and columns by the parameter degree.
GermFamily family_from_json(const std::string& text);

std::string compat_report_to_json(const CompatReport& r);

// Plain CSV: header row, then one line per data row.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

// Standard report wrapper embedding the library version and the tolerance
// set in force: {"payload": ..., "tolerances": {...}, "tool": ...,
// "version": ...}. `payload_json` must itself be valid JSON.
std::string report_envelope(const std::string& tool,
                            const std::map<std::string, double>& tolerances,
                            const std::string& payload_json);

} // namespace parmod
