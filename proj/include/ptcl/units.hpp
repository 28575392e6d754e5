#pragma once

#include <string>

namespace ptcl::units {

inline constexpr double hartree_ev = 27.211386;
inline constexpr double hartree_cm = 219474.63;
inline constexpr double kb_hartree = 3.166811e-6;
inline constexpr double fs_au = 41.341374;

// Converts a value carrying a unit tag to atomic units. Temperatures map to
// kelvin-scaled energies (k_B T); use beta_from_kelvin for inverse temperature.
double convert_units(double value, const std::string& tag);

// Parses "1600 cm-1", "2 eV", "273 K", "10 fs" or a bare number (a.u.).
double parse_quantity(const std::string& text, std::string* tag_out = nullptr);

double beta_from_kelvin(double kelvin);

}  // namespace ptcl::units
