#include "ptcl/units.hpp"

#include <cctype>
#include <cmath>
#include <iostream>
#include <mutex>
#include <utility>
#include <limits>
#include <sstream>

#include "ptcl/types.hpp"

namespace ptcl {

namespace {
std::mutex warn_mutex;
std::vector<std::string> warn_log;
bool warn_quiet = false;
}  // namespace

void warn(const std::string& msg) {
    std::lock_guard lock(warn_mutex);
    warn_log.push_back(msg);
    if (!warn_quiet) std::cerr << "warning: " << msg << '\n';
}

std::vector<std::string> take_warnings() {
    std::lock_guard lock(warn_mutex);
    return std::exchange(warn_log, {});
}

void set_warnings_quiet(bool quiet) {
    std::lock_guard lock(warn_mutex);
    warn_quiet = quiet;
}

}  // namespace ptcl

namespace ptcl::units {

namespace {

std::string normalize(std::string tag) {
    std::string out;
    for (char c : tag) {
        if (c == ' ' || c == '^' || c == '{' || c == '}') continue;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (out == "cm-1" || out == "cm⁻¹" || out == "wavenumber" || out == "1/cm") return "cm-1";
    if (out == "hartree" || out == "ha" || out == "au" || out == "a.u." || out.empty()) return "au";
    return out;
}

}  // namespace

double convert_units(double value, const std::string& tag) {
    const std::string t = normalize(tag);
    if (t == "au") return value;
    if (t == "ev") return value / hartree_ev;
    if (t == "cm-1") return value / hartree_cm;
    if (t == "k") return value * kb_hartree;
    if (t == "fs") return value * fs_au;
    throw ParseError("unknown unit tag '" + tag + "'");
}

double parse_quantity(const std::string& text, std::string* tag_out) {
    std::istringstream in(text);
    double v = 0.0;
    if (!(in >> v)) throw ParseError("expected a number in '" + text + "'");
    std::string rest;
    std::getline(in, rest);
    const double out = convert_units(v, rest);
    if (tag_out) *tag_out = normalize(rest);
    return out;
}

double beta_from_kelvin(double kelvin) {
    if (kelvin < 0.0) throw DomainError("negative temperature");
    if (kelvin == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (kb_hartree * kelvin);
}

}  // namespace ptcl::units
