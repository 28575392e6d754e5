#include "ptcl/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ptcl/units.hpp"

namespace ptcl {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& section, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ParseError("section '" + section + "' must be an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ParseError("unknown key '" + section + "." + it.key() + "'");
}

double quantity(const json& j, const std::string& name) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return units::parse_quantity(j.get<std::string>());
    throw ParseError("'" + name + "' must be a number or a unit string");
}

double temperature_beta(const json& j) {
    if (j.is_number()) return units::beta_from_kelvin(j.get<double>());
    // "273 K" and energies alike resolve to k_B T
    const double v = units::parse_quantity(j.get<std::string>());
    if (v < 0.0) throw ParseError("negative temperature");
    return v == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / v;
}

int direction(const json& j) {
    const std::string s = j.get<std::string>();
    if (s == "x") return 0;
    if (s == "y") return 1;
    if (s == "z") return 2;
    throw ParseError("kick direction must be x, y or z, got '" + s + "'");
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

double quantity_or(const json& j, const char* key, double fallback) {
    return j.contains(key) ? quantity(j.at(key), key) : fallback;
}

void parse_system(const json& j, SystemSection& s, const std::string& base) {
    only_keys(j, "system", {"source", "path", "n_electrons", "model", "dimer"});
    const std::string src = get_or<std::string>(j, "source", "model");
    if (src == "model") {
        s.source = SystemSource::Model;
        if (j.contains("model")) {
            const json& m = j.at("model");
            only_keys(m, "system.model", {"seed", "n_occ", "n_virt", "scale", "complex"});
            s.model.seed = get_or<std::uint64_t>(m, "seed", s.model.seed);
            s.model.n_occ = get_or<int>(m, "n_occ", s.model.n_occ);
            s.model.n_virt = get_or<int>(m, "n_virt", s.model.n_virt);
            s.model.scale = quantity_or(m, "scale", s.model.scale);
            s.model.complex_integrals = get_or<bool>(m, "complex", false);
        }
    } else if (src == "dimer") {
        s.source = SystemSource::Dimer;
        if (j.contains("dimer")) {
            const json& d = j.at("dimer");
            only_keys(d, "system.dimer",
                      {"homo_left", "homo_right", "lumo_left", "lumo_right", "coulomb", "exchange", "inter_coulomb",
                       "transfer", "dipole"});
            DimerModel& m = s.dimer;
            m.homo_left = quantity_or(d, "homo_left", m.homo_left);
            m.homo_right = quantity_or(d, "homo_right", m.homo_right);
            m.lumo_left = quantity_or(d, "lumo_left", m.lumo_left);
            m.lumo_right = quantity_or(d, "lumo_right", m.lumo_right);
            m.coulomb = quantity_or(d, "coulomb", m.coulomb);
            m.exchange = quantity_or(d, "exchange", m.exchange);
            m.inter_coulomb = quantity_or(d, "inter_coulomb", m.inter_coulomb);
            m.transfer = quantity_or(d, "transfer", m.transfer);
            m.dipole = get_or<double>(d, "dipole", m.dipole);
        }
    } else if (src == "fcidump" || src == "native") {
        s.source = src == "fcidump" ? SystemSource::Fcidump : SystemSource::Native;
        if (!j.contains("path")) throw ParseError("system.path is required for source '" + src + "'");
        std::filesystem::path p = j.at("path").get<std::string>();
        if (p.is_relative()) p = std::filesystem::path(base) / p;
        if (!std::filesystem::exists(p)) throw ValidationError("system file not found: " + p.string());
        s.path = p.string();
        s.n_electrons = get_or<int>(j, "n_electrons", 0);
    } else {
        throw ParseError("unknown system source '" + src + "'");
    }
}

void parse_bath(const json& j, BathSection& b) {
    only_keys(j, "bath", {"temperature", "modes", "densities", "subtract_reorganization", "t_c"});
    b.present = true;
    b.bath.beta = j.contains("temperature") ? temperature_beta(j.at("temperature")) : std::numeric_limits<double>::infinity();
    b.subtract_reorganization = get_or<bool>(j, "subtract_reorganization", false);
    b.t_c = quantity_or(j, "t_c", 0.0);
    if (j.contains("modes"))
        for (const json& m : j.at("modes")) {
            only_keys(m, "bath.modes[]", {"omega", "width", "mtilde", "mtilde_spatial", "coupling"});
            if (!m.contains("omega")) throw ParseError("bath.modes[].omega is required");
            Mode mode;
            mode.omega = quantity(m.at("omega"), "omega");
            mode.width = quantity_or(m, "width", 0.0);
            // coupling matrix is sized later; stash the spec in a 1-column form
            if (m.contains("coupling")) {
                const auto rows = m.at("coupling").get<std::vector<std::vector<double>>>();
                mode.coupling.resize(rows.size(), rows.size());
                for (std::size_t p = 0; p < rows.size(); ++p) {
                    if (rows[p].size() != rows.size()) throw ParseError("bath.modes[].coupling must be square");
                    for (std::size_t q = 0; q < rows.size(); ++q) mode.coupling(p, q) = rows[p][q];
                }
            } else {
                std::vector<double> mt;
                if (m.contains("mtilde")) {
                    mt = m.at("mtilde").get<std::vector<double>>();
                } else if (m.contains("mtilde_spatial")) {
                    for (double x : m.at("mtilde_spatial").get<std::vector<double>>()) {
                        mt.push_back(x);
                        mt.push_back(x);
                    }
                } else {
                    throw ParseError("bath.modes[] needs mtilde, mtilde_spatial or coupling");
                }
                mode.coupling = Eigen::MatrixXd::Zero(mt.size(), mt.size());
                for (std::size_t p = 0; p < mt.size(); ++p) mode.coupling(p, p) = mt[p] * mode.omega;
            }
            b.bath.modes.push_back(std::move(mode));
        }
    if (j.contains("densities"))
        for (const json& d : j.at("densities")) {
            only_keys(d, "bath.densities[]", {"shape", "omega_c", "eta", "points"});
            Density dens;
            const std::string shape = get_or<std::string>(d, "shape", "super-ohmic");
            if (shape == "ohmic")
                dens.shape = DensityShape::Ohmic;
            else if (shape == "super-ohmic" || shape == "superohmic")
                dens.shape = DensityShape::SuperOhmic;
            else
                throw ParseError("unknown density shape '" + shape + "'");
            if (!d.contains("omega_c") || !d.contains("eta")) throw ParseError("bath.densities[] needs omega_c and eta");
            dens.omega_c = quantity(d.at("omega_c"), "omega_c");
            const auto eta = d.at("eta").get<std::vector<double>>();
            dens.eta = Eigen::Map<const Eigen::VectorXd>(eta.data(), eta.size());
            dens.n_points = get_or<int>(d, "points", dens.n_points);
            b.bath.densities.push_back(std::move(dens));
        }
}

void parse_propagation(const json& j, PropagationConfig& p) {
    only_keys(j, "propagation",
              {"mode", "dt", "dt_min", "dt_max", "tolerance", "t_final", "stride", "quadrature_order",
               "correlation_terms"});
    p.mode = parse_theory(get_or<std::string>(j, "mode", "adiabatic"));
    p.dt_initial = quantity_or(j, "dt", p.dt_initial);
    p.dt_min = quantity_or(j, "dt_min", p.dt_min);
    p.dt_max = quantity_or(j, "dt_max", std::max(p.dt_max, p.dt_initial));
    p.rk_tolerance = get_or<double>(j, "tolerance", p.rk_tolerance);
    p.t_final = quantity_or(j, "t_final", p.t_final);
    p.output_stride = quantity_or(j, "stride", p.output_stride);
    p.quadrature_order = get_or<int>(j, "quadrature_order", p.quadrature_order);
    p.correlation_terms = get_or<bool>(j, "correlation_terms", true);
}

void parse_observables(const json& j, ObservableSection& o) {
    only_keys(j, "observables", {"kick", "cis_states", "window", "pad", "normalize", "dipole_dressing"});
    o.kick.clear();
    if (j.contains("kick")) {
        const json& k = j.at("kick");
        if (k.is_string())
            o.kick.push_back(direction(k));
        else
            for (const json& d : k) o.kick.push_back(direction(d));
    }
    o.cis_states = get_or<std::vector<int>>(j, "cis_states", {});
    o.spectrum.window = quantity_or(j, "window", 0.0);
    o.spectrum.pad = get_or<int>(j, "pad", 1);
    o.spectrum.normalize = get_or<bool>(j, "normalize", false);
    const std::string d = get_or<std::string>(j, "dipole_dressing", "full");
    if (d == "full")
        o.dressing = DipoleDressing::Full;
    else if (d == "none")
        o.dressing = DipoleDressing::None;
    else if (d == "equilibrium")
        o.dressing = DipoleDressing::Equilibrium;
    else
        throw ParseError("observables.dipole_dressing must be full, none or equilibrium");
}

}  // namespace

Theory parse_theory(const std::string& s) {
    if (s == "adiabatic") return Theory::Adiabatic;
    if (s == "transformed") return Theory::Transformed;
    if (s == "untransformed") return Theory::Untransformed;
    if (s == "markovian" || s == "markov") return Theory::Markovian;
    throw ParseError("unknown propagation mode '" + s + "'");
}

std::string theory_name(Theory t) {
    switch (t) {
        case Theory::Adiabatic: return "adiabatic";
        case Theory::Transformed: return "transformed";
        case Theory::Untransformed: return "untransformed";
        case Theory::Markovian: return "markovian";
    }
    return "";
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig c;
    c.text = text;
    try {
        only_keys(j, "config", {"system", "bath", "propagation", "observables", "output"});
        if (!j.contains("system")) throw ParseError("missing section 'system'");
        parse_system(j.at("system"), c.system, base_dir);
        if (j.contains("bath")) parse_bath(j.at("bath"), c.bath);
        if (j.contains("propagation")) parse_propagation(j.at("propagation"), c.propagation);
        if (j.contains("observables")) parse_observables(j.at("observables"), c.observables);
        else c.observables.kick = {0, 1, 2};
        c.output = get_or<std::string>(j, "output", "out");
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (c.observables.kick.empty() && c.observables.cis_states.empty()) c.observables.kick = {0, 1, 2};
    const Theory m = c.propagation.mode;
    if ((m == Theory::Transformed || m == Theory::Untransformed || m == Theory::Markovian) && !c.bath.present)
        throw ParseError("missing section 'bath' required by " + theory_name(m) + " mode");
    try {
        c.propagation.validate();
    } catch (const ValidationError& e) {
        throw ParseError(e.what());
    }
    if (std::filesystem::path(c.output).is_relative()) c.output = (std::filesystem::path(base_dir) / c.output).string();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open config " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    const auto dir = std::filesystem::path(path).parent_path();
    RunConfig c = parse_config(ss.str(), dir.empty() ? "." : dir.string());
    c.source_path = path;
    return c;
}

SpinOrbitalSystem load_system(const SystemSection& s) {
    switch (s.source) {
        case SystemSource::Model: return build_model(s.model);
        case SystemSource::Dimer: return build_dimer(s.dimer);
        case SystemSource::Fcidump: return load_fcidump(s.path, s.n_electrons);
        case SystemSource::Native: return read_native(s.path);
    }
    throw ValidationError("unknown system source");
}

BathSpec resolve_bath(const BathSection& b, int n) {
    BathSpec out = b.bath;
    out.n_orb = n;
    for (auto& m : out.modes) {
        if (m.coupling.rows() != n)
            throw ValidationError("bath mode couples " + std::to_string(m.coupling.rows()) + " orbitals, system has " +
                                  std::to_string(n));
        if (!(m.omega > 0.0)) throw ValidationError("bath mode frequency must be positive");
    }
    for (const auto& d : out.densities)
        if (d.eta.size() != n) throw ValidationError("density eta must list one value per spin-orbital");
    return out;
}

}  // namespace ptcl
