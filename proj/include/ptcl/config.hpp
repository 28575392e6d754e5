#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptcl/bath.hpp"
#include "ptcl/hamiltonian.hpp"
#include "ptcl/observables.hpp"
#include "ptcl/propagator.hpp"

namespace ptcl {

enum class SystemSource { Model, Dimer, Fcidump, Native };

struct SystemSection {
    SystemSource source = SystemSource::Model;
    std::string path;
    int n_electrons = 0;
    ModelBuilder model;
    DimerModel dimer;
};

struct BathSection {
    bool present = false;
    BathSpec bath;
    bool subtract_reorganization = false;
    double t_c = 0.0;  // Markov cutoff; 0 = ten correlation times
};

struct ObservableSection {
    std::vector<int> kick;  // directions
    std::vector<int> cis_states;  // transport-style initial superposition (replaces the kick)
    SpectrumOptions spectrum;
    DipoleDressing dressing = DipoleDressing::Full;
};

struct RunConfig {
    std::string source_path;
    std::string text;  // raw config bytes (hashed into the manifest)
    SystemSection system;
    BathSection bath;
    PropagationConfig propagation;
    ObservableSection observables;
    std::string output = "out";
};

// Unit strings ("1600 cm-1", "273 K", "10 fs") resolve to atomic units here;
// unknown keys raise ParseError naming the key.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

SpinOrbitalSystem load_system(const SystemSection& s);
// Bath as configured, sized to n spin-orbitals.
BathSpec resolve_bath(const BathSection& b, int n);

Theory parse_theory(const std::string& s);
std::string theory_name(Theory t);

}  // namespace ptcl
