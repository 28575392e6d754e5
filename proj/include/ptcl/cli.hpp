#pragma once

#include <memory>
#include <string>

#include "ptcl/config.hpp"
#include "ptcl/kernels.hpp"

namespace ptcl {

inline constexpr const char* kVersion = "0.1.0";

// Everything a run needs once the config is resolved.
struct Setup {
    SpinOrbitalSystem bare;
    SpinOrbitalSystem sys;  // what the generator sees (dressed in transformed/markovian mode)
    BathSpec bath;          // discretized
    std::unique_ptr<Generator> gen;
};

Setup prepare(const RunConfig& c);

std::uint64_t fnv1a(const std::string& bytes);

// Exit codes: 0 ok, 1 other failure, 2 parse error, 3 validation failure, 4 integrator abort.
int run_cli(int argc, char** argv);

}  // namespace ptcl
